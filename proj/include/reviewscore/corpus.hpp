#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "reviewscore/argrecon.hpp"
#include "reviewscore/core.hpp"
#include "reviewscore/scorer.hpp"

// Ingestion and persistence: the on-disk corpus layout, run artifacts as
// self-describing JSONL, and dataset statistics.
namespace reviewscore::corpus {

struct CorpusError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// All integrity violations of a load, collected and reported together.
struct ValidationFailure : CorpusError {
  ValidationFailure(const std::string& msg, std::vector<std::string> issues_)
      : CorpusError(msg), issues(std::move(issues_)) {}
  std::vector<std::string> issues;
};

struct VersionMismatch : CorpusError {
  using CorpusError::CorpusError;
};

struct Corpus {
  std::map<std::string, PaperDoc> papers;
  std::map<std::string, RawReview> reviews;
  std::map<std::string, std::string> author_responses;  // review_id -> text
  std::vector<AnnotationRecord> annotations;
};

// Layout under root: papers/*.txt (first line title, optional *.refs.txt
// sidecar), reviews/*.json, responses/*.json, annotations/*.jsonl.
Corpus load_corpus(const std::string& root);

struct DatasetStats {
  std::size_t papers = 0;
  std::size_t reviews = 0;
  std::size_t points = 0;
  std::size_t questions = 0;
  std::size_t claims = 0;
  std::size_t arguments = 0;
  std::size_t premises = 0;
  // From complete human annotations, when any exist; percentages in [0,100].
  std::optional<double> pct_misinformed_overall;
  std::map<std::string, double> pct_misinformed_by_kind;

  nlohmann::json to_json() const;
};

DatasetStats dataset_stats(const Corpus& corpus, const std::vector<ReviewPoint>& points,
                           const std::vector<argrecon::ReconstructedArgument>& reconstructions);

// --- run artifacts -----------------------------------------------------------

inline constexpr int kSchemaVersion = 1;

// Valid stages: points, reconstructions, scores, report.
bool known_stage(const std::string& stage);

// Append-only JSONL, one self-describing line per record.
void save_run(const std::string& path, const std::string& stage, const std::vector<nlohmann::json>& records);

struct LoadedRun {
  std::vector<nlohmann::json> records;
  std::vector<std::string> diagnostics;  // corrupt lines, with line numbers
};

// Throws VersionMismatch on a schema_version or stage mismatch; corrupt lines
// become diagnostics and the remaining lines still load.
LoadedRun load_run(const std::string& path, const std::string& stage);

// --- record (de)serialization ------------------------------------------------

nlohmann::json to_json(const ReviewPoint& p);
ReviewPoint review_point_from_json(const nlohmann::json& j);

nlohmann::json to_json(const argrecon::ReconstructedArgument& r);
argrecon::ReconstructedArgument reconstruction_from_json(const nlohmann::json& j);

nlohmann::json to_json(const scorer::ScoredPoint& s);
scorer::ScoredPoint scored_point_from_json(const nlohmann::json& j);

}  // namespace reviewscore::corpus
