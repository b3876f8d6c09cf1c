#pragma once

#include <optional>
#include <string>
#include <vector>

#include "reviewscore/argrecon.hpp"
#include "reviewscore/core.hpp"
#include "reviewscore/llm/gateway.hpp"

// 5-point judgments (factuality, unanswerability, untrivialness), knowledge
// base selection, and the two premise aggregations behind ArgScore.
namespace reviewscore::scorer {

struct ScoreError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EmptyList : ScoreError {
  using ScoreError::ScoreError;
};
struct LengthMismatch : ScoreError {
  using ScoreError::ScoreError;
};
struct MissingReconstruction : ScoreError {
  using ScoreError::ScoreError;
};
struct ExhaustedReconstruction : ScoreError {
  using ScoreError::ScoreError;
};

enum class ScoreMode { Base, Advanced };

const char* to_string(ScoreMode m);
ScoreMode score_mode_from_string(const std::string& s);

struct ScoreRecord {
  std::string subject_id;  // point id or "<point_id>.prem<k>"
  Score5 score{3};
  BinaryLabel binary = BinaryLabel::NotMisinformed;  // always to_binary(score)
  std::string justification;
  KnowledgeBase kb = KnowledgeBase::SubmittedPaper;
  std::optional<Untrivialness> untrivialness;  // premises only
  bool with_author_response = false;
};

struct ArgAggregate {
  std::vector<int> premise_scores;  // 1..5, premise order
  std::vector<int> weights;         // untrivialness 0..2
  BinaryLabel conjunction_label = BinaryLabel::NotMisinformed;
  double weighted_value = 0.0;      // in [1,5]
  int weighted_score5 = 0;          // half-up rounded, clamped
};

// An argument is not misinformed iff every premise scores 3-5.
BinaryLabel agg_conjunction(const std::vector<int>& scores);

// Untrivialness-weighted mean; all-zero weights fall back to the unweighted
// mean. Second component is the half-up-rounded 5-point value.
std::pair<double, int> agg_weighted(const std::vector<int>& scores, const std::vector<int>& weights);

ArgAggregate aggregate_argument(const std::vector<int>& scores, const std::vector<int>& weights);

// One scored review point: a single record for claims/questions/base
// arguments, per-premise records plus the aggregate for advanced arguments.
struct ScoredPoint {
  std::string point_id;
  PointKind kind = PointKind::Claim;
  ScoreMode mode = ScoreMode::Base;
  bool with_author_response = false;
  std::vector<ScoreRecord> records;
  std::optional<ArgAggregate> aggregate;
  std::optional<int> final_score5;      // 5-point channel
  std::optional<BinaryLabel> final_binary;
  bool skipped = false;                 // advanced argument without a faithful reconstruction
  std::string diagnostic;
};

class Judge {
 public:
  Judge(llm::Gateway& gateway, llm::ModelConfig model);

  ScoreRecord judge_factuality(const std::string& subject_id, const std::string& statement, KnowledgeBase kb,
                               const PaperDoc& paper, const std::optional<std::string>& author_response);
  ScoreRecord judge_unanswerability(const std::string& subject_id, const std::string& question, const PaperDoc& paper,
                                    const std::optional<std::string>& author_response);
  Untrivialness judge_untrivialness(const std::string& premise, const std::string& argument_context);
  KnowledgeBase select_kb(const std::string& premise, const PaperDoc& paper);

  // Definition dispatch. Advanced arguments require a Faithful reconstruction;
  // Exhausted ones come back skipped with a diagnostic rather than throwing,
  // mirroring the annotation skip rule.
  ScoredPoint score_point(const ReviewPoint& point, const PaperDoc& paper,
                          const argrecon::ReconstructedArgument* recon, ScoreMode mode,
                          const std::optional<std::string>& author_response);

 private:
  llm::Gateway& gateway_;
  llm::ModelConfig model_;
};

}  // namespace reviewscore::scorer
