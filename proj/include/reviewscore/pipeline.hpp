#pragma once

#include <string>
#include <vector>

#include "reviewscore/corpus.hpp"
#include "reviewscore/decompose.hpp"
#include "reviewscore/metrics.hpp"

// Stage wiring shared by the CLI and the tests: each stage is a pure function
// of the corpus, the prior stage's artifacts, and the gateway. Per-point
// failures become diagnostics, never batch aborts.
namespace reviewscore::pipeline {

struct RunConfig {
  llm::ModelConfig model;
  scorer::ScoreMode mode = scorer::ScoreMode::Base;
  bool with_author_response = false;
  int max_iterations = 10;
  int jobs = 4;
  std::string override_path;  // optional point-kind override JSONL
  metrics::ReportOptions report;
  fol::SolveOptions solve;
};

std::vector<ReviewPoint> run_decompose(const corpus::Corpus& corpus, llm::Gateway& gateway, const RunConfig& cfg,
                                       std::vector<std::string>& diagnostics);

// Arguments only; other kinds pass through untouched.
std::vector<argrecon::ReconstructedArgument> run_reconstruct(const corpus::Corpus& corpus,
                                                             const std::vector<ReviewPoint>& points,
                                                             llm::Gateway& gateway, const RunConfig& cfg,
                                                             std::vector<std::string>& diagnostics);

std::vector<scorer::ScoredPoint> run_score(const corpus::Corpus& corpus, const std::vector<ReviewPoint>& points,
                                           const std::vector<argrecon::ReconstructedArgument>& reconstructions,
                                           llm::Gateway& gateway, const RunConfig& cfg,
                                           std::vector<std::string>& diagnostics);

nlohmann::json run_agree(const std::vector<scorer::ScoredPoint>& scores, const corpus::Corpus& corpus,
                         const RunConfig& cfg);

}  // namespace reviewscore::pipeline
