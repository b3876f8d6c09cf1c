#pragma once

#include <optional>
#include <string>
#include <vector>

#include "reviewscore/core.hpp"
#include "reviewscore/fol/solve.hpp"
#include "reviewscore/llm/gateway.hpp"

// Feedback-loop reconstruction of argumentative review points: extract the
// verbatim skeleton, reconstruct premises/conclusion with FOL forms, enforce
// validity with the kernel, streamline back to natural language, enforce
// faithfulness with a judge, and loop with typed feedback until both checks
// pass or the iteration cap is reached.
namespace reviewscore::argrecon {

struct NotVerbatim : llm::LlmError {
  using LlmError::LlmError;
};

// Candidate that failed parsing / arity / key coverage; its message becomes
// FormalizationErrorFeedback in the loop.
struct FormalizationError : llm::LlmError {
  using LlmError::LlmError;
};

enum class LoopStep { VerbatimExtract, Reconstruct, ValidityCheck, Streamline, FaithfulnessCheck };
enum class LoopOutcome { Ok, InvalidFeedback, CircularFeedback, FormalizationErrorFeedback, UnfaithfulFeedback };

const char* to_string(LoopStep s);
const char* to_string(LoopOutcome o);
LoopStep loop_step_from_string(const std::string& s);
LoopOutcome loop_outcome_from_string(const std::string& s);

struct LoopEvent {
  int iteration = 0;
  LoopStep step = LoopStep::Reconstruct;
  LoopOutcome outcome = LoopOutcome::Ok;
  std::string payload;  // feedback text sent back, verbatim; empty on Ok
};

enum class ReconStatus { Faithful, Exhausted };

const char* to_string(ReconStatus s);
ReconStatus recon_status_from_string(const std::string& s);

struct ReconstructedArgument {
  std::string argument_point_id;
  std::vector<std::string> nl_premises;
  std::string nl_conclusion;
  std::vector<std::string> fol_premises;  // concrete grammar
  std::string fol_conclusion;
  std::vector<bool> implicit;             // per premise
  fol::KeyTable keys;
  std::vector<std::string> streamlined_premises;
  std::string streamlined_conclusion;
  ReconStatus status = ReconStatus::Exhausted;
  bool model_faithful = false;            // judge's boolean verdict on the final candidate
  std::optional<Score5> faithfulness_score;  // human annotation, when present
  int iterations = 0;
  std::vector<LoopEvent> trace;
};

struct VerbatimSkeleton {
  std::string conjecture;
  std::vector<std::string> reasons;
};

// Parsed reconstruction candidate; all formulas well-formed over one shared
// signature, keys covering every symbol.
struct Candidate {
  std::vector<std::string> nl_premises;
  std::vector<fol::FormulaPtr> fol_premises;
  std::vector<bool> implicit;
  std::string nl_conclusion;
  fol::FormulaPtr fol_conclusion;
  fol::KeyTable keys;
  std::string proof;
  std::string raw_json;  // as returned, for the "previous attempt" binding
};

struct EngineOptions {
  int max_iterations = 10;
  fol::SolveOptions solve;
};

class Engine {
 public:
  Engine(llm::Gateway& gateway, llm::ModelConfig model, EngineOptions opts = {});

  // Step 1. Every returned string is a whitespace-normalized substring of the
  // argument text; one re-prompt on violation, then NotVerbatim.
  VerbatimSkeleton extract_verbatim(const ReviewPoint& arg);

  // Step 2 (feedback is the payload of the previous loop event, empty first
  // time). Throws FormalizationError when the candidate cannot be parsed into
  // well-formed formulas with covering keys.
  Candidate reconstruct(const ReviewPoint& arg, const PaperDoc& paper, const VerbatimSkeleton& skeleton,
                        const std::string& feedback, const std::string& previous);

  // Steps 3-4: kernel validity + circularity; Invalid renders the
  // countermodel through the keys as the feedback text.
  fol::ValidityResult check_validity(const Candidate& candidate) const;

  // Step 5: one NL sentence per formula; count mismatch is re-prompted once.
  std::pair<std::vector<std::string>, std::string> streamline(const Candidate& candidate);

  // Step 6.
  struct FaithfulnessVerdict {
    bool faithful = false;
    std::string justification;
  };
  FaithfulnessVerdict judge_faithfulness(const ReviewPoint& arg, const std::vector<std::string>& premises,
                                         const std::string& conclusion);

  // The full series loop, capped at max_iterations reconstruct calls.
  ReconstructedArgument run_loop(const ReviewPoint& arg, const PaperDoc& paper);

 private:
  llm::Gateway& gateway_;
  llm::ModelConfig model_;
  EngineOptions opts_;

  Candidate parse_candidate(const nlohmann::json& record) const;
};

// Countermodel rendered as natural-language feedback via the key table.
std::string render_countermodel(const std::map<std::string, bool>& countermodel, const fol::KeyTable& keys);

}  // namespace reviewscore::argrecon
