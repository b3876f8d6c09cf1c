#include "reviewscore/argrecon.hpp"

#include <sstream>

#include "reviewscore/decompose.hpp"
#include "reviewscore/fol/parse.hpp"

namespace reviewscore::argrecon {

using nlohmann::json;

const char* to_string(LoopStep s) {
  switch (s) {
    case LoopStep::VerbatimExtract: return "verbatim_extract";
    case LoopStep::Reconstruct: return "reconstruct";
    case LoopStep::ValidityCheck: return "validity_check";
    case LoopStep::Streamline: return "streamline";
    case LoopStep::FaithfulnessCheck: return "faithfulness_check";
  }
  return "reconstruct";
}

const char* to_string(LoopOutcome o) {
  switch (o) {
    case LoopOutcome::Ok: return "ok";
    case LoopOutcome::InvalidFeedback: return "invalid_feedback";
    case LoopOutcome::CircularFeedback: return "circular_feedback";
    case LoopOutcome::FormalizationErrorFeedback: return "formalization_error_feedback";
    case LoopOutcome::UnfaithfulFeedback: return "unfaithful_feedback";
  }
  return "ok";
}

LoopStep loop_step_from_string(const std::string& s) {
  if (s == "verbatim_extract") return LoopStep::VerbatimExtract;
  if (s == "reconstruct") return LoopStep::Reconstruct;
  if (s == "validity_check") return LoopStep::ValidityCheck;
  if (s == "streamline") return LoopStep::Streamline;
  if (s == "faithfulness_check") return LoopStep::FaithfulnessCheck;
  throw std::invalid_argument("unknown loop step: " + s);
}

LoopOutcome loop_outcome_from_string(const std::string& s) {
  if (s == "ok") return LoopOutcome::Ok;
  if (s == "invalid_feedback") return LoopOutcome::InvalidFeedback;
  if (s == "circular_feedback") return LoopOutcome::CircularFeedback;
  if (s == "formalization_error_feedback") return LoopOutcome::FormalizationErrorFeedback;
  if (s == "unfaithful_feedback") return LoopOutcome::UnfaithfulFeedback;
  throw std::invalid_argument("unknown loop outcome: " + s);
}

const char* to_string(ReconStatus s) { return s == ReconStatus::Faithful ? "faithful" : "exhausted"; }

ReconStatus recon_status_from_string(const std::string& s) {
  if (s == "faithful") return ReconStatus::Faithful;
  if (s == "exhausted") return ReconStatus::Exhausted;
  throw std::invalid_argument("unknown reconstruction status: " + s);
}

namespace {

// FormalizationError carrying the raw model output (for the previous-attempt
// binding of the next reconstruct call).
struct FormalizationErrorRaw : FormalizationError {
  FormalizationErrorRaw(const std::string& msg, std::string raw) : FormalizationError(msg), raw_text(std::move(raw)) {}
  std::string raw_text;
};

std::string bullet_lines(const std::vector<std::string>& items) {
  std::ostringstream os;
  for (const auto& item : items) os << "- " << item << "\n";
  return os.str();
}

std::string numbered_lines(const std::vector<std::string>& items) {
  std::ostringstream os;
  for (std::size_t i = 0; i < items.size(); ++i) os << "P" << (i + 1) << ": " << items[i] << "\n";
  return os.str();
}

std::string keys_lines(const fol::KeyTable& keys) {
  std::ostringstream os;
  for (const auto& [sym, meaning] : keys) os << sym << ": " << meaning << "\n";
  return os.str();
}

std::string paper_context(const PaperDoc& paper) { return paper.title + "\n\n" + paper.body_text; }

}  // namespace

std::string render_countermodel(const std::map<std::string, bool>& countermodel, const fol::KeyTable& keys) {
  std::ostringstream os;
  os << "Counterexample interpretation (all premises hold, the conclusion fails):\n";
  for (const auto& [atom, value] : countermodel) {
    os << "- " << atom;
    std::string head;
    for (char c : atom) {
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') break;
      head += c;
    }
    auto key = keys.find(head);
    if (key != keys.end()) os << " (" << head << ": \"" << key->second << "\")";
    os << " = " << (value ? "true" : "false") << "\n";
  }
  return os.str();
}

Engine::Engine(llm::Gateway& gateway, llm::ModelConfig model, EngineOptions opts)
    : gateway_(gateway), model_(std::move(model)), opts_(opts) {}

VerbatimSkeleton Engine::extract_verbatim(const ReviewPoint& arg) {
  if (!arg.kind || *arg.kind != PointKind::Argument)
    throw std::invalid_argument("extract_verbatim requires an argument point");
  llm::PromptInstance prompt = llm::render("verbatim_extraction", {{"argument", arg.text}});
  llm::StructuredResult result = llm::complete_structured(gateway_, prompt, model_, "verbatim-extract");
  for (int attempt = 0;; ++attempt) {
    std::string offender;
    if (!decompose::normalized_contains(arg.text, result.record.at("conjecture").get<std::string>()))
      offender = result.record.at("conjecture").get<std::string>();
    for (const auto& r : result.record.at("reasons"))
      if (offender.empty() && !decompose::normalized_contains(arg.text, r.get<std::string>()))
        offender = r.get<std::string>();
    if (offender.empty()) break;
    if (attempt >= 1)
      throw NotVerbatim("extracted text is not a verbatim substring of the argument: \"" + offender + "\"");
    llm::PromptInstance retry = prompt;
    retry.messages.push_back({"assistant", result.response.text});
    retry.messages.push_back({"user", "\"" + offender +
                                          "\" is not a verbatim substring of the review point. Copy spans exactly "
                                          "as written and reply again."});
    result = llm::complete_structured(gateway_, retry, model_, "verbatim-extract");
  }
  VerbatimSkeleton out;
  out.conjecture = result.record.at("conjecture").get<std::string>();
  for (const auto& r : result.record.at("reasons")) out.reasons.push_back(r.get<std::string>());
  return out;
}

Candidate Engine::parse_candidate(const json& record) const {
  const std::string raw = record.dump(2);
  Candidate cand;
  cand.raw_json = raw;
  try {
    for (const auto& p : record.at("premises")) {
      cand.nl_premises.push_back(p.at("nl").get<std::string>());
      cand.fol_premises.push_back(fol::parse_formula(p.at("fol").get<std::string>()));
      cand.implicit.push_back(p.at("implicit").get<bool>());
    }
    cand.nl_conclusion = record.at("conclusion").at("nl").get<std::string>();
    cand.fol_conclusion = fol::parse_formula(record.at("conclusion").at("fol").get<std::string>());
  } catch (const fol::FolError& e) {
    throw FormalizationErrorRaw(std::string("a formula does not parse: ") + e.what(), raw);
  }
  cand.keys = record.at("keys").get<fol::KeyTable>();
  cand.proof = record.value("proof", "");

  std::vector<fol::FormulaPtr> all = cand.fol_premises;
  all.push_back(cand.fol_conclusion);
  fol::Signature sig;
  try {
    sig = fol::infer_signature(all);
  } catch (const fol::FolError& e) {
    throw FormalizationErrorRaw(std::string("inconsistent formalization: ") + e.what(), raw);
  }
  std::vector<std::string> missing;
  for (const auto& c : sig.constants)
    if (!cand.keys.count(c)) missing.push_back(c);
  for (const auto& [p, arity] : sig.predicates) {
    (void)arity;
    if (!cand.keys.count(p)) missing.push_back(p);
  }
  if (!missing.empty()) {
    std::ostringstream os;
    os << "keys must cover every symbol; missing:";
    for (const auto& m : missing) os << " " << m;
    throw FormalizationErrorRaw(os.str(), raw);
  }
  return cand;
}

Candidate Engine::reconstruct(const ReviewPoint& arg, const PaperDoc& paper, const VerbatimSkeleton& skeleton,
                              const std::string& feedback, const std::string& previous) {
  llm::PromptInstance prompt = llm::render("reconstruction", {{"paper", paper_context(paper)},
                                                              {"argument", arg.text},
                                                              {"conjecture", skeleton.conjecture},
                                                              {"reasons", bullet_lines(skeleton.reasons)},
                                                              {"feedback", feedback},
                                                              {"previous", previous}});
  llm::StructuredResult result;
  try {
    result = llm::complete_structured(gateway_, prompt, model_, "reconstruction");
  } catch (const llm::SchemaViolation& e) {
    throw FormalizationErrorRaw(std::string("reconstruction output rejected: ") + e.what(), e.raw_text);
  } catch (const llm::NoJsonBlock& e) {
    throw FormalizationErrorRaw(std::string("reconstruction output rejected: ") + e.what(), e.raw_text);
  }
  return parse_candidate(result.record);
}

fol::ValidityResult Engine::check_validity(const Candidate& candidate) const {
  return fol::check_argument(candidate.fol_premises, candidate.fol_conclusion, opts_.solve);
}

std::pair<std::vector<std::string>, std::string> Engine::streamline(const Candidate& candidate) {
  std::vector<std::string> fol_strings;
  fol_strings.reserve(candidate.fol_premises.size());
  for (const auto& f : candidate.fol_premises) fol_strings.push_back(fol::print(f));
  std::ostringstream premises_block;
  for (const auto& s : fol_strings) premises_block << s << "\n";
  llm::PromptInstance prompt = llm::render("deformalization", {{"keys", keys_lines(candidate.keys)},
                                                               {"premises", premises_block.str()},
                                                               {"conclusion", fol::print(candidate.fol_conclusion)}});
  llm::StructuredResult result = llm::complete_structured(gateway_, prompt, model_, "streamline");
  for (int attempt = 0;; ++attempt) {
    if (result.record.at("premises").size() == candidate.fol_premises.size()) break;
    if (attempt >= 1)
      throw llm::SchemaViolation("streamlined premise count " + std::to_string(result.record.at("premises").size()) +
                                     " does not match formula count " + std::to_string(candidate.fol_premises.size()),
                                 result.response.text);
    llm::PromptInstance retry = prompt;
    retry.messages.push_back({"assistant", result.response.text});
    retry.messages.push_back({"user", "Return exactly one sentence per premise formula (" +
                                          std::to_string(candidate.fol_premises.size()) +
                                          " premises), in order, plus the conclusion. Reply again."});
    result = llm::complete_structured(gateway_, retry, model_, "streamline");
  }
  std::vector<std::string> premises;
  for (const auto& p : result.record.at("premises")) premises.push_back(p.get<std::string>());
  return {premises, result.record.at("conclusion").get<std::string>()};
}

Engine::FaithfulnessVerdict Engine::judge_faithfulness(const ReviewPoint& arg,
                                                       const std::vector<std::string>& premises,
                                                       const std::string& conclusion) {
  llm::PromptInstance prompt = llm::render(
      "faithfulness_judge", {{"argument", arg.text}, {"premises", numbered_lines(premises)}, {"conclusion", conclusion}});
  llm::StructuredResult result = llm::complete_structured(gateway_, prompt, model_, "faithfulness-verdict");
  FaithfulnessVerdict verdict;
  verdict.faithful = result.record.at("faithful").get<bool>();
  verdict.justification = result.record.at("justification").get<std::string>();
  return verdict;
}

ReconstructedArgument Engine::run_loop(const ReviewPoint& arg, const PaperDoc& paper) {
  ReconstructedArgument out;
  out.argument_point_id = arg.point_id;

  VerbatimSkeleton skeleton = extract_verbatim(arg);
  out.trace.push_back({0, LoopStep::VerbatimExtract, LoopOutcome::Ok, ""});

  std::string feedback;
  std::string previous;
  Candidate last;
  bool have_candidate = false;

  auto adopt = [&](const Candidate& cand) {
    out.nl_premises = cand.nl_premises;
    out.nl_conclusion = cand.nl_conclusion;
    out.fol_premises.clear();
    for (const auto& f : cand.fol_premises) out.fol_premises.push_back(fol::print(f));
    out.fol_conclusion = fol::print(cand.fol_conclusion);
    out.implicit = cand.implicit;
    out.keys = cand.keys;
  };

  while (out.iterations < opts_.max_iterations) {
    ++out.iterations;
    Candidate cand;
    try {
      cand = reconstruct(arg, paper, skeleton, feedback, previous);
    } catch (const FormalizationErrorRaw& e) {
      feedback = std::string("The previous output could not be used: ") + e.what() +
                 ". Regenerate the reconstruction with well-formed formulas and complete keys.";
      out.trace.push_back({out.iterations, LoopStep::Reconstruct, LoopOutcome::FormalizationErrorFeedback, feedback});
      previous = e.raw_text;
      continue;
    }
    out.trace.push_back({out.iterations, LoopStep::Reconstruct, LoopOutcome::Ok, ""});
    last = cand;
    have_candidate = true;
    previous = cand.raw_json;
    adopt(cand);

    fol::ValidityResult validity = check_validity(cand);
    if (validity.status == fol::ValidityStatus::Invalid) {
      feedback = "The reconstruction is invalid: the premises do not deductively imply the conclusion.\n" +
                 render_countermodel(validity.countermodel, cand.keys);
      out.trace.push_back({out.iterations, LoopStep::ValidityCheck, LoopOutcome::InvalidFeedback, feedback});
      continue;
    }
    if (validity.status == fol::ValidityStatus::Circular) {
      feedback =
          "The proof is circular: the conclusion is among the necessary premises of its own derivation. "
          "Reconstruct so that the conclusion follows from genuinely distinct premises.";
      out.trace.push_back({out.iterations, LoopStep::ValidityCheck, LoopOutcome::CircularFeedback, feedback});
      continue;
    }
    if (validity.status == fol::ValidityStatus::IllFormed) {
      feedback = "The formalization is ill-formed: " + validity.diagnostics;
      out.trace.push_back({out.iterations, LoopStep::ValidityCheck, LoopOutcome::FormalizationErrorFeedback, feedback});
      continue;
    }
    out.trace.push_back({out.iterations, LoopStep::ValidityCheck, LoopOutcome::Ok, ""});

    auto [streamlined_premises, streamlined_conclusion] = streamline(cand);
    out.trace.push_back({out.iterations, LoopStep::Streamline, LoopOutcome::Ok, ""});
    out.streamlined_premises = streamlined_premises;
    out.streamlined_conclusion = streamlined_conclusion;

    FaithfulnessVerdict verdict = judge_faithfulness(arg, streamlined_premises, streamlined_conclusion);
    if (verdict.faithful) {
      out.trace.push_back({out.iterations, LoopStep::FaithfulnessCheck, LoopOutcome::Ok, ""});
      out.status = ReconStatus::Faithful;
      out.model_faithful = true;
      return out;
    }
    feedback = "The reconstruction is unfaithful: " +
               (verdict.justification.empty() ? std::string("it does not accurately and completely represent the original argument")
                                              : verdict.justification);
    out.trace.push_back({out.iterations, LoopStep::FaithfulnessCheck, LoopOutcome::UnfaithfulFeedback, feedback});
  }

  // Cap reached: return the last reconstructed argument, marked exhausted.
  out.status = ReconStatus::Exhausted;
  out.model_faithful = false;
  if (have_candidate) adopt(last);
  return out;
}

}  // namespace reviewscore::argrecon
