#include "reviewscore/scorer.hpp"

#include <cmath>
#include <sstream>

namespace reviewscore::scorer {

const char* to_string(ScoreMode m) { return m == ScoreMode::Base ? "base" : "advanced"; }

ScoreMode score_mode_from_string(const std::string& s) {
  if (s == "base") return ScoreMode::Base;
  if (s == "advanced") return ScoreMode::Advanced;
  throw std::invalid_argument("unknown score mode: " + s);
}

namespace {

void check_scores(const std::vector<int>& scores) {
  for (int s : scores)
    if (s < 1 || s > 5) throw ScoreError("premise score " + std::to_string(s) + " outside [1,5]");
}

}  // namespace

BinaryLabel agg_conjunction(const std::vector<int>& scores) {
  if (scores.empty()) throw EmptyList("agg_conjunction requires at least one premise score");
  check_scores(scores);
  for (int s : scores)
    if (s <= 2) return BinaryLabel::Misinformed;
  return BinaryLabel::NotMisinformed;
}

std::pair<double, int> agg_weighted(const std::vector<int>& scores, const std::vector<int>& weights) {
  if (scores.empty()) throw EmptyList("agg_weighted requires at least one premise score");
  if (scores.size() != weights.size())
    throw LengthMismatch("agg_weighted: " + std::to_string(scores.size()) + " scores vs " +
                         std::to_string(weights.size()) + " weights");
  check_scores(scores);
  for (int w : weights)
    if (w < 0 || w > 2) throw ScoreError("untrivialness weight " + std::to_string(w) + " outside [0,2]");
  double weight_sum = 0.0, value = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    weight_sum += weights[i];
    value += static_cast<double>(weights[i]) * scores[i];
  }
  if (weight_sum == 0.0) {
    // All premises judged trivially true: fall back to the unweighted mean.
    value = 0.0;
    for (int s : scores) value += s;
    value /= static_cast<double>(scores.size());
  } else {
    value /= weight_sum;
  }
  int rounded = static_cast<int>(std::floor(value + 0.5));  // half-up
  rounded = std::max(1, std::min(5, rounded));
  return {value, rounded};
}

ArgAggregate aggregate_argument(const std::vector<int>& scores, const std::vector<int>& weights) {
  ArgAggregate agg;
  agg.premise_scores = scores;
  agg.weights = weights;
  agg.conjunction_label = agg_conjunction(scores);
  auto [value, rounded] = agg_weighted(scores, weights);
  agg.weighted_value = value;
  agg.weighted_score5 = rounded;
  return agg;
}

Judge::Judge(llm::Gateway& gateway, llm::ModelConfig model) : gateway_(gateway), model_(std::move(model)) {}

ScoreRecord Judge::judge_factuality(const std::string& subject_id, const std::string& statement, KnowledgeBase kb,
                                    const PaperDoc& paper, const std::optional<std::string>& author_response) {
  std::map<std::string, std::string> bindings{{"kb", to_string(kb)},
                                              {"paper", paper.title + "\n\n" + paper.body_text},
                                              {"statement", statement}};
  std::string template_id = "factuality_judge";
  if (author_response) {
    template_id = "factuality_judge_with_ar";
    bindings["author_response"] = *author_response;
  }
  llm::StructuredResult result =
      llm::complete_structured(gateway_, llm::render(template_id, bindings), model_, "score-verdict");
  ScoreRecord rec;
  rec.subject_id = subject_id;
  rec.score = Score5(result.record.at("score").get<int>());
  rec.binary = to_binary(rec.score);
  rec.justification = result.record.at("justification").get<std::string>();
  rec.kb = kb;
  rec.with_author_response = author_response.has_value();
  return rec;
}

ScoreRecord Judge::judge_unanswerability(const std::string& subject_id, const std::string& question,
                                         const PaperDoc& paper, const std::optional<std::string>& author_response) {
  std::map<std::string, std::string> bindings{{"paper", paper.title + "\n\n" + paper.body_text},
                                              {"question", question}};
  std::string template_id = "unanswerability_judge";
  if (author_response) {
    template_id = "unanswerability_judge_with_ar";
    bindings["author_response"] = *author_response;
  }
  llm::StructuredResult result =
      llm::complete_structured(gateway_, llm::render(template_id, bindings), model_, "score-verdict");
  ScoreRecord rec;
  rec.subject_id = subject_id;
  rec.score = Score5(result.record.at("score").get<int>());
  rec.binary = to_binary(rec.score);
  rec.justification = result.record.at("justification").get<std::string>();
  rec.kb = KnowledgeBase::SubmittedPaper;
  rec.with_author_response = author_response.has_value();
  return rec;
}

Untrivialness Judge::judge_untrivialness(const std::string& premise, const std::string& argument_context) {
  llm::StructuredResult result = llm::complete_structured(
      gateway_, llm::render("untrivialness_judge", {{"premise", premise}, {"argument", argument_context}}), model_,
      "untrivialness-verdict");
  return Untrivialness(result.record.at("untrivialness").get<int>());
}

KnowledgeBase Judge::select_kb(const std::string& premise, const PaperDoc& paper) {
  llm::StructuredResult result = llm::complete_structured(
      gateway_, llm::render("kb_select", {{"premise", premise}, {"paper_title", paper.title}}), model_, "kb-choice");
  return knowledge_base_from_string(result.record.at("kb").get<std::string>());
}

ScoredPoint Judge::score_point(const ReviewPoint& point, const PaperDoc& paper,
                               const argrecon::ReconstructedArgument* recon, ScoreMode mode,
                               const std::optional<std::string>& author_response) {
  if (!point.kind) throw ScoreError("point '" + point.point_id + "' has no kind assigned");
  ScoredPoint out;
  out.point_id = point.point_id;
  out.kind = *point.kind;
  out.mode = mode;
  out.with_author_response = author_response.has_value();

  switch (*point.kind) {
    case PointKind::Question: {
      // QScore: identical in Base and Advanced mode.
      ScoreRecord rec = judge_unanswerability(point.point_id, point.text, paper, author_response);
      out.final_score5 = rec.score.value();
      out.final_binary = rec.binary;
      out.records.push_back(std::move(rec));
      return out;
    }
    case PointKind::Claim: {
      // ClaimScore = factuality against the submitted paper, in both modes.
      ScoreRecord rec =
          judge_factuality(point.point_id, point.text, KnowledgeBase::SubmittedPaper, paper, author_response);
      out.final_score5 = rec.score.value();
      out.final_binary = rec.binary;
      out.records.push_back(std::move(rec));
      return out;
    }
    case PointKind::Argument: {
      if (mode == ScoreMode::Base) {
        // WScore: whole-weakness factuality.
        ScoreRecord rec =
            judge_factuality(point.point_id, point.text, KnowledgeBase::SubmittedPaper, paper, author_response);
        out.final_score5 = rec.score.value();
        out.final_binary = rec.binary;
        out.records.push_back(std::move(rec));
        return out;
      }
      if (!recon)
        throw MissingReconstruction("advanced scoring of '" + point.point_id + "' requires a reconstruction");
      if (recon->status != argrecon::ReconStatus::Faithful) {
        out.skipped = true;
        out.diagnostic = "reconstruction exhausted the feedback loop without a faithful candidate; "
                         "premise-level scoring skipped";
        return out;
      }
      const std::vector<std::string>& premises = recon->streamlined_premises;
      std::vector<int> scores;
      std::vector<int> weights;
      for (std::size_t i = 0; i < premises.size(); ++i) {
        std::ostringstream subject;
        subject << point.point_id << ".prem" << i;
        KnowledgeBase kb = select_kb(premises[i], paper);
        ScoreRecord rec = judge_factuality(subject.str(), premises[i], kb, paper, author_response);
        rec.untrivialness = judge_untrivialness(premises[i], point.text);
        scores.push_back(rec.score.value());
        weights.push_back(rec.untrivialness->value());
        out.records.push_back(std::move(rec));
      }
      out.aggregate = aggregate_argument(scores, weights);
      out.final_binary = out.aggregate->conjunction_label;
      out.final_score5 = out.aggregate->weighted_score5;
      return out;
    }
  }
  throw ScoreError("unreachable point kind");
}

}  // namespace reviewscore::scorer
