#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "reviewscore/pipeline.hpp"
#include "support/scripted.hpp"

using namespace reviewscore;
using nlohmann::json;
namespace fs = std::filesystem;
namespace rtest = reviewscore::testing;

namespace {

const corpus::Corpus& fixture_corpus() {
  static corpus::Corpus c = corpus::load_corpus(RS_FIXTURE_DIR "/corpus");
  return c;
}

ReviewPoint make_argument(const std::string& text) {
  ReviewPoint p;
  p.point_id = "arg0";
  p.paper_id = "p1";
  p.review_id = "r1";
  p.text = text;
  p.kind = PointKind::Argument;
  return p;
}

// A reconstruction whose premises {A(c), A(c) -> B(c)} entail B(c).
json valid_reconstruction(const std::string& tag) {
  return json{{"premises",
               {{{"nl", "The paper evaluates only small models (" + tag + ")."},
                 {"fol", "Small(c)"},
                 {"implicit", false}},
                {{"nl", "If the paper evaluates only small models, the method may not scale (" + tag + ")."},
                 {"fol", "Small(c) -> Unscalable(c)"},
                 {"implicit", true}}}},
              {"conclusion", {{"nl", "The method may not scale (" + tag + ")."}, {"fol", "Unscalable(c)"}}},
              {"keys",
               {{"Small", "the paper evaluates only small models (" + tag + ")"},
                {"Unscalable", "the method may not scale (" + tag + ")"},
                {"c", "the submission"}}},
              {"proof", "Modus ponens (" + tag + ")."}};
}

json invalid_reconstruction(const std::string& tag) {
  json r = valid_reconstruction(tag);
  r["premises"].erase(1);  // drop the bridge: Small(c) alone does not entail Unscalable(c)
  return r;
}

json circular_reconstruction(const std::string& tag) {
  json r = valid_reconstruction(tag);
  r["premises"] = json::array({json{{"nl", "The method may not scale (" + tag + ")."},
                                    {"fol", "Unscalable(c)"},
                                    {"implicit", false}}});
  return r;
}

}  // namespace

// --- decomposer --------------------------------------------------------------

TEST_CASE("decompose: fixture review splits into typed points, deterministically") {
  auto model = rtest::make_fixture_model();
  llm::Gateway gw({}, model);
  pipeline::RunConfig rc;
  rc.jobs = 2;
  std::vector<std::string> diag;
  auto points = pipeline::run_decompose(fixture_corpus(), gw, rc, diag);
  CHECK(diag.empty());
  REQUIRE(points.size() == 5);
  CHECK(points[0].kind == PointKind::Claim);
  CHECK(points[1].kind == PointKind::Argument);
  CHECK(points[2].kind == PointKind::Question);
  CHECK(points[3].kind == PointKind::Argument);
  CHECK(points[4].kind == PointKind::Question);
  // counts in = counts out across the partition
  int k_claim = 0, k_arg = 0, k_q = 0;
  for (const auto& p : points) {
    REQUIRE(p.kind.has_value());
    if (*p.kind == PointKind::Claim) ++k_claim;
    if (*p.kind == PointKind::Argument) ++k_arg;
    if (*p.kind == PointKind::Question) ++k_q;
  }
  CHECK(k_claim + k_arg + k_q == 5);

  std::vector<std::string> diag2;
  auto again = pipeline::run_decompose(fixture_corpus(), gw, rc, diag2);
  REQUIRE(again.size() == points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    CHECK(again[i].point_id == points[i].point_id);
    CHECK(again[i].text == points[i].text);
  }
}

TEST_CASE("decompose: review with empty weakness and question sections") {
  auto model = rtest::make_fixture_model();
  llm::Gateway gw({}, model);
  decompose::Decomposer d(gw, {});
  RawReview empty;
  empty.review_id = "rE";
  empty.paper_id = "p1";
  empty.sections = {{"summary", "s"}, {"weaknesses", "  \n"}, {"questions", ""}};
  CHECK_THROWS_AS(d.extract_points(empty, fixture_corpus().papers.at("p1")), decompose::EmptyReview);
}

TEST_CASE("decompose: override file wins over the model") {
  auto model = rtest::make_fixture_model();
  llm::Gateway gw({}, model);
  pipeline::RunConfig rc;
  std::vector<std::string> diag;
  auto points = pipeline::run_decompose(fixture_corpus(), gw, rc, diag);
  const std::string argument_id = points[1].point_id;

  fs::path override_path = fs::temp_directory_path() / ("rs_override_" + std::to_string(::getpid()) + ".jsonl");
  {
    std::ofstream out(override_path);
    out << json{{"point_id", argument_id}, {"kind", "claim"}}.dump() << "\n";
  }
  decompose::OverrideMap overrides = decompose::load_overrides(override_path.string());
  decompose::Decomposer d(gw, {}, overrides);
  ReviewPoint p = points[1];
  p.kind.reset();
  CHECK(d.classify_type(p, fixture_corpus().papers.at("p1")) == PointKind::Claim);

  // Downstream, a claim override invokes the claim path: one record, kb fixed.
  scorer::Judge judge(gw, {});
  p.kind = PointKind::Claim;
  scorer::ScoredPoint sp = judge.score_point(p, fixture_corpus().papers.at("p1"), nullptr,
                                             scorer::ScoreMode::Advanced, std::nullopt);
  CHECK(sp.records.size() == 1);
  CHECK(sp.records[0].kb == KnowledgeBase::SubmittedPaper);
  fs::remove(override_path);
}

TEST_CASE("decompose: non-excerpt points are re-prompted then rejected") {
  auto model = rtest::make_fixture_model();
  model->queue("point_extraction", rtest::fenced(json{
                                       {"points", {{{"text", "entirely invented point"}, {"section", "weaknesses"}}}}}));
  // second attempt returns another invention -> hard error
  model->queue("point_extraction", rtest::fenced(json{
                                       {"points", {{{"text", "another invention"}, {"section", "weaknesses"}}}}}));
  llm::Gateway gw({}, model);
  decompose::Decomposer d(gw, {});
  CHECK_THROWS_AS(d.extract_points(fixture_corpus().reviews.at("r1"), fixture_corpus().papers.at("p1")),
                  llm::SchemaViolation);
}

// --- argrecon ----------------------------------------------------------------

TEST_CASE("extract_verbatim: sentences are verbatim; inventions rejected after one retry") {
  auto model = rtest::make_fixture_model();
  llm::Gateway gw({}, model);
  argrecon::Engine engine(gw, {});
  ReviewPoint arg = make_argument("The method is slow. It recomputes the index per query.");
  argrecon::VerbatimSkeleton skel = engine.extract_verbatim(arg);
  CHECK(skel.conjecture == "The method is slow.");
  REQUIRE(skel.reasons.size() == 1);
  CHECK(skel.reasons[0] == "It recomputes the index per query.");

  // Degenerate single-sentence argument: the conjecture is the sentence and
  // the reason list may be empty.
  ReviewPoint single = make_argument("The ablation is missing a joint setting.");
  argrecon::VerbatimSkeleton degenerate = engine.extract_verbatim(single);
  CHECK(degenerate.conjecture == "The ablation is missing a joint setting.");
  CHECK(degenerate.reasons.empty());

  auto bad = rtest::make_fixture_model();
  bad->queue("verbatim_extraction", rtest::fenced(json{{"conjecture", "a paraphrase"}, {"reasons", json::array()}}));
  bad->queue("verbatim_extraction", rtest::fenced(json{{"conjecture", "still a paraphrase"}, {"reasons", json::array()}}));
  llm::Gateway gw2({}, bad);
  argrecon::Engine engine2(gw2, {});
  CHECK_THROWS_AS(engine2.extract_verbatim(arg), argrecon::NotVerbatim);
}

TEST_CASE("reconstruct: key coverage and parse failures become FormalizationError") {
  auto model = rtest::make_fixture_model();
  json missing_keys = valid_reconstruction("t");
  missing_keys["keys"].erase("Unscalable");
  model->queue("reconstruction", rtest::fenced(missing_keys));
  llm::Gateway gw({}, model);
  argrecon::Engine engine(gw, {});
  ReviewPoint arg = make_argument("X. Y.");
  argrecon::VerbatimSkeleton skel{"X.", {"Y."}};
  CHECK_THROWS_AS(engine.reconstruct(arg, fixture_corpus().papers.at("p1"), skel, "", ""), argrecon::FormalizationError);

  json bad_fol = valid_reconstruction("t2");
  bad_fol["premises"][0]["fol"] = "Small(c";  // unbalanced
  auto model2 = rtest::make_fixture_model();
  model2->queue("reconstruction", rtest::fenced(bad_fol));
  llm::Gateway gw2({}, model2);
  argrecon::Engine engine2(gw2, {});
  CHECK_THROWS_AS(engine2.reconstruct(arg, fixture_corpus().papers.at("p1"), skel, "", ""),
                  argrecon::FormalizationError);
}

TEST_CASE("run_loop: first candidate valid and faithful terminates at iteration 1") {
  auto model = rtest::make_fixture_model();
  llm::Gateway gw({}, model);
  argrecon::Engine engine(gw, {});
  const auto& points_arg = fixture_corpus().reviews.at("r1");
  (void)points_arg;
  ReviewPoint arg = make_argument(
      "The method is unlikely to scale to production settings. The paper only evaluates models up to 1B parameters.");
  argrecon::ReconstructedArgument r = engine.run_loop(arg, fixture_corpus().papers.at("p1"));
  CHECK(r.status == argrecon::ReconStatus::Faithful);
  CHECK(r.iterations == 1);
  CHECK(r.model_faithful);
  for (const auto& e : r.trace) CHECK(e.outcome == argrecon::LoopOutcome::Ok);
  CHECK(r.streamlined_premises.size() == r.fol_premises.size());
}

TEST_CASE("run_loop: invalid -> circular -> valid+unfaithful -> valid+faithful") {
  auto model = rtest::make_fixture_model();
  model->queue("reconstruction", rtest::fenced(invalid_reconstruction("a1")));
  model->queue("reconstruction", rtest::fenced(circular_reconstruction("a2")));
  model->queue("reconstruction", rtest::fenced(valid_reconstruction("a3")));
  model->queue("reconstruction", rtest::fenced(valid_reconstruction("a4")));
  model->queue("faithfulness_judge",
               rtest::fenced(json{{"faithful", false}, {"justification", "The conclusion drops the production-settings qualifier."}}));
  model->queue("faithfulness_judge", rtest::fenced(json{{"faithful", true}, {"justification", "Accurate and complete."}}));
  llm::Gateway gw({}, model);
  argrecon::Engine engine(gw, {});
  ReviewPoint arg = make_argument("The method is unlikely to scale. The paper only evaluates small models.");
  argrecon::ReconstructedArgument r = engine.run_loop(arg, fixture_corpus().papers.at("p1"));

  CHECK(r.status == argrecon::ReconStatus::Faithful);
  CHECK(r.iterations == 4);
  std::vector<argrecon::LoopOutcome> feedback;
  for (const auto& e : r.trace)
    if (e.outcome != argrecon::LoopOutcome::Ok) feedback.push_back(e.outcome);
  REQUIRE(feedback.size() == 3);
  CHECK(feedback[0] == argrecon::LoopOutcome::InvalidFeedback);
  CHECK(feedback[1] == argrecon::LoopOutcome::CircularFeedback);
  CHECK(feedback[2] == argrecon::LoopOutcome::UnfaithfulFeedback);
  for (const auto& e : r.trace)
    if (e.outcome != argrecon::LoopOutcome::Ok) CHECK(!e.payload.empty());

  // Series gating: a faithfulness check only ever follows a validity Ok of
  // the same iteration.
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    if (r.trace[i].step != argrecon::LoopStep::FaithfulnessCheck) continue;
    bool ok_before = false;
    for (std::size_t j = 0; j < i; ++j)
      if (r.trace[j].iteration == r.trace[i].iteration && r.trace[j].step == argrecon::LoopStep::ValidityCheck)
        ok_before = r.trace[j].outcome == argrecon::LoopOutcome::Ok;
    CHECK(ok_before);
  }

  // The invalid candidate's feedback carries the countermodel through keys.
  CHECK(r.trace[2].payload.find("Counterexample") != std::string::npos);
  CHECK(r.trace[2].payload.find("the paper evaluates only small models") != std::string::npos);
}

TEST_CASE("run_loop: ten failures exhaust the cap") {
  auto model = rtest::make_fixture_model();
  for (int i = 0; i < 10; ++i) model->queue("reconstruction", rtest::fenced(invalid_reconstruction("x" + std::to_string(i))));
  llm::Gateway gw({}, model);
  argrecon::Engine engine(gw, {});
  ReviewPoint arg = make_argument("A. B.");
  argrecon::ReconstructedArgument r = engine.run_loop(arg, fixture_corpus().papers.at("p1"));
  CHECK(r.status == argrecon::ReconStatus::Exhausted);
  CHECK(r.iterations == 10);
  CHECK_FALSE(r.model_faithful);
  CHECK(!r.fol_premises.empty());  // the last candidate is returned
}

TEST_CASE("run_loop: formalization errors feed back and count as iterations") {
  auto model = rtest::make_fixture_model();
  json broken = valid_reconstruction("b");
  broken["premises"][0]["fol"] = "Small(c";
  model->queue("reconstruction", rtest::fenced(broken));
  model->queue("reconstruction", rtest::fenced(valid_reconstruction("ok")));
  llm::Gateway gw({}, model);
  argrecon::Engine engine(gw, {});
  ReviewPoint arg = make_argument("A. B.");
  argrecon::ReconstructedArgument r = engine.run_loop(arg, fixture_corpus().papers.at("p1"));
  CHECK(r.status == argrecon::ReconStatus::Faithful);
  CHECK(r.iterations == 2);
  REQUIRE(r.trace.size() >= 2);
  CHECK(r.trace[1].outcome == argrecon::LoopOutcome::FormalizationErrorFeedback);
}

TEST_CASE("streamline: count mismatch is re-prompted once") {
  auto model = rtest::make_fixture_model();
  // First streamline reply merges the premises into one sentence.
  model->queue("deformalization", rtest::fenced(json{{"premises", {"merged sentence"}}, {"conclusion", "c"}}));
  llm::Gateway gw({}, model);
  argrecon::Engine engine(gw, {});
  argrecon::Candidate cand;
  cand.nl_premises = {"p1", "p2"};
  cand.fol_premises = {fol::parse_formula("A(c)"), fol::parse_formula("A(c) -> B(c)")};
  cand.implicit = {false, true};
  cand.nl_conclusion = "c";
  cand.fol_conclusion = fol::parse_formula("B(c)");
  cand.keys = {{"A", "a"}, {"B", "b"}, {"c", "the submission"}};
  auto [premises, conclusion] = engine.streamline(cand);
  CHECK(premises.size() == 2);  // retry used the rule-based response
  CHECK(!conclusion.empty());
}

// --- scorer ------------------------------------------------------------------

TEST_CASE("agg_conjunction: threshold semantics") {
  CHECK(scorer::agg_conjunction({5, 4, 3}) == BinaryLabel::NotMisinformed);
  CHECK(scorer::agg_conjunction({5, 2, 5}) == BinaryLabel::Misinformed);
  CHECK(scorer::agg_conjunction({3}) == BinaryLabel::NotMisinformed);
  CHECK(scorer::agg_conjunction({5, 5, 2, 5}) == BinaryLabel::Misinformed);
  CHECK_THROWS_AS(scorer::agg_conjunction({}), scorer::EmptyList);
}

TEST_CASE("agg_weighted: weighted mean, zero-weight exclusion, fallback") {
  auto [v1, s1] = scorer::agg_weighted({5, 1}, {2, 2});
  CHECK(v1 == doctest::Approx(3.0));
  CHECK(s1 == 3);
  auto [v2, s2] = scorer::agg_weighted({5, 1}, {0, 2});
  CHECK(v2 == doctest::Approx(1.0));
  CHECK(s2 == 1);
  auto [v3, s3] = scorer::agg_weighted({4, 4}, {0, 0});
  CHECK(v3 == doctest::Approx(4.0));
  CHECK(s3 == 4);
  CHECK_THROWS_AS(scorer::agg_weighted({}, {}), scorer::EmptyList);
  CHECK_THROWS_AS(scorer::agg_weighted({4}, {1, 2}), scorer::LengthMismatch);
  // half-up rounding
  auto [v4, s4] = scorer::agg_weighted({4, 3}, {1, 1});
  CHECK(v4 == doctest::Approx(3.5));
  CHECK(s4 == 4);
}

TEST_CASE("agg_weighted: constant score vectors return that constant for any weights") {
  std::mt19937 rng(321);
  for (int t = 0; t < 100; ++t) {
    const int score = 1 + static_cast<int>(rng() % 5);
    const std::size_t n = 1 + rng() % 6;
    std::vector<int> scores(n, score), weights(n);
    for (auto& w : weights) w = static_cast<int>(rng() % 3);
    auto [value, rounded] = scorer::agg_weighted(scores, weights);
    CHECK(value == doctest::Approx(static_cast<double>(score)));
    CHECK(rounded == score);
  }
}

TEST_CASE("score_point: claim, question, base argument") {
  auto model = rtest::make_fixture_model();
  llm::Gateway gw({}, model);
  scorer::Judge judge(gw, {});
  const PaperDoc& paper = fixture_corpus().papers.at("p1");

  ReviewPoint claim;
  claim.point_id = "c1";
  claim.paper_id = "p1";
  claim.text = "The novelty over existing demonstration selection methods is limited.";
  claim.kind = PointKind::Claim;
  scorer::ScoredPoint sc = judge.score_point(claim, paper, nullptr, scorer::ScoreMode::Base, std::nullopt);
  CHECK(sc.final_score5 == 3);
  CHECK(sc.final_binary == BinaryLabel::NotMisinformed);
  CHECK(sc.records[0].kb == KnowledgeBase::SubmittedPaper);

  ReviewPoint question;
  question.point_id = "q1";
  question.paper_id = "p1";
  question.text = "What is the runtime overhead of the selection step compared to random selection?";
  question.kind = PointKind::Question;
  scorer::ScoredPoint sq = judge.score_point(question, paper, nullptr, scorer::ScoreMode::Base, std::nullopt);
  CHECK(sq.final_score5 == 1);  // the paper answers it
  CHECK(sq.final_binary == BinaryLabel::Misinformed);

  ReviewPoint arg = make_argument(
      "The method is unlikely to scale to production settings. The paper only evaluates models up to 1B parameters.");
  scorer::ScoredPoint sw = judge.score_point(arg, paper, nullptr, scorer::ScoreMode::Base, std::nullopt);
  CHECK(sw.final_score5 == 2);  // whole-weakness factuality (WScore)
  CHECK(sw.records.size() == 1);
}

TEST_CASE("score_point: advanced argument aggregates premise judgments") {
  auto model = rtest::make_fixture_model();
  llm::Gateway gw({}, model);
  argrecon::Engine engine(gw, {});
  scorer::Judge judge(gw, {});
  const PaperDoc& paper = fixture_corpus().papers.at("p1");
  ReviewPoint arg = make_argument(
      "The method is unlikely to scale to production settings. The paper only evaluates models up to 1B parameters. "
      "The cost of the selection step grows quickly with model size.");
  argrecon::ReconstructedArgument recon = engine.run_loop(arg, paper);
  REQUIRE(recon.status == argrecon::ReconStatus::Faithful);
  REQUIRE(recon.streamlined_premises.size() == 3);  // two reasons + implicit bridge

  scorer::ScoredPoint sp = judge.score_point(arg, paper, &recon, scorer::ScoreMode::Advanced, std::nullopt);
  REQUIRE(sp.aggregate.has_value());
  CHECK(sp.aggregate->premise_scores == std::vector<int>{1, 5, 5});
  CHECK(sp.aggregate->weights == std::vector<int>{2, 2, 0});
  CHECK(sp.final_binary == BinaryLabel::Misinformed);       // conjunction channel
  CHECK(sp.final_score5 == 3);                              // (2*1 + 2*5)/4 = 3
  CHECK(sp.records.size() == 3);
  CHECK(sp.records[1].kb == KnowledgeBase::InternalKnowledge);
  CHECK(sp.records[0].untrivialness->value() == 2);
  CHECK(sp.records[2].untrivialness->value() == 0);

  // Missing and exhausted reconstructions.
  CHECK_THROWS_AS(judge.score_point(arg, paper, nullptr, scorer::ScoreMode::Advanced, std::nullopt),
                  scorer::MissingReconstruction);
  argrecon::ReconstructedArgument exhausted = recon;
  exhausted.status = argrecon::ReconStatus::Exhausted;
  scorer::ScoredPoint skipped = judge.score_point(arg, paper, &exhausted, scorer::ScoreMode::Advanced, std::nullopt);
  CHECK(skipped.skipped);
  CHECK(!skipped.diagnostic.empty());
  CHECK_FALSE(skipped.final_binary.has_value());
}

TEST_CASE("score_point: mode toggling never changes claim/question outputs") {
  auto model = rtest::make_fixture_model();
  llm::Gateway gw({}, model);
  scorer::Judge judge(gw, {});
  const PaperDoc& paper = fixture_corpus().papers.at("p2");
  ReviewPoint q;
  q.point_id = "q2";
  q.paper_id = "p2";
  q.text = "Did you measure calibration of the pruned models under distribution shift?";
  q.kind = PointKind::Question;
  scorer::ScoredPoint base = judge.score_point(q, paper, nullptr, scorer::ScoreMode::Base, std::nullopt);
  scorer::ScoredPoint advanced = judge.score_point(q, paper, nullptr, scorer::ScoreMode::Advanced, std::nullopt);
  CHECK(base.final_score5 == advanced.final_score5);
  CHECK(base.records[0].score == advanced.records[0].score);
}

TEST_CASE("score_point: questions accept author-response context; kb selection covers all bases") {
  auto model = rtest::make_fixture_model();
  model->set_kb_rule("reported by the cited baseline", "referred_papers");
  llm::Gateway gw({}, model);
  scorer::Judge judge(gw, {});
  const PaperDoc& paper = fixture_corpus().papers.at("p1");

  ReviewPoint q;
  q.point_id = "q1";
  q.paper_id = "p1";
  q.text = "What is the runtime overhead of the selection step compared to random selection?";
  q.kind = PointKind::Question;
  scorer::ScoredPoint with_ar =
      judge.score_point(q, paper, nullptr, scorer::ScoreMode::Base, std::string("See Section 5.2."));
  CHECK(with_ar.records[0].with_author_response);
  CHECK(with_ar.final_score5 == 1);

  CHECK(judge.select_kb("This number was reported by the cited baseline.", paper) == KnowledgeBase::ReferredPapers);
  CHECK(judge.select_kb("The cost of the selection step grows.", paper) == KnowledgeBase::InternalKnowledge);
  CHECK(judge.select_kb("Table 3 shows the improvement.", paper) == KnowledgeBase::SubmittedPaper);
}

TEST_CASE("score_point: author response toggles prompt context, not aggregation") {
  auto model = rtest::make_fixture_model();
  llm::Gateway gw({}, model);
  scorer::Judge judge(gw, {});
  const PaperDoc& paper = fixture_corpus().papers.at("p1");
  ReviewPoint claim;
  claim.point_id = "c1";
  claim.paper_id = "p1";
  claim.text = "The novelty over existing demonstration selection methods is limited.";
  claim.kind = PointKind::Claim;
  scorer::ScoredPoint without = judge.score_point(claim, paper, nullptr, scorer::ScoreMode::Base, std::nullopt);
  scorer::ScoredPoint with_ar =
      judge.score_point(claim, paper, nullptr, scorer::ScoreMode::Base, std::string("We added 7B results."));
  CHECK(without.records[0].with_author_response == false);
  CHECK(with_ar.records[0].with_author_response == true);
  // Same scripted verdicts either way: aggregation-level outputs identical.
  CHECK(without.final_score5 == with_ar.final_score5);

  // Aggregation math sees only scores and weights; flags cannot reach it.
  auto a = scorer::aggregate_argument({5, 2, 4}, {2, 0, 1});
  auto b = scorer::aggregate_argument({5, 2, 4}, {2, 0, 1});
  CHECK(a.weighted_value == b.weighted_value);
  CHECK(a.conjunction_label == b.conjunction_label);
}

// --- full pipeline over the fixture -------------------------------------------

TEST_CASE("pipeline: decompose -> reconstruct -> score -> agree over the fixture corpus") {
  auto model = rtest::make_fixture_model();
  llm::Gateway gw({}, model);
  pipeline::RunConfig rc;
  rc.mode = scorer::ScoreMode::Advanced;
  rc.jobs = 2;
  std::vector<std::string> diag;
  auto points = pipeline::run_decompose(fixture_corpus(), gw, rc, diag);
  auto recons = pipeline::run_reconstruct(fixture_corpus(), points, gw, rc, diag);
  auto scores = pipeline::run_score(fixture_corpus(), points, recons, gw, rc, diag);
  CHECK(diag.empty());
  REQUIRE(recons.size() == 2);
  for (const auto& r : recons) CHECK(r.status == argrecon::ReconStatus::Faithful);
  REQUIRE(scores.size() == 5);

  json report = pipeline::run_agree(scores, fixture_corpus(), rc);
  // Model and human binary labels coincide on the fixture by construction.
  CHECK(report.at("categories").at("ReviewScore").at("binary").at("f1").get<double>() == doctest::Approx(1.0));
  CHECK(report.at("categories").at("ArgScore_wo_agg").at("binary").at("n").get<int>() == 5);
  CHECK(report.at("unmatched_model_ids").empty());
  CHECK(report.at("unmatched_human_ids").empty());
  CHECK(report.at("krippendorff_alpha").contains("groups"));

  // Every faithful reconstruction satisfies the validity kernel end to end.
  for (const auto& r : recons) {
    std::vector<fol::FormulaPtr> premises;
    for (const auto& f : r.fol_premises) premises.push_back(fol::parse_formula(f));
    fol::ValidityResult v = fol::check_argument(premises, fol::parse_formula(r.fol_conclusion));
    CHECK(v.status == fol::ValidityStatus::Valid);
  }
}

TEST_CASE("pipeline: a warm cache serves the whole second run with zero live calls") {
  fs::path cache = fs::temp_directory_path() / ("rs_cache_" + std::to_string(::getpid()));
  fs::remove_all(cache);
  auto model = rtest::make_fixture_model();
  llm::GatewayOptions opts;
  opts.cache_dir = cache.string();
  pipeline::RunConfig rc;
  rc.mode = scorer::ScoreMode::Advanced;

  auto run_once = [&](llm::Gateway& gw) {
    std::vector<std::string> diag;
    auto points = pipeline::run_decompose(fixture_corpus(), gw, rc, diag);
    auto recons = pipeline::run_reconstruct(fixture_corpus(), points, gw, rc, diag);
    auto scores = pipeline::run_score(fixture_corpus(), points, recons, gw, rc, diag);
    REQUIRE(diag.empty());
    json out = json::array();
    for (const auto& s : scores) out.push_back(corpus::to_json(s));
    return out.dump();
  };

  llm::Gateway first(opts, model);
  const std::string bytes1 = run_once(first);
  const int live_after_first = model->calls;
  CHECK(live_after_first > 0);

  llm::Gateway second(opts, model);  // fresh process-equivalent, same disk cache
  const std::string bytes2 = run_once(second);
  CHECK(model->calls == live_after_first);  // zero live requests
  CHECK(bytes2 == bytes1);
  fs::remove_all(cache);
}

TEST_CASE("pipeline: per-point failures become diagnostics, not aborts") {
  auto model = rtest::make_fixture_model();
  // Sabotage one argument's verbatim extraction permanently.
  for (int i = 0; i < 8; ++i)
    model->queue("verbatim_extraction", rtest::fenced(json{{"conjecture", "invented"}, {"reasons", json::array()}}));
  llm::Gateway gw({}, model);
  pipeline::RunConfig rc;
  rc.jobs = 1;
  std::vector<std::string> diag;
  auto points = pipeline::run_decompose(fixture_corpus(), gw, rc, diag);
  auto recons = pipeline::run_reconstruct(fixture_corpus(), points, gw, rc, diag);
  CHECK(recons.size() + diag.size() == 2);  // failed arguments are diagnosed
  CHECK(!diag.empty());
}
