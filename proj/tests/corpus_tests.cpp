#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "reviewscore/corpus.hpp"

using namespace reviewscore;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("rs_corpus_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

void write_file(const fs::path& p, const std::string& content) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p);
  out << content;
}

void write_minimal_corpus(const fs::path& root) {
  write_file(root / "papers" / "pX.txt", "Tiny Paper\nThe body of the tiny paper.\n");
  write_file(root / "reviews" / "rX.json",
             R"({"review_id": "rX", "paper_id": "pX", "sections": {"weaknesses": "W.", "questions": "Q?"}})");
}

}  // namespace

TEST_CASE("load_corpus: bundled fixture") {
  corpus::Corpus c = corpus::load_corpus(RS_FIXTURE_DIR "/corpus");
  CHECK(c.papers.size() == 2);
  CHECK(c.reviews.size() == 2);
  CHECK(c.author_responses.size() == 2);
  CHECK(c.annotations.size() == 10);
  CHECK(c.papers.at("p1").title == "Adaptive Demonstration Selection for Multi-Step Reasoning");
  CHECK(c.reviews.at("r1").section("questions").find("runtime overhead") != std::string::npos);
}

TEST_CASE("load_corpus: minimal synthetic corpus") {
  TempDir tmp;
  write_minimal_corpus(tmp.path);
  corpus::Corpus c = corpus::load_corpus(tmp.path.string());
  CHECK(c.papers.size() == 1);
  CHECK(c.reviews.size() == 1);
}

TEST_CASE("load_corpus: dangling paper reference") {
  TempDir tmp;
  write_minimal_corpus(tmp.path);
  write_file(tmp.path / "reviews" / "rBad.json",
             R"({"review_id": "rBad", "paper_id": "missing", "sections": {"weaknesses": "W."}})");
  try {
    corpus::load_corpus(tmp.path.string());
    FAIL("expected ValidationFailure");
  } catch (const corpus::ValidationFailure& e) {
    REQUIRE(e.issues.size() == 1);
    CHECK(e.issues[0].find("missing paper") != std::string::npos);
  }
}

TEST_CASE("load_corpus: all violations reported together") {
  TempDir tmp;
  write_minimal_corpus(tmp.path);
  write_file(tmp.path / "reviews" / "rBad.json",
             R"({"review_id": "rBad", "paper_id": "missing", "sections": {"weaknesses": "W."}})");
  write_file(tmp.path / "responses" / "orphan.json", R"({"review_id": "ghost", "text": "hello"})");
  try {
    corpus::load_corpus(tmp.path.string());
    FAIL("expected ValidationFailure");
  } catch (const corpus::ValidationFailure& e) {
    CHECK(e.issues.size() == 2);
  }
}

TEST_CASE("load_corpus: two scores on a non-skippable subject") {
  TempDir tmp;
  write_minimal_corpus(tmp.path);
  write_file(tmp.path / "annotations" / "a.jsonl", R"({"subject_id": "x", "kind": "claim", "scores": [4, 5]})"
                                                   "\n");
  CHECK_THROWS_AS(corpus::load_corpus(tmp.path.string()), corpus::ValidationFailure);

  // A premise record with two scores is an allowed incomplete record.
  write_file(tmp.path / "annotations" / "a.jsonl",
             R"({"subject_id": "x.prem0", "scores": [4, 5], "untrivialness": [2, 2], "kb": "submitted_paper"})"
             "\n");
  corpus::Corpus c = corpus::load_corpus(tmp.path.string());
  REQUIRE(c.annotations.size() == 1);
  CHECK_FALSE(c.annotations[0].complete());
  CHECK_FALSE(c.annotations[0].final_label().has_value());
}

TEST_CASE("save_run/load_run: round trip is the identity on records") {
  TempDir tmp;
  std::mt19937 rng(7);
  std::vector<json> records;
  for (int i = 0; i < 25; ++i) {
    ReviewPoint p;
    p.point_id = "pt" + std::to_string(i);
    p.paper_id = "p" + std::to_string(rng() % 3);
    p.review_id = "r" + std::to_string(rng() % 5);
    p.text = "text with specials \"quotes\" and\nnewlines " + std::to_string(rng());
    if (rng() % 4 != 0)
      p.kind = static_cast<PointKind>(rng() % 3);
    records.push_back(corpus::to_json(p));
  }
  const std::string path = (tmp.path / "points.jsonl").string();
  corpus::save_run(path, "points", records);
  corpus::LoadedRun loaded = corpus::load_run(path, "points");
  CHECK(loaded.diagnostics.empty());
  REQUIRE(loaded.records.size() == records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(loaded.records[i] == records[i]);
    // typed round trip too
    ReviewPoint back = corpus::review_point_from_json(loaded.records[i]);
    CHECK(corpus::to_json(back) == records[i]);
  }
}

TEST_CASE("reconstruction and scored-point records round trip") {
  argrecon::ReconstructedArgument r;
  r.argument_point_id = "r1.p1";
  r.nl_premises = {"first premise", "second premise"};
  r.nl_conclusion = "the conclusion";
  r.fol_premises = {"P(a)", "P(a) -> Q(a)"};
  r.fol_conclusion = "Q(a)";
  r.implicit = {false, true};
  r.keys = {{"P", "p meaning"}, {"Q", "q meaning"}, {"a", "the paper"}};
  r.streamlined_premises = {"s1", "s2"};
  r.streamlined_conclusion = "sc";
  r.status = argrecon::ReconStatus::Faithful;
  r.model_faithful = true;
  r.faithfulness_score = Score5(4);
  r.iterations = 3;
  r.trace = {{1, argrecon::LoopStep::Reconstruct, argrecon::LoopOutcome::Ok, ""},
             {1, argrecon::LoopStep::ValidityCheck, argrecon::LoopOutcome::InvalidFeedback, "feedback text"}};
  json jr = corpus::to_json(r);
  CHECK(corpus::to_json(corpus::reconstruction_from_json(jr)) == jr);

  scorer::ScoredPoint sp;
  sp.point_id = "r1.p1";
  sp.kind = PointKind::Argument;
  sp.mode = scorer::ScoreMode::Advanced;
  sp.with_author_response = true;
  scorer::ScoreRecord rec;
  rec.subject_id = "r1.p1.prem0";
  rec.score = Score5(2);
  rec.binary = to_binary(rec.score);
  rec.justification = "because";
  rec.kb = KnowledgeBase::ReferredPapers;
  rec.untrivialness = Untrivialness(1);
  rec.with_author_response = true;
  sp.records = {rec};
  sp.aggregate = scorer::aggregate_argument({2}, {1});
  sp.final_score5 = 2;
  sp.final_binary = BinaryLabel::Misinformed;
  json js = corpus::to_json(sp);
  CHECK(corpus::to_json(corpus::scored_point_from_json(js)) == js);
}

TEST_CASE("load_run: one corrupt line among ten") {
  TempDir tmp;
  std::vector<json> records;
  for (int i = 0; i < 10; ++i) records.push_back(json{{"i", i}});
  const std::string path = (tmp.path / "scores.jsonl").string();
  corpus::save_run(path, "scores", records);
  // corrupt line 4 in place
  std::ifstream in(path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  in.close();
  lines[3] = "{this is not json";
  std::ofstream out(path, std::ios::trunc);
  for (const auto& l : lines) out << l << "\n";
  out.close();

  corpus::LoadedRun loaded = corpus::load_run(path, "scores");
  CHECK(loaded.records.size() == 9);
  REQUIRE(loaded.diagnostics.size() == 1);
  CHECK(loaded.diagnostics[0].find(":4:") != std::string::npos);
}

TEST_CASE("load_run: schema version bump raises VersionMismatch") {
  TempDir tmp;
  const std::string path = (tmp.path / "points.jsonl").string();
  std::ofstream out(path);
  out << R"({"schema_version": 999, "stage": "points", "data": {}})" << "\n";
  out.close();
  CHECK_THROWS_AS(corpus::load_run(path, "points"), corpus::VersionMismatch);
}

TEST_CASE("load_run: stage mismatch raises VersionMismatch") {
  TempDir tmp;
  const std::string path = (tmp.path / "points.jsonl").string();
  corpus::save_run(path, "points", {json{{"x", 1}}});
  CHECK_THROWS_AS(corpus::load_run(path, "scores"), corpus::VersionMismatch);
}

TEST_CASE("dataset_stats: counts, empty corpus, paper-shaped totals") {
  corpus::Corpus empty;
  corpus::DatasetStats zero = corpus::dataset_stats(empty, {}, {});
  CHECK(zero.points == 0);
  CHECK(zero.papers == 0);
  CHECK_FALSE(zero.pct_misinformed_overall.has_value());

  // One point of each kind.
  std::vector<ReviewPoint> three(3);
  three[0].kind = PointKind::Claim;
  three[1].kind = PointKind::Argument;
  three[2].kind = PointKind::Question;
  corpus::DatasetStats small = corpus::dataset_stats(empty, three, {});
  CHECK(small.claims == 1);
  CHECK(small.arguments == 1);
  CHECK(small.questions == 1);

  // Corpus shaped like the full dataset: 143 questions + 92 claims + 422
  // arguments = 657 points.
  std::vector<ReviewPoint> shaped;
  auto add = [&](PointKind kind, int n) {
    for (int i = 0; i < n; ++i) {
      ReviewPoint p;
      p.kind = kind;
      shaped.push_back(p);
    }
  };
  add(PointKind::Question, 143);
  add(PointKind::Claim, 92);
  add(PointKind::Argument, 422);
  corpus::DatasetStats full = corpus::dataset_stats(empty, shaped, {});
  CHECK(full.points == 657);
  CHECK(full.questions == 143);
  CHECK(full.claims == 92);
  CHECK(full.arguments == 422);
}

TEST_CASE("dataset_stats: additive over a corpus partition") {
  std::mt19937 rng(13);
  std::vector<ReviewPoint> all(60);
  for (auto& p : all) p.kind = static_cast<PointKind>(rng() % 3);
  std::vector<ReviewPoint> left(all.begin(), all.begin() + 23);
  std::vector<ReviewPoint> right(all.begin() + 23, all.end());
  corpus::Corpus empty;
  corpus::DatasetStats total = corpus::dataset_stats(empty, all, {});
  corpus::DatasetStats a = corpus::dataset_stats(empty, left, {});
  corpus::DatasetStats b = corpus::dataset_stats(empty, right, {});
  CHECK(total.points == a.points + b.points);
  CHECK(total.claims == a.claims + b.claims);
  CHECK(total.arguments == a.arguments + b.arguments);
  CHECK(total.questions == a.questions + b.questions);
}

TEST_CASE("dataset_stats: premise counts and human misinformed percentages") {
  corpus::Corpus c = corpus::load_corpus(RS_FIXTURE_DIR "/corpus");
  std::vector<ReviewPoint> points;
  for (const char* spec : {"r1.p0-5bb6106d claim", "r1.p1-296c6f32 argument", "r1.p2-8357c438 question",
                           "r2.p0-f05ae002 argument", "r2.p1-7508a3f6 question"}) {
    std::istringstream in(spec);
    ReviewPoint p;
    std::string kind;
    in >> p.point_id >> kind;
    p.kind = point_kind_from_string(kind);
    points.push_back(p);
  }
  std::vector<argrecon::ReconstructedArgument> recons(2);
  recons[0].nl_premises = {"a", "b", "c"};
  recons[1].nl_premises = {"a", "b"};
  corpus::DatasetStats stats = corpus::dataset_stats(c, points, recons);
  CHECK(stats.premises == 5);
  REQUIRE(stats.pct_misinformed_overall.has_value());
  // human medians: claim 4 (not), argument 2 (mis), question 2 (mis),
  // argument 4 (not), question 5 (not) -> 2/5 = 40%
  CHECK(*stats.pct_misinformed_overall == doctest::Approx(40.0));
  CHECK(stats.pct_misinformed_by_kind.at("question") == doctest::Approx(50.0));
}
