#include "reviewscore/corpus.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace reviewscore::corpus {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorpusError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void load_papers(const fs::path& dir, Corpus& corpus, std::vector<std::string>& issues) {
  if (!fs::exists(dir)) {
    issues.push_back("missing directory: " + dir.string());
    return;
  }
  for (const auto& entry : fs::directory_iterator(dir)) {
    const fs::path& path = entry.path();
    if (path.extension() != ".txt" || path.stem().string().ends_with(".refs")) continue;
    std::string text = read_file(path);
    PaperDoc doc;
    doc.paper_id = path.stem().string();
    std::size_t nl = text.find('\n');
    doc.title = nl == std::string::npos ? text : text.substr(0, nl);
    doc.body_text = nl == std::string::npos ? std::string() : text.substr(nl + 1);
    if (doc.body_text.empty()) {
      issues.push_back(path.string() + ": paper body is empty (first line is the title, the rest the body)");
      continue;
    }
    fs::path refs = path.parent_path() / (doc.paper_id + ".refs.txt");
    if (fs::exists(refs)) {
      std::istringstream in(read_file(refs));
      std::string line;
      while (std::getline(in, line))
        if (!line.empty()) doc.referred_titles.push_back(line);
    }
    corpus.papers.emplace(doc.paper_id, std::move(doc));
  }
}

void load_reviews(const fs::path& dir, Corpus& corpus, std::vector<std::string>& issues) {
  if (!fs::exists(dir)) {
    issues.push_back("missing directory: " + dir.string());
    return;
  }
  for (const auto& entry : fs::directory_iterator(dir)) {
    const fs::path& path = entry.path();
    if (path.extension() != ".json") continue;
    json j = json::parse(read_file(path), nullptr, false);
    if (j.is_discarded()) {
      issues.push_back(path.string() + ": not valid JSON");
      continue;
    }
    if (!j.contains("review_id") || !j.at("review_id").is_string() || j.at("review_id").get<std::string>().empty() ||
        !j.contains("paper_id") || !j.at("paper_id").is_string()) {
      issues.push_back(path.string() + ": review requires string fields review_id and paper_id");
      continue;
    }
    RawReview review;
    review.review_id = j.at("review_id").get<std::string>();
    review.paper_id = j.at("paper_id").get<std::string>();
    if (j.contains("sections")) {
      if (!j.at("sections").is_object()) {
        issues.push_back(path.string() + ": sections must be an object of strings");
        continue;
      }
      for (const auto& [name, value] : j.at("sections").items()) {
        if (!value.is_string()) {
          issues.push_back(path.string() + ": section '" + name + "' must be a string");
          continue;
        }
        review.sections[name] = value.get<std::string>();
      }
    }
    review.raw_text = j.value("raw_text", "");
    corpus.reviews.emplace(review.review_id, std::move(review));
  }
}

void load_responses(const fs::path& dir, Corpus& corpus, std::vector<std::string>& issues) {
  if (!fs::exists(dir)) return;  // author responses are optional
  for (const auto& entry : fs::directory_iterator(dir)) {
    const fs::path& path = entry.path();
    if (path.extension() != ".json") continue;
    json j = json::parse(read_file(path), nullptr, false);
    if (j.is_discarded() || !j.contains("review_id") || !j.contains("text")) {
      issues.push_back(path.string() + ": author response requires review_id and text");
      continue;
    }
    corpus.author_responses[j.at("review_id").get<std::string>()] = j.at("text").get<std::string>();
  }
}

void load_annotations(const fs::path& dir, Corpus& corpus, std::vector<std::string>& issues) {
  if (!fs::exists(dir)) return;  // annotations are optional
  for (const auto& entry : fs::directory_iterator(dir)) {
    const fs::path& path = entry.path();
    if (path.extension() != ".jsonl") continue;
    std::istringstream in(read_file(path));
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      const std::string where = path.string() + ":" + std::to_string(line_no);
      json j = json::parse(line, nullptr, false);
      if (j.is_discarded()) {
        issues.push_back(where + ": not valid JSON");
        continue;
      }
      AnnotationRecord rec;
      if (!j.contains("subject_id") || !j.at("subject_id").is_string()) {
        issues.push_back(where + ": annotation requires subject_id");
        continue;
      }
      rec.subject_id = j.at("subject_id").get<std::string>();
      bool bad = false;
      if (j.contains("kind")) {
        try {
          rec.kind = point_kind_from_string(j.at("kind").get<std::string>());
        } catch (const std::exception& e) {
          issues.push_back(where + ": " + e.what());
          bad = true;
        }
      }
      auto read_ints = [&](const char* field, int lo, int hi, std::vector<int>& out) {
        if (!j.contains(field)) return;
        if (!j.at(field).is_array()) {
          issues.push_back(where + ": " + field + " must be an array of integers");
          bad = true;
          return;
        }
        for (const auto& v : j.at(field)) {
          if (!v.is_number_integer() || v.get<int>() < lo || v.get<int>() > hi) {
            issues.push_back(where + ": " + field + " values must be integers in [" + std::to_string(lo) + "," +
                             std::to_string(hi) + "]");
            bad = true;
            return;
          }
          out.push_back(v.get<int>());
        }
      };
      read_ints("scores", 1, 5, rec.scores);
      read_ints("untrivialness", 0, 2, rec.untrivialness);
      read_ints("faithfulness", 1, 5, rec.faithfulness);
      if (j.contains("kb")) {
        try {
          rec.kb = knowledge_base_from_string(j.at("kb").get<std::string>());
        } catch (const std::exception& e) {
          issues.push_back(where + ": " + e.what());
          bad = true;
        }
      }
      rec.group = j.value("group", "");
      if (rec.scores.size() > 3) {
        issues.push_back(where + ": more than 3 annotator scores");
        bad = true;
      }
      // A subject with a point kind is non-skippable: exactly 3 scores.
      const bool is_premise = !rec.kind.has_value() || rec.untrivialness.size() > 0 || j.contains("kb");
      if (!is_premise && rec.scores.size() != 3) {
        issues.push_back(where + ": non-skippable subject '" + rec.subject_id + "' has " +
                         std::to_string(rec.scores.size()) + " scores, expected 3");
        bad = true;
      }
      if (!bad) corpus.annotations.push_back(std::move(rec));
    }
  }
}

}  // namespace

Corpus load_corpus(const std::string& root) {
  Corpus corpus;
  std::vector<std::string> issues;
  const fs::path base(root);
  if (!fs::exists(base)) throw CorpusError("corpus root does not exist: " + root);
  load_papers(base / "papers", corpus, issues);
  load_reviews(base / "reviews", corpus, issues);
  load_responses(base / "responses", corpus, issues);
  load_annotations(base / "annotations", corpus, issues);

  for (const auto& [id, review] : corpus.reviews) {
    if (!corpus.papers.count(review.paper_id))
      issues.push_back("review '" + id + "' references missing paper '" + review.paper_id + "'");
  }
  for (const auto& [review_id, text] : corpus.author_responses) {
    (void)text;
    if (!corpus.reviews.count(review_id))
      issues.push_back("author response references missing review '" + review_id + "'");
  }

  if (!issues.empty()) {
    std::ostringstream msg;
    msg << "corpus validation failed with " << issues.size() << " issue(s); first: " << issues.front();
    throw ValidationFailure(msg.str(), issues);
  }
  return corpus;
}

DatasetStats dataset_stats(const Corpus& corpus, const std::vector<ReviewPoint>& points,
                           const std::vector<argrecon::ReconstructedArgument>& reconstructions) {
  DatasetStats stats;
  stats.papers = corpus.papers.size();
  stats.reviews = corpus.reviews.size();
  stats.points = points.size();
  for (const auto& p : points) {
    if (!p.kind) continue;
    switch (*p.kind) {
      case PointKind::Claim: ++stats.claims; break;
      case PointKind::Argument: ++stats.arguments; break;
      case PointKind::Question: ++stats.questions; break;
    }
  }
  for (const auto& r : reconstructions) stats.premises += r.nl_premises.size();

  std::map<std::string, std::pair<std::size_t, std::size_t>> counts;  // kind -> (misinformed, total)
  std::size_t mis = 0, total = 0;
  std::map<std::string, const ReviewPoint*> by_id;
  for (const auto& p : points) by_id[p.point_id] = &p;
  for (const auto& rec : corpus.annotations) {
    auto it = by_id.find(rec.subject_id);
    if (it == by_id.end() || !it->second->kind) continue;
    auto label = rec.final_label();
    if (!label) continue;
    const bool m = to_binary(*label) == BinaryLabel::Misinformed;
    auto& cell = counts[to_string(*it->second->kind)];
    cell.first += m ? 1 : 0;
    cell.second += 1;
    mis += m ? 1 : 0;
    ++total;
  }
  if (total > 0) {
    stats.pct_misinformed_overall = 100.0 * static_cast<double>(mis) / static_cast<double>(total);
    for (const auto& [kind, cell] : counts)
      stats.pct_misinformed_by_kind[kind] = 100.0 * static_cast<double>(cell.first) / static_cast<double>(cell.second);
  }
  return stats;
}

json DatasetStats::to_json() const {
  json j{{"papers", papers},   {"reviews", reviews},     {"points", points},   {"questions", questions},
         {"claims", claims},   {"arguments", arguments}, {"premises", premises}};
  if (pct_misinformed_overall) {
    j["pct_misinformed_overall"] = *pct_misinformed_overall;
    j["pct_misinformed_by_kind"] = pct_misinformed_by_kind;
  }
  return j;
}

// --- run artifacts -----------------------------------------------------------

bool known_stage(const std::string& stage) {
  return stage == "points" || stage == "reconstructions" || stage == "scores" || stage == "report";
}

void save_run(const std::string& path, const std::string& stage, const std::vector<json>& records) {
  if (!known_stage(stage)) throw CorpusError("unknown run stage: " + stage);
  fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  if (!out) throw CorpusError("cannot write " + path);
  for (const auto& record : records) {
    json line{{"schema_version", kSchemaVersion}, {"stage", stage}, {"data", record}};
    out << line.dump() << "\n";
  }
}

LoadedRun load_run(const std::string& path, const std::string& stage) {
  if (!known_stage(stage)) throw CorpusError("unknown run stage: " + stage);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorpusError("cannot open run artifact: " + path);
  LoadedRun out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("schema_version") || !j.contains("data")) {
      out.diagnostics.push_back(path + ":" + std::to_string(line_no) + ": corrupt line skipped");
      continue;
    }
    if (j.at("schema_version").get<int>() != kSchemaVersion)
      throw VersionMismatch(path + ":" + std::to_string(line_no) + ": schema_version " +
                            j.at("schema_version").dump() + ", expected " + std::to_string(kSchemaVersion));
    if (j.value("stage", "") != stage)
      throw VersionMismatch(path + ":" + std::to_string(line_no) + ": stage '" + j.value("stage", "") +
                            "', expected '" + stage + "'");
    out.records.push_back(j.at("data"));
  }
  return out;
}

// --- record (de)serialization ------------------------------------------------

json to_json(const ReviewPoint& p) {
  json j{{"point_id", p.point_id}, {"paper_id", p.paper_id}, {"review_id", p.review_id}, {"text", p.text}};
  if (p.kind) j["kind"] = to_string(*p.kind);
  return j;
}

ReviewPoint review_point_from_json(const json& j) {
  ReviewPoint p;
  p.point_id = j.at("point_id").get<std::string>();
  p.paper_id = j.at("paper_id").get<std::string>();
  p.review_id = j.at("review_id").get<std::string>();
  p.text = j.at("text").get<std::string>();
  if (j.contains("kind")) p.kind = point_kind_from_string(j.at("kind").get<std::string>());
  return p;
}

json to_json(const argrecon::ReconstructedArgument& r) {
  json trace = json::array();
  for (const auto& e : r.trace)
    trace.push_back({{"iteration", e.iteration},
                     {"step", argrecon::to_string(e.step)},
                     {"outcome", argrecon::to_string(e.outcome)},
                     {"payload", e.payload}});
  json j{{"argument_point_id", r.argument_point_id},
         {"nl_premises", r.nl_premises},
         {"nl_conclusion", r.nl_conclusion},
         {"fol_premises", r.fol_premises},
         {"fol_conclusion", r.fol_conclusion},
         {"implicit", r.implicit},
         {"keys", r.keys},
         {"streamlined_premises", r.streamlined_premises},
         {"streamlined_conclusion", r.streamlined_conclusion},
         {"status", argrecon::to_string(r.status)},
         {"model_faithful", r.model_faithful},
         {"iterations", r.iterations},
         {"trace", trace}};
  if (r.faithfulness_score) j["faithfulness_score"] = r.faithfulness_score->value();
  return j;
}

argrecon::ReconstructedArgument reconstruction_from_json(const json& j) {
  argrecon::ReconstructedArgument r;
  r.argument_point_id = j.at("argument_point_id").get<std::string>();
  r.nl_premises = j.at("nl_premises").get<std::vector<std::string>>();
  r.nl_conclusion = j.at("nl_conclusion").get<std::string>();
  r.fol_premises = j.at("fol_premises").get<std::vector<std::string>>();
  r.fol_conclusion = j.at("fol_conclusion").get<std::string>();
  r.implicit = j.at("implicit").get<std::vector<bool>>();
  r.keys = j.at("keys").get<fol::KeyTable>();
  r.streamlined_premises = j.at("streamlined_premises").get<std::vector<std::string>>();
  r.streamlined_conclusion = j.at("streamlined_conclusion").get<std::string>();
  r.status = argrecon::recon_status_from_string(j.at("status").get<std::string>());
  r.model_faithful = j.at("model_faithful").get<bool>();
  r.iterations = j.at("iterations").get<int>();
  if (j.contains("faithfulness_score")) r.faithfulness_score = Score5(j.at("faithfulness_score").get<int>());
  for (const auto& e : j.at("trace")) {
    argrecon::LoopEvent ev;
    ev.iteration = e.at("iteration").get<int>();
    ev.step = argrecon::loop_step_from_string(e.at("step").get<std::string>());
    ev.outcome = argrecon::loop_outcome_from_string(e.at("outcome").get<std::string>());
    ev.payload = e.at("payload").get<std::string>();
    r.trace.push_back(std::move(ev));
  }
  return r;
}

json to_json(const scorer::ScoredPoint& s) {
  json records = json::array();
  for (const auto& rec : s.records) {
    json r{{"subject_id", rec.subject_id},
           {"score", rec.score.value()},
           {"binary", to_string(rec.binary)},
           {"justification", rec.justification},
           {"kb", to_string(rec.kb)},
           {"with_author_response", rec.with_author_response}};
    if (rec.untrivialness) r["untrivialness"] = rec.untrivialness->value();
    records.push_back(std::move(r));
  }
  json j{{"point_id", s.point_id},
         {"kind", to_string(s.kind)},
         {"mode", scorer::to_string(s.mode)},
         {"with_author_response", s.with_author_response},
         {"records", records},
         {"skipped", s.skipped},
         {"diagnostic", s.diagnostic}};
  if (s.aggregate) {
    j["aggregate"] = {{"premise_scores", s.aggregate->premise_scores},
                      {"weights", s.aggregate->weights},
                      {"conjunction", to_string(s.aggregate->conjunction_label)},
                      {"weighted_value", s.aggregate->weighted_value},
                      {"weighted_score5", s.aggregate->weighted_score5}};
  }
  if (s.final_score5) j["final_score5"] = *s.final_score5;
  if (s.final_binary) j["final_binary"] = to_string(*s.final_binary);
  return j;
}

scorer::ScoredPoint scored_point_from_json(const json& j) {
  scorer::ScoredPoint s;
  s.point_id = j.at("point_id").get<std::string>();
  s.kind = point_kind_from_string(j.at("kind").get<std::string>());
  s.mode = scorer::score_mode_from_string(j.at("mode").get<std::string>());
  s.with_author_response = j.at("with_author_response").get<bool>();
  s.skipped = j.at("skipped").get<bool>();
  s.diagnostic = j.at("diagnostic").get<std::string>();
  for (const auto& r : j.at("records")) {
    scorer::ScoreRecord rec;
    rec.subject_id = r.at("subject_id").get<std::string>();
    rec.score = Score5(r.at("score").get<int>());
    rec.binary = r.at("binary").get<std::string>() == "misinformed" ? BinaryLabel::Misinformed
                                                                    : BinaryLabel::NotMisinformed;
    rec.justification = r.at("justification").get<std::string>();
    rec.kb = knowledge_base_from_string(r.at("kb").get<std::string>());
    rec.with_author_response = r.at("with_author_response").get<bool>();
    if (r.contains("untrivialness")) rec.untrivialness = Untrivialness(r.at("untrivialness").get<int>());
    s.records.push_back(std::move(rec));
  }
  if (j.contains("aggregate")) {
    scorer::ArgAggregate agg;
    const json& a = j.at("aggregate");
    agg.premise_scores = a.at("premise_scores").get<std::vector<int>>();
    agg.weights = a.at("weights").get<std::vector<int>>();
    agg.conjunction_label = a.at("conjunction").get<std::string>() == "misinformed" ? BinaryLabel::Misinformed
                                                                                    : BinaryLabel::NotMisinformed;
    agg.weighted_value = a.at("weighted_value").get<double>();
    agg.weighted_score5 = a.at("weighted_score5").get<int>();
    s.aggregate = std::move(agg);
  }
  if (j.contains("final_score5")) s.final_score5 = j.at("final_score5").get<int>();
  if (j.contains("final_binary"))
    s.final_binary = j.at("final_binary").get<std::string>() == "misinformed" ? BinaryLabel::Misinformed
                                                                              : BinaryLabel::NotMisinformed;
  return s;
}

}  // namespace reviewscore::corpus
