// Operator entry point: staged pipeline over a corpus directory with
// deterministic replay. Stages: decompose -> reconstruct -> score -> agree ->
// report, plus export-smt and stats.
//
// Exit codes: 0 ok, 1 hard error, 2 completed with per-point diagnostics.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "reviewscore/fol/parse.hpp"
#include "reviewscore/fol/smtlib.hpp"
#include "reviewscore/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace reviewscore;

namespace {

struct CliConfig {
  std::string config_path;
  std::string corpus_root = "corpus";
  std::string out_dir = "out";
  std::string cache_dir;
  std::string replay_path;
  std::string transcript_out;
  std::string override_path;
  std::string model_name = "judge-model";
  double temperature = 0.0;
  std::string mode = "base";
  bool with_author_response = false;
  int max_iterations = 10;
  int jobs = 4;
  std::string channel = "both";
  std::string rank_correlation = "pearson";
};

// Lazily constructed live transport: cache- or replay-served runs never touch
// the environment or the network.
class LazyHttpTransport : public llm::Transport {
 public:
  std::string send(const json& wire, const llm::PromptInstance& prompt) override {
    std::call_once(once_, [this] { inner_ = llm::make_http_transport(); });
    return inner_->send(wire, prompt);
  }

 private:
  std::once_flag once_;
  std::shared_ptr<llm::Transport> inner_;
};

// Precedence: command-line flags > config file > defaults. CLI11 has already
// written flag values into cfg; the file only fills options the user did not
// pass.
void apply_config_file(CLI::App& app, CliConfig& cfg) {
  if (cfg.config_path.empty()) return;
  std::ifstream in(cfg.config_path);
  if (!in) throw std::runtime_error("cannot open config file: " + cfg.config_path);
  json j = json::parse(in);
  auto fill = [&](const char* flag, auto& target) {
    using T = std::decay_t<decltype(target)>;
    const CLI::Option* opt = app.get_option(flag);
    if (opt->count() > 0) return;  // explicit flag wins
    std::string key = std::string(flag).substr(2);
    std::replace(key.begin(), key.end(), '-', '_');
    if (j.contains(key)) target = j.at(key).get<T>();
  };
  fill("--corpus", cfg.corpus_root);
  fill("--out", cfg.out_dir);
  fill("--cache-dir", cfg.cache_dir);
  fill("--replay", cfg.replay_path);
  fill("--transcript", cfg.transcript_out);
  fill("--override", cfg.override_path);
  fill("--model", cfg.model_name);
  fill("--temperature", cfg.temperature);
  fill("--mode", cfg.mode);
  fill("--with-author-response", cfg.with_author_response);
  fill("--max-iterations", cfg.max_iterations);
  fill("--jobs", cfg.jobs);
  fill("--channel", cfg.channel);
  fill("--rank-correlation", cfg.rank_correlation);
}

pipeline::RunConfig to_run_config(const CliConfig& cfg) {
  if (cfg.max_iterations < 1) throw std::runtime_error("--max-iterations must be >= 1");
  pipeline::RunConfig rc;
  rc.model.model_name = cfg.model_name;
  rc.model.temperature = cfg.temperature;
  rc.mode = scorer::score_mode_from_string(cfg.mode);
  rc.with_author_response = cfg.with_author_response;
  rc.max_iterations = cfg.max_iterations;
  rc.jobs = cfg.jobs;
  rc.override_path = cfg.override_path;
  rc.report.channel = cfg.channel;
  rc.report.rank_correlation = cfg.rank_correlation;
  return rc;
}

llm::Gateway make_gateway(const CliConfig& cfg) {
  llm::GatewayOptions opts;
  opts.cache_dir = cfg.cache_dir;
  opts.replay_path = cfg.replay_path;
  opts.transcript_out = cfg.transcript_out;
  opts.inflight_cap = cfg.jobs;
  std::shared_ptr<llm::Transport> transport;
  if (cfg.replay_path.empty()) transport = std::make_shared<LazyHttpTransport>();
  // replay and live are mutually exclusive: with --replay no transport exists
  // at all, so no network access can occur.
  return llm::Gateway(opts, transport);
}

fs::path artifact_path(const CliConfig& cfg, const char* name) { return fs::path(cfg.out_dir) / name; }

void require_stage_input(const fs::path& path, const char* producer) {
  if (!fs::exists(path))
    throw std::runtime_error("missing stage input " + path.string() + " (run '" + producer + "' first)");
}

int finish(const std::vector<std::string>& diagnostics) {
  for (const auto& d : diagnostics) std::cerr << "diagnostic: " << d << "\n";
  if (!diagnostics.empty()) {
    std::cerr << "completed with " << diagnostics.size() << " diagnostic(s)\n";
    return 2;
  }
  return 0;
}

std::vector<ReviewPoint> load_points(const CliConfig& cfg) {
  const fs::path path = artifact_path(cfg, "points.jsonl");
  require_stage_input(path, "decompose");
  corpus::LoadedRun run = corpus::load_run(path.string(), "points");
  std::vector<ReviewPoint> points;
  for (const auto& r : run.records) points.push_back(corpus::review_point_from_json(r));
  return points;
}

std::vector<argrecon::ReconstructedArgument> load_reconstructions(const CliConfig& cfg, bool required) {
  const fs::path path = artifact_path(cfg, "reconstructions.jsonl");
  if (!fs::exists(path)) {
    if (required) require_stage_input(path, "reconstruct");
    return {};
  }
  corpus::LoadedRun run = corpus::load_run(path.string(), "reconstructions");
  std::vector<argrecon::ReconstructedArgument> out;
  for (const auto& r : run.records) out.push_back(corpus::reconstruction_from_json(r));
  return out;
}

int cmd_decompose(const CliConfig& cfg) {
  corpus::Corpus corpus = corpus::load_corpus(cfg.corpus_root);
  llm::Gateway gateway = make_gateway(cfg);
  pipeline::RunConfig rc = to_run_config(cfg);
  std::vector<std::string> diagnostics;
  std::vector<ReviewPoint> points = pipeline::run_decompose(corpus, gateway, rc, diagnostics);
  std::vector<json> records;
  for (const auto& p : points) records.push_back(corpus::to_json(p));
  corpus::save_run(artifact_path(cfg, "points.jsonl").string(), "points", records);
  std::cout << "decompose: " << points.size() << " points\n";
  return finish(diagnostics);
}

int cmd_reconstruct(const CliConfig& cfg) {
  corpus::Corpus corpus = corpus::load_corpus(cfg.corpus_root);
  std::vector<ReviewPoint> points = load_points(cfg);
  llm::Gateway gateway = make_gateway(cfg);
  pipeline::RunConfig rc = to_run_config(cfg);
  std::vector<std::string> diagnostics;
  auto recons = pipeline::run_reconstruct(corpus, points, gateway, rc, diagnostics);
  std::vector<json> records;
  for (const auto& r : recons) records.push_back(corpus::to_json(r));
  corpus::save_run(artifact_path(cfg, "reconstructions.jsonl").string(), "reconstructions", records);
  std::size_t faithful = 0;
  for (const auto& r : recons)
    if (r.status == argrecon::ReconStatus::Faithful) ++faithful;
  std::cout << "reconstruct: " << recons.size() << " arguments, " << faithful << " faithful\n";
  return finish(diagnostics);
}

int cmd_score(const CliConfig& cfg) {
  corpus::Corpus corpus = corpus::load_corpus(cfg.corpus_root);
  std::vector<ReviewPoint> points = load_points(cfg);
  pipeline::RunConfig rc = to_run_config(cfg);
  auto recons = load_reconstructions(cfg, rc.mode == scorer::ScoreMode::Advanced);
  llm::Gateway gateway = make_gateway(cfg);
  std::vector<std::string> diagnostics;
  auto scores = pipeline::run_score(corpus, points, recons, gateway, rc, diagnostics);
  std::vector<json> records;
  for (const auto& s : scores) records.push_back(corpus::to_json(s));
  corpus::save_run(artifact_path(cfg, "scores.jsonl").string(), "scores", records);
  std::cout << "score: " << scores.size() << " points scored\n";
  return finish(diagnostics);
}

int cmd_agree(const CliConfig& cfg) {
  corpus::Corpus corpus = corpus::load_corpus(cfg.corpus_root);
  const fs::path scores_path = artifact_path(cfg, "scores.jsonl");
  require_stage_input(scores_path, "score");
  corpus::LoadedRun run = corpus::load_run(scores_path.string(), "scores");
  std::vector<scorer::ScoredPoint> scores;
  for (const auto& r : run.records) scores.push_back(corpus::scored_point_from_json(r));
  pipeline::RunConfig rc = to_run_config(cfg);
  json report = pipeline::run_agree(scores, corpus, rc);
  corpus::save_run(artifact_path(cfg, "agreement.jsonl").string(), "report", {report});
  std::cout << "agree: report over " << scores.size() << " scored points\n";
  return finish(run.diagnostics);
}

int cmd_report(const CliConfig& cfg, const std::string& in_path, const std::string& baseline_path) {
  const std::string path = in_path.empty() ? artifact_path(cfg, "agreement.jsonl").string() : in_path;
  require_stage_input(path, "agree");
  corpus::LoadedRun run = corpus::load_run(path, "report");
  if (run.records.empty()) throw std::runtime_error("agreement artifact is empty: " + path);
  json baseline;
  const bool have_baseline = !baseline_path.empty();
  if (have_baseline) {
    corpus::LoadedRun base = corpus::load_run(baseline_path, "report");
    if (base.records.empty()) throw std::runtime_error("baseline artifact is empty: " + baseline_path);
    baseline = base.records.front();
  }
  std::string text = metrics::render_report_text(run.records.front(), have_baseline ? &baseline : nullptr);
  fs::create_directories(cfg.out_dir);
  std::ofstream out(artifact_path(cfg, "report.txt"));
  out << text;
  std::cout << text;
  return 0;
}

int cmd_export_smt(const CliConfig& cfg) {
  auto recons = load_reconstructions(cfg, true);
  const fs::path dir = fs::path(cfg.out_dir) / "smt";
  fs::create_directories(dir);
  std::size_t written = 0;
  for (const auto& r : recons) {
    std::vector<fol::FormulaPtr> premises;
    for (const auto& f : r.fol_premises) premises.push_back(fol::parse_formula(f));
    fol::FormulaPtr conclusion = fol::parse_formula(r.fol_conclusion);
    std::vector<fol::FormulaPtr> all = premises;
    all.push_back(conclusion);
    fol::Signature sig = fol::infer_signature(all);
    fol::ensure_domain(sig);
    std::string script = fol::export_smtlib(premises, conclusion, sig);
    std::string name = r.argument_point_id;
    std::replace(name.begin(), name.end(), '/', '_');
    std::ofstream out(dir / (name + ".smt2"));
    out << script;
    ++written;
  }
  std::cout << "export-smt: " << written << " scripts under " << dir.string() << "\n";
  return 0;
}

int cmd_stats(const CliConfig& cfg) {
  corpus::Corpus corpus = corpus::load_corpus(cfg.corpus_root);
  std::vector<ReviewPoint> points;
  if (fs::exists(artifact_path(cfg, "points.jsonl"))) points = load_points(cfg);
  auto recons = load_reconstructions(cfg, false);
  corpus::DatasetStats stats = corpus::dataset_stats(corpus, points, recons);
  std::cout << stats.to_json().dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Misinformed-review-point scoring pipeline"};
  app.require_subcommand(1);

  CliConfig cfg;
  app.add_option("--config", cfg.config_path, "JSON config file (flags override it)");
  app.add_option("--corpus", cfg.corpus_root, "corpus root directory");
  app.add_option("--out", cfg.out_dir, "artifact output directory");
  app.add_option("--cache-dir", cfg.cache_dir, "response cache directory");
  app.add_option("--replay", cfg.replay_path, "replay transcript (JSONL); disables live calls");
  app.add_option("--transcript", cfg.transcript_out, "append live responses to this transcript");
  app.add_option("--override", cfg.override_path, "point-kind override JSONL");
  app.add_option("--model", cfg.model_name, "model name");
  app.add_option("--temperature", cfg.temperature, "sampling temperature (default 0)");
  app.add_option("--mode", cfg.mode, "base|advanced")->check(CLI::IsMember({"base", "advanced"}));
  app.add_flag("--with-author-response", cfg.with_author_response, "append author responses to judge prompts");
  app.add_option("--max-iterations", cfg.max_iterations, "reconstruction loop cap (default 10)");
  app.add_option("--jobs", cfg.jobs, "concurrency cap");
  app.add_option("--channel", cfg.channel, "binary|5point|both")->check(CLI::IsMember({"binary", "5point", "both"}));
  app.add_option("--rank-correlation", cfg.rank_correlation, "pearson|spearman")
      ->check(CLI::IsMember({"pearson", "spearman"}));

  app.add_subcommand("decompose", "split reviews into typed points");
  app.add_subcommand("reconstruct", "run the argument reconstruction loop");
  app.add_subcommand("score", "judge factuality/unanswerability and aggregate");
  app.add_subcommand("agree", "compute the human-model agreement report");
  auto* report_cmd = app.add_subcommand("report", "render the agreement report as text");
  std::string report_in, report_baseline;
  report_cmd->add_option("--in", report_in, "agreement artifact (default <out>/agreement.jsonl)");
  report_cmd->add_option("--baseline", report_baseline, "baseline agreement artifact for derived comparisons");
  app.add_subcommand("export-smt", "write one SMT-LIB script per reconstructed argument");
  app.add_subcommand("stats", "dataset statistics");

  CLI11_PARSE(app, argc, argv);

  try {
    apply_config_file(app, cfg);
    if (!cfg.replay_path.empty() && !cfg.transcript_out.empty())
      throw std::runtime_error("--replay and --transcript are mutually exclusive");
    if (app.got_subcommand("decompose")) return cmd_decompose(cfg);
    if (app.got_subcommand("reconstruct")) return cmd_reconstruct(cfg);
    if (app.got_subcommand("score")) return cmd_score(cfg);
    if (app.got_subcommand("agree")) return cmd_agree(cfg);
    if (app.got_subcommand("report")) return cmd_report(cfg, report_in, report_baseline);
    if (app.got_subcommand("export-smt")) return cmd_export_smt(cfg);
    if (app.got_subcommand("stats")) return cmd_stats(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
