#include "reviewscore/pipeline.hpp"

#include <atomic>
#include <mutex>
#include <thread>

#include "reviewscore/argrecon.hpp"

namespace reviewscore::pipeline {

namespace {

// Index-stable parallel map: results land at their input index, so output
// order never depends on scheduling.
template <typename Fn>
void parallel_indexed(std::size_t n, int jobs, Fn&& fn) {
  if (n == 0) return;
  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(n)));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

std::vector<ReviewPoint> run_decompose(const corpus::Corpus& corpus, llm::Gateway& gateway, const RunConfig& cfg,
                                       std::vector<std::string>& diagnostics) {
  decompose::OverrideMap overrides;
  if (!cfg.override_path.empty()) overrides = decompose::load_overrides(cfg.override_path);
  decompose::Decomposer decomposer(gateway, cfg.model, overrides);

  std::vector<const RawReview*> reviews;
  for (const auto& [id, review] : corpus.reviews) {
    (void)id;
    reviews.push_back(&review);
  }
  std::vector<std::vector<ReviewPoint>> per_review(reviews.size());
  std::vector<std::string> per_review_diag(reviews.size());
  parallel_indexed(reviews.size(), cfg.jobs, [&](std::size_t i) {
    const RawReview& review = *reviews[i];
    try {
      const PaperDoc& paper = corpus.papers.at(review.paper_id);
      std::vector<ReviewPoint> points = decomposer.extract_points(review, paper);
      for (ReviewPoint& p : points) p.kind = decomposer.classify_type(p, paper);
      per_review[i] = std::move(points);
    } catch (const std::exception& e) {
      per_review_diag[i] = "review '" + review.review_id + "': " + e.what();
    }
  });

  std::vector<ReviewPoint> out;
  for (std::size_t i = 0; i < reviews.size(); ++i) {
    if (!per_review_diag[i].empty()) diagnostics.push_back(per_review_diag[i]);
    for (auto& p : per_review[i]) out.push_back(std::move(p));
  }
  return out;
}

std::vector<argrecon::ReconstructedArgument> run_reconstruct(const corpus::Corpus& corpus,
                                                             const std::vector<ReviewPoint>& points,
                                                             llm::Gateway& gateway, const RunConfig& cfg,
                                                             std::vector<std::string>& diagnostics) {
  argrecon::EngineOptions engine_opts;
  engine_opts.max_iterations = cfg.max_iterations;
  engine_opts.solve = cfg.solve;
  argrecon::Engine engine(gateway, cfg.model, engine_opts);

  std::vector<const ReviewPoint*> arguments;
  for (const auto& p : points)
    if (p.kind && *p.kind == PointKind::Argument) arguments.push_back(&p);

  std::vector<std::optional<argrecon::ReconstructedArgument>> results(arguments.size());
  std::vector<std::string> per_arg_diag(arguments.size());
  parallel_indexed(arguments.size(), cfg.jobs, [&](std::size_t i) {
    const ReviewPoint& arg = *arguments[i];
    try {
      const PaperDoc& paper = corpus.papers.at(arg.paper_id);
      results[i] = engine.run_loop(arg, paper);
    } catch (const std::exception& e) {
      per_arg_diag[i] = "argument '" + arg.point_id + "': " + e.what();
    }
  });

  std::vector<argrecon::ReconstructedArgument> out;
  for (std::size_t i = 0; i < arguments.size(); ++i) {
    if (!per_arg_diag[i].empty()) diagnostics.push_back(per_arg_diag[i]);
    if (results[i]) out.push_back(std::move(*results[i]));
  }
  return out;
}

std::vector<scorer::ScoredPoint> run_score(const corpus::Corpus& corpus, const std::vector<ReviewPoint>& points,
                                           const std::vector<argrecon::ReconstructedArgument>& reconstructions,
                                           llm::Gateway& gateway, const RunConfig& cfg,
                                           std::vector<std::string>& diagnostics) {
  scorer::Judge judge(gateway, cfg.model);
  std::map<std::string, const argrecon::ReconstructedArgument*> recon_by_id;
  for (const auto& r : reconstructions) recon_by_id[r.argument_point_id] = &r;

  std::vector<std::optional<scorer::ScoredPoint>> results(points.size());
  std::vector<std::string> per_point_diag(points.size());
  parallel_indexed(points.size(), cfg.jobs, [&](std::size_t i) {
    const ReviewPoint& point = points[i];
    try {
      const PaperDoc& paper = corpus.papers.at(point.paper_id);
      std::optional<std::string> author_response;
      if (cfg.with_author_response) {
        auto ar = corpus.author_responses.find(point.review_id);
        if (ar != corpus.author_responses.end()) author_response = ar->second;
      }
      const argrecon::ReconstructedArgument* recon = nullptr;
      auto rit = recon_by_id.find(point.point_id);
      if (rit != recon_by_id.end()) recon = rit->second;
      results[i] = judge.score_point(point, paper, recon, cfg.mode, author_response);
    } catch (const std::exception& e) {
      per_point_diag[i] = "point '" + point.point_id + "': " + e.what();
    }
  });

  std::vector<scorer::ScoredPoint> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!per_point_diag[i].empty()) diagnostics.push_back(per_point_diag[i]);
    if (results[i]) out.push_back(std::move(*results[i]));
  }
  return out;
}

nlohmann::json run_agree(const std::vector<scorer::ScoredPoint>& scores, const corpus::Corpus& corpus,
                         const RunConfig& cfg) {
  return metrics::build_report(scores, corpus.annotations, cfg.report);
}

}  // namespace reviewscore::pipeline
