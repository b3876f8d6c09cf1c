#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "reviewscore/core.hpp"
#include "reviewscore/scorer.hpp"

// Human-model and inter-annotator agreement statistics: precision/recall/F1,
// Cohen's kappa, quadratic weighted kappa, Gwet's AC2, Pearson/Spearman,
// Krippendorff's alpha, misinformed proportions, and the assembled report.
namespace reviewscore::metrics {

struct MetricError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EmptySeries : MetricError {
  using MetricError::MetricError;
};
struct LengthMismatch : MetricError {
  using MetricError::MetricError;
};
struct DegenerateMarginals : MetricError {
  using MetricError::MetricError;
};
struct ZeroVariance : MetricError {
  using MetricError::MetricError;
};
struct NoComparablePairs : MetricError {
  using MetricError::MetricError;
};
struct JoinMismatch : MetricError {
  JoinMismatch(const std::string& msg, std::vector<std::string> model_only_, std::vector<std::string> human_only_)
      : MetricError(msg), model_only(std::move(model_only_)), human_only(std::move(human_only_)) {}
  std::vector<std::string> model_only;
  std::vector<std::string> human_only;
};

// Paired label series over the same subjects, in id order; entries where
// either side is missing are excluded pairwise before any computation.
struct LabelSeries {
  std::vector<std::string> ids;
  std::vector<int> values;  // binary as 0/1 (1 = misinformed) or scores 1..5
};

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t n = 0;
};

// Positive class is Misinformed (encoded 1); 0/0 ratios are 0 by convention.
Prf precision_recall_f1(const std::vector<int>& pred, const std::vector<int>& gold);

double f1_from_pr(double precision, double recall);
double ratio(double numerator, double denominator);
double relative_delta_percent(double before, double after);

double cohen_kappa(const std::vector<int>& a, const std::vector<int>& b);

// Quadratic weighted kappa over the fixed 1..5 label space.
double qwk(const std::vector<int>& a, const std::vector<int>& b);

// Gwet's AC2 with quadratic ordinal weights over 1..5.
double gwet_ac2(const std::vector<int>& a, const std::vector<int>& b);

double pearson(const std::vector<int>& a, const std::vector<int>& b);
double spearman(const std::vector<int>& a, const std::vector<int>& b);

enum class AlphaMetric { Nominal, Ordinal, Interval };

// units: subject -> the annotator scores present for it (any count; units
// with fewer than two scores are excluded). Missing values simply do not
// appear.
double krippendorff_alpha(const std::map<std::string, std::vector<int>>& units, AlphaMetric metric);

struct ProportionCell {
  std::size_t n = 0;
  std::size_t misinformed = 0;
  std::optional<double> pct;  // absent when n == 0
};

struct ProportionTable {
  std::map<std::string, ProportionCell> by_category;
  ProportionCell overall;
};

ProportionTable misinformed_proportion(const std::vector<std::pair<std::string, int>>& category_and_label);

// --- report ------------------------------------------------------------------

struct ReportOptions {
  std::string channel = "both";           // binary | 5point | both
  std::string rank_correlation = "pearson";  // pearson | spearman
};

// Joins model scores with human annotations on subject ids and fills every
// category x metric cell (with n), misinformed proportions for both sides,
// and per-group Krippendorff alphas. Disjoint id sets raise JoinMismatch;
// partially unmatched ids are listed in the report, never silently dropped.
nlohmann::json build_report(const std::vector<scorer::ScoredPoint>& model,
                            const std::vector<AnnotationRecord>& human, const ReportOptions& opts = {});

// Plain-text table plus, when a baseline report is given, derived
// comparisons (argument-category F1/kappa ratios and relative deltas).
std::string render_report_text(const nlohmann::json& report, const nlohmann::json* baseline = nullptr);

}  // namespace reviewscore::metrics
