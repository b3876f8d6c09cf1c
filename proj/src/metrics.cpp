#include "reviewscore/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <sstream>

namespace reviewscore::metrics {

using nlohmann::json;

namespace {

void require_paired(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size())
    throw LengthMismatch("paired series differ in length: " + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
  if (a.empty()) throw EmptySeries("paired series are empty");
}

void require_scores_1_5(const std::vector<int>& v) {
  for (int x : v)
    if (x < 1 || x > 5) throw MetricError("5-point series value " + std::to_string(x) + " outside [1,5]");
}

double pearson_d(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cov += (a[i] - ma) * (b[i] - mb);
    va += (a[i] - ma) * (a[i] - ma);
    vb += (b[i] - mb) * (b[i] - mb);
  }
  if (va == 0.0 || vb == 0.0) throw ZeroVariance("correlation undefined: a series has zero variance");
  return cov / std::sqrt(va * vb);
}

std::vector<double> ranks_with_ties(const std::vector<int>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return v[x] < v[y]; });
  std::vector<double> rank(v.size(), 0.0);
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = avg;
    i = j + 1;
  }
  return rank;
}

}  // namespace

Prf precision_recall_f1(const std::vector<int>& pred, const std::vector<int>& gold) {
  require_paired(pred, gold);
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const bool p = pred[i] != 0, g = gold[i] != 0;
    if (p && g) ++tp;
    if (p && !g) ++fp;
    if (!p && g) ++fn;
  }
  Prf out;
  out.n = pred.size();
  out.precision = (tp + fp) ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  out.recall = (tp + fn) ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  out.f1 = f1_from_pr(out.precision, out.recall);
  return out;
}

double f1_from_pr(double precision, double recall) {
  return (precision + recall) > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

double ratio(double numerator, double denominator) {
  if (denominator == 0.0) throw MetricError("ratio undefined: denominator is zero");
  return numerator / denominator;
}

double relative_delta_percent(double before, double after) {
  if (before == 0.0) throw MetricError("relative delta undefined: baseline is zero");
  return (after - before) / before * 100.0;
}

double cohen_kappa(const std::vector<int>& a, const std::vector<int>& b) {
  require_paired(a, b);
  const double n = static_cast<double>(a.size());
  std::set<int> labels(a.begin(), a.end());
  labels.insert(b.begin(), b.end());
  double po = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) po += a[i] == b[i] ? 1.0 : 0.0;
  po /= n;
  double pe = 0.0;
  for (int label : labels) {
    const double pa = std::count(a.begin(), a.end(), label) / n;
    const double pb = std::count(b.begin(), b.end(), label) / n;
    pe += pa * pb;
  }
  if (pe >= 1.0 - 1e-12) {
    if (po >= 1.0 - 1e-12) return 1.0;
    throw DegenerateMarginals("cohen kappa undefined: expected agreement is 1 but observed is not");
  }
  return (po - pe) / (1.0 - pe);
}

double qwk(const std::vector<int>& a, const std::vector<int>& b) {
  require_paired(a, b);
  require_scores_1_5(a);
  require_scores_1_5(b);
  constexpr int k = 5;
  const double n = static_cast<double>(a.size());
  double observed[k][k] = {};
  double marg_a[k] = {}, marg_b[k] = {};
  for (std::size_t i = 0; i < a.size(); ++i) {
    observed[a[i] - 1][b[i] - 1] += 1.0;
    marg_a[a[i] - 1] += 1.0;
    marg_b[b[i] - 1] += 1.0;
  }
  double num = 0.0, den = 0.0;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      const double w = static_cast<double>((i - j) * (i - j)) / ((k - 1) * (k - 1));
      num += w * observed[i][j];
      den += w * marg_a[i] * marg_b[j] / n;
    }
  }
  if (den == 0.0) {
    if (a == b) return 1.0;
    throw DegenerateMarginals("qwk undefined: a rater uses one label and the series differ");
  }
  return 1.0 - num / den;
}

double gwet_ac2(const std::vector<int>& a, const std::vector<int>& b) {
  require_paired(a, b);
  require_scores_1_5(a);
  require_scores_1_5(b);
  constexpr int q = 5;
  const double n = static_cast<double>(a.size());
  auto weight = [](int i, int j) {
    return 1.0 - static_cast<double>((i - j) * (i - j)) / ((q - 1) * (q - 1));
  };
  double pa = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) pa += weight(a[i], b[i]);
  pa /= n;
  double pi[q] = {};
  for (std::size_t i = 0; i < a.size(); ++i) {
    pi[a[i] - 1] += 0.5;
    pi[b[i] - 1] += 0.5;
  }
  double spread = 0.0;
  for (int c = 0; c < q; ++c) {
    const double p = pi[c] / n;
    spread += p * (1.0 - p);
  }
  double total_weight = 0.0;
  for (int i = 1; i <= q; ++i)
    for (int j = 1; j <= q; ++j) total_weight += weight(i, j);
  const double pe = total_weight / (q * (q - 1.0)) * spread;
  if (1.0 - pe <= 1e-12) {
    if (pa >= 1.0 - 1e-12) return 1.0;
    throw DegenerateMarginals("gwet ac2 undefined: chance agreement is 1");
  }
  return (pa - pe) / (1.0 - pe);
}

double pearson(const std::vector<int>& a, const std::vector<int>& b) {
  require_paired(a, b);
  std::vector<double> da(a.begin(), a.end()), db(b.begin(), b.end());
  return pearson_d(da, db);
}

double spearman(const std::vector<int>& a, const std::vector<int>& b) {
  require_paired(a, b);
  return pearson_d(ranks_with_ties(a), ranks_with_ties(b));
}

double krippendorff_alpha(const std::map<std::string, std::vector<int>>& units, AlphaMetric metric) {
  std::set<int> category_set;
  bool any_pairable = false;
  for (const auto& [unit, values] : units) {
    (void)unit;
    for (int v : values) category_set.insert(v);
    if (values.size() >= 2) any_pairable = true;
  }
  if (!any_pairable) throw NoComparablePairs("no unit carries two or more scores");
  std::vector<int> categories(category_set.begin(), category_set.end());
  std::map<int, std::size_t> index;
  for (std::size_t i = 0; i < categories.size(); ++i) index[categories[i]] = i;
  const std::size_t k = categories.size();

  // Coincidence matrix: each ordered pair of values within a unit contributes
  // 1/(m-1).
  std::vector<std::vector<double>> o(k, std::vector<double>(k, 0.0));
  for (const auto& [unit, values] : units) {
    (void)unit;
    const std::size_t m = values.size();
    if (m < 2) continue;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        if (i != j) o[index[values[i]]][index[values[j]]] += 1.0 / static_cast<double>(m - 1);
  }
  std::vector<double> marginal(k, 0.0);
  double n = 0.0;
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t g = 0; g < k; ++g) {
      marginal[c] += o[c][g];
      n += o[c][g];
    }

  auto delta = [&](std::size_t c, std::size_t g) -> double {
    if (c == g) return 0.0;
    switch (metric) {
      case AlphaMetric::Nominal:
        return 1.0;
      case AlphaMetric::Interval: {
        const double d = static_cast<double>(categories[c] - categories[g]);
        return d * d;
      }
      case AlphaMetric::Ordinal: {
        const std::size_t lo = std::min(c, g), hi = std::max(c, g);
        double sum = 0.0;
        for (std::size_t t = lo; t <= hi; ++t) sum += marginal[t];
        sum -= (marginal[lo] + marginal[hi]) / 2.0;
        return sum * sum;
      }
    }
    return 1.0;
  };

  double observed = 0.0, expected = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t g = 0; g < k; ++g) {
      observed += o[c][g] * delta(c, g);
      expected += marginal[c] * marginal[g] * delta(c, g);
    }
  }
  observed /= n;
  expected /= n * (n - 1.0);
  if (expected == 0.0) return 1.0;  // no variation anywhere
  return 1.0 - observed / expected;
}

ProportionTable misinformed_proportion(const std::vector<std::pair<std::string, int>>& category_and_label) {
  ProportionTable table;
  for (const auto& [category, label] : category_and_label) {
    ProportionCell& cell = table.by_category[category];
    ++cell.n;
    ++table.overall.n;
    if (label != 0) {
      ++cell.misinformed;
      ++table.overall.misinformed;
    }
  }
  for (auto& [category, cell] : table.by_category) {
    (void)category;
    if (cell.n > 0) cell.pct = 100.0 * static_cast<double>(cell.misinformed) / static_cast<double>(cell.n);
  }
  if (table.overall.n > 0)
    table.overall.pct = 100.0 * static_cast<double>(table.overall.misinformed) / static_cast<double>(table.overall.n);
  return table;
}

// --- report ------------------------------------------------------------------

namespace {

json binary_cell(const std::vector<int>& pred, const std::vector<int>& gold) {
  json cell{{"n", pred.size()}};
  if (pred.empty()) {
    cell["note"] = "no paired subjects";
    return cell;
  }
  Prf prf = precision_recall_f1(pred, gold);
  cell["precision"] = prf.precision;
  cell["recall"] = prf.recall;
  cell["f1"] = prf.f1;
  return cell;
}

json five_point_cell(const std::vector<int>& model, const std::vector<int>& human, const std::string& rank_corr) {
  json cell{{"n", model.size()}};
  if (model.empty()) {
    cell["note"] = "no paired subjects";
    return cell;
  }
  auto guarded = [&](const char* name, double (*fn)(const std::vector<int>&, const std::vector<int>&)) {
    try {
      cell[name] = fn(model, human);
    } catch (const MetricError& e) {
      cell[std::string(name) + "_note"] = e.what();
    }
  };
  guarded(rank_corr == "spearman" ? "spearman" : "pearson", rank_corr == "spearman" ? spearman : pearson);
  guarded("ac2", gwet_ac2);
  guarded("qwk", qwk);
  guarded("cohen", cohen_kappa);
  return cell;
}

json proportions_json(const ProportionTable& table) {
  json by = json::object();
  for (const auto& [category, cell] : table.by_category) {
    json c{{"n", cell.n}, {"misinformed", cell.misinformed}};
    if (cell.pct) c["pct"] = *cell.pct;
    by[category] = c;
  }
  json overall{{"n", table.overall.n}, {"misinformed", table.overall.misinformed}};
  if (table.overall.pct) overall["pct"] = *table.overall.pct;
  return json{{"by_category", by}, {"overall", overall}};
}

// One row per paired subject, binary and 5-point channels side by side.
struct PairedSeries {
  LabelSeries model_binary, human_binary;
  LabelSeries model_score, human_score;
};

}  // namespace

json build_report(const std::vector<scorer::ScoredPoint>& model, const std::vector<AnnotationRecord>& human,
                  const ReportOptions& opts) {
  std::map<std::string, const AnnotationRecord*> human_by_id;
  for (const auto& rec : human) human_by_id[rec.subject_id] = &rec;

  std::map<std::string, PairedSeries> categories;
  std::set<std::string> matched_human_ids;
  std::vector<std::string> model_only;
  std::size_t skipped_arguments = 0;

  std::vector<std::pair<std::string, int>> model_labels;
  auto add_pair = [&](const std::string& category, const std::string& subject_id, int m_score, int m_binary,
                      const AnnotationRecord& rec) {
    auto label = rec.final_label();
    if (!label) return;  // incomplete annotation: matched but unusable, excluded pairwise
    PairedSeries& series = categories[category];
    for (LabelSeries* s : {&series.model_score, &series.human_score, &series.model_binary, &series.human_binary})
      s->ids.push_back(subject_id);
    series.model_score.values.push_back(m_score);
    series.human_score.values.push_back(label->value());
    series.model_binary.values.push_back(m_binary);
    series.human_binary.values.push_back(to_binary(*label) == BinaryLabel::Misinformed ? 1 : 0);
  };

  for (const auto& sp : model) {
    if (sp.skipped) {
      ++skipped_arguments;
      continue;
    }
    if (!sp.final_score5 || !sp.final_binary) continue;
    const int m_score = *sp.final_score5;
    const int m_binary = *sp.final_binary == BinaryLabel::Misinformed ? 1 : 0;
    model_labels.emplace_back(to_string(sp.kind), m_binary);

    std::string category;
    switch (sp.kind) {
      case PointKind::Claim: category = "ClaimScore"; break;
      case PointKind::Question: category = "QScore"; break;
      case PointKind::Argument:
        category = sp.mode == scorer::ScoreMode::Advanced ? "ArgScore" : "WScore";
        break;
    }
    auto h = human_by_id.find(sp.point_id);
    if (h == human_by_id.end()) {
      model_only.push_back(sp.point_id);
    } else {
      matched_human_ids.insert(sp.point_id);
      add_pair(category, sp.point_id, m_score, m_binary, *h->second);
      add_pair("ReviewScore", sp.point_id, m_score, m_binary, *h->second);
    }
    // Premise-level channel (ArgScore w/o Agg).
    for (const auto& rec : sp.records) {
      if (rec.subject_id == sp.point_id) continue;
      auto hp = human_by_id.find(rec.subject_id);
      if (hp == human_by_id.end()) {
        model_only.push_back(rec.subject_id);
        continue;
      }
      matched_human_ids.insert(rec.subject_id);
      add_pair("ArgScore_wo_agg", rec.subject_id, rec.score.value(),
               rec.binary == BinaryLabel::Misinformed ? 1 : 0, *hp->second);
    }
  }

  std::vector<std::string> human_only;
  for (const auto& rec : human)
    if (!matched_human_ids.count(rec.subject_id)) human_only.push_back(rec.subject_id);

  if (matched_human_ids.empty() && !model.empty() && !human.empty())
    throw JoinMismatch("model scores and human annotations share no subject id", model_only, human_only);

  json cats = json::object();
  for (const char* name : {"ClaimScore", "ArgScore", "ArgScore_wo_agg", "QScore", "WScore", "ReviewScore"}) {
    auto it = categories.find(name);
    static const PairedSeries empty_series;
    const PairedSeries& s = it == categories.end() ? empty_series : it->second;
    json entry;
    if (opts.channel != "5point") entry["binary"] = binary_cell(s.model_binary.values, s.human_binary.values);
    if (opts.channel != "binary")
      entry["five_point"] = five_point_cell(s.model_score.values, s.human_score.values, opts.rank_correlation);
    cats[name] = entry;
  }

  // Misinformed proportions, model vs human (human side over complete point
  // annotations).
  std::vector<std::pair<std::string, int>> human_labels;
  for (const auto& rec : human) {
    if (!rec.kind) continue;
    auto label = rec.final_label();
    if (!label) continue;
    human_labels.emplace_back(to_string(*rec.kind), to_binary(*label) == BinaryLabel::Misinformed ? 1 : 0);
  }
  json proportions{{"model", proportions_json(misinformed_proportion(model_labels))},
                   {"human", proportions_json(misinformed_proportion(human_labels))}};

  // Inter-annotator agreement per group and category, ordinal alpha.
  auto alpha_block = [&](const std::string& group) {
    std::map<std::string, std::map<std::string, std::vector<int>>> units_by_cat;
    for (const auto& rec : human) {
      if (!rec.kind || rec.scores.size() < 2) continue;
      if (!group.empty() && rec.group != group) continue;
      std::string cat;
      switch (*rec.kind) {
        case PointKind::Claim: cat = "ClaimScore"; break;
        case PointKind::Argument: cat = "ArgScore"; break;
        case PointKind::Question: cat = "QScore"; break;
      }
      units_by_cat[cat][rec.subject_id] = rec.scores;
      units_by_cat["ReviewScore"][rec.subject_id] = rec.scores;
    }
    json out = json::object();
    for (const auto& [cat, units] : units_by_cat) {
      try {
        out[cat] = krippendorff_alpha(units, AlphaMetric::Ordinal);
      } catch (const MetricError& e) {
        out[cat + "_note"] = e.what();
      }
    }
    return out;
  };
  std::set<std::string> groups;
  for (const auto& rec : human)
    if (!rec.group.empty()) groups.insert(rec.group);
  json alpha{{"overall", alpha_block("")}};
  if (!groups.empty()) {
    json per_group = json::object();
    for (const auto& g : groups) per_group[g] = alpha_block(g);
    alpha["groups"] = per_group;
  }

  json report{{"channel", opts.channel},
              {"rank_correlation", opts.rank_correlation},
              {"arg_score5_channel", "weighted_average"},
              {"categories", cats},
              {"proportions", proportions},
              {"krippendorff_alpha", alpha},
              {"unmatched_model_ids", model_only},
              {"unmatched_human_ids", human_only},
              {"skipped_arguments", skipped_arguments}};
  return report;
}

namespace {

std::string fmt(double v, const char* spec = "%.3f") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

std::string cell_str(const json& cell, const char* field) {
  if (!cell.is_object() || !cell.contains(field) || cell.at(field).is_null()) return "-";
  return fmt(cell.at(field).get<double>());
}

std::optional<double> lookup(const json& report, const std::string& category, const std::string& channel,
                             const std::string& metric) {
  if (!report.contains("categories")) return std::nullopt;
  const json& cats = report.at("categories");
  if (!cats.contains(category)) return std::nullopt;
  const json& cat = cats.at(category);
  if (!cat.contains(channel) || !cat.at(channel).contains(metric)) return std::nullopt;
  const json& v = cat.at(channel).at(metric);
  if (!v.is_number()) return std::nullopt;
  return v.get<double>();
}

}  // namespace

std::string render_report_text(const json& report, const json* baseline) {
  std::ostringstream os;
  os << "Human-model agreement\n";
  os << "rank correlation: " << report.value("rank_correlation", "pearson")
     << "; 5-point argument channel: " << report.value("arg_score5_channel", "weighted_average") << "\n\n";

  const char* rank_name = report.value("rank_correlation", "pearson") == "spearman" ? "spearman" : "pearson";
  char header[160];
  std::snprintf(header, sizeof(header), "%-16s %9s %9s %9s %9s %9s %9s %9s %6s\n", "Category", "Prec", "Rec", "F1",
                rank_name == std::string("spearman") ? "Spear" : "Pearson", "AC2", "QWK", "Cohen", "n");
  os << header;
  for (const char* cat : {"ClaimScore", "ArgScore", "ArgScore_wo_agg", "QScore", "WScore", "ReviewScore"}) {
    if (!report.at("categories").contains(cat)) continue;
    const json& entry = report.at("categories").at(cat);
    const json binary = entry.value("binary", json::object());
    const json five = entry.value("five_point", json::object());
    std::size_t n = 0;
    if (binary.contains("n")) n = binary.at("n").get<std::size_t>();
    if (n == 0 && five.contains("n")) n = five.at("n").get<std::size_t>();
    char line[200];
    std::snprintf(line, sizeof(line), "%-16s %9s %9s %9s %9s %9s %9s %9s %6zu\n", cat,
                  cell_str(binary, "precision").c_str(), cell_str(binary, "recall").c_str(),
                  cell_str(binary, "f1").c_str(), cell_str(five, rank_name).c_str(), cell_str(five, "ac2").c_str(),
                  cell_str(five, "qwk").c_str(), cell_str(five, "cohen").c_str(), n);
    os << line;
  }

  if (report.contains("proportions")) {
    os << "\nMisinformed proportion (model vs human):\n";
    const json& model_side = report.at("proportions").at("model").at("by_category");
    const json& human_side = report.at("proportions").at("human").at("by_category");
    auto pct = [](const json& side, const std::string& key) -> std::string {
      if (!side.contains(key)) return "n=0";
      const json& cell = side.at(key);
      if (!cell.contains("pct")) return "n=0";
      return fmt(cell.at("pct").get<double>(), "%.1f") + "%";
    };
    for (const std::string key : {"claim", "argument", "question"})
      os << "  " << key << "s: " << pct(model_side, key) << " vs " << pct(human_side, key) << "\n";
    const json& mo = report.at("proportions").at("model").at("overall");
    const json& ho = report.at("proportions").at("human").at("overall");
    os << "  all points: " << (mo.contains("pct") ? fmt(mo.at("pct").get<double>(), "%.1f") + "%" : "n=0") << " vs "
       << (ho.contains("pct") ? fmt(ho.at("pct").get<double>(), "%.1f") + "%" : "n=0") << "\n";
  }

  if (report.contains("krippendorff_alpha")) {
    os << "\nInter-annotator agreement (Krippendorff alpha, ordinal):\n";
    const json& alpha = report.at("krippendorff_alpha");
    auto alpha_line = [&](const std::string& label, const json& block) {
      os << "  " << label << ":";
      for (const char* cat : {"ClaimScore", "ArgScore", "QScore", "ReviewScore"})
        if (block.contains(cat)) os << " " << cat << "=" << fmt(block.at(cat).get<double>());
      os << "\n";
    };
    if (alpha.contains("groups"))
      for (const auto& [group, block] : alpha.at("groups").items()) alpha_line("group " + group, block);
    alpha_line("overall", alpha.at("overall"));
  }

  if (baseline) {
    os << "\nDerived comparisons vs baseline:\n";
    auto ratio_line = [&](const std::string& label, const std::string& this_cat, const std::string& base_cat,
                          const std::string& channel, const std::string& metric) {
      auto this_v = lookup(report, this_cat, channel, metric);
      auto base_v = lookup(*baseline, base_cat, channel, metric);
      if (!this_v || !base_v || *base_v == 0.0) return;
      os << "  " << label << ": " << fmt(*this_v) << " / " << fmt(*base_v) << " = " << fmt(*this_v / *base_v, "%.2f")
         << "x\n";
    };
    ratio_line("ArgScore vs baseline WScore, F1 ratio", "ArgScore", "WScore", "binary", "f1");
    ratio_line("ArgScore vs baseline WScore, QWK ratio", "ArgScore", "WScore", "five_point", "qwk");
    ratio_line("ArgScore w/o Agg vs baseline WScore, F1 ratio", "ArgScore_wo_agg", "WScore", "binary", "f1");
    {
      auto agg = lookup(report, "ArgScore", "binary", "f1");
      auto wo = lookup(report, "ArgScore_wo_agg", "binary", "f1");
      if (agg && wo && *wo != 0.0)
        os << "  Aggregation contribution (ArgScore / ArgScore w/o Agg, F1): " << fmt(*agg) << " / " << fmt(*wo)
           << " = " << fmt(*agg / *wo, "%.2f") << "x\n";
    }
    for (const char* cat : {"WScore", "ArgScore_wo_agg", "ArgScore", "QScore", "ClaimScore", "ReviewScore"}) {
      for (const auto& [channel, metric, label] :
           {std::tuple<const char*, const char*, const char*>{"binary", "f1", "F1"},
            std::tuple<const char*, const char*, const char*>{"five_point", "qwk", "QWK"}}) {
        auto this_v = lookup(report, cat, channel, metric);
        auto base_v = lookup(*baseline, cat, channel, metric);
        if (!this_v || !base_v || *base_v == 0.0) continue;
        const double delta = relative_delta_percent(*base_v, *this_v);
        os << "  " << cat << " " << label << ": " << fmt(*base_v) << " -> " << fmt(*this_v) << " ("
           << (delta >= 0 ? "+" : "") << fmt(delta, "%.1f") << "%)\n";
      }
    }
  }
  return os.str();
}

}  // namespace reviewscore::metrics
