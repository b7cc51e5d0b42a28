#include "smotecls/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "smotecls/metrics.hpp"
#include "smotecls/tree.hpp"

namespace smotecls {

double StrategyResult::mean(const std::vector<double>& v) const {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double StrategyResult::stderr_of(const std::vector<double>& v) const {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  if (v.size() == 1) return 0.0;
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  const double sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
  return sd / std::sqrt(static_cast<double>(v.size()));
}

namespace {

ScoredPredictions score_test_set(const RandomForest& forest, const LabeledDataset& test) {
  ScoredPredictions preds;
  preds.labels = test.labels;
  preds.scores.reserve(test.size());
  for (std::size_t i = 0; i < test.size(); ++i)
    preds.scores.push_back(forest.predict_score(test.features.row(i)));
  return preds;
}

struct RepeatMetrics {
  double auprc, auc, f1, gmean;
};

RepeatMetrics evaluate(const LabeledDataset& train, const LabeledDataset& test,
                       std::size_t n_trees, RngStream rng) {
  std::vector<int> y(train.size());
  for (std::size_t i = 0; i < train.size(); ++i)
    y[i] = train.labels[i] == ClassLabel::Minor ? 1 : 0;
  ForestSpec spec;
  spec.n_trees = n_trees;
  const RandomForest forest = RandomForest::fit(train.features, y, 2, spec, rng);
  const ScoredPredictions preds = score_test_set(forest, test);
  const ConfusionCounts counts = confusion_at(preds, 0.5);
  return {average_precision(preds), roc_auc(preds), f1_score(counts), g_mean(counts)};
}

}  // namespace

std::vector<StrategyResult> run_experiment(const LabeledDataset& raw, const ExperimentConfig& cfg) {
  if (cfg.repeats < 1) throw std::invalid_argument("run_experiment: repeats must be >= 1");

  auto [data, scaler] = standardize(raw);
  (void)scaler;

  std::vector<StrategyResult> results;
  results.push_back({"base", {}, {}, {}, {}, {}});
  for (const auto& name : cfg.strategies) {
    if (name == "base") continue;
    (void)config_for_strategy(name, cfg.base);  // validate the name up front
    results.push_back({name, {}, {}, {}, {}, {}});
  }

  for (std::size_t r = 0; r < cfg.repeats; ++r) {
    RngStream repeat_rng(cfg.seed, r);
    RngStream split_rng = repeat_rng.split(1);
    const SplitResult split = stratified_split(data, cfg.test_fraction, split_rng);

    for (std::size_t s = 0; s < results.size(); ++s) {
      StrategyResult& res = results[s];
      try {
        LabeledDataset train = split.train;
        if (res.name != "base") {
          OversampleConfig strat_cfg = config_for_strategy(res.name, cfg.base);
          RngStream aug_rng = repeat_rng.split(100 + s);
          train = augment(split.train, strat_cfg, aug_rng).augmented;
        }
        const RepeatMetrics m =
            evaluate(train, split.test, cfg.eval_forest_trees, repeat_rng.split(10000 + s));
        res.auprc.push_back(m.auprc);
        res.auc.push_back(m.auc);
        res.f1.push_back(m.f1);
        res.gmean.push_back(m.gmean);
      } catch (const std::exception& e) {
        res.errors.push_back("repeat " + std::to_string(r) + ": " + e.what());
      }
    }
  }
  return results;
}

namespace {

std::string format_cell(const StrategyResult& r, const std::vector<double>& v, int rank) {
  char buf[64];
  if (v.empty()) return "failed";
  if (rank > 0)
    std::snprintf(buf, sizeof(buf), "%.3f+-%.3f (%d)", r.mean(v), r.stderr_of(v), rank);
  else
    std::snprintf(buf, sizeof(buf), "%.3f+-%.3f", r.mean(v), r.stderr_of(v));
  return buf;
}

// Competition ranking of strategy means (descending), BASE excluded.
std::vector<int> ranks_for(const std::vector<StrategyResult>& results,
                           std::vector<double> StrategyResult::* member) {
  std::vector<int> ranks(results.size(), 0);
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i].name == "base" || (results[i].*member).empty()) continue;
    const double mi = results[i].mean(results[i].*member);
    int rank = 1;
    for (std::size_t j = 0; j < results.size(); ++j) {
      if (j == i || results[j].name == "base" || (results[j].*member).empty()) continue;
      if (results[j].mean(results[j].*member) > mi) ++rank;
    }
    ranks[i] = rank;
  }
  return ranks;
}

}  // namespace

std::string format_report_table(const std::vector<StrategyResult>& results,
                                const std::string& dataset_name) {
  const std::vector<int> rank_auprc = ranks_for(results, &StrategyResult::auprc);
  const std::vector<int> rank_auc = ranks_for(results, &StrategyResult::auc);
  const std::vector<int> rank_f1 = ranks_for(results, &StrategyResult::f1);
  const std::vector<int> rank_gmean = ranks_for(results, &StrategyResult::gmean);

  std::vector<std::vector<std::string>> cells;
  cells.push_back({"strategy", "auprc", "auc", "f1", "gmean", "errors"});
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    cells.push_back({r.name, format_cell(r, r.auprc, rank_auprc[i]),
                     format_cell(r, r.auc, rank_auc[i]), format_cell(r, r.f1, rank_f1[i]),
                     format_cell(r, r.gmean, rank_gmean[i]), std::to_string(r.errors.size())});
  }
  std::vector<std::size_t> widths(cells[0].size(), 0);
  for (const auto& row : cells)
    for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());

  std::string out = "# dataset: " + dataset_name + "\n";
  for (std::size_t ri = 0; ri < cells.size(); ++ri) {
    for (std::size_t c = 0; c < cells[ri].size(); ++c) {
      out += cells[ri][c];
      out.append(widths[c] - cells[ri][c].size() + 2, ' ');
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += '\n';
    if (ri == 0) {
      std::size_t total = 0;
      for (auto w : widths) total += w + 2;
      out.append(total - 2, '-');
      out += '\n';
    }
  }
  for (const auto& r : results)
    for (const auto& e : r.errors) out += "! " + r.name + " " + e + "\n";
  return out;
}

std::string format_report_csv(const std::vector<StrategyResult>& results,
                              const std::string& dataset_name) {
  std::string out = "dataset,strategy,metric,mean,stderr,repeats_ok,repeats_failed\n";
  char buf[128];
  for (const auto& r : results) {
    const struct {
      const char* name;
      const std::vector<double>& v;
    } metrics[] = {{"auprc", r.auprc}, {"auc", r.auc}, {"f1", r.f1}, {"gmean", r.gmean}};
    for (const auto& m : metrics) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g", r.mean(m.v), r.stderr_of(m.v));
      out += dataset_name + "," + r.name + "," + m.name + "," + buf + "," +
             std::to_string(m.v.size()) + "," + std::to_string(r.errors.size()) + "\n";
    }
  }
  return out;
}

}  // namespace smotecls
