#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "smotecls/dataset.hpp"
#include "smotecls/sampler.hpp"

namespace smotecls {

// Repeated stratified-split evaluation: augment the training side with each
// strategy, fit the evaluation forest, score the held-out side.
struct ExperimentConfig {
  std::vector<std::string> strategies;  // by name; BASE is always included first
  OversampleConfig base;                // template applied to every strategy
  std::size_t repeats = 10;
  double test_fraction = 0.2;
  std::size_t eval_forest_trees = 100;
  std::uint64_t seed = 0;
};

struct StrategyResult {
  std::string name;
  // Per-repeat values, parallel arrays; failed repeats are recorded in
  // errors and excluded from the value arrays.
  std::vector<double> auprc, auc, f1, gmean;
  std::vector<std::string> errors;  // "repeat <r>: <message>"

  double mean(const std::vector<double>& v) const;
  double stderr_of(const std::vector<double>& v) const;  // sample std / sqrt(n)
};

std::vector<StrategyResult> run_experiment(const LabeledDataset& raw, const ExperimentConfig& cfg);

// Aligned table with mean+-stderr cells and per-metric ranks (BASE unranked).
std::string format_report_table(const std::vector<StrategyResult>& results,
                                const std::string& dataset_name);
// Machine-readable form: one row per strategy and metric.
std::string format_report_csv(const std::vector<StrategyResult>& results,
                              const std::string& dataset_name);

}  // namespace smotecls
