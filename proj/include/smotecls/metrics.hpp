#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "smotecls/dataset.hpp"

namespace smotecls {

// Scores are P(minor); the minor class is the positive class throughout.
struct ScoredPredictions {
  std::vector<double> scores;
  std::vector<ClassLabel> labels;
};

struct ConfusionCounts {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
};

// score >= threshold predicts positive.
ConfusionCounts confusion_at(const ScoredPredictions& preds, double threshold);

double precision(const ConfusionCounts& c);  // 0/0 -> 0
double recall(const ConfusionCounts& c);     // 0/0 -> 0
double f1_score(const ConfusionCounts& c);
double g_mean(const ConfusionCounts& c);  // sqrt(sensitivity * specificity)

// Mann-Whitney statistic: (#{pos>neg pairs} + ties/2) / (n_pos * n_neg).
double roc_auc(const ScoredPredictions& preds);

// Average precision: sum over descending-score tie blocks of dR * P.
double average_precision(const ScoredPredictions& preds);

}  // namespace smotecls
