#include "smotecls/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace smotecls {

ConfusionCounts confusion_at(const ScoredPredictions& preds, double threshold) {
  ConfusionCounts c;
  for (std::size_t i = 0; i < preds.scores.size(); ++i) {
    const bool predicted_pos = preds.scores[i] >= threshold;
    const bool actual_pos = preds.labels[i] == ClassLabel::Minor;
    if (predicted_pos && actual_pos)
      ++c.tp;
    else if (predicted_pos && !actual_pos)
      ++c.fp;
    else if (!predicted_pos && actual_pos)
      ++c.fn;
    else
      ++c.tn;
  }
  return c;
}

double precision(const ConfusionCounts& c) {
  const std::size_t d = c.tp + c.fp;
  return d == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(d);
}

double recall(const ConfusionCounts& c) {
  const std::size_t d = c.tp + c.fn;
  return d == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(d);
}

double f1_score(const ConfusionCounts& c) {
  const double p = precision(c), r = recall(c);
  return (p + r) == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

double g_mean(const ConfusionCounts& c) {
  const double sens = recall(c);
  const std::size_t dn = c.tn + c.fp;
  const double spec = dn == 0 ? 0.0 : static_cast<double>(c.tn) / static_cast<double>(dn);
  return std::sqrt(sens * spec);
}

namespace {

// Indices sorted by descending score; within groups of equal score the order
// does not matter for either metric because ties are processed as blocks.
std::vector<std::size_t> descending_order(const std::vector<double>& scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

}  // namespace

double roc_auc(const ScoredPredictions& preds) {
  std::size_t n_pos = 0, n_neg = 0;
  for (auto l : preds.labels) (l == ClassLabel::Minor ? n_pos : n_neg)++;
  if (n_pos == 0 || n_neg == 0) throw std::invalid_argument("roc_auc: need both classes");

  const auto order = descending_order(preds.scores);
  // Walk descending tie blocks; positives in a block beat every negative in
  // strictly lower blocks and tie the negatives of their own block.
  double numerator = 0.0;  // multiples of 0.5, exact in double
  std::size_t neg_below = n_neg;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    std::size_t block_pos = 0, block_neg = 0;
    const double s = preds.scores[order[i]];
    while (j < order.size() && preds.scores[order[j]] == s) {
      (preds.labels[order[j]] == ClassLabel::Minor ? block_pos : block_neg)++;
      ++j;
    }
    neg_below -= block_neg;
    numerator += static_cast<double>(block_pos) * static_cast<double>(neg_below) +
                 0.5 * static_cast<double>(block_pos) * static_cast<double>(block_neg);
    i = j;
  }
  return numerator / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double average_precision(const ScoredPredictions& preds) {
  std::size_t n_pos = 0;
  for (auto l : preds.labels)
    if (l == ClassLabel::Minor) ++n_pos;
  if (n_pos == 0) throw std::invalid_argument("average_precision: no positives");

  const auto order = descending_order(preds.scores);
  double ap = 0.0;
  std::size_t tp = 0, predicted = 0;
  double prev_recall = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    const double s = preds.scores[order[i]];
    while (j < order.size() && preds.scores[order[j]] == s) {
      if (preds.labels[order[j]] == ClassLabel::Minor) ++tp;
      ++predicted;
      ++j;
    }
    const double r = static_cast<double>(tp) / static_cast<double>(n_pos);
    const double p = static_cast<double>(tp) / static_cast<double>(predicted);
    ap += (r - prev_recall) * p;
    prev_recall = r;
    i = j;
  }
  return ap;
}

}  // namespace smotecls
