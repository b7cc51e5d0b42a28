#include "smotecls/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace smotecls {

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

NeighborIndex::NeighborIndex(FeatureMatrix points) : points_(std::move(points)) {
  if (points_.rows == 0) throw std::invalid_argument("NeighborIndex: empty reference set");
}

std::vector<Neighbor> NeighborIndex::nearest(std::span<const double> point, std::size_t k,
                                             std::ptrdiff_t exclude) const {
  const std::size_t available = points_.rows - (exclude >= 0 ? 1 : 0);
  if (k < 1 || k > available)
    throw std::invalid_argument("knn: k out of range (k=" + std::to_string(k) +
                                ", available=" + std::to_string(available) + ")");
  if (point.size() != points_.cols) throw std::invalid_argument("knn: query dimension mismatch");

  std::vector<Neighbor> all;
  all.reserve(available);
  for (std::size_t i = 0; i < points_.rows; ++i) {
    if (exclude >= 0 && i == static_cast<std::size_t>(exclude)) continue;
    all.push_back({i, euclidean_distance(point, points_.row(i))});
  }
  auto cmp = [](const Neighbor& a, const Neighbor& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.index < b.index;
  };
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end(), cmp);
  all.resize(k);
  return all;
}

std::vector<Neighbor> NeighborIndex::query(std::span<const double> point, std::size_t k) const {
  return nearest(point, k, -1);
}

std::vector<Neighbor> NeighborIndex::query_excluding(std::size_t self, std::size_t k) const {
  if (self >= points_.rows) throw std::invalid_argument("knn: self row out of range");
  return nearest(points_.row(self), k, static_cast<std::ptrdiff_t>(self));
}

ClassLabel vote_label(const std::vector<Neighbor>& neighbors, const std::vector<ClassLabel>& labels) {
  std::size_t minor = 0;
  for (const auto& nb : neighbors)
    if (labels[nb.index] == ClassLabel::Minor) ++minor;
  const std::size_t major = neighbors.size() - minor;
  return minor > major ? ClassLabel::Minor : ClassLabel::Major;
}

ClassLabel knn_predict(const NeighborIndex& index, const std::vector<ClassLabel>& labels,
                       std::span<const double> point, std::size_t k) {
  if (labels.size() != index.size()) throw std::invalid_argument("knn_predict: label count mismatch");
  return vote_label(index.query(point, k), labels);
}

const char* pseudo_label_name(PseudoLabel p) {
  switch (p) {
    case PseudoLabel::EasyMajor: return "M";
    case PseudoLabel::HardMajor: return "M*";
    case PseudoLabel::EasyMinor: return "m";
    case PseudoLabel::HardMinor: return "m*";
  }
  return "?";
}

DifficultyGroups relabel_by_difficulty(const LabeledDataset& data, std::size_t k) {
  const std::size_t n = data.size();
  if (n <= k)
    throw std::invalid_argument("relabel: need more than k rows for leave-one-out neighborhoods");
  if (data.count(ClassLabel::Major) == 0 || data.count(ClassLabel::Minor) == 0)
    throw std::invalid_argument("relabel: both classes must be present");

  NeighborIndex index(data.features);
  DifficultyGroups g;
  g.pseudo_labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const ClassLabel predicted = vote_label(index.query_excluding(i, k), data.labels);
    const bool agrees = predicted == data.labels[i];
    if (data.labels[i] == ClassLabel::Major) {
      g.pseudo_labels[i] = agrees ? PseudoLabel::EasyMajor : PseudoLabel::HardMajor;
      (agrees ? g.easy_major : g.hard_major).push_back(i);
    } else {
      g.pseudo_labels[i] = agrees ? PseudoLabel::EasyMinor : PseudoLabel::HardMinor;
      (agrees ? g.easy_minor : g.hard_minor).push_back(i);
    }
  }
  return g;
}

std::vector<std::size_t> enn_retained(const LabeledDataset& data, std::size_t k) {
  const std::size_t n = data.size();
  if (n <= k) throw std::invalid_argument("enn: need more than k rows");
  NeighborIndex index(data.features);
  std::vector<std::size_t> retained;
  for (std::size_t i = 0; i < n; ++i) {
    if (vote_label(index.query_excluding(i, k), data.labels) == data.labels[i]) retained.push_back(i);
  }
  return retained;
}

namespace {

std::size_t nearest_centroid(const FeatureMatrix& centroids, std::span<const double> p) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.rows; ++c) {
    const double d = euclidean_distance(p, centroids.row(c));
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

}  // namespace

KMeansResult kmeans(const FeatureMatrix& points, std::size_t k, RngStream& rng,
                    std::size_t max_iterations) {
  const std::size_t n = points.rows, d = points.cols;
  if (k < 1 || k > n) throw std::invalid_argument("kmeans: k out of range");

  // k-means++ seeding
  FeatureMatrix centroids(0, d);
  centroids.append_row(points.row(rng.next_index(n)));
  std::vector<double> dist2(n);
  while (centroids.rows < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < centroids.rows; ++c) {
        const double dd = euclidean_distance(points.row(i), centroids.row(c));
        best = std::min(best, dd * dd);
      }
      dist2[i] = best;
      total += best;
    }
    std::size_t pick;
    if (total <= 0.0) {
      pick = rng.next_index(n);
    } else {
      const double target = rng.next_double() * total;
      double acc = 0.0;
      pick = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        acc += dist2[i];
        if (acc > target) {
          pick = i;
          break;
        }
      }
    }
    centroids.append_row(points.row(pick));
  }

  std::vector<std::size_t> assignment(n, points.rows);  // sentinel: unassigned
  for (std::size_t iter = 0; iter < max_iterations; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t c = nearest_centroid(centroids, points.row(i));
      if (c != assignment[i]) {
        assignment[i] = c;
        changed = true;
      }
    }
    if (!changed) break;  // assignment fixpoint

    std::vector<std::size_t> counts(k, 0);
    FeatureMatrix sums(k, d);
    for (std::size_t i = 0; i < n; ++i) {
      ++counts[assignment[i]];
      for (std::size_t j = 0; j < d; ++j) sums.at(assignment[i], j) += points.at(i, j);
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) {
        // reseed empty cluster at the point farthest from its current centroid
        std::size_t far = 0;
        double far_d = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double dd = euclidean_distance(points.row(i), centroids.row(assignment[i]));
          if (dd > far_d) {
            far_d = dd;
            far = i;
          }
        }
        for (std::size_t j = 0; j < d; ++j) centroids.at(c, j) = points.at(far, j);
      } else {
        for (std::size_t j = 0; j < d; ++j)
          centroids.at(c, j) = sums.at(c, j) / static_cast<double>(counts[c]);
      }
    }
  }
  return {std::move(assignment), std::move(centroids)};
}

}  // namespace smotecls
