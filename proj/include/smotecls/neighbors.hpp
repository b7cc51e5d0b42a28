#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "smotecls/dataset.hpp"
#include "smotecls/rng.hpp"

namespace smotecls {

struct Neighbor {
  std::size_t index;
  double distance;
};

// Brute-force Euclidean nearest-neighbor search over an immutable point set.
// Results come back sorted by (distance, index).
class NeighborIndex {
 public:
  explicit NeighborIndex(FeatureMatrix points);

  std::size_t size() const { return points_.rows; }
  std::size_t dim() const { return points_.cols; }
  const FeatureMatrix& points() const { return points_; }

  // k nearest reference points to an arbitrary query.
  std::vector<Neighbor> query(std::span<const double> point, std::size_t k) const;

  // k nearest reference points to reference row `self`, excluding that row.
  std::vector<Neighbor> query_excluding(std::size_t self, std::size_t k) const;

 private:
  std::vector<Neighbor> nearest(std::span<const double> point, std::size_t k,
                                std::ptrdiff_t exclude) const;
  FeatureMatrix points_;
};

double euclidean_distance(std::span<const double> a, std::span<const double> b);

// Majority vote among neighbor labels, ties broken toward the major class.
ClassLabel vote_label(const std::vector<Neighbor>& neighbors, const std::vector<ClassLabel>& labels);

ClassLabel knn_predict(const NeighborIndex& index, const std::vector<ClassLabel>& labels,
                       std::span<const double> point, std::size_t k);

// Four-way difficulty tag: class label crossed with whether a leave-one-out
// k-NN vote agrees with it.
enum class PseudoLabel : std::uint8_t { EasyMajor = 0, HardMajor = 1, EasyMinor = 2, HardMinor = 3 };

inline bool is_minor_side(PseudoLabel p) {
  return p == PseudoLabel::EasyMinor || p == PseudoLabel::HardMinor;
}
const char* pseudo_label_name(PseudoLabel p);

struct DifficultyGroups {
  std::vector<PseudoLabel> pseudo_labels;
  std::vector<std::size_t> easy_major;
  std::vector<std::size_t> hard_major;
  std::vector<std::size_t> easy_minor;
  std::vector<std::size_t> hard_minor;
};

DifficultyGroups relabel_by_difficulty(const LabeledDataset& data, std::size_t k = 5);

// Rows whose leave-one-out k-NN vote agrees with their own label.
std::vector<std::size_t> enn_retained(const LabeledDataset& data, std::size_t k = 3);

struct KMeansResult {
  std::vector<std::size_t> assignment;
  FeatureMatrix centroids;
};

KMeansResult kmeans(const FeatureMatrix& points, std::size_t k, RngStream& rng,
                    std::size_t max_iterations = 300);

}  // namespace smotecls
