#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "smotecls/dataset.hpp"
#include "smotecls/rng.hpp"

namespace smotecls {

struct TreeSpec {
  int max_depth = -1;                  // -1: unlimited
  std::size_t min_leaf = 1;            // minimum rows per leaf
  std::size_t features_per_split = 0;  // 0: ceil(sqrt(d))
};

struct ForestSpec {
  std::size_t n_trees = 100;
  TreeSpec tree;
  bool bootstrap = true;
};

// Binary CART tree with Gini-impurity splits on midpoint thresholds.
class DecisionTree {
 public:
  struct Node {
    std::int32_t feature = -1;  // -1: leaf
    double threshold = 0.0;
    std::uint32_t left = 0;
    std::uint32_t right = 0;
    std::vector<double> distribution;  // leaf class frequencies
  };

  static DecisionTree fit(const FeatureMatrix& X, const std::vector<int>& y, int n_classes,
                          const TreeSpec& spec, RngStream& rng,
                          const std::vector<std::size_t>* sample = nullptr);

  std::span<const double> predict_proba(std::span<const double> x) const;
  int n_classes() const { return n_classes_; }
  const std::vector<Node>& nodes() const { return nodes_; }

  void save(std::ostream& out) const;
  static DecisionTree load(std::istream& in);

 private:
  std::vector<Node> nodes_;
  int n_classes_ = 0;
};

class RandomForest {
 public:
  static RandomForest fit(const FeatureMatrix& X, const std::vector<int>& y, int n_classes,
                          const ForestSpec& spec, RngStream& rng);

  std::vector<double> predict_proba(std::span<const double> x) const;
  // Convenience for binary problems: probability of class 1.
  double predict_score(std::span<const double> x) const;

  int n_classes() const { return n_classes_; }
  std::size_t n_trees() const { return trees_.size(); }
  std::size_t n_features() const { return n_features_; }

  void save(std::ostream& out) const;
  static RandomForest load(std::istream& in);

 private:
  std::vector<DecisionTree> trees_;
  int n_classes_ = 0;
  std::size_t n_features_ = 0;
};

}  // namespace smotecls
