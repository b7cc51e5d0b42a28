#include "smotecls/tree.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace smotecls {

namespace {

double gini(const std::vector<std::size_t>& counts, std::size_t total) {
  if (total == 0) return 0.0;
  double s = 0.0;
  for (auto c : counts) {
    const double p = static_cast<double>(c) / static_cast<double>(total);
    s += p * p;
  }
  return 1.0 - s;
}

struct BestSplit {
  bool found = false;
  std::size_t feature = 0;
  double threshold = 0.0;
  // Any min-leaf-respecting split is accepted, zero-gain included; a node
  // smaller than its parent always terminates the recursion.
  double impurity_drop = -std::numeric_limits<double>::infinity();
};

struct Builder {
  const FeatureMatrix& X;
  const std::vector<int>& y;
  int n_classes;
  TreeSpec spec;
  RngStream& rng;
  std::vector<DecisionTree::Node> nodes;

  std::vector<std::size_t> sample_features() {
    const std::size_t d = X.cols;
    std::size_t m = spec.features_per_split;
    if (m == 0) m = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(d))));
    m = std::min(m, d);
    std::vector<std::size_t> all(d);
    std::iota(all.begin(), all.end(), 0);
    if (m == d) return all;
    // partial Fisher-Yates: first m entries are a uniform distinct sample
    for (std::size_t i = 0; i < m; ++i) {
      std::size_t j = i + rng.next_index(d - i);
      std::swap(all[i], all[j]);
    }
    all.resize(m);
    return all;
  }

  BestSplit find_split(const std::vector<std::size_t>& rows,
                       const std::vector<std::size_t>& counts) {
    const std::size_t n = rows.size();
    const double parent = gini(counts, n);
    BestSplit best;
    std::vector<std::pair<double, int>> vals(n);
    std::vector<std::size_t> left_counts(static_cast<std::size_t>(n_classes));
    for (std::size_t f : sample_features()) {
      for (std::size_t i = 0; i < n; ++i) vals[i] = {X.at(rows[i], f), y[rows[i]]};
      std::sort(vals.begin(), vals.end());
      std::fill(left_counts.begin(), left_counts.end(), 0);
      std::size_t n_left = 0;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        ++left_counts[static_cast<std::size_t>(vals[i].second)];
        ++n_left;
        if (vals[i].first == vals[i + 1].first) continue;  // not a boundary
        const std::size_t n_right = n - n_left;
        if (n_left < spec.min_leaf || n_right < spec.min_leaf) continue;
        double right_g = 0.0, left_g = gini(left_counts, n_left);
        {
          double s = 0.0;
          for (std::size_t c = 0; c < left_counts.size(); ++c) {
            const double p = static_cast<double>(counts[c] - left_counts[c]) /
                             static_cast<double>(n_right);
            s += p * p;
          }
          right_g = 1.0 - s;
        }
        const double drop = parent - (static_cast<double>(n_left) * left_g +
                                      static_cast<double>(n_right) * right_g) /
                                         static_cast<double>(n);
        if (drop > best.impurity_drop + 1e-15) {
          best.found = true;
          best.feature = f;
          best.threshold = 0.5 * (vals[i].first + vals[i + 1].first);
          best.impurity_drop = drop;
        }
      }
    }
    return best;
  }

  std::uint32_t make_leaf(const std::vector<std::size_t>& counts, std::size_t total) {
    DecisionTree::Node node;
    node.distribution.resize(counts.size());
    for (std::size_t c = 0; c < counts.size(); ++c)
      node.distribution[c] = static_cast<double>(counts[c]) / static_cast<double>(total);
    nodes.push_back(std::move(node));
    return static_cast<std::uint32_t>(nodes.size() - 1);
  }

  std::uint32_t build(std::vector<std::size_t>& rows, int depth) {
    std::vector<std::size_t> counts(static_cast<std::size_t>(n_classes), 0);
    for (auto r : rows) ++counts[static_cast<std::size_t>(y[r])];
    const std::size_t n = rows.size();

    const bool pure = *std::max_element(counts.begin(), counts.end()) == n;
    const bool depth_stop = spec.max_depth >= 0 && depth >= spec.max_depth;
    if (pure || depth_stop || n < 2 * spec.min_leaf) return make_leaf(counts, n);

    const BestSplit split = find_split(rows, counts);
    if (!split.found) return make_leaf(counts, n);

    std::vector<std::size_t> left, right;
    for (auto r : rows) (X.at(r, split.feature) <= split.threshold ? left : right).push_back(r);
    rows.clear();
    rows.shrink_to_fit();

    const std::uint32_t id = static_cast<std::uint32_t>(nodes.size());
    nodes.emplace_back();
    nodes[id].feature = static_cast<std::int32_t>(split.feature);
    nodes[id].threshold = split.threshold;
    const std::uint32_t l = build(left, depth + 1);
    const std::uint32_t r = build(right, depth + 1);
    nodes[id].left = l;
    nodes[id].right = r;
    return id;
  }
};

void write_u64(std::ostream& out, std::uint64_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
std::uint64_t read_u64(std::istream& in) {
  std::uint64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  if (!in) throw std::runtime_error("model file truncated");
  return v;
}
void write_f64(std::ostream& out, double v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
double read_f64(std::istream& in) {
  double v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  if (!in) throw std::runtime_error("model file truncated");
  return v;
}

}  // namespace

DecisionTree DecisionTree::fit(const FeatureMatrix& X, const std::vector<int>& y, int n_classes,
                               const TreeSpec& spec, RngStream& rng,
                               const std::vector<std::size_t>* sample) {
  if (X.rows == 0) throw std::invalid_argument("fit_tree: empty input");
  if (y.size() != X.rows) throw std::invalid_argument("fit_tree: label count mismatch");
  if (X.rows < spec.min_leaf) throw std::invalid_argument("fit_tree: fewer rows than min leaf size");
  for (int label : y)
    if (label < 0 || label >= n_classes) throw std::invalid_argument("fit_tree: label out of range");

  std::vector<std::size_t> rows;
  if (sample != nullptr)
    rows = *sample;
  else {
    rows.resize(X.rows);
    std::iota(rows.begin(), rows.end(), 0);
  }

  DecisionTree tree;
  tree.n_classes_ = n_classes;
  Builder builder{X, y, n_classes, spec, rng, {}};
  builder.build(rows, 0);
  tree.nodes_ = std::move(builder.nodes);
  return tree;
}

std::span<const double> DecisionTree::predict_proba(std::span<const double> x) const {
  std::size_t id = 0;
  while (nodes_[id].feature >= 0) {
    const auto& nd = nodes_[id];
    id = x[static_cast<std::size_t>(nd.feature)] <= nd.threshold ? nd.left : nd.right;
  }
  return nodes_[id].distribution;
}

void DecisionTree::save(std::ostream& out) const {
  write_u64(out, static_cast<std::uint64_t>(n_classes_));
  write_u64(out, nodes_.size());
  for (const auto& nd : nodes_) {
    write_u64(out, static_cast<std::uint64_t>(static_cast<std::int64_t>(nd.feature)));
    write_f64(out, nd.threshold);
    write_u64(out, nd.left);
    write_u64(out, nd.right);
    write_u64(out, nd.distribution.size());
    for (double p : nd.distribution) write_f64(out, p);
  }
}

DecisionTree DecisionTree::load(std::istream& in) {
  DecisionTree tree;
  tree.n_classes_ = static_cast<int>(read_u64(in));
  const std::uint64_t n = read_u64(in);
  tree.nodes_.resize(n);
  for (auto& nd : tree.nodes_) {
    nd.feature = static_cast<std::int32_t>(static_cast<std::int64_t>(read_u64(in)));
    nd.threshold = read_f64(in);
    nd.left = static_cast<std::uint32_t>(read_u64(in));
    nd.right = static_cast<std::uint32_t>(read_u64(in));
    nd.distribution.resize(read_u64(in));
    for (double& p : nd.distribution) p = read_f64(in);
  }
  return tree;
}

RandomForest RandomForest::fit(const FeatureMatrix& X, const std::vector<int>& y, int n_classes,
                               const ForestSpec& spec, RngStream& rng) {
  if (spec.n_trees < 1) throw std::invalid_argument("fit_forest: need at least one tree");
  RandomForest forest;
  forest.n_classes_ = n_classes;
  forest.n_features_ = X.cols;
  forest.trees_.reserve(spec.n_trees);
  for (std::size_t t = 0; t < spec.n_trees; ++t) {
    RngStream tree_rng = rng.split(t);
    std::vector<std::size_t> sample;
    if (spec.bootstrap) {
      sample.resize(X.rows);
      for (auto& s : sample) s = tree_rng.next_index(X.rows);
    }
    forest.trees_.push_back(DecisionTree::fit(X, y, n_classes, spec.tree, tree_rng,
                                              spec.bootstrap ? &sample : nullptr));
  }
  return forest;
}

std::vector<double> RandomForest::predict_proba(std::span<const double> x) const {
  if (x.size() != n_features_) throw std::invalid_argument("predict_proba: dimension mismatch");
  std::vector<double> acc(static_cast<std::size_t>(n_classes_), 0.0);
  for (const auto& tree : trees_) {
    const auto dist = tree.predict_proba(x);
    for (std::size_t c = 0; c < acc.size(); ++c) acc[c] += dist[c];
  }
  for (auto& v : acc) v /= static_cast<double>(trees_.size());
  return acc;
}

double RandomForest::predict_score(std::span<const double> x) const {
  return predict_proba(x)[1];
}

void RandomForest::save(std::ostream& out) const {
  static const char magic[8] = {'S', 'C', 'L', 'S', 'R', 'F', '0', '1'};
  out.write(magic, sizeof(magic));
  write_u64(out, static_cast<std::uint64_t>(n_classes_));
  write_u64(out, n_features_);
  write_u64(out, trees_.size());
  for (const auto& t : trees_) t.save(out);
}

RandomForest RandomForest::load(std::istream& in) {
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::string(magic, 8) != "SCLSRF01")
    throw std::runtime_error("not a forest model file");
  RandomForest forest;
  forest.n_classes_ = static_cast<int>(read_u64(in));
  forest.n_features_ = read_u64(in);
  const std::uint64_t n = read_u64(in);
  forest.trees_.reserve(n);
  for (std::uint64_t t = 0; t < n; ++t) forest.trees_.push_back(DecisionTree::load(in));
  return forest;
}

}  // namespace smotecls
