#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "smotecls/rng.hpp"

namespace smotecls {

// Filesystem-level failures (open/write), distinct from malformed content.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dense row-major matrix of 64-bit floats.
struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  FeatureMatrix() = default;
  FeatureMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }

  std::span<const double> row(std::size_t r) const { return {values.data() + r * cols, cols}; }
  std::span<double> row(std::size_t r) { return {values.data() + r * cols, cols}; }

  void append_row(std::span<const double> v);
};

enum class ClassLabel : std::uint8_t { Major = 0, Minor = 1 };

// Binary-labeled dataset. label_tokens keeps the original text of each label
// cell so exported files carry the source vocabulary.
struct LabeledDataset {
  FeatureMatrix features;
  std::vector<ClassLabel> labels;
  std::vector<std::string> feature_names;
  std::vector<std::string> label_tokens;
  std::string label_column = "label";
  std::string positive_token = "minor";
  std::string default_major_token = "major";

  std::size_t size() const { return features.rows; }
  std::size_t dim() const { return features.cols; }
  std::size_t count(ClassLabel c) const;
  std::vector<std::size_t> indices_of(ClassLabel c) const;
  const std::string& token_of(std::size_t row) const;

  // Appends a row; token defaults to positive/major token of this dataset.
  void push_row(std::span<const double> v, ClassLabel label);
  LabeledDataset select(const std::vector<std::size_t>& rows) const;
};

// Per-column affine transform to zero mean and unit (population) deviation.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> stddev;  // floored at 1e-12

  static constexpr double kStdFloor = 1e-12;

  void transform_inplace(FeatureMatrix& m) const;
  void inverse_inplace(FeatureMatrix& m) const;
};

// Extra named string column for delimited export (e.g. provenance tags).
struct ExtraColumn {
  std::string name;
  std::vector<std::string> values;
};

LabeledDataset load_delimited(const std::string& path, const std::string& label_column,
                              const std::string& positive_token,
                              const std::string& ignore_column = "");
void save_delimited(const std::string& path, const LabeledDataset& data,
                    const std::vector<ExtraColumn>& extras = {});

std::pair<LabeledDataset, Standardizer> standardize(const LabeledDataset& data);

struct SplitResult {
  LabeledDataset train;
  LabeledDataset test;
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> test_indices;
};

// Per-class test counts are round(class_size * test_fraction), clamped so
// both sides keep at least one row of each class.
SplitResult stratified_split(const LabeledDataset& data, double test_fraction, RngStream& rng);

}  // namespace smotecls
