#include "smotecls/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace smotecls {

void FeatureMatrix::append_row(std::span<const double> v) {
  if (cols == 0) cols = v.size();
  if (v.size() != cols) throw std::invalid_argument("append_row: width mismatch");
  values.insert(values.end(), v.begin(), v.end());
  ++rows;
}

std::size_t LabeledDataset::count(ClassLabel c) const {
  std::size_t n = 0;
  for (auto l : labels)
    if (l == c) ++n;
  return n;
}

std::vector<std::size_t> LabeledDataset::indices_of(ClassLabel c) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == c) out.push_back(i);
  return out;
}

const std::string& LabeledDataset::token_of(std::size_t row) const {
  if (row < label_tokens.size()) return label_tokens[row];
  return labels[row] == ClassLabel::Minor ? positive_token : default_major_token;
}

void LabeledDataset::push_row(std::span<const double> v, ClassLabel label) {
  features.append_row(v);
  labels.push_back(label);
  label_tokens.push_back(label == ClassLabel::Minor ? positive_token : default_major_token);
}

LabeledDataset LabeledDataset::select(const std::vector<std::size_t>& rows) const {
  LabeledDataset out;
  out.feature_names = feature_names;
  out.label_column = label_column;
  out.positive_token = positive_token;
  out.default_major_token = default_major_token;
  out.features = FeatureMatrix(0, features.cols);
  out.features.values.reserve(rows.size() * features.cols);
  for (auto r : rows) {
    out.features.append_row(features.row(r));
    out.labels.push_back(labels[r]);
    out.label_tokens.push_back(token_of(r));
  }
  return out;
}

void Standardizer::transform_inplace(FeatureMatrix& m) const {
  for (std::size_t r = 0; r < m.rows; ++r)
    for (std::size_t c = 0; c < m.cols; ++c) m.at(r, c) = (m.at(r, c) - mean[c]) / stddev[c];
}

void Standardizer::inverse_inplace(FeatureMatrix& m) const {
  for (std::size_t r = 0; r < m.rows; ++r)
    for (std::size_t c = 0; c < m.cols; ++c) m.at(r, c) = m.at(r, c) * stddev[c] + mean[c];
}

namespace {

std::vector<std::string> split_line(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, delim)) out.push_back(cell);
  if (!line.empty() && line.back() == delim) out.push_back("");
  return out;
}

std::string strip(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

bool parse_double(const std::string& s, double& out) {
  const std::string t = strip(s);
  if (t.empty()) return false;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last;
}

}  // namespace

LabeledDataset load_delimited(const std::string& path, const std::string& label_column,
                              const std::string& positive_token, const std::string& ignore_column) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open file: " + path);

  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error("empty file: " + path);
  header = strip(header);
  if (header.empty()) throw std::runtime_error("empty file: " + path);

  const char delim = header.find('\t') != std::string::npos ? '\t' : ',';
  std::vector<std::string> names = split_line(header, delim);
  for (auto& n : names) n = strip(n);

  std::ptrdiff_t label_idx = -1, ignore_idx = -1;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == label_column) label_idx = static_cast<std::ptrdiff_t>(i);
    if (!ignore_column.empty() && names[i] == ignore_column)
      ignore_idx = static_cast<std::ptrdiff_t>(i);
  }
  if (label_idx < 0) throw std::runtime_error("missing label column '" + label_column + "' in " + path);

  LabeledDataset data;
  data.label_column = label_column;
  data.positive_token = positive_token;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (static_cast<std::ptrdiff_t>(i) == label_idx) continue;
    if (static_cast<std::ptrdiff_t>(i) == ignore_idx) continue;
    data.feature_names.push_back(names[i]);
  }
  if (data.feature_names.empty()) throw std::runtime_error("no feature columns in " + path);

  data.features = FeatureMatrix(0, data.feature_names.size());
  std::vector<double> row(data.feature_names.size());
  std::string line;
  std::size_t line_no = 1;
  std::vector<std::string> distinct_tokens;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip(line);
    if (line.empty()) continue;
    std::vector<std::string> cells = split_line(line, delim);
    if (cells.size() != names.size())
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected " +
                               std::to_string(names.size()) + " cells, got " +
                               std::to_string(cells.size()));
    std::size_t f = 0;
    std::string token;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (static_cast<std::ptrdiff_t>(i) == label_idx) {
        token = strip(cells[i]);
        continue;
      }
      if (static_cast<std::ptrdiff_t>(i) == ignore_idx) continue;
      if (!parse_double(cells[i], row[f]))
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": non-numeric feature cell '" + strip(cells[i]) + "' in column '" +
                                 data.feature_names[f] + "'");
      ++f;
    }
    data.features.append_row(row);
    data.labels.push_back(token == positive_token ? ClassLabel::Minor : ClassLabel::Major);
    data.label_tokens.push_back(token);
    if (std::find(distinct_tokens.begin(), distinct_tokens.end(), token) == distinct_tokens.end())
      distinct_tokens.push_back(token);
  }
  if (data.features.rows == 0) throw std::runtime_error("empty file: " + path);
  if (distinct_tokens.size() < 2) throw std::runtime_error("single-class dataset: " + path);
  if (data.count(ClassLabel::Minor) == 0)
    throw std::runtime_error("dataset with zero minority rows (positive token '" + positive_token +
                             "' not found): " + path);
  return data;
}

void save_delimited(const std::string& path, const LabeledDataset& data,
                    const std::vector<ExtraColumn>& extras) {
  for (const auto& e : extras)
    if (e.values.size() != data.size())
      throw std::invalid_argument("extra column '" + e.name + "' length mismatch");

  std::ofstream out(path);
  if (!out) throw IoError("cannot write file: " + path);

  char buf[64];
  for (std::size_t c = 0; c < data.dim(); ++c) {
    const std::string name =
        c < data.feature_names.size() ? data.feature_names[c] : "f" + std::to_string(c + 1);
    out << name << ',';
  }
  out << data.label_column;
  for (const auto& e : extras) out << ',' << e.name;
  out << '\n';

  for (std::size_t r = 0; r < data.size(); ++r) {
    for (std::size_t c = 0; c < data.dim(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", data.features.at(r, c));
      out << buf << ',';
    }
    out << data.token_of(r);
    for (const auto& e : extras) out << ',' << e.values[r];
    out << '\n';
  }
}

std::pair<LabeledDataset, Standardizer> standardize(const LabeledDataset& data) {
  if (data.size() < 2) throw std::invalid_argument("standardize: need at least 2 rows");
  const std::size_t n = data.size(), d = data.dim();
  Standardizer s;
  s.mean.assign(d, 0.0);
  s.stddev.assign(d, 0.0);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < d; ++c) s.mean[c] += data.features.at(r, c);
  for (std::size_t c = 0; c < d; ++c) s.mean[c] /= static_cast<double>(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < d; ++c) {
      const double diff = data.features.at(r, c) - s.mean[c];
      s.stddev[c] += diff * diff;
    }
  for (std::size_t c = 0; c < d; ++c)
    s.stddev[c] = std::max(std::sqrt(s.stddev[c] / static_cast<double>(n)), Standardizer::kStdFloor);

  LabeledDataset out = data;
  s.transform_inplace(out.features);
  return {std::move(out), std::move(s)};
}

SplitResult stratified_split(const LabeledDataset& data, double test_fraction, RngStream& rng) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw std::invalid_argument("test_fraction must be in (0, 1)");
  for (ClassLabel c : {ClassLabel::Major, ClassLabel::Minor})
    if (data.count(c) < 2)
      throw std::invalid_argument("stratified_split: each class needs at least 2 rows");

  std::vector<std::size_t> test_rows;
  for (ClassLabel c : {ClassLabel::Major, ClassLabel::Minor}) {
    std::vector<std::size_t> idx = data.indices_of(c);
    rng.shuffle(idx);
    auto n_test = static_cast<std::size_t>(
        std::llround(static_cast<double>(idx.size()) * test_fraction));
    n_test = std::clamp<std::size_t>(n_test, 1, idx.size() - 1);
    test_rows.insert(test_rows.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_test));
  }
  std::sort(test_rows.begin(), test_rows.end());

  SplitResult res;
  res.test_indices = test_rows;
  std::size_t t = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (t < test_rows.size() && test_rows[t] == i)
      ++t;
    else
      res.train_indices.push_back(i);
  }
  res.train = data.select(res.train_indices);
  res.test = data.select(res.test_indices);
  return res;
}

}  // namespace smotecls
