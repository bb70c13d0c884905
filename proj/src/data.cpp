// Copyright 2026 The trsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "trsim/data.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "trsim/rng.hpp"

namespace trsim {
namespace {

constexpr uint32_t kIdxImagesMagic = 0x00000803;
constexpr uint32_t kIdxLabelsMagic = 0x00000801;

uint32_t read_be_u32(std::istream& in, const std::string& path) {
  uint8_t bytes[4];
  in.read(reinterpret_cast<char*>(bytes), 4);
  if (!in) throw std::runtime_error("truncated IDX file: " + path);
  return (uint32_t{bytes[0]} << 24) | (uint32_t{bytes[1]} << 16) |
         (uint32_t{bytes[2]} << 8) | uint32_t{bytes[3]};
}

void write_be_u32(std::ostream& out, uint32_t value) {
  const uint8_t bytes[4] = {static_cast<uint8_t>(value >> 24),
                            static_cast<uint8_t>(value >> 16),
                            static_cast<uint8_t>(value >> 8),
                            static_cast<uint8_t>(value)};
  out.write(reinterpret_cast<const char*>(bytes), 4);
}

std::string trim(const std::string& text) {
  size_t first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  size_t last = text.find_last_not_of(" \t\r\n");
  return text.substr(first, last - first + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream stream(line);
  std::string field;
  while (std::getline(stream, field, ',')) fields.push_back(trim(field));
  return fields;
}

bool parse_double(const std::string& text, double& value) {
  try {
    size_t used = 0;
    value = std::stod(text, &used);
    return used == text.size();
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

void Dataset::validate() const {
  if (static_cast<int>(labels.size()) != num_samples()) {
    throw std::invalid_argument("label count does not match sample count");
  }
  for (int label : labels) {
    if (label < 0 || label >= class_count) {
      throw std::invalid_argument("label " + std::to_string(label) +
                                  " outside [0, " +
                                  std::to_string(class_count) + ")");
    }
  }
  if (!features.allFinite()) {
    throw std::invalid_argument("dataset contains non-finite features");
  }
}

Dataset load_iris(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw std::runtime_error("cannot open iris file: " + path);

  std::vector<std::array<double, 4>> rows;
  std::vector<std::string> class_tokens;
  std::string line;
  int line_number = 0;
  while (std::getline(file, line)) {
    ++line_number;
    const std::string trimmed = trim(line);
    if (trimmed.empty()) continue;
    const auto fields = split_csv_line(trimmed);
    if (fields.size() != 5) {
      throw std::runtime_error("iris line " + std::to_string(line_number) +
                               ": expected 5 comma-separated fields, got " +
                               std::to_string(fields.size()));
    }
    std::array<double, 4> values{};
    bool numeric = true;
    for (int j = 0; j < 4; ++j) {
      if (!parse_double(fields[static_cast<size_t>(j)], values[static_cast<size_t>(j)])) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (line_number == 1) continue;  // header row
      throw std::runtime_error("iris line " + std::to_string(line_number) +
                               ": non-numeric feature value");
    }
    rows.push_back(values);
    class_tokens.push_back(fields[4]);
  }
  if (rows.empty()) {
    throw std::runtime_error("iris file has no data rows: " + path);
  }

  // Class names map alphabetically to 0..k-1; integer labels pass through.
  std::map<std::string, int> class_index;
  bool all_integer = true;
  for (const std::string& token : class_tokens) {
    double value = 0.0;
    if (!parse_double(token, value) || value != std::floor(value)) {
      all_integer = false;
    }
    class_index.emplace(token, 0);
  }
  Dataset dataset;
  dataset.features.resize(static_cast<Eigen::Index>(rows.size()), 4);
  dataset.labels.reserve(rows.size());
  if (all_integer) {
    int max_label = 0;
    for (size_t i = 0; i < rows.size(); ++i) {
      const int label = static_cast<int>(std::stod(class_tokens[i]));
      dataset.labels.push_back(label);
      max_label = std::max(max_label, label);
    }
    dataset.class_count = max_label + 1;
  } else {
    int next = 0;
    for (auto& [token, index] : class_index) index = next++;
    for (const std::string& token : class_tokens) {
      dataset.labels.push_back(class_index[token]);
    }
    dataset.class_count = next;
  }
  for (size_t i = 0; i < rows.size(); ++i) {
    for (int j = 0; j < 4; ++j) {
      dataset.features(static_cast<Eigen::Index>(i), j) = rows[i][static_cast<size_t>(j)];
    }
  }
  dataset.validate();
  return dataset;
}

IdxImages read_idx_images(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open IDX image file: " + path);
  const uint32_t magic = read_be_u32(file, path);
  if (magic != kIdxImagesMagic) {
    throw std::runtime_error("bad IDX image magic in " + path +
                             " (expected 0x00000803)");
  }
  const uint32_t count = read_be_u32(file, path);
  IdxImages images;
  images.rows = read_be_u32(file, path);
  images.cols = read_be_u32(file, path);
  const size_t pixels = size_t{images.rows} * images.cols;
  images.images.assign(count, std::vector<uint8_t>(pixels));
  for (uint32_t i = 0; i < count; ++i) {
    file.read(reinterpret_cast<char*>(images.images[i].data()),
              static_cast<std::streamsize>(pixels));
    if (!file) throw std::runtime_error("truncated IDX file: " + path);
  }
  return images;
}

std::vector<uint8_t> read_idx_labels(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open IDX label file: " + path);
  const uint32_t magic = read_be_u32(file, path);
  if (magic != kIdxLabelsMagic) {
    throw std::runtime_error("bad IDX label magic in " + path +
                             " (expected 0x00000801)");
  }
  const uint32_t count = read_be_u32(file, path);
  std::vector<uint8_t> labels(count);
  file.read(reinterpret_cast<char*>(labels.data()),
            static_cast<std::streamsize>(count));
  if (!file) throw std::runtime_error("truncated IDX file: " + path);
  return labels;
}

void write_idx_images(const std::string& path, const IdxImages& images) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write IDX image file: " + path);
  write_be_u32(file, kIdxImagesMagic);
  write_be_u32(file, static_cast<uint32_t>(images.images.size()));
  write_be_u32(file, images.rows);
  write_be_u32(file, images.cols);
  for (const auto& image : images.images) {
    file.write(reinterpret_cast<const char*>(image.data()),
               static_cast<std::streamsize>(image.size()));
  }
}

void write_idx_labels(const std::string& path,
                      const std::vector<uint8_t>& labels) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write IDX label file: " + path);
  write_be_u32(file, kIdxLabelsMagic);
  write_be_u32(file, static_cast<uint32_t>(labels.size()));
  file.write(reinterpret_cast<const char*>(labels.data()),
             static_cast<std::streamsize>(labels.size()));
}

Dataset load_mnist_idx(const std::string& images_path,
                       const std::string& labels_path,
                       const std::vector<int>& keep_classes) {
  if (keep_classes.empty()) {
    throw std::invalid_argument("keep_classes must not be empty");
  }
  const IdxImages images = read_idx_images(images_path);
  const std::vector<uint8_t> labels = read_idx_labels(labels_path);
  if (images.images.size() != labels.size()) {
    throw std::runtime_error("IDX image/label counts differ (" +
                             std::to_string(images.images.size()) + " vs " +
                             std::to_string(labels.size()) + ")");
  }
  std::map<int, int> relabel;
  for (size_t i = 0; i < keep_classes.size(); ++i) {
    relabel[keep_classes[i]] = static_cast<int>(i);
  }

  std::vector<size_t> selected;
  for (size_t i = 0; i < labels.size(); ++i) {
    if (relabel.count(labels[i]) != 0) selected.push_back(i);
  }
  if (selected.empty()) {
    throw std::runtime_error("no samples match the requested classes");
  }

  const size_t pixels = size_t{images.rows} * images.cols;
  Dataset dataset;
  dataset.class_count = static_cast<int>(keep_classes.size());
  dataset.features.resize(static_cast<Eigen::Index>(selected.size()),
                          static_cast<Eigen::Index>(pixels));
  dataset.labels.reserve(selected.size());
  for (size_t row = 0; row < selected.size(); ++row) {
    const auto& image = images.images[selected[row]];
    for (size_t p = 0; p < pixels; ++p) {
      dataset.features(static_cast<Eigen::Index>(row),
                       static_cast<Eigen::Index>(p)) = image[p] / 255.0;
    }
    dataset.labels.push_back(relabel[labels[selected[row]]]);
  }
  dataset.validate();
  return dataset;
}

Dataset load_feature_csv(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw std::runtime_error("cannot open feature CSV: " + path);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  std::string line;
  int line_number = 0;
  size_t width = 0;
  while (std::getline(file, line)) {
    ++line_number;
    const std::string trimmed = trim(line);
    if (trimmed.empty()) continue;
    const auto fields = split_csv_line(trimmed);
    if (fields.size() < 2) {
      throw std::runtime_error("feature CSV line " +
                               std::to_string(line_number) +
                               ": expected f0..fk,label");
    }
    std::vector<double> values(fields.size() - 1);
    bool numeric = true;
    for (size_t j = 0; j + 1 < fields.size(); ++j) {
      if (!parse_double(fields[j], values[j])) {
        numeric = false;
        break;
      }
    }
    double label_value = 0.0;
    numeric = numeric && parse_double(fields.back(), label_value);
    if (!numeric) {
      if (line_number == 1) continue;  // header row
      throw std::runtime_error("feature CSV line " +
                               std::to_string(line_number) +
                               ": non-numeric value");
    }
    if (width == 0) width = values.size();
    if (values.size() != width) {
      throw std::runtime_error("feature CSV line " +
                               std::to_string(line_number) +
                               ": inconsistent column count");
    }
    rows.push_back(std::move(values));
    labels.push_back(static_cast<int>(label_value));
  }
  if (rows.empty()) {
    throw std::runtime_error("feature CSV has no data rows: " + path);
  }
  Dataset dataset;
  dataset.features.resize(static_cast<Eigen::Index>(rows.size()),
                          static_cast<Eigen::Index>(width));
  dataset.labels = labels;
  dataset.class_count =
      *std::max_element(labels.begin(), labels.end()) + 1;
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = 0; j < width; ++j) {
      dataset.features(static_cast<Eigen::Index>(i),
                       static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  dataset.validate();
  return dataset;
}

Dataset PcaModel::apply(const Dataset& dataset) const {
  if (dataset.features.cols() != mean.cols()) {
    throw std::invalid_argument("PCA model dimension mismatch");
  }
  Dataset out;
  out.labels = dataset.labels;
  out.class_count = dataset.class_count;
  out.features = (dataset.features.rowwise() - mean) * components;
  return out;
}

PcaModel fit_pca(const Dataset& dataset, int target_dim) {
  const int d = dataset.num_features();
  if (target_dim < 1 || target_dim > d) {
    throw std::invalid_argument("pca target_dim " + std::to_string(target_dim) +
                                " outside [1, " + std::to_string(d) + "]");
  }
  PcaModel model;
  model.mean = dataset.features.colwise().mean();
  const Eigen::MatrixXd centered = dataset.features.rowwise() - model.mean;
  const Eigen::MatrixXd covariance =
      (centered.adjoint() * centered) /
      std::max<double>(1.0, dataset.num_samples() - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(covariance);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("PCA eigendecomposition failed");
  }
  // Eigenvalues ascending; take the top target_dim columns in descending
  // order, each signed so its largest-magnitude entry is positive.
  model.components.resize(d, target_dim);
  for (int j = 0; j < target_dim; ++j) {
    Eigen::VectorXd column = solver.eigenvectors().col(d - 1 - j);
    Eigen::Index arg_max = 0;
    column.cwiseAbs().maxCoeff(&arg_max);
    if (column(arg_max) < 0.0) column = -column;
    model.components.col(j) = column;
  }
  return model;
}

Split reduce_features(const Split& split, int target_dim) {
  const PcaModel model = fit_pca(split.train, target_dim);
  Split out = split;
  out.train = model.apply(split.train);
  out.test = model.apply(split.test);
  return out;
}

Dataset MinMaxStats::apply(const Dataset& dataset) const {
  if (dataset.features.cols() != min.cols()) {
    throw std::invalid_argument("min/max stats dimension mismatch");
  }
  Dataset out;
  out.labels = dataset.labels;
  out.class_count = dataset.class_count;
  out.features.resize(dataset.features.rows(), dataset.features.cols());
  for (Eigen::Index j = 0; j < dataset.features.cols(); ++j) {
    const double span = max(j) - min(j);
    for (Eigen::Index i = 0; i < dataset.features.rows(); ++i) {
      double value = lo;
      if (span > 0.0) {
        value = lo + (dataset.features(i, j) - min(j)) / span * (hi - lo);
      }
      out.features(i, j) = std::clamp(value, lo, hi);
    }
  }
  return out;
}

MinMaxStats fit_minmax(const Dataset& dataset, double lo, double hi) {
  if (!(hi > lo)) throw std::invalid_argument("normalize range must have hi > lo");
  MinMaxStats stats;
  stats.min = dataset.features.colwise().minCoeff();
  stats.max = dataset.features.colwise().maxCoeff();
  stats.lo = lo;
  stats.hi = hi;
  return stats;
}

Dataset normalize_minmax(const Dataset& dataset, double lo, double hi) {
  return fit_minmax(dataset, lo, hi).apply(dataset);
}

Split normalize_minmax(const Split& split, double lo, double hi) {
  const MinMaxStats stats = fit_minmax(split.train, lo, hi);
  Split out = split;
  out.train = stats.apply(split.train);
  out.test = stats.apply(split.test);
  return out;
}

Split split_dataset(const Dataset& dataset, double ratio, uint64_t seed) {
  const int n = dataset.num_samples();
  if (n < 2) throw std::invalid_argument("need at least 2 samples to split");
  const int train_count = static_cast<int>(std::lround(ratio * n));
  if (train_count < 1 || train_count >= n) {
    throw std::invalid_argument("split ratio " + std::to_string(ratio) +
                                " leaves an empty train or test set");
  }
  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  Rng rng = Rng::stream(seed, /*tag=*/0x73706c6974ULL);  // "split"
  rng.shuffle(order);

  auto take = [&](int begin, int count) {
    Dataset part;
    part.class_count = dataset.class_count;
    part.features.resize(count, dataset.features.cols());
    part.labels.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
      const int row = order[static_cast<size_t>(begin + i)];
      part.features.row(i) = dataset.features.row(row);
      part.labels.push_back(dataset.labels[static_cast<size_t>(row)]);
    }
    return part;
  };

  Split split;
  split.ratio = ratio;
  split.seed = seed;
  split.train = take(0, train_count);
  split.test = take(train_count, n - train_count);
  return split;
}

Dataset subsample(const Dataset& dataset, int count, uint64_t seed) {
  if (count < 1 || count > dataset.num_samples()) {
    throw std::invalid_argument("subsample count out of range");
  }
  std::vector<int> order(static_cast<size_t>(dataset.num_samples()));
  std::iota(order.begin(), order.end(), 0);
  Rng rng = Rng::stream(seed, /*tag=*/0x737562ULL);  // "sub"
  rng.shuffle(order);
  Dataset out;
  out.class_count = dataset.class_count;
  out.features.resize(count, dataset.features.cols());
  out.labels.reserve(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    const int row = order[static_cast<size_t>(i)];
    out.features.row(i) = dataset.features.row(row);
    out.labels.push_back(dataset.labels[static_cast<size_t>(row)]);
  }
  return out;
}

}  // namespace trsim
