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

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace trsim {

/// Feature matrix (samples x features) with integer class labels.
struct Dataset {
  Eigen::MatrixXd features;
  std::vector<int> labels;
  int class_count = 0;

  int num_samples() const { return static_cast<int>(features.rows()); }
  int num_features() const { return static_cast<int>(features.cols()); }
  void validate() const;
};

struct Split {
  Dataset train;
  Dataset test;
  double ratio = 0.8;
  uint64_t seed = 0;
};

/// Iris CSV: four numeric columns plus a class column (names mapped to
/// indices alphabetically, integers taken as-is). Header row optional.
/// Malformed rows are reported with their line number.
Dataset load_iris(const std::string& path);

/// Raw IDX image file contents (bit-exact).
struct IdxImages {
  uint32_t rows = 0;
  uint32_t cols = 0;
  std::vector<std::vector<uint8_t>> images;
};

IdxImages read_idx_images(const std::string& path);
std::vector<uint8_t> read_idx_labels(const std::string& path);
void write_idx_images(const std::string& path, const IdxImages& images);
void write_idx_labels(const std::string& path,
                      const std::vector<uint8_t>& labels);

/// MNIST-format pair of IDX files filtered to `keep_classes` (relabeled
/// 0..k-1 in the given order), pixels scaled to [0, 1] and flattened.
Dataset load_mnist_idx(const std::string& images_path,
                       const std::string& labels_path,
                       const std::vector<int>& keep_classes);

/// Precomputed-feature CSV with columns f0..f{k-1},label.
Dataset load_feature_csv(const std::string& path);

/// PCA projection fitted on one dataset, applied to others.
struct PcaModel {
  Eigen::RowVectorXd mean;
  Eigen::MatrixXd components;  // features x target_dim, orthonormal columns

  Dataset apply(const Dataset& dataset) const;
};

PcaModel fit_pca(const Dataset& dataset, int target_dim);

/// Fits PCA on the train split only and projects both splits.
Split reduce_features(const Split& split, int target_dim);

/// Per-feature min/max statistics for the affine map onto [lo, hi].
struct MinMaxStats {
  Eigen::RowVectorXd min;
  Eigen::RowVectorXd max;
  double lo = 0.0;
  double hi = 0.0;

  /// Applies the map; values are clamped to [lo, hi]. A degenerate
  /// feature (min == max) maps to lo.
  Dataset apply(const Dataset& dataset) const;
};

MinMaxStats fit_minmax(const Dataset& dataset, double lo, double hi);

/// Self-normalization of a single dataset.
Dataset normalize_minmax(const Dataset& dataset, double lo, double hi);

/// Normalizes with train-split statistics; test values are clamped.
Split normalize_minmax(const Split& split, double lo, double hi);

/// Seeded shuffle then partition. ratio is the train fraction; both
/// sides must end up non-empty.
Split split_dataset(const Dataset& dataset, double ratio, uint64_t seed);

/// Keeps the first `count` samples (after a seeded shuffle) of a dataset.
Dataset subsample(const Dataset& dataset, int count, uint64_t seed);

}  // namespace trsim
