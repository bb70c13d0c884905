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

#include <cmath>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "trsim/circuit.hpp"
#include "trsim/data.hpp"
#include "trsim/train.hpp"

namespace trsim {

/// Configuration errors carry the offending field's path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Data file errors (missing/corrupt inputs).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Process exit codes used by the CLI.
enum ExitCode {
  kExitOk = 0,
  kExitConfigError = 2,
  kExitDataError = 3,
  kExitVerifyFailure = 4,
};

struct DatasetConfig {
  std::string kind;  // "iris" | "mnist" | "csv"
  std::string path;  // iris/csv file
  std::string images_path, labels_path;        // mnist train pair
  std::string test_images_path, test_labels_path;  // mnist test pair
  std::vector<int> classes;                    // mnist class filter
  int feature_dim = 0;       // after PCA (mnist) / as loaded (iris, csv)
  int train_subset = 0;      // optional cap on train samples (0 = all)
  double split_ratio = 0.8;  // used when no explicit test files exist
  double normalize_lo = 0.0;
  double normalize_hi = M_PI;
};

struct ExperimentConfig {
  DatasetConfig dataset;
  CircuitSpec circuit;
  int rank = 4;
  TrainConfig train;
  std::string out_dir = ".";
  uint64_t seed = 0;
  bool deterministic = true;

  void validate() const;
};

/// Parses and schema-checks a JSON experiment config. Unknown or
/// ill-typed fields raise ConfigError naming the field path.
ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& origin = "<string>");

/// Inverse of parsing; parse(serialize(c)) is semantically identical to c.
std::string serialize_config(const ExperimentConfig& config);

/// Loads, splits, normalizes and (for mnist) PCA-reduces the dataset
/// named by the config. Deterministic given the config seed.
Split load_experiment_data(const ExperimentConfig& config);

/// Runs the training protocol; writes metrics.csv and params.txt under
/// out_dir and prints a summary line. Returns the result.
TrainResult run_train(const ExperimentConfig& config, std::ostream& log);

/// Writes/reads the params file (versioned header + one angle per line).
void save_params(const std::string& path, const ParamVector& params,
                 const CircuitSpec& spec, int rank);
ParamVector load_params(const std::string& path);

/// Oracle-equivalence and gradient-check suite over random circuits.
/// Prints one line per trial; returns true iff every error is under
/// tolerance (1e-8 amplitudes, 1e-4 relative gradients).
bool run_verify(int max_qubits, int depth, int trials, uint64_t seed,
                std::ostream& log);

struct BenchRow {
  int num_qubits = 0;
  double mean_forward_us = 0.0;
};

/// Mean tensor-ring forward time per qubit count (>= `reps` repetitions
/// each); writes CSV rows "N,mean_forward_us" to the stream.
std::vector<BenchRow> run_bench(const std::vector<int>& qubit_list, int rank,
                                int depth, int reps, std::ostream& log);

struct SweepRow {
  std::string param;
  int value = 0;
  size_t tr_parameters = 0;  // ring storage, N * chi^2 * 2
  double test_accuracy = 0.0;
};

/// Trains the config once per sweep value ("rank" or "layers"); returns
/// the table and writes sweep.csv under out_dir.
std::vector<SweepRow> run_sweep(const ExperimentConfig& config,
                                const std::string& sweep_param,
                                const std::vector<int>& values,
                                std::ostream& log);

}  // namespace trsim
