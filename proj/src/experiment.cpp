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

#include "trsim/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "trsim/autodiff.hpp"
#include "trsim/oracle.hpp"
#include "trsim/rng.hpp"

namespace trsim {
namespace {

using nlohmann::json;

[[noreturn]] void config_fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

void check_known_fields(const json& object, const std::string& path,
                        const std::vector<std::string>& known) {
  for (const auto& [key, value] : object.items()) {
    (void)value;
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      config_fail(path + "." + key, "unknown field");
    }
  }
}

template <typename T>
T get_field(const json& object, const std::string& path, const std::string& key,
            const T& fallback, bool required = false) {
  if (!object.contains(key)) {
    if (required) config_fail(path + "." + key, "missing required field");
    return fallback;
  }
  try {
    return object.at(key).get<T>();
  } catch (const json::exception&) {
    config_fail(path + "." + key, "wrong type");
  }
}

std::string two_class_default(int num_qubits, int which) {
  return std::string(static_cast<size_t>(num_qubits), which == 0 ? '0' : '1');
}

std::string one_hot_default(int num_qubits, int which) {
  std::string bits(static_cast<size_t>(num_qubits), '0');
  bits[static_cast<size_t>(num_qubits - 1 - which)] = '1';
  return bits;
}

/// Default readout states for `classes` classes: |0..0> and |1..1> for a
/// binary problem, one-hot basis states otherwise.
std::vector<BitString> default_readout_states(int num_qubits, int classes) {
  std::vector<BitString> states;
  for (int c = 0; c < classes; ++c) {
    states.push_back(parse_bits(classes == 2 ? two_class_default(num_qubits, c)
                                             : one_hot_default(num_qubits, c)));
  }
  return states;
}

Split load_raw_split(const ExperimentConfig& config) {
  const DatasetConfig& d = config.dataset;
  try {
    if (d.kind == "iris") {
      const Dataset dataset = load_iris(d.path);
      return split_dataset(dataset, d.split_ratio, config.seed);
    }
    if (d.kind == "csv") {
      const Dataset dataset = load_feature_csv(d.path);
      return split_dataset(dataset, d.split_ratio, config.seed);
    }
    if (d.kind == "mnist") {
      Dataset train = load_mnist_idx(d.images_path, d.labels_path, d.classes);
      if (d.train_subset > 0 && d.train_subset < train.num_samples()) {
        train = subsample(train, d.train_subset, config.seed);
      }
      Split split;
      split.seed = config.seed;
      if (!d.test_images_path.empty()) {
        split.train = std::move(train);
        split.test =
            load_mnist_idx(d.test_images_path, d.test_labels_path, d.classes);
        split.ratio = 1.0;
      } else {
        split = split_dataset(train, d.split_ratio, config.seed);
      }
      return split;
    }
  } catch (const std::exception& e) {
    throw DataError(e.what());
  }
  throw ConfigError("dataset.kind: expected iris, mnist or csv, got \"" +
                    d.kind + "\"");
}

double elapsed_us(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double, std::micro>(
             std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

void ExperimentConfig::validate() const {
  if (dataset.kind != "iris" && dataset.kind != "mnist" &&
      dataset.kind != "csv") {
    config_fail("dataset.kind", "expected iris, mnist or csv");
  }
  if (dataset.kind == "mnist") {
    if (dataset.images_path.empty() || dataset.labels_path.empty()) {
      config_fail("dataset.images_path", "mnist needs images/labels paths");
    }
    if (dataset.classes.size() < 2) {
      config_fail("dataset.classes", "need at least 2 classes");
    }
  } else if (dataset.path.empty()) {
    config_fail("dataset.path", "missing data file path");
  }
  if (dataset.feature_dim < 1) {
    config_fail("dataset.feature_dim", "must be >= 1");
  }
  if (circuit.num_qubits != dataset.feature_dim) {
    config_fail("circuit.num_qubits",
                "must equal dataset.feature_dim (one qubit per feature)");
  }
  if (!(dataset.normalize_hi > dataset.normalize_lo)) {
    config_fail("dataset.normalize_hi", "must exceed normalize_lo");
  }
  if (rank < 1) config_fail("circuit.rank", "must be >= 1");
  try {
    circuit.validate();
    train.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(origin + ": invalid JSON: " + e.what());
  }
  if (!root.is_object()) throw ConfigError(origin + ": expected a JSON object");
  check_known_fields(root, "config",
                     {"seed", "out_dir", "deterministic", "dataset", "circuit",
                      "train"});

  ExperimentConfig config;
  config.seed = get_field<uint64_t>(root, "config", "seed", 0);
  config.out_dir = get_field<std::string>(root, "config", "out_dir", ".");
  config.deterministic = get_field<bool>(root, "config", "deterministic", true);

  if (!root.contains("dataset") || !root.at("dataset").is_object()) {
    config_fail("config.dataset", "missing required object");
  }
  const json& d = root.at("dataset");
  check_known_fields(d, "dataset",
                     {"kind", "path", "images_path", "labels_path",
                      "test_images_path", "test_labels_path", "classes",
                      "feature_dim", "train_subset", "split_ratio",
                      "normalize_lo", "normalize_hi"});
  config.dataset.kind = get_field<std::string>(d, "dataset", "kind", "", true);
  config.dataset.path = get_field<std::string>(d, "dataset", "path", "");
  config.dataset.images_path =
      get_field<std::string>(d, "dataset", "images_path", "");
  config.dataset.labels_path =
      get_field<std::string>(d, "dataset", "labels_path", "");
  config.dataset.test_images_path =
      get_field<std::string>(d, "dataset", "test_images_path", "");
  config.dataset.test_labels_path =
      get_field<std::string>(d, "dataset", "test_labels_path", "");
  config.dataset.classes =
      get_field<std::vector<int>>(d, "dataset", "classes", {});
  config.dataset.feature_dim =
      get_field<int>(d, "dataset", "feature_dim", 0, true);
  config.dataset.train_subset = get_field<int>(d, "dataset", "train_subset", 0);
  config.dataset.split_ratio =
      get_field<double>(d, "dataset", "split_ratio", 0.8);
  config.dataset.normalize_lo =
      get_field<double>(d, "dataset", "normalize_lo", 0.0);
  config.dataset.normalize_hi =
      get_field<double>(d, "dataset", "normalize_hi", M_PI);

  if (!root.contains("circuit") || !root.at("circuit").is_object()) {
    config_fail("config.circuit", "missing required object");
  }
  const json& c = root.at("circuit");
  check_known_fields(c, "circuit",
                     {"num_qubits", "num_layers", "rank", "wrap_cnot",
                      "pre_hadamard", "readout_states"});
  config.circuit.num_qubits = get_field<int>(c, "circuit", "num_qubits", 0, true);
  config.circuit.num_layers = get_field<int>(c, "circuit", "num_layers", 0, true);
  config.rank = get_field<int>(c, "circuit", "rank", 4);
  config.circuit.wrap_cnot = get_field<bool>(c, "circuit", "wrap_cnot", true);
  config.circuit.pre_hadamard =
      get_field<bool>(c, "circuit", "pre_hadamard", false);
  const auto readout_strings =
      get_field<std::vector<std::string>>(c, "circuit", "readout_states", {});
  for (const std::string& text : readout_strings) {
    try {
      config.circuit.readout_states.push_back(parse_bits(text));
    } catch (const std::exception& e) {
      config_fail("circuit.readout_states", e.what());
    }
  }

  if (!root.contains("train") || !root.at("train").is_object()) {
    config_fail("config.train", "missing required object");
  }
  const json& t = root.at("train");
  check_known_fields(t, "train",
                     {"learning_rate", "batch_size", "epochs", "loss",
                      "adam_beta1", "adam_beta2", "adam_eps", "threads"});
  config.train.learning_rate =
      get_field<double>(t, "train", "learning_rate", 0.001);
  config.train.batch_size = get_field<int>(t, "train", "batch_size", 4);
  config.train.epochs = get_field<int>(t, "train", "epochs", 50);
  const std::string loss_name =
      get_field<std::string>(t, "train", "loss", "sigmoid_ce");
  try {
    config.train.loss_kind = loss_kind_from_string(loss_name);
  } catch (const std::exception& e) {
    config_fail("train.loss", e.what());
  }
  config.train.adam_beta1 = get_field<double>(t, "train", "adam_beta1", 0.9);
  config.train.adam_beta2 = get_field<double>(t, "train", "adam_beta2", 0.999);
  config.train.adam_eps = get_field<double>(t, "train", "adam_eps", 1e-8);
  config.train.threads = get_field<int>(t, "train", "threads", 1);
  config.train.seed = config.seed;

  config.validate();
  return config;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw ConfigError("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << file.rdbuf();
  return parse_config_text(buffer.str(), path);
}

std::string serialize_config(const ExperimentConfig& config) {
  json root;
  root["seed"] = config.seed;
  root["out_dir"] = config.out_dir;
  root["deterministic"] = config.deterministic;

  json d;
  d["kind"] = config.dataset.kind;
  if (!config.dataset.path.empty()) d["path"] = config.dataset.path;
  if (!config.dataset.images_path.empty()) {
    d["images_path"] = config.dataset.images_path;
    d["labels_path"] = config.dataset.labels_path;
  }
  if (!config.dataset.test_images_path.empty()) {
    d["test_images_path"] = config.dataset.test_images_path;
    d["test_labels_path"] = config.dataset.test_labels_path;
  }
  if (!config.dataset.classes.empty()) d["classes"] = config.dataset.classes;
  d["feature_dim"] = config.dataset.feature_dim;
  if (config.dataset.train_subset > 0) {
    d["train_subset"] = config.dataset.train_subset;
  }
  d["split_ratio"] = config.dataset.split_ratio;
  d["normalize_lo"] = config.dataset.normalize_lo;
  d["normalize_hi"] = config.dataset.normalize_hi;
  root["dataset"] = d;

  json c;
  c["num_qubits"] = config.circuit.num_qubits;
  c["num_layers"] = config.circuit.num_layers;
  c["rank"] = config.rank;
  c["wrap_cnot"] = config.circuit.wrap_cnot;
  c["pre_hadamard"] = config.circuit.pre_hadamard;
  if (!config.circuit.readout_states.empty()) {
    std::vector<std::string> states;
    for (const BitString& bits : config.circuit.readout_states) {
      states.push_back(format_bits(bits));
    }
    c["readout_states"] = states;
  }
  root["circuit"] = c;

  json t;
  t["learning_rate"] = config.train.learning_rate;
  t["batch_size"] = config.train.batch_size;
  t["epochs"] = config.train.epochs;
  t["loss"] = to_string(config.train.loss_kind);
  t["adam_beta1"] = config.train.adam_beta1;
  t["adam_beta2"] = config.train.adam_beta2;
  t["adam_eps"] = config.train.adam_eps;
  t["threads"] = config.train.threads;
  root["train"] = t;
  return root.dump(2) + "\n";
}

Split load_experiment_data(const ExperimentConfig& config) {
  Split split = load_raw_split(config);
  if (config.dataset.kind == "mnist") {
    if (config.dataset.feature_dim > split.train.num_features()) {
      throw ConfigError("dataset.feature_dim: exceeds image pixel count");
    }
    if (config.dataset.feature_dim < split.train.num_features()) {
      split = reduce_features(split, config.dataset.feature_dim);
    }
  } else if (split.train.num_features() != config.dataset.feature_dim) {
    throw ConfigError("dataset.feature_dim: file has " +
                      std::to_string(split.train.num_features()) +
                      " features, config says " +
                      std::to_string(config.dataset.feature_dim));
  }
  return normalize_minmax(split, config.dataset.normalize_lo,
                          config.dataset.normalize_hi);
}

void save_params(const std::string& path, const ParamVector& params,
                 const CircuitSpec& spec, int rank) {
  std::ofstream file(path);
  if (!file) throw DataError("cannot write params file: " + path);
  file << "# trsim params v1\n";
  file << "# num_qubits=" << spec.num_qubits << " num_layers=" << spec.num_layers
       << " rank=" << rank << "\n";
  char line[48];
  for (double value : params.values) {
    std::snprintf(line, sizeof(line), "%.17g\n", value);
    file << line;
  }
}

ParamVector load_params(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw DataError("cannot open params file: " + path);
  std::string header;
  std::getline(file, header);
  if (header.rfind("# trsim params v1", 0) != 0) {
    throw DataError("unrecognized params file header: " + header);
  }
  ParamVector params;
  std::string line;
  while (std::getline(file, line)) {
    if (line.empty() || line[0] == '#') continue;
    params.values.push_back(std::stod(line));
  }
  return params;
}

TrainResult run_train(const ExperimentConfig& config, std::ostream& log) {
  Split split = load_experiment_data(config);

  CircuitSpec spec = config.circuit;
  if (spec.readout_states.empty()) {
    spec.readout_states =
        default_readout_states(spec.num_qubits, split.train.class_count);
  }
  if (static_cast<int>(spec.readout_states.size()) !=
      split.train.class_count) {
    throw ConfigError("circuit.readout_states: got " +
                      std::to_string(spec.readout_states.size()) +
                      " states for " +
                      std::to_string(split.train.class_count) + " classes");
  }

  // Gradient reduction is always sample-ordered, so results match the
  // single-threaded run for any thread count.
  const TrainResult result = train(spec, split, config.train, config.rank);

  std::filesystem::create_directories(config.out_dir);
  {
    std::ofstream metrics(config.out_dir + "/metrics.csv");
    if (!metrics) throw DataError("cannot write metrics.csv in " + config.out_dir);
    metrics << result.metrics.to_csv();
  }
  save_params(config.out_dir + "/params.txt", result.params, spec, config.rank);

  char summary[128];
  std::snprintf(summary, sizeof(summary),
                "final test accuracy: %.4f (train %.4f, %d epochs)\n",
                result.metrics.final_test_accuracy(),
                result.metrics.epochs.back().train_accuracy,
                config.train.epochs);
  log << summary;
  return result;
}

bool run_verify(int max_qubits, int depth, int trials, uint64_t seed,
                std::ostream& log) {
  if (max_qubits < 2 || max_qubits > kMaxOracleQubits) {
    throw ConfigError("verify: max_qubits must be in [2, 16], got " +
                      std::to_string(max_qubits));
  }
  if (depth < 0 || trials < 1) {
    throw ConfigError("verify: depth must be >= 0 and trials >= 1");
  }
  constexpr double kAmpTol = 1e-8;
  constexpr double kGradRelTol = 1e-4;
  constexpr double kGradAbsTol = 1e-6;

  bool all_ok = true;
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng = Rng::stream(seed, 0xbe7c000 + static_cast<uint64_t>(trial));
    const int n = 2 + static_cast<int>(rng.uniform_int(
                          static_cast<uint64_t>(max_qubits - 1)));
    // Exactness rank. At N=2 the wrap-around pair shares both bonds, so
    // the pair matrix rank reaches 2*chi and needs chi=4 to stay exact.
    const int chi = n == 2 ? 4 : 1 << ((n + 1) / 2);
    // A wrapped ring stays exact only while chi >= 2^depth (each
    // entangler layer can double the pair-matrix rank), so the sampled
    // depth is capped at log2(chi).
    int max_depth = 0;
    while ((1 << (max_depth + 1)) <= chi) ++max_depth;
    max_depth = std::min(max_depth, depth);
    const int d = static_cast<int>(rng.uniform_int(
        static_cast<uint64_t>(max_depth + 1)));

    CircuitSpec spec;
    spec.num_qubits = n;
    spec.num_layers = d;
    spec.readout_states = default_readout_states(n, 2);
    const ParamVector params =
        ParamVector::random_init(n, d, rng.next_u64());
    FeatureVector features(static_cast<size_t>(n));
    for (double& f : features) f = rng.uniform(0.0, M_PI);

    const TensorRing ring = forward(spec, params, features, chi);
    const StateVector sv = sv_forward(spec, params, features);
    double amp_err = 0.0;
    for (uint64_t idx = 0; idx < sv.amps.size(); ++idx) {
      const BitString bits = index_to_bits(idx, n);
      amp_err = std::max(amp_err,
                         std::abs(amplitude(ring, bits) - sv.amps[idx]));
    }

    // Gradient check on a capped size (central differences are O(P)
    // forward passes per probe).
    const int gn = std::min(n, 6);
    const int gd = std::min(d, 2);
    const int gchi = 1 << ((gn + 1) / 2);
    CircuitSpec grad_spec;
    grad_spec.num_qubits = gn;
    grad_spec.num_layers = gd;
    grad_spec.readout_states = default_readout_states(gn, 2);
    const ParamVector grad_params =
        ParamVector::random_init(gn, gd, rng.next_u64());
    FeatureVector grad_features(static_cast<size_t>(gn));
    for (double& f : grad_features) f = rng.uniform(0.0, M_PI);

    const Tape tape =
        forward_with_tape(grad_spec, grad_params, grad_features, gchi);
    const LossResult loss =
        loss_sigmoid_ce(tape.readout, /*label=*/0);
    const GradVector analytic = backward(tape, loss.grad);
    const GradVector numeric = finite_diff_grad(
        make_circuit_loss(grad_spec, grad_features, gchi,
                          [](const std::vector<double>& r) {
                            return loss_sigmoid_ce(r, 0).loss;
                          }),
        grad_params, 1e-5);
    double grad_err = 0.0;
    for (size_t i = 0; i < analytic.size(); ++i) {
      const double diff = std::abs(analytic[i] - numeric[i]);
      const double scale = std::abs(numeric[i]);
      grad_err = std::max(grad_err,
                          scale >= 1e-2 ? diff / scale
                                        : diff / (kGradAbsTol / kGradRelTol));
    }

    const bool ok = amp_err < kAmpTol && grad_err < kGradRelTol;
    all_ok = all_ok && ok;
    char line[160];
    std::snprintf(line, sizeof(line),
                  "trial %2d: N=%2d d=%d chi=%3d max_amp_err=%.3e "
                  "max_grad_rel_err=%.3e %s\n",
                  trial, n, d, chi, amp_err, grad_err, ok ? "ok" : "FAIL");
    log << line;
  }
  return all_ok;
}

std::vector<BenchRow> run_bench(const std::vector<int>& qubit_list, int rank,
                                int depth, int reps, std::ostream& log) {
  if (qubit_list.empty()) throw ConfigError("bench: empty qubit list");
  if (reps < 1) throw ConfigError("bench: reps must be >= 1");

  std::vector<BenchRow> rows;
  log << "num_qubits,mean_forward_us\n";
  for (int n : qubit_list) {
    if (n < 2) throw ConfigError("bench: qubit counts must be >= 2");
    CircuitSpec spec;
    spec.num_qubits = n;
    spec.num_layers = depth;
    spec.readout_states = default_readout_states(n, 2);
    Rng rng = Rng::stream(0xbe7c4, static_cast<uint64_t>(n));
    const ParamVector params = ParamVector::random_init(n, depth, rng.next_u64());
    FeatureVector features(static_cast<size_t>(n));
    for (double& f : features) f = rng.uniform(0.0, M_PI);

    for (int warm = 0; warm < 3; ++warm) {
      (void)forward(spec, params, features, rank);
    }
    const auto start = std::chrono::steady_clock::now();
    for (int rep = 0; rep < reps; ++rep) {
      (void)forward(spec, params, features, rank);
    }
    BenchRow row;
    row.num_qubits = n;
    row.mean_forward_us = elapsed_us(start) / reps;
    rows.push_back(row);
    char line[64];
    std::snprintf(line, sizeof(line), "%d,%.2f\n", n, row.mean_forward_us);
    log << line;
  }
  if (rows.size() >= 2) {
    char line[96];
    std::snprintf(line, sizeof(line), "# t(N=%d)/t(N=%d) = %.2f\n",
                  rows.back().num_qubits, rows.front().num_qubits,
                  rows.back().mean_forward_us / rows.front().mean_forward_us);
    log << line;
  }
  return rows;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& config,
                                const std::string& sweep_param,
                                const std::vector<int>& values,
                                std::ostream& log) {
  if (values.empty()) throw ConfigError("sweep: empty value list");
  if (sweep_param != "rank" && sweep_param != "layers") {
    throw ConfigError("sweep: parameter must be \"rank\" or \"layers\"");
  }

  std::vector<SweepRow> rows;
  log << "param,value,tr_parameters,test_accuracy\n";
  for (int value : values) {
    ExperimentConfig cell = config;
    cell.out_dir = config.out_dir + "/" + sweep_param + "_" +
                   std::to_string(value);
    if (sweep_param == "rank") {
      cell.rank = value;
    } else {
      cell.circuit.num_layers = value;
    }
    std::ostringstream cell_log;
    const TrainResult result = run_train(cell, cell_log);

    SweepRow row;
    row.param = sweep_param;
    row.value = value;
    row.tr_parameters = static_cast<size_t>(cell.circuit.num_qubits) *
                        static_cast<size_t>(cell.rank) *
                        static_cast<size_t>(cell.rank) * 2;
    row.test_accuracy = result.metrics.final_test_accuracy();
    rows.push_back(row);
    char line[96];
    std::snprintf(line, sizeof(line), "%s,%d,%zu,%.4f\n", sweep_param.c_str(),
                  value, row.tr_parameters, row.test_accuracy);
    log << line;
  }

  std::filesystem::create_directories(config.out_dir);
  std::ofstream csv(config.out_dir + "/sweep.csv");
  csv << "param,value,tr_parameters,test_accuracy\n";
  for (const SweepRow& row : rows) {
    char line[96];
    std::snprintf(line, sizeof(line), "%s,%d,%zu,%.4f\n", row.param.c_str(),
                  row.value, row.tr_parameters, row.test_accuracy);
    csv << line;
  }
  return rows;
}

}  // namespace trsim
