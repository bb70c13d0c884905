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

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "trsim/experiment.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  int64_t seed = -1;
  std::string out_dir;
  int threads = 0;
  bool deterministic = false;
};

trsim::ExperimentConfig load_config(const CommonFlags& flags) {
  trsim::ExperimentConfig config = trsim::parse_config_file(flags.config_path);
  if (flags.seed >= 0) {
    config.seed = static_cast<uint64_t>(flags.seed);
    config.train.seed = config.seed;
  }
  if (!flags.out_dir.empty()) config.out_dir = flags.out_dir;
  if (flags.threads > 0) config.train.threads = flags.threads;
  if (flags.deterministic) config.deterministic = true;
  config.validate();
  return config;
}

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "experiment config (JSON)")
      ->required();
  cmd->add_option("--seed", flags.seed, "override the config seed");
  cmd->add_option("--out-dir", flags.out_dir, "override the output directory");
  cmd->add_option("--threads", flags.threads, "override the thread count");
  cmd->add_flag("--deterministic", flags.deterministic,
                "force deterministic mode");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "trsim: tensor-ring simulator and trainer for variational quantum "
      "classifiers"};
  app.require_subcommand(1);

  CommonFlags train_flags;
  CLI::App* train_cmd =
      app.add_subcommand("train", "train a classifier from a config file");
  add_common(train_cmd, train_flags);

  CommonFlags sweep_flags;
  std::string sweep_param;
  std::vector<int> sweep_values;
  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "train the config once per rank/layer value");
  add_common(sweep_cmd, sweep_flags);
  sweep_cmd->add_option("--param", sweep_param, "rank | layers")->required();
  sweep_cmd->add_option("--values", sweep_values, "sweep values")->required();

  int verify_max_qubits = 8;
  int verify_depth = 3;
  int verify_trials = 20;
  int64_t verify_seed = 42;
  CLI::App* verify_cmd = app.add_subcommand(
      "verify", "check tensor-ring amplitudes and gradients against the "
                "dense statevector oracle");
  verify_cmd->add_option("--max-qubits", verify_max_qubits,
                         "largest circuit width (<= 16)");
  verify_cmd->add_option("--depth", verify_depth, "largest layer count");
  verify_cmd->add_option("--trials", verify_trials, "number of random circuits");
  verify_cmd->add_option("--seed", verify_seed, "RNG seed");

  std::vector<int> bench_qubits{4, 8, 16, 32, 64};
  int bench_rank = 4;
  int bench_depth = 2;
  int bench_reps = 100;
  CLI::App* bench_cmd =
      app.add_subcommand("bench", "time the forward pass per qubit count");
  bench_cmd->add_option("--qubits", bench_qubits, "qubit counts");
  bench_cmd->add_option("--rank", bench_rank, "tensor-ring rank");
  bench_cmd->add_option("--depth", bench_depth, "layer count");
  bench_cmd->add_option("--reps", bench_reps, "repetitions per qubit count");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train_cmd->parsed()) {
      trsim::run_train(load_config(train_flags), std::cout);
      return trsim::kExitOk;
    }
    if (sweep_cmd->parsed()) {
      trsim::run_sweep(load_config(sweep_flags), sweep_param, sweep_values,
                       std::cout);
      return trsim::kExitOk;
    }
    if (verify_cmd->parsed()) {
      const bool ok =
          trsim::run_verify(verify_max_qubits, verify_depth, verify_trials,
                            static_cast<uint64_t>(verify_seed), std::cout);
      if (!ok) {
        std::cerr << "verification failed\n";
        return trsim::kExitVerifyFailure;
      }
      return trsim::kExitOk;
    }
    if (bench_cmd->parsed()) {
      trsim::run_bench(bench_qubits, bench_rank, bench_depth, bench_reps,
                       std::cout);
      return trsim::kExitOk;
    }
  } catch (const trsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return trsim::kExitConfigError;
  } catch (const trsim::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return trsim::kExitDataError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return trsim::kExitOk;
}
