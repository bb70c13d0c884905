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

#include <cstdint>
#include <string>
#include <vector>

#include "trsim/autodiff.hpp"
#include "trsim/circuit.hpp"
#include "trsim/data.hpp"

namespace trsim {

enum class LossKind { SigmoidCrossEntropy, LogSigmoidNll };

LossKind loss_kind_from_string(const std::string& name);
std::string to_string(LossKind kind);

struct LossResult {
  double loss = 0.0;
  std::vector<double> grad;  // d loss / d readout_c
};

/// Sigmoid of each readout value, normalized to a distribution, then
/// cross entropy against the label. log is floored at 1e-12.
LossResult loss_sigmoid_ce(const std::vector<double>& readout, int label);

/// Log-sigmoid scores with a negative log likelihood over them
/// (log-sum-exp computed stably).
LossResult loss_logsigmoid_nll(const std::vector<double>& readout, int label);

LossResult eval_loss(LossKind kind, const std::vector<double>& readout,
                     int label);

struct TrainConfig {
  double learning_rate = 0.001;
  int batch_size = 4;
  int epochs = 50;
  uint64_t seed = 0;
  LossKind loss_kind = LossKind::SigmoidCrossEntropy;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  int threads = 1;

  void validate() const;
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  int64_t t = 0;

  static AdamState zeros(size_t size);
};

/// Standard bias-corrected Adam update, in place.
void adam_step(std::vector<double>& params, const std::vector<double>& grads,
               AdamState& state, const TrainConfig& config);

struct EpochMetrics {
  int epoch = 0;
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  double seconds = 0.0;
};

struct Metrics {
  std::vector<EpochMetrics> epochs;

  double final_test_accuracy() const {
    return epochs.empty() ? 0.0 : epochs.back().test_accuracy;
  }
  /// CSV body (epoch,loss,train_acc,test_acc,seconds), header included.
  std::string to_csv() const;
};

struct TrainResult {
  ParamVector params;
  Metrics metrics;
};

/// Seeded training run: init uniform in [-pi, pi], shuffle every epoch,
/// mean batch gradient, Adam step. Deterministic for a fixed seed; the
/// batch may be evaluated on several threads, gradients are always
/// reduced in sample order.
TrainResult train(const CircuitSpec& spec, const Split& split,
                  const TrainConfig& config, int rank);

/// Argmax-readout accuracy over a dataset.
double evaluate(const CircuitSpec& spec, const ParamVector& params,
                const Dataset& dataset, int rank, int threads = 1);

/// Argmax with ties resolved to the lowest class index.
int predict_class(const std::vector<double>& readout);

}  // namespace trsim
