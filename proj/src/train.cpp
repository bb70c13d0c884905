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

#include "trsim/train.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "trsim/rng.hpp"

namespace trsim {
namespace {

constexpr double kLogFloor = 1e-12;

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double log_sigmoid(double x) {
  // -log(1 + exp(-x)) without overflow on either sign.
  if (x >= 0.0) return -std::log1p(std::exp(-x));
  return x - std::log1p(std::exp(x));
}

void check_label(size_t readout_size, int label) {
  if (label < 0 || static_cast<size_t>(label) >= readout_size) {
    throw std::invalid_argument("label out of range for readout vector");
  }
}

/// Runs fn(i) for i in [0, count) on up to `threads` workers. Results
/// must be written to per-index slots so the reduction stays ordered.
void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  if (threads <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  const int workers = std::min(threads, count);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  std::atomic<int> next{0};
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

FeatureVector sample_features(const Dataset& dataset, int row) {
  const int d = dataset.num_features();
  FeatureVector features(static_cast<size_t>(d));
  for (int j = 0; j < d; ++j) {
    features[static_cast<size_t>(j)] = dataset.features(row, j);
  }
  return features;
}

}  // namespace

LossKind loss_kind_from_string(const std::string& name) {
  if (name == "sigmoid_ce") return LossKind::SigmoidCrossEntropy;
  if (name == "logsigmoid_nll") return LossKind::LogSigmoidNll;
  throw std::invalid_argument("unknown loss kind \"" + name +
                              "\" (expected sigmoid_ce or logsigmoid_nll)");
}

std::string to_string(LossKind kind) {
  return kind == LossKind::SigmoidCrossEntropy ? "sigmoid_ce"
                                               : "logsigmoid_nll";
}

LossResult loss_sigmoid_ce(const std::vector<double>& readout, int label) {
  check_label(readout.size(), label);
  const size_t k = readout.size();
  std::vector<double> q(k);
  double total = 0.0;
  for (size_t c = 0; c < k; ++c) {
    q[c] = sigmoid(readout[c]);
    total += q[c];
  }
  const double p_label = std::max(q[static_cast<size_t>(label)] / total,
                                  kLogFloor);
  LossResult result;
  result.loss = -std::log(p_label);
  result.grad.assign(k, 0.0);
  // d loss / d q_c = 1/total - delta(c,label)/q_label, then the sigmoid
  // derivative q(1-q) per coordinate.
  for (size_t c = 0; c < k; ++c) {
    double dq = 1.0 / total;
    if (static_cast<int>(c) == label) dq -= 1.0 / q[c];
    result.grad[c] = dq * q[c] * (1.0 - q[c]);
  }
  return result;
}

LossResult loss_logsigmoid_nll(const std::vector<double>& readout, int label) {
  check_label(readout.size(), label);
  const size_t k = readout.size();
  std::vector<double> scores(k);
  for (size_t c = 0; c < k; ++c) scores[c] = log_sigmoid(readout[c]);

  const double z_max = *std::max_element(scores.begin(), scores.end());
  double sum_exp = 0.0;
  for (double z : scores) sum_exp += std::exp(z - z_max);
  const double lse = z_max + std::log(sum_exp);

  LossResult result;
  result.loss = -scores[static_cast<size_t>(label)] + lse;
  result.grad.assign(k, 0.0);
  for (size_t c = 0; c < k; ++c) {
    const double softmax_c = std::exp(scores[c] - lse);
    double dz = softmax_c;
    if (static_cast<int>(c) == label) dz -= 1.0;
    // d log_sigmoid(x) / dx = 1 - sigmoid(x)
    result.grad[c] = dz * (1.0 - sigmoid(readout[c]));
  }
  return result;
}

LossResult eval_loss(LossKind kind, const std::vector<double>& readout,
                     int label) {
  return kind == LossKind::SigmoidCrossEntropy
             ? loss_sigmoid_ce(readout, label)
             : loss_logsigmoid_nll(readout, label);
}

void TrainConfig::validate() const {
  if (!(learning_rate >= 0.0)) {
    throw std::invalid_argument("learning_rate must be >= 0");
  }
  if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
}

AdamState AdamState::zeros(size_t size) {
  AdamState state;
  state.m.assign(size, 0.0);
  state.v.assign(size, 0.0);
  return state;
}

void adam_step(std::vector<double>& params, const std::vector<double>& grads,
               AdamState& state, const TrainConfig& config) {
  if (params.size() != grads.size() || params.size() != state.m.size()) {
    throw std::invalid_argument("adam_step shape mismatch");
  }
  state.t += 1;
  const double b1 = config.adam_beta1;
  const double b2 = config.adam_beta2;
  const double m_corr = 1.0 - std::pow(b1, static_cast<double>(state.t));
  const double v_corr = 1.0 - std::pow(b2, static_cast<double>(state.t));
  for (size_t i = 0; i < params.size(); ++i) {
    state.m[i] = b1 * state.m[i] + (1.0 - b1) * grads[i];
    state.v[i] = b2 * state.v[i] + (1.0 - b2) * grads[i] * grads[i];
    const double m_hat = state.m[i] / m_corr;
    const double v_hat = state.v[i] / v_corr;
    params[i] -= config.learning_rate * m_hat /
                 (std::sqrt(v_hat) + config.adam_eps);
  }
}

int predict_class(const std::vector<double>& readout) {
  int best = 0;
  for (size_t c = 1; c < readout.size(); ++c) {
    if (readout[c] > readout[static_cast<size_t>(best)]) {
      best = static_cast<int>(c);
    }
  }
  return best;
}

double evaluate(const CircuitSpec& spec, const ParamVector& params,
                const Dataset& dataset, int rank, int threads) {
  if (dataset.num_samples() == 0) {
    throw std::invalid_argument("cannot evaluate on an empty dataset");
  }
  std::vector<int> hits(static_cast<size_t>(dataset.num_samples()), 0);
  parallel_for(dataset.num_samples(), threads, [&](int i) {
    const TensorRing ring =
        forward(spec, params, sample_features(dataset, i), rank);
    const auto probs = readout(ring, spec.readout_states);
    hits[static_cast<size_t>(i)] =
        predict_class(probs) == dataset.labels[static_cast<size_t>(i)] ? 1 : 0;
  });
  const double correct = std::accumulate(hits.begin(), hits.end(), 0.0);
  return correct / static_cast<double>(dataset.num_samples());
}

std::string Metrics::to_csv() const {
  std::string out = "epoch,loss,train_acc,test_acc,seconds\n";
  char line[160];
  for (const EpochMetrics& e : epochs) {
    std::snprintf(line, sizeof(line), "%d,%.12g,%.12g,%.12g,%.3f\n", e.epoch,
                  e.train_loss, e.train_accuracy, e.test_accuracy, e.seconds);
    out += line;
  }
  return out;
}

TrainResult train(const CircuitSpec& spec, const Split& split,
                  const TrainConfig& config, int rank) {
  spec.validate();
  config.validate();
  split.train.validate();
  split.test.validate();
  if (split.train.num_samples() == 0) {
    throw std::invalid_argument("training split is empty");
  }
  if (static_cast<int>(spec.readout_states.size()) < split.train.class_count) {
    throw std::invalid_argument("fewer readout states than classes");
  }

  TrainResult result;
  result.params = ParamVector::random_init(spec.num_qubits, spec.num_layers,
                                           config.seed);
  AdamState adam = AdamState::zeros(result.params.values.size());
  Rng shuffle_rng = Rng::stream(config.seed, /*tag=*/0x73687566666cULL);

  std::vector<int> order(static_cast<size_t>(split.train.num_samples()));
  std::iota(order.begin(), order.end(), 0);

  const size_t param_count = result.params.values.size();
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    shuffle_rng.shuffle(order);

    double epoch_loss = 0.0;
    int seen = 0;
    for (size_t begin = 0; begin < order.size();
         begin += static_cast<size_t>(config.batch_size)) {
      const size_t end =
          std::min(begin + static_cast<size_t>(config.batch_size), order.size());
      const int batch = static_cast<int>(end - begin);
      std::vector<GradVector> grads(static_cast<size_t>(batch));
      std::vector<double> losses(static_cast<size_t>(batch), 0.0);
      parallel_for(batch, config.threads, [&](int b) {
        const int row = order[begin + static_cast<size_t>(b)];
        const Tape tape = forward_with_tape(
            spec, result.params, sample_features(split.train, row), rank);
        const LossResult loss = eval_loss(
            config.loss_kind, tape.readout,
            split.train.labels[static_cast<size_t>(row)]);
        losses[static_cast<size_t>(b)] = loss.loss;
        grads[static_cast<size_t>(b)] = backward(tape, loss.grad);
      });

      GradVector mean_grad(param_count, 0.0);
      for (int b = 0; b < batch; ++b) {
        for (size_t i = 0; i < param_count; ++i) {
          mean_grad[i] += grads[static_cast<size_t>(b)][i];
        }
        epoch_loss += losses[static_cast<size_t>(b)];
      }
      for (double& g : mean_grad) g /= static_cast<double>(batch);
      adam_step(result.params.values, mean_grad, adam, config);
      seen += batch;
    }

    EpochMetrics metrics;
    metrics.epoch = epoch;
    metrics.train_loss = epoch_loss / static_cast<double>(seen);
    metrics.train_accuracy =
        evaluate(spec, result.params, split.train, rank, config.threads);
    metrics.test_accuracy =
        split.test.num_samples() > 0
            ? evaluate(spec, result.params, split.test, rank, config.threads)
            : 0.0;
    metrics.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    result.metrics.epochs.push_back(metrics);
  }
  return result;
}

}  // namespace trsim
