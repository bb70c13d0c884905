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

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "test_utils.hpp"
#include "trsim/rng.hpp"
#include "trsim/train.hpp"

using namespace trsim;
using namespace trsim::testing;

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Two well-separated Gaussian blobs on the feature square [0, pi]^2.
Split toy_blobs(int train_count, int test_count, uint64_t seed) {
  Rng rng(seed);
  auto fill = [&](int count) {
    Dataset d;
    d.class_count = 2;
    d.features.resize(count, 2);
    d.labels.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
      const int label = i % 2;
      const double cx = label == 0 ? 0.8 : 2.3;
      const double cy = label == 0 ? 0.8 : 2.3;
      d.features(i, 0) = std::clamp(cx + 0.25 * rng.normal(), 0.0, M_PI);
      d.features(i, 1) = std::clamp(cy + 0.25 * rng.normal(), 0.0, M_PI);
      d.labels.push_back(label);
    }
    return d;
  };
  Split split;
  split.train = fill(train_count);
  split.test = fill(test_count);
  split.ratio = 0.0;
  split.seed = seed;
  return split;
}

void check_loss_grad_fd(LossKind kind, const std::vector<double>& readout,
                        int label) {
  const LossResult base = eval_loss(kind, readout, label);
  const double eps = 1e-6;
  for (size_t c = 0; c < readout.size(); ++c) {
    std::vector<double> probe = readout;
    probe[c] += eps;
    const double up = eval_loss(kind, probe, label).loss;
    probe[c] -= 2 * eps;
    const double down = eval_loss(kind, probe, label).loss;
    const double fd = (up - down) / (2 * eps);
    CHECK(base.grad[c] == doctest::Approx(fd).epsilon(1e-6));
  }
}

}  // namespace

TEST_CASE("sigmoid cross entropy values") {
  // q = sigmoid(readout), normalized; loss = -log(q_label / sum).
  const LossResult a = loss_sigmoid_ce({1.0, 0.0, 0.0}, 0);
  const double expected =
      -std::log(sigmoid(1.0) / (sigmoid(1.0) + 2 * sigmoid(0.0)));
  CHECK(a.loss == doctest::Approx(expected).epsilon(1e-12));
  CHECK(a.loss == doctest::Approx(0.8620).epsilon(1e-4));

  // Uniform readouts: loss = log(3) whatever the label.
  for (int label = 0; label < 3; ++label) {
    const LossResult uniform = loss_sigmoid_ce({0.42, 0.42, 0.42}, label);
    CHECK(uniform.loss == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  }
}

TEST_CASE("log-sigmoid NLL values") {
  const LossResult equal = loss_logsigmoid_nll({0.37, 0.37}, 1);
  CHECK(equal.loss == doctest::Approx(std::log(2.0)).epsilon(1e-12));

  // Direct scalar evaluation for readout (1, 0), label 0.
  const double z0 = std::log(sigmoid(1.0));
  const double z1 = std::log(sigmoid(0.0));
  const double lse = std::log(std::exp(z0) + std::exp(z1));
  const LossResult r = loss_logsigmoid_nll({1.0, 0.0}, 0);
  CHECK(r.loss == doctest::Approx(-z0 + lse).epsilon(1e-12));
}

TEST_CASE("loss gradients match finite differences") {
  Rng rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> readout(3);
    for (double& r : readout) r = rng.uniform();
    const int label = static_cast<int>(rng.uniform_int(3));
    check_loss_grad_fd(LossKind::SigmoidCrossEntropy, readout, label);
    check_loss_grad_fd(LossKind::LogSigmoidNll, readout, label);
  }
}

TEST_CASE("losses are non-negative and reject bad labels") {
  Rng rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> readout(4);
    for (double& r : readout) r = rng.uniform();
    const int label = static_cast<int>(rng.uniform_int(4));
    CHECK(loss_sigmoid_ce(readout, label).loss >= 0.0);
    CHECK(loss_logsigmoid_nll(readout, label).loss >= 0.0);
  }
  CHECK_THROWS_AS(loss_sigmoid_ce({0.5, 0.5}, 2), std::invalid_argument);
  CHECK_THROWS_AS(loss_logsigmoid_nll({0.5, 0.5}, -1), std::invalid_argument);
}

TEST_CASE("adam step behavior") {
  TrainConfig config;
  config.learning_rate = 0.1;

  SUBCASE("zero gradient is the identity for all t") {
    std::vector<double> params = {0.3, -0.8};
    AdamState state = AdamState::zeros(2);
    for (int t = 0; t < 5; ++t) {
      adam_step(params, {0.0, 0.0}, state, config);
    }
    CHECK(params[0] == 0.3);
    CHECK(params[1] == -0.8);
  }
  SUBCASE("first step is -lr * g / (|g| + eps)") {
    std::vector<double> params = {1.0};
    AdamState state = AdamState::zeros(1);
    const double g = 0.5;
    adam_step(params, {g}, state, config);
    const double expected = 1.0 - 0.1 * g / (std::abs(g) + config.adam_eps);
    CHECK(params[0] == doctest::Approx(expected).epsilon(1e-12));
  }
  SUBCASE("converges on a scalar quadratic") {
    TrainConfig fast = config;
    fast.learning_rate = 0.3;
    std::vector<double> params = {0.0};
    AdamState state = AdamState::zeros(1);
    for (int t = 0; t < 100; ++t) {
      adam_step(params, {2.0 * (params[0] - 3.0)}, state, fast);
    }
    CHECK(std::abs(params[0] - 3.0) < 0.01);
  }
  SUBCASE("shape mismatch is rejected") {
    std::vector<double> params = {0.0};
    AdamState state = AdamState::zeros(2);
    CHECK_THROWS_AS(adam_step(params, {1.0}, state, config),
                    std::invalid_argument);
  }
}

TEST_CASE("train with zero learning rate keeps the initial parameters") {
  Split split = toy_blobs(16, 8, 3);
  CircuitSpec spec = basic_spec(2, 1);
  TrainConfig config;
  config.learning_rate = 0.0;
  config.epochs = 2;
  config.batch_size = 4;
  config.seed = 9;
  const TrainResult result = train(spec, split, config, 2);
  const ParamVector initial = ParamVector::random_init(2, 1, config.seed);
  CHECK(result.params.values == initial.values);
}

TEST_CASE("training separates the toy blobs") {
  Split split = toy_blobs(100, 50, 7);
  CircuitSpec spec = basic_spec(2, 1);
  TrainConfig config;
  config.learning_rate = 0.05;
  config.batch_size = 10;
  config.epochs = 50;
  config.seed = 1;
  const TrainResult result = train(spec, split, config, 2);
  CHECK(result.metrics.final_test_accuracy() >= 0.95);

  // Loss decreases, allowing a 3-epoch non-monotone window.
  const auto& epochs = result.metrics.epochs;
  for (size_t e = 3; e < epochs.size(); ++e) {
    const double window_best =
        std::min({epochs[e - 3].train_loss, epochs[e - 2].train_loss,
                  epochs[e - 1].train_loss});
    CHECK(epochs[e].train_loss < window_best + 0.05);
  }
  CHECK(epochs.back().train_loss < epochs.front().train_loss);
}

TEST_CASE("training is deterministic for a fixed seed") {
  Split split = toy_blobs(24, 12, 11);
  CircuitSpec spec = basic_spec(2, 1);
  TrainConfig config;
  config.learning_rate = 0.02;
  config.batch_size = 6;
  config.epochs = 4;
  config.seed = 5;
  const TrainResult a = train(spec, split, config, 2);
  const TrainResult b = train(spec, split, config, 2);
  CHECK(a.params.values == b.params.values);
  REQUIRE(a.metrics.epochs.size() == b.metrics.epochs.size());
  for (size_t e = 0; e < a.metrics.epochs.size(); ++e) {
    CHECK(a.metrics.epochs[e].train_loss == b.metrics.epochs[e].train_loss);
    CHECK(a.metrics.epochs[e].train_accuracy ==
          b.metrics.epochs[e].train_accuracy);
    CHECK(a.metrics.epochs[e].test_accuracy ==
          b.metrics.epochs[e].test_accuracy);
  }
}

TEST_CASE("multithreaded batches reproduce the single-threaded run") {
  Split split = toy_blobs(24, 12, 13);
  CircuitSpec spec = basic_spec(2, 1);
  TrainConfig config;
  config.learning_rate = 0.02;
  config.batch_size = 8;
  config.epochs = 3;
  config.seed = 17;
  const TrainResult serial = train(spec, split, config, 2);
  config.threads = 4;
  const TrainResult parallel = train(spec, split, config, 2);
  CHECK(serial.params.values == parallel.params.values);
}

TEST_CASE("evaluate") {
  CircuitSpec spec = basic_spec(2, 0);
  spec.readout_states = {parse_bits("00"), parse_bits("11")};

  SUBCASE("single-class set with a constant correct predictor") {
    Dataset d;
    d.class_count = 2;
    d.features = Eigen::MatrixXd::Zero(6, 2);  // |00> readout wins
    d.labels.assign(6, 0);
    CHECK(evaluate(spec, ParamVector{}, d, 2) == 1.0);
  }
  SUBCASE("random parameters sit near chance on balanced labels") {
    Rng rng(47);
    Dataset d;
    d.class_count = 2;
    d.features.resize(60, 2);
    for (int i = 0; i < 60; ++i) {
      d.features(i, 0) = rng.uniform(0.0, M_PI);
      d.features(i, 1) = rng.uniform(0.0, M_PI);
      d.labels.push_back(i % 2);
    }
    CircuitSpec deep = basic_spec(2, 1);
    double total = 0.0;
    for (uint64_t seed = 0; seed < 5; ++seed) {
      total += evaluate(deep, ParamVector::random_init(2, 1, seed), d, 2);
    }
    const double mean_accuracy = total / 5.0;
    CHECK(mean_accuracy > 0.35);
    CHECK(mean_accuracy < 0.65);
  }
  SUBCASE("matches a manual confusion count on 10 samples") {
    Rng rng(53);
    Dataset d;
    d.class_count = 2;
    d.features.resize(10, 2);
    for (int i = 0; i < 10; ++i) {
      d.features(i, 0) = rng.uniform(0.0, M_PI);
      d.features(i, 1) = rng.uniform(0.0, M_PI);
      d.labels.push_back(static_cast<int>(rng.uniform_int(2)));
    }
    CircuitSpec deep = basic_spec(2, 1);
    const ParamVector params = ParamVector::random_init(2, 1, 99);
    int correct = 0;
    for (int i = 0; i < 10; ++i) {
      const FeatureVector features = {d.features(i, 0), d.features(i, 1)};
      const TensorRing ring = forward(deep, params, features, 2);
      const auto probs = readout(ring, deep.readout_states);
      const int predicted = probs[0] >= probs[1] ? 0 : 1;
      if (predicted == d.labels[static_cast<size_t>(i)]) ++correct;
    }
    CHECK(evaluate(deep, params, d, 2) ==
          doctest::Approx(correct / 10.0).epsilon(1e-12));
  }
}

TEST_CASE("train validates its inputs") {
  Split split = toy_blobs(8, 4, 19);
  CircuitSpec spec = basic_spec(2, 1);
  TrainConfig config;

  SUBCASE("negative learning rate") {
    config.learning_rate = -0.1;
    CHECK_THROWS_AS(train(spec, split, config, 2), std::invalid_argument);
  }
  SUBCASE("zero epochs") {
    config.epochs = 0;
    CHECK_THROWS_AS(train(spec, split, config, 2), std::invalid_argument);
  }
  SUBCASE("empty training split") {
    split.train.features.resize(0, 2);
    split.train.labels.clear();
    CHECK_THROWS_AS(train(spec, split, config, 2), std::invalid_argument);
  }
}

TEST_CASE("predict_class breaks ties toward the lower index") {
  CHECK(predict_class({0.2, 0.2, 0.1}) == 0);
  CHECK(predict_class({0.1, 0.4, 0.4}) == 1);
  CHECK(predict_class({0.0, 0.1, 0.9}) == 2);
}

TEST_CASE("metrics CSV has the documented shape") {
  Metrics metrics;
  metrics.epochs.push_back({0, 1.5, 0.5, 0.4, 0.01});
  metrics.epochs.push_back({1, 1.2, 0.6, 0.5, 0.01});
  const std::string csv = metrics.to_csv();
  CHECK(csv.rfind("epoch,loss,train_acc,test_acc,seconds\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}
