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

#include "trsim/circuit.hpp"

#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include "trsim/rng.hpp"

namespace trsim {

ParamVector ParamVector::zeros(int num_qubits, int num_layers) {
  ParamVector p;
  p.values.assign(static_cast<size_t>(3 * num_qubits * num_layers), 0.0);
  return p;
}

ParamVector ParamVector::random_init(int num_qubits, int num_layers,
                                     uint64_t seed) {
  ParamVector p = zeros(num_qubits, num_layers);
  Rng rng = Rng::stream(seed, /*tag=*/0x706172616d73ULL);  // "params"
  for (double& v : p.values) v = rng.uniform(-M_PI, M_PI);
  return p;
}

std::vector<std::pair<int, int>> CircuitSpec::entangler_pairs() const {
  if (!entangler.empty()) return entangler;
  std::vector<std::pair<int, int>> pairs;
  for (int q = 0; q + 1 < num_qubits; ++q) pairs.emplace_back(q, q + 1);
  if (wrap_cnot && num_qubits >= 2) pairs.emplace_back(num_qubits - 1, 0);
  return pairs;
}

void CircuitSpec::validate() const {
  if (num_qubits < 2) {
    throw std::invalid_argument("circuit needs at least 2 qubits");
  }
  if (num_layers < 0) {
    throw std::invalid_argument("num_layers must be >= 0");
  }
  for (const auto& [control, target] : entangler_pairs()) {
    if (control < 0 || control >= num_qubits ||
        target != (control + 1) % num_qubits) {
      throw std::invalid_argument(
          "entangler pair (" + std::to_string(control) + "," +
          std::to_string(target) + ") is not a cyclic-neighbor pair");
    }
  }
  std::set<std::string> seen;
  for (const BitString& state : readout_states) {
    if (static_cast<int>(state.size()) != num_qubits) {
      throw std::invalid_argument("readout state " + format_bits(state) +
                                  " length does not match qubit count");
    }
    if (!seen.insert(format_bits(state)).second) {
      throw std::invalid_argument("duplicate readout state " +
                                  format_bits(state));
    }
  }
}

std::vector<GateOp> build_ops(const CircuitSpec& spec, const ParamVector& params,
                              const FeatureVector& features) {
  const int n = spec.num_qubits;
  if (static_cast<int>(features.size()) != n) {
    throw std::invalid_argument("feature count " +
                                std::to_string(features.size()) +
                                " does not match qubit count " +
                                std::to_string(n));
  }
  if (params.size() != spec.param_count()) {
    throw std::invalid_argument("parameter count " +
                                std::to_string(params.size()) +
                                " does not match circuit layout (" +
                                std::to_string(spec.param_count()) + ")");
  }
  for (double psi : features) {
    if (!std::isfinite(psi)) {
      throw std::invalid_argument("non-finite feature angle");
    }
  }

  std::vector<GateOp> ops;
  ops.reserve(static_cast<size_t>(n * (2 + 4 * spec.num_layers)));
  if (spec.pre_hadamard) {
    for (int q = 0; q < n; ++q) {
      ops.push_back({GateOp::Kind::Single, q, GateOp::Single::Hadamard, 0.0, -1});
    }
  }
  for (int q = 0; q < n; ++q) {
    ops.push_back({GateOp::Kind::Single, q, GateOp::Single::Rx,
                   features[static_cast<size_t>(q)], -1});
  }
  const auto pairs = spec.entangler_pairs();
  for (int layer = 0; layer < spec.num_layers; ++layer) {
    for (const auto& [control, target] : pairs) {
      (void)target;  // always (control+1) mod N, enforced by validate()
      ops.push_back({GateOp::Kind::Two, control, GateOp::Single::Rx, 0.0, -1});
    }
    for (int q = 0; q < n; ++q) {
      for (int axis = 0; axis < 3; ++axis) {
        const int idx = ParamVector::index(layer, q, axis, n);
        const auto kind = axis == 0   ? GateOp::Single::Rx
                          : axis == 1 ? GateOp::Single::Ry
                                      : GateOp::Single::Rz;
        ops.push_back({GateOp::Kind::Single, q, kind,
                       params.values[static_cast<size_t>(idx)], idx});
      }
    }
  }
  return ops;
}

GateMatrix single_gate_matrix(GateOp::Single kind, double angle) {
  switch (kind) {
    case GateOp::Single::Rx: return rx(angle);
    case GateOp::Single::Ry: return ry(angle);
    case GateOp::Single::Rz: return rz(angle);
    case GateOp::Single::Hadamard: return hadamard();
  }
  throw std::logic_error("unknown single-qubit gate kind");
}

TensorRing encode(const CircuitSpec& spec, const FeatureVector& features,
                  int rank) {
  CircuitSpec encode_only = spec;
  encode_only.num_layers = 0;
  return forward(encode_only, ParamVector{}, features, rank);
}

TensorRing forward(const CircuitSpec& spec, const ParamVector& params,
                   const FeatureVector& features, int rank) {
  spec.validate();
  const auto ops = build_ops(spec, params, features);
  TensorRing ring = ring_from_basis(
      spec.num_qubits, BitString(static_cast<size_t>(spec.num_qubits), 0), rank);
  const GateMatrix cnot_gate = cnot();
  for (const GateOp& op : ops) {
    if (op.kind == GateOp::Kind::Two) {
      ring = apply_two(ring, op.site, cnot_gate);
    } else {
      ring = apply_single(ring, op.site, single_gate_matrix(op.single, op.angle));
    }
  }
  return ring;
}

std::vector<double> readout(const TensorRing& ring,
                            const std::vector<BitString>& states) {
  const double norm = norm_sq(ring);
  std::vector<double> probs;
  probs.reserve(states.size());
  for (const BitString& state : states) {
    const cdouble amp = amplitude(ring, state);
    probs.push_back(std::norm(amp) / norm);
  }
  return probs;
}

}  // namespace trsim
