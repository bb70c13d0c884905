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
#include <utility>
#include <vector>

#include "trsim/gates.hpp"
#include "trsim/tr_core.hpp"

namespace trsim {

/// Classical features to encode, one angle per qubit (radians; the data
/// pipeline normalizes them into [0, pi]).
using FeatureVector = std::vector<double>;

/// Trainable rotation angles, laid out layer-major, then qubit, then
/// (theta_x, theta_y, theta_z): index = layer*3N + qubit*3 + axis.
struct ParamVector {
  std::vector<double> values;

  static int index(int layer, int qubit, int axis, int num_qubits) {
    return layer * 3 * num_qubits + qubit * 3 + axis;
  }

  static ParamVector zeros(int num_qubits, int num_layers);

  /// Uniform in [-pi, pi] from the seed.
  static ParamVector random_init(int num_qubits, int num_layers, uint64_t seed);

  int size() const { return static_cast<int>(values.size()); }
};

/// Circuit layout: an Rx feature-encoding layer (optionally preceded by
/// Hadamards), then `num_layers` repetitions of a CNOT entangler chain
/// followed by per-qubit Rx/Ry/Rz rotations, then basis-state readout.
struct CircuitSpec {
  int num_qubits = 0;
  int num_layers = 0;
  bool wrap_cnot = true;      // include the (N-1, 0) closing CNOT
  bool pre_hadamard = false;  // Hadamard layer before the encoding Rx
  /// Entangler pairs (control, target); empty selects the default cyclic
  /// chain (0,1),(1,2),...,(N-2,N-1)[,(N-1,0)]. Pairs must be cyclic
  /// neighbors: target == (control+1) mod N.
  std::vector<std::pair<int, int>> entangler;
  std::vector<BitString> readout_states;

  std::vector<std::pair<int, int>> entangler_pairs() const;
  int param_count() const { return 3 * num_qubits * num_layers; }
  void validate() const;
};

/// One gate of the unrolled circuit, with its angle already resolved.
struct GateOp {
  enum class Kind { Single, Two };
  enum class Single { Rx, Ry, Rz, Hadamard };

  Kind kind = Kind::Single;
  int site = 0;          // qubit, or left qubit of the cyclic pair
  Single single = Single::Rx;
  double angle = 0.0;
  int param_index = -1;  // >= 0: position in ParamVector, else fixed
};

/// Unrolls (spec, params, features) into the executable gate sequence.
std::vector<GateOp> build_ops(const CircuitSpec& spec, const ParamVector& params,
                              const FeatureVector& features);

/// 2x2 matrix for a single-qubit op.
GateMatrix single_gate_matrix(GateOp::Single kind, double angle);

/// |0..0> followed by Rx(feature_k) on each qubit k (plus the optional
/// Hadamard layer). Unit norm.
TensorRing encode(const CircuitSpec& spec, const FeatureVector& features,
                  int rank);

/// Full forward pass: encode, then all layers. Deterministic.
TensorRing forward(const CircuitSpec& spec, const ParamVector& params,
                   const FeatureVector& features, int rank);

/// Per-class probabilities |<state_c|phi>|^2 / <phi|phi>.
std::vector<double> readout(const TensorRing& ring,
                            const std::vector<BitString>& states);

}  // namespace trsim
