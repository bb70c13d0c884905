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
#include <vector>

#include "trsim/circuit.hpp"
#include "trsim/rng.hpp"
#include "trsim/tr_core.hpp"

namespace trsim::testing {

/// Ring with independent complex-gaussian core entries. Not a physical
/// state; exercises the raw tensor algebra.
inline TensorRing random_ring(int num_qubits, int rank, Rng& rng) {
  TensorRing ring(num_qubits, rank);
  for (int k = 0; k < num_qubits; ++k) {
    for (int i = 0; i < 2; ++i) {
      CMat& slice = ring.core(k).slice(i);
      for (Eigen::Index a = 0; a < slice.rows(); ++a) {
        for (Eigen::Index b = 0; b < slice.cols(); ++b) {
          slice(a, b) = cdouble(rng.normal(), rng.normal()) / std::sqrt(2.0);
        }
      }
    }
  }
  return ring;
}

inline FeatureVector random_features(int num_qubits, Rng& rng) {
  FeatureVector features(static_cast<size_t>(num_qubits));
  for (double& f : features) f = rng.uniform(0.0, M_PI);
  return features;
}

/// Default ansatz spec with |0..0> / |1..1> readout.
inline CircuitSpec basic_spec(int num_qubits, int num_layers) {
  CircuitSpec spec;
  spec.num_qubits = num_qubits;
  spec.num_layers = num_layers;
  spec.readout_states = {
      BitString(static_cast<size_t>(num_qubits), 0),
      BitString(static_cast<size_t>(num_qubits), 1),
  };
  return spec;
}

/// Rank sufficient for an exact tensor-ring representation of any
/// N-qubit state: 2^ceil(N/2).
inline int exact_rank(int num_qubits) {
  return num_qubits == 2 ? 4 : 1 << ((num_qubits + 1) / 2);
}

}  // namespace trsim::testing
