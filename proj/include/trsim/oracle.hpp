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

#include <vector>

#include "trsim/circuit.hpp"
#include "trsim/tr_core.hpp"

namespace trsim {

/// Dense 2^N-amplitude state, exact ground truth for small N.
/// Qubit 0 is the most significant bit of the basis index.
struct StateVector {
  int num_qubits = 0;
  std::vector<cdouble> amps;

  static StateVector basis(int num_qubits, const BitString& bits);
  cdouble amp(const BitString& bits) const;
};

/// Hard cap: dense simulation is rejected above 16 qubits.
constexpr int kMaxOracleQubits = 16;

void sv_apply_single(StateVector& state, int qubit, const CMat& gate);

/// Two-qubit gate on (qubit, qubit+1 mod N); same U(i'n i'm, in im)
/// convention as the tensor-ring path.
void sv_apply_two(StateVector& state, int qubit, const CMat& gate);

/// Exact forward pass over the identical gate sequence as trsim::forward.
StateVector sv_forward(const CircuitSpec& spec, const ParamVector& params,
                       const FeatureVector& features);

/// |amplitude|^2 for each requested basis state.
std::vector<double> sv_probabilities(const StateVector& state,
                                     const std::vector<BitString>& states);

double sv_norm_sq(const StateVector& state);

}  // namespace trsim
