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

#include "trsim/oracle.hpp"

#include <stdexcept>
#include <string>

namespace trsim {

StateVector StateVector::basis(int num_qubits, const BitString& bits) {
  if (num_qubits < 1 || num_qubits > kMaxOracleQubits) {
    throw std::invalid_argument("statevector qubit count " +
                                std::to_string(num_qubits) +
                                " outside [1, 16]");
  }
  StateVector state;
  state.num_qubits = num_qubits;
  state.amps.assign(size_t{1} << num_qubits, cdouble(0.0, 0.0));
  state.amps[bits_to_index(bits)] = cdouble(1.0, 0.0);
  return state;
}

cdouble StateVector::amp(const BitString& bits) const {
  if (static_cast<int>(bits.size()) != num_qubits) {
    throw std::invalid_argument("bitstring length mismatch");
  }
  return amps[bits_to_index(bits)];
}

void sv_apply_single(StateVector& state, int qubit, const CMat& gate) {
  if (qubit < 0 || qubit >= state.num_qubits) {
    throw std::invalid_argument("qubit out of range");
  }
  const size_t stride = size_t{1} << (state.num_qubits - 1 - qubit);
  const size_t dim = state.amps.size();
  for (size_t base = 0; base < dim; ++base) {
    if ((base & stride) != 0) continue;
    const cdouble a0 = state.amps[base];
    const cdouble a1 = state.amps[base | stride];
    state.amps[base] = gate(0, 0) * a0 + gate(0, 1) * a1;
    state.amps[base | stride] = gate(1, 0) * a0 + gate(1, 1) * a1;
  }
}

void sv_apply_two(StateVector& state, int qubit, const CMat& gate) {
  const int n = state.num_qubits;
  if (qubit < 0 || qubit >= n) {
    throw std::invalid_argument("qubit out of range");
  }
  const int partner = (qubit + 1) % n;
  const size_t stride_a = size_t{1} << (n - 1 - qubit);
  const size_t stride_b = size_t{1} << (n - 1 - partner);
  const size_t dim = state.amps.size();
  for (size_t base = 0; base < dim; ++base) {
    if ((base & stride_a) != 0 || (base & stride_b) != 0) continue;
    cdouble in[4];
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        in[2 * i + j] = state.amps[base | (i ? stride_a : 0) |
                                   (j ? stride_b : 0)];
      }
    }
    for (int ip = 0; ip < 2; ++ip) {
      for (int jp = 0; jp < 2; ++jp) {
        cdouble acc(0.0, 0.0);
        for (int k = 0; k < 4; ++k) acc += gate(2 * ip + jp, k) * in[k];
        state.amps[base | (ip ? stride_a : 0) | (jp ? stride_b : 0)] = acc;
      }
    }
  }
}

StateVector sv_forward(const CircuitSpec& spec, const ParamVector& params,
                       const FeatureVector& features) {
  spec.validate();
  if (spec.num_qubits > kMaxOracleQubits) {
    throw std::invalid_argument("oracle limited to 16 qubits, got " +
                                std::to_string(spec.num_qubits));
  }
  StateVector state = StateVector::basis(
      spec.num_qubits, BitString(static_cast<size_t>(spec.num_qubits), 0));
  const GateMatrix cnot_gate = cnot();
  for (const GateOp& op : build_ops(spec, params, features)) {
    if (op.kind == GateOp::Kind::Two) {
      sv_apply_two(state, op.site, cnot_gate.data);
    } else {
      sv_apply_single(state, op.site,
                      single_gate_matrix(op.single, op.angle).data);
    }
  }
  return state;
}

std::vector<double> sv_probabilities(const StateVector& state,
                                     const std::vector<BitString>& states) {
  std::vector<double> probs;
  probs.reserve(states.size());
  for (const BitString& bits : states) {
    probs.push_back(std::norm(state.amp(bits)));
  }
  return probs;
}

double sv_norm_sq(const StateVector& state) {
  double total = 0.0;
  for (const cdouble& a : state.amps) total += std::norm(a);
  return total;
}

}  // namespace trsim
