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

#include <functional>
#include <variant>
#include <vector>

#include "trsim/circuit.hpp"
#include "trsim/gates.hpp"
#include "trsim/tr_core.hpp"

namespace trsim {

/// dLoss/dtheta, same layout as ParamVector.
using GradVector = std::vector<double>;

struct SingleQubitRecord {
  CoreTensor input;  // core at the site before the gate
};

/// Forward trace of one circuit evaluation: the gate sequence with saved
/// intermediates, the final ring, and the readout. Re-executing the ops
/// from the stored inputs reproduces `output` bitwise.
struct Tape {
  CircuitSpec spec;
  int rank = 0;
  ParamVector params;
  FeatureVector features;
  std::vector<GateOp> ops;
  std::vector<std::variant<SingleQubitRecord, TwoQubitRecord>> records;
  TensorRing output;
  std::vector<double> readout;
};

/// Forward pass that records every intermediate needed by backward().
/// Numerically identical to circuit::forward + circuit::readout.
Tape forward_with_tape(const CircuitSpec& spec, const ParamVector& params,
                       const FeatureVector& features, int rank);

/// Re-executes the taped gate sequence; bitwise equal to tape.output.
TensorRing replay(const Tape& tape);

/// Reverse pass: dLoss/dtheta for every trainable angle, given the loss
/// gradient with respect to the readout vector. Complex intermediates are
/// differentiated as independent real/imaginary pairs; the truncated SVD
/// uses the factor-gradient formula with 1/(s_i^2 - s_j^2) coefficients,
/// clamped near degeneracies and zeroed inside the null spectrum (pure
/// bond gauge).
GradVector backward(const Tape& tape, const std::vector<double>& loss_grad);

/// Scalar function of the parameter vector, for derivative checks.
using ParamLoss = std::function<double(const ParamVector&)>;

/// Central finite differences (L(p+eps) - L(p-eps)) / 2eps per coordinate.
GradVector finite_diff_grad(const ParamLoss& loss, const ParamVector& params,
                            double epsilon);

/// Composes forward + readout + a loss on the readout vector into a
/// ParamLoss, the usual target for finite_diff_grad.
ParamLoss make_circuit_loss(
    const CircuitSpec& spec, const FeatureVector& features, int rank,
    std::function<double(const std::vector<double>&)> readout_loss);

namespace detail {

/// Adjoint of A for the full square SVD A = u diag(s) v^H with the phase
/// gauge held fixed. Adjoint packing: dL/dRe + i dL/dIm. Unused
/// directions carry zero columns in u_bar / v_bar.
CMat svd_backward(const CMat& u, const RVec& s, const CMat& v,
                  const CMat& u_bar, const RVec& s_bar, const CMat& v_bar);

}  // namespace detail

}  // namespace trsim
