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

#include <string>
#include <vector>

#include "trsim/tr_core.hpp"

namespace trsim {

/// A 2x2 (single-qubit) or 4x4 (two-qubit) unitary. Constructors check
/// unitarity to 1e-12. Two-qubit index convention: U(i'n i'm, in im) with
/// the pair's first qubit as the high bit (and as the CNOT control).
struct GateMatrix {
  CMat data;
  std::string label;
  std::vector<double> params;

  bool is_single() const { return data.rows() == 2; }
};

GateMatrix rx(double theta);
GateMatrix ry(double theta);
GateMatrix rz(double theta);
GateMatrix hadamard();
GateMatrix cnot();
GateMatrix rot(double alpha, double beta, double gamma);

/// d/dtheta of the rotation matrices, in closed form.
CMat rx_deriv(double theta);
CMat ry_deriv(double theta);
CMat rz_deriv(double theta);

/// Applies a single-qubit gate at `qubit`: only that core changes, the
/// physical index is contracted with the gate. Norm-preserving.
TensorRing apply_single(const TensorRing& ring, int qubit,
                        const GateMatrix& gate);

/// Saved intermediates of one two-qubit update, for the gradient pass.
struct TwoQubitRecord {
  CoreTensor left_in;
  CoreTensor right_in;
  CMat u;                 // full left singular vectors, phase-fixed
  RVec s;                 // full singular values
  CMat v;                 // full right singular vectors, phase-fixed
  double rescale = 1.0;
  Eigen::Index live = 0;  // kept channels above the numerical rank
};

/// Applies a two-qubit gate on the cyclic neighbors (qubit, qubit+1 mod N):
/// pair contraction, gate action, truncated SVD back to bond dimension
/// chi. The kept spectrum is rescaled to the full spectrum's l2 norm, so
/// lossless cuts are exact and lossy cuts keep the state's scale stable.
/// Kept channels below the pair matrix's numerical rank are zeroed in
/// both cores: they carry no state, and writing arbitrary null-space
/// vectors into the bond would make later truncations depend on them.
/// If `record` is non-null the SVD intermediates are saved into it.
TensorRing apply_two(const TensorRing& ring, int qubit, const GateMatrix& gate,
                     TwoQubitRecord* record = nullptr);

}  // namespace trsim
