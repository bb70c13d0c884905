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

#include "trsim/gates.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>
#include <string>

namespace trsim {
namespace {

constexpr double kUnitaryTol = 1e-12;

void check_angle(double value, const char* name) {
  if (!std::isfinite(value)) {
    throw std::invalid_argument(std::string("non-finite angle for ") + name);
  }
}

GateMatrix make_gate(CMat data, std::string label, std::vector<double> params) {
  const CMat gram = data.adjoint() * data;
  const CMat identity = CMat::Identity(data.rows(), data.cols());
  if ((gram - identity).cwiseAbs().maxCoeff() > kUnitaryTol) {
    throw std::invalid_argument("gate " + label + " is not unitary");
  }
  return GateMatrix{std::move(data), std::move(label), std::move(params)};
}

}  // namespace

GateMatrix rx(double theta) {
  check_angle(theta, "rx");
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  CMat m(2, 2);
  m << cdouble(c, 0), cdouble(0, -s),
       cdouble(0, -s), cdouble(c, 0);
  return make_gate(std::move(m), "rx", {theta});
}

GateMatrix ry(double theta) {
  check_angle(theta, "ry");
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  CMat m(2, 2);
  m << cdouble(c, 0), cdouble(-s, 0),
       cdouble(s, 0), cdouble(c, 0);
  return make_gate(std::move(m), "ry", {theta});
}

GateMatrix rz(double theta) {
  check_angle(theta, "rz");
  CMat m = CMat::Zero(2, 2);
  m(0, 0) = std::exp(cdouble(0, -theta / 2.0));
  m(1, 1) = std::exp(cdouble(0, theta / 2.0));
  return make_gate(std::move(m), "rz", {theta});
}

GateMatrix hadamard() {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CMat m(2, 2);
  m << cdouble(inv_sqrt2, 0), cdouble(inv_sqrt2, 0),
       cdouble(inv_sqrt2, 0), cdouble(-inv_sqrt2, 0);
  return make_gate(std::move(m), "h", {});
}

GateMatrix cnot() {
  CMat m = CMat::Zero(4, 4);
  m(0, 0) = 1.0;
  m(1, 1) = 1.0;
  m(2, 3) = 1.0;
  m(3, 2) = 1.0;
  return make_gate(std::move(m), "cnot", {});
}

GateMatrix rot(double alpha, double beta, double gamma) {
  check_angle(alpha, "rot");
  check_angle(beta, "rot");
  check_angle(gamma, "rot");
  const double c = std::cos(alpha / 2.0);
  const double s = std::sin(alpha / 2.0);
  CMat m(2, 2);
  m(0, 0) = cdouble(c, 0);
  m(0, 1) = -std::exp(cdouble(0, gamma)) * s;
  m(1, 0) = std::exp(cdouble(0, beta)) * s;
  m(1, 1) = std::exp(cdouble(0, beta + gamma)) * c;
  return make_gate(std::move(m), "rot", {alpha, beta, gamma});
}

CMat rx_deriv(double theta) {
  const double c = 0.5 * std::cos(theta / 2.0);
  const double s = 0.5 * std::sin(theta / 2.0);
  CMat m(2, 2);
  m << cdouble(-s, 0), cdouble(0, -c),
       cdouble(0, -c), cdouble(-s, 0);
  return m;
}

CMat ry_deriv(double theta) {
  const double c = 0.5 * std::cos(theta / 2.0);
  const double s = 0.5 * std::sin(theta / 2.0);
  CMat m(2, 2);
  m << cdouble(-s, 0), cdouble(-c, 0),
       cdouble(c, 0), cdouble(-s, 0);
  return m;
}

CMat rz_deriv(double theta) {
  CMat m = CMat::Zero(2, 2);
  m(0, 0) = cdouble(0, -0.5) * std::exp(cdouble(0, -theta / 2.0));
  m(1, 1) = cdouble(0, 0.5) * std::exp(cdouble(0, theta / 2.0));
  return m;
}

TensorRing apply_single(const TensorRing& ring, int qubit,
                        const GateMatrix& gate) {
  if (qubit < 0 || qubit >= ring.num_qubits()) {
    throw std::invalid_argument("qubit " + std::to_string(qubit) +
                                " out of range");
  }
  if (gate.data.rows() != 2 || gate.data.cols() != 2) {
    throw std::invalid_argument("apply_single expects a 2x2 gate, got " +
                                gate.label);
  }
  TensorRing out = ring;
  CoreTensor& core = out.core(qubit);
  const CoreTensor& in = ring.core(qubit);
  for (int ip = 0; ip < 2; ++ip) {
    core.slice(ip) = gate.data(ip, 0) * in.slice(0) +
                     gate.data(ip, 1) * in.slice(1);
  }
  return out;
}

TensorRing apply_two(const TensorRing& ring, int qubit, const GateMatrix& gate,
                     TwoQubitRecord* record) {
  const int n = ring.num_qubits();
  if (qubit < 0 || qubit >= n) {
    throw std::invalid_argument("qubit " + std::to_string(qubit) +
                                " out of range");
  }
  if (gate.data.rows() != 4 || gate.data.cols() != 4) {
    throw std::invalid_argument("apply_two expects a 4x4 gate, got " +
                                gate.label);
  }
  const int partner = (qubit + 1) % n;
  const int chi = ring.rank();

  PairTensor contracted = contract_pair(ring, qubit);
  // Gate action on the two physical indices, pair's first qubit high bit.
  PairTensor gated(contracted.left_dim(), contracted.right_dim());
  for (int ip = 0; ip < 2; ++ip) {
    for (int jp = 0; jp < 2; ++jp) {
      CMat acc = CMat::Zero(contracted.left_dim(), contracted.right_dim());
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          const cdouble coeff = gate.data(2 * ip + jp, 2 * i + j);
          if (coeff != cdouble(0.0, 0.0)) acc += coeff * contracted.slice(i, j);
        }
      }
      gated.slice(ip, jp) = std::move(acc);
    }
  }

  const CMat matrix = pair_to_matrix(gated);
  Eigen::JacobiSVD<CMat> svd(matrix, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) {
    throw std::runtime_error("SVD failed to converge in apply_two");
  }
  CMat u = svd.matrixU();
  CMat v = svd.matrixV();
  const RVec s = svd.singularValues();
  fix_svd_phases(u, v);

  const Eigen::Index kept = std::min<Eigen::Index>(chi, s.size());
  const double kept_norm = s.head(kept).norm();
  const double full_norm = s.norm();
  const double factor = kept_norm > 0.0 ? full_norm / kept_norm : 1.0;
  RVec scaled = s.head(kept) * factor;

  // Channels below the numerical rank represent nothing (zero weight);
  // zero them on both sides so the bond carries no arbitrary null-space
  // content into later gates.
  constexpr double kRankTol = 1e-13;
  Eigen::Index live = kept;
  while (live > 0 && s(live - 1) <= kRankTol * s(0)) --live;
  scaled.tail(kept - live).setZero();

  const Eigen::Index l = contracted.left_dim();
  const Eigen::Index r = contracted.right_dim();
  TensorRing out = ring;
  CoreTensor left_core(l, kept);
  CoreTensor right_core(kept, r);
  const CMat y = v.leftCols(kept).adjoint();
  for (int i = 0; i < 2; ++i) {
    left_core.slice(i) = u.block(i * l, 0, l, kept) * scaled.asDiagonal();
    right_core.slice(i) = y.block(0, i * r, kept, r);
    right_core.slice(i).bottomRows(kept - live).setZero();
  }
  out.core(qubit) = std::move(left_core);
  out.core(partner) = std::move(right_core);

  if (record != nullptr) {
    record->left_in = ring.core(qubit);
    record->right_in = ring.core(partner);
    record->u = std::move(u);
    record->s = s;
    record->v = std::move(v);
    record->rescale = factor;
    record->live = live;
  }
  return out;
}

}  // namespace trsim
