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

#include "trsim/tr_core.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace trsim {

bool CoreTensor::all_finite() const {
  for (int i = 0; i < 2; ++i) {
    if (!slices_[static_cast<size_t>(i)].allFinite()) return false;
  }
  return true;
}

TensorRing::TensorRing(int num_qubits, int rank) : rank_(rank) {
  if (num_qubits < 2) {
    throw std::invalid_argument("tensor ring needs at least 2 qubits, got " +
                                std::to_string(num_qubits));
  }
  if (rank < 1) {
    throw std::invalid_argument("tensor ring rank must be >= 1, got " +
                                std::to_string(rank));
  }
  cores_.assign(static_cast<size_t>(num_qubits), CoreTensor(rank, rank));
}

size_t TensorRing::storage_complex_entries() const {
  size_t total = 0;
  for (const auto& core : cores_) {
    total += static_cast<size_t>(core.left_dim()) *
             static_cast<size_t>(core.right_dim()) * 2;
  }
  return total;
}

void TensorRing::validate() const {
  const int n = num_qubits();
  if (n < 2) throw std::invalid_argument("ring has fewer than 2 cores");
  for (int k = 0; k < n; ++k) {
    const CoreTensor& here = core(k);
    const CoreTensor& next = core((k + 1) % n);
    if (here.right_dim() != next.left_dim()) {
      throw std::invalid_argument("bond mismatch between cores " +
                                  std::to_string(k) + " and " +
                                  std::to_string((k + 1) % n));
    }
    if (here.left_dim() != rank_ || here.right_dim() != rank_) {
      throw std::invalid_argument("core " + std::to_string(k) +
                                  " does not have the uniform rank");
    }
    if (!here.all_finite()) {
      throw std::invalid_argument("core " + std::to_string(k) +
                                  " has non-finite entries");
    }
  }
}

PairTensor::PairTensor(Eigen::Index left, Eigen::Index right)
    : slices_{CMat::Zero(left, right), CMat::Zero(left, right),
              CMat::Zero(left, right), CMat::Zero(left, right)} {}

TensorRing ring_from_basis(int num_qubits, const BitString& bits, int rank) {
  if (static_cast<int>(bits.size()) != num_qubits) {
    throw std::invalid_argument("basis bitstring length " +
                                std::to_string(bits.size()) +
                                " does not match qubit count " +
                                std::to_string(num_qubits));
  }
  TensorRing ring(num_qubits, rank);
  for (int k = 0; k < num_qubits; ++k) {
    ring.core(k).slice(bits[static_cast<size_t>(k)])(0, 0) = cdouble(1.0, 0.0);
  }
  return ring;
}

cdouble amplitude(const TensorRing& ring, const BitString& bits) {
  const int n = ring.num_qubits();
  if (static_cast<int>(bits.size()) != n) {
    throw std::invalid_argument("bitstring length " +
                                std::to_string(bits.size()) +
                                " does not match ring qubit count " +
                                std::to_string(n));
  }
  CMat product = ring.core(0).slice(bits[0]);
  for (int k = 1; k < n; ++k) {
    product = product * ring.core(k).slice(bits[static_cast<size_t>(k)]);
  }
  return product.trace();
}

CMat kron(const CMat& x, const CMat& y) {
  CMat out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index a = 0; a < x.rows(); ++a) {
    for (Eigen::Index b = 0; b < x.cols(); ++b) {
      out.block(a * y.rows(), b * y.cols(), y.rows(), y.cols()) = x(a, b) * y;
    }
  }
  return out;
}

CMat transfer_matrix(const CoreTensor& core) {
  CMat e = kron(core.slice(0), core.slice(0).conjugate());
  e += kron(core.slice(1), core.slice(1).conjugate());
  return e;
}

double norm_sq(const TensorRing& ring) {
  const int n = ring.num_qubits();
  CMat product = transfer_matrix(ring.core(0));
  for (int k = 1; k < n; ++k) {
    product = product * transfer_matrix(ring.core(k));
  }
  return product.trace().real();
}

PairTensor contract_pair(const TensorRing& ring, int site) {
  const int n = ring.num_qubits();
  if (site < 0 || site >= n) {
    throw std::invalid_argument("pair site " + std::to_string(site) +
                                " out of range for " + std::to_string(n) +
                                " qubits");
  }
  const CoreTensor& left = ring.core(site);
  const CoreTensor& right = ring.core((site + 1) % n);
  PairTensor pair(left.left_dim(), right.right_dim());
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      pair.slice(i, j) = left.slice(i) * right.slice(j);
    }
  }
  return pair;
}

CMat pair_to_matrix(const PairTensor& pair) {
  const Eigen::Index l = pair.left_dim();
  const Eigen::Index r = pair.right_dim();
  CMat matrix(2 * l, 2 * r);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      matrix.block(i * l, j * r, l, r) = pair.slice(i, j);
    }
  }
  return matrix;
}

PairTensor matrix_to_pair(const CMat& matrix, Eigen::Index left,
                          Eigen::Index right) {
  PairTensor pair(left, right);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      pair.slice(i, j) = matrix.block(i * left, j * right, left, right);
    }
  }
  return pair;
}

void fix_svd_phases(CMat& u, CMat& v) {
  const Eigen::Index pairs = std::min(u.cols(), v.cols());
  for (Eigen::Index j = 0; j < pairs; ++j) {
    Eigen::Index arg_max = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
      double mag = std::abs(u(i, j));
      if (mag > best) {
        best = mag;
        arg_max = i;
      }
    }
    if (best > 0.0) {
      cdouble phase = std::conj(u(arg_max, j)) / best;
      u.col(j) *= phase;
      v.col(j) *= phase;
    }
  }
}

SvdFactors truncated_svd(const CMat& matrix, int keep) {
  if (keep < 1) {
    throw std::invalid_argument("truncated_svd keep must be >= 1, got " +
                                std::to_string(keep));
  }
  Eigen::JacobiSVD<CMat> svd(matrix, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) {
    throw std::runtime_error("SVD failed to converge");
  }
  const Eigen::Index count = svd.singularValues().size();
  const Eigen::Index kept = std::min<Eigen::Index>(keep, count);

  CMat u = svd.matrixU();
  CMat v = svd.matrixV();
  fix_svd_phases(u, v);

  SvdFactors factors;
  factors.left = u.leftCols(kept);
  factors.singular_values = svd.singularValues().head(kept);
  factors.right = v.leftCols(kept).adjoint();
  factors.discarded = svd.singularValues().tail(count - kept);
  return factors;
}

std::pair<CoreTensor, CoreTensor> split_pair(const PairTensor& pair, int keep,
                                             TruncationRescale rescale) {
  const Eigen::Index l = pair.left_dim();
  const Eigen::Index r = pair.right_dim();
  SvdFactors factors = truncated_svd(pair_to_matrix(pair), keep);
  RVec values = factors.singular_values;
  if (rescale == TruncationRescale::PreserveFrobenius) {
    const double kept_norm = values.norm();
    const double full_norm = std::sqrt(kept_norm * kept_norm +
                                       factors.discarded.squaredNorm());
    if (kept_norm > 0.0) values *= full_norm / kept_norm;
  }

  const Eigen::Index bond = values.size();
  CoreTensor left_core(l, bond);
  CoreTensor right_core(bond, r);
  for (int i = 0; i < 2; ++i) {
    left_core.slice(i) =
        factors.left.block(i * l, 0, l, bond) * values.asDiagonal();
    right_core.slice(i) = factors.right.block(0, i * r, bond, r);
  }
  return {std::move(left_core), std::move(right_core)};
}

}  // namespace trsim
