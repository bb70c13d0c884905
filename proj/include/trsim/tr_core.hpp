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

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include "trsim/bitstring.hpp"

namespace trsim {

using cdouble = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;

/// One site of a tensor ring: a complex tensor of shape
/// (left bond, right bond, physical). slice(i) is the left x right matrix
/// for physical index i of the qubit at this site.
class CoreTensor {
 public:
  CoreTensor() = default;
  CoreTensor(Eigen::Index left, Eigen::Index right)
      : slices_{CMat::Zero(left, right), CMat::Zero(left, right)} {}

  CMat& slice(int i) { return slices_[static_cast<size_t>(i)]; }
  const CMat& slice(int i) const { return slices_[static_cast<size_t>(i)]; }

  Eigen::Index left_dim() const { return slices_[0].rows(); }
  Eigen::Index right_dim() const { return slices_[0].cols(); }

  bool all_finite() const;

 private:
  std::array<CMat, 2> slices_;
};

/// Quantum state of N qubits compressed as a ring of N rank-3 cores with a
/// cyclic trace closure. All bonds share the uniform rank chi; core k's
/// right bond is identified with core (k+1 mod N)'s left bond.
class TensorRing {
 public:
  TensorRing() = default;
  TensorRing(int num_qubits, int rank);

  int num_qubits() const { return static_cast<int>(cores_.size()); }
  int rank() const { return rank_; }

  CoreTensor& core(int k) { return cores_[static_cast<size_t>(k)]; }
  const CoreTensor& core(int k) const { return cores_[static_cast<size_t>(k)]; }

  /// Total complex entries across all cores: N * chi^2 * 2.
  size_t storage_complex_entries() const;

  /// Throws if bond dimensions are inconsistent or entries are not finite.
  void validate() const;

 private:
  std::vector<CoreTensor> cores_;
  int rank_ = 0;
};

/// Two neighboring cores contracted over their shared bond:
/// slice(i, j) holds the (left bond of site n) x (right bond of site n+1)
/// matrix for physical indices i (site n) and j (site n+1).
class PairTensor {
 public:
  PairTensor() = default;
  PairTensor(Eigen::Index left, Eigen::Index right);

  CMat& slice(int i, int j) { return slices_[static_cast<size_t>(2 * i + j)]; }
  const CMat& slice(int i, int j) const {
    return slices_[static_cast<size_t>(2 * i + j)];
  }

  Eigen::Index left_dim() const { return slices_[0].rows(); }
  Eigen::Index right_dim() const { return slices_[0].cols(); }

 private:
  std::array<CMat, 4> slices_;
};

/// Truncated SVD factors: left columns and right rows orthonormal,
/// singular values sorted descending. `discarded` holds the singular
/// values dropped by the truncation (descending as well), so the
/// reconstruction error is their l2 norm.
struct SvdFactors {
  CMat left;               // (rows, k)
  RVec singular_values;    // (k), descending, >= 0
  CMat right;              // (k, cols)
  RVec discarded;          // values cut by the truncation

  double reconstruction_error() const { return discarded.norm(); }
};

/// Rescaling policy applied by split_pair after cutting the spectrum.
/// * None: pure truncation; the state norm can only shrink.
/// * PreserveFrobenius: kept singular values are scaled so their l2 norm
///   matches the full spectrum's, keeping the pair's Frobenius norm (and,
///   in an orthogonal gauge, the state norm) unchanged. Exactly a no-op
///   when the truncation discards zero weight.
enum class TruncationRescale { None, PreserveFrobenius };

/// Ring for the computational basis state |bits>, with every bond padded
/// to `rank`. Core k carries a single 1 at (0, 0, bits[k]).
TensorRing ring_from_basis(int num_qubits, const BitString& bits, int rank);

/// Coefficient of |bits>: the cyclic trace of the selected physical
/// slices, cost O(N chi^3).
cdouble amplitude(const TensorRing& ring, const BitString& bits);

/// <phi|phi> via transfer-matrix contraction, cost O(N chi^6). The result
/// is real up to roundoff; the real part is returned.
double norm_sq(const TensorRing& ring);

/// Contracts cores at `site` and (site+1 mod N) over their shared bond.
PairTensor contract_pair(const TensorRing& ring, int site);

/// Full SVD truncated to the `keep` largest singular values (clamped to
/// the matrix's singular count). Ties keep original order; each left
/// singular vector's phase is fixed so its largest-magnitude entry is
/// real-positive, making the factorization deterministic.
SvdFactors truncated_svd(const CMat& matrix, int keep);

/// Splits a pair tensor back into two cores through the truncated SVD of
/// the (physical_n, left bond) x (physical_n+1, right bond) matrix.
/// Singular values are absorbed into the left core.
std::pair<CoreTensor, CoreTensor> split_pair(
    const PairTensor& pair, int keep,
    TruncationRescale rescale = TruncationRescale::None);

/// Matrix view of a pair tensor: row index (i * left_dim + a), column
/// index (j * right_dim + b), i/j physical. The fixed reshape convention
/// shared by split_pair and the gate path.
CMat pair_to_matrix(const PairTensor& pair);

/// Inverse of pair_to_matrix.
PairTensor matrix_to_pair(const CMat& matrix, Eigen::Index left,
                          Eigen::Index right);

/// Rotates each singular pair (column j of u and of v) by a common phase
/// so u's largest-magnitude entry in that column is real-positive. Leaves
/// u * diag(s) * v^H unchanged; pins the factorization deterministically.
void fix_svd_phases(CMat& u, CMat& v);

/// Kronecker product, row index (a * other_rows + c).
CMat kron(const CMat& x, const CMat& y);

/// Double-layer transfer matrix sum_i M[i] (x) conj(M[i]), used by
/// norm_sq and the gradient pass.
CMat transfer_matrix(const CoreTensor& core);

}  // namespace trsim
