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

#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "test_utils.hpp"
#include "trsim/gates.hpp"
#include "trsim/oracle.hpp"
#include "trsim/tr_core.hpp"

using namespace trsim;
using namespace trsim::testing;

namespace {

// Naive reference for contract_pair: explicit loops over every index.
PairTensor contract_pair_naive(const TensorRing& ring, int site) {
  const int n = ring.num_qubits();
  const CoreTensor& left = ring.core(site);
  const CoreTensor& right = ring.core((site + 1) % n);
  PairTensor out(left.left_dim(), right.right_dim());
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (Eigen::Index a = 0; a < left.left_dim(); ++a) {
        for (Eigen::Index b = 0; b < right.right_dim(); ++b) {
          cdouble acc(0.0, 0.0);
          for (Eigen::Index m = 0; m < left.right_dim(); ++m) {
            acc += left.slice(i)(a, m) * right.slice(j)(m, b);
          }
          out.slice(i, j)(a, b) = acc;
        }
      }
    }
  }
  return out;
}

double sum_probabilities(const TensorRing& ring) {
  const int n = ring.num_qubits();
  double total = 0.0;
  for (uint64_t idx = 0; idx < (uint64_t{1} << n); ++idx) {
    total += std::norm(amplitude(ring, index_to_bits(idx, n)));
  }
  return total;
}

}  // namespace

TEST_CASE("ring_from_basis represents the exact basis state") {
  const TensorRing ring = ring_from_basis(4, parse_bits("0000"), 4);
  for (uint64_t idx = 0; idx < 16; ++idx) {
    const cdouble amp = amplitude(ring, index_to_bits(idx, 4));
    if (idx == 0) {
      CHECK(amp == cdouble(1.0, 0.0));
    } else {
      CHECK(std::abs(amp) == 0.0);
    }
  }

  const TensorRing ten = ring_from_basis(2, parse_bits("10"), 2);
  CHECK(amplitude(ten, parse_bits("10")) == cdouble(1.0, 0.0));
  CHECK(std::abs(amplitude(ten, parse_bits("00"))) == 0.0);
  CHECK(std::abs(amplitude(ten, parse_bits("01"))) == 0.0);
  CHECK(std::abs(amplitude(ten, parse_bits("11"))) == 0.0);

  const TensorRing wide = ring_from_basis(8, parse_bits("00000000"), 2);
  CHECK(norm_sq(wide) == doctest::Approx(1.0).epsilon(1e-12));

  // Core layout: a single 1 at (0, 0, bits[k]).
  const TensorRing bit = ring_from_basis(2, parse_bits("01"), 3);
  CHECK(bit.core(0).slice(0)(0, 0) == cdouble(1.0, 0.0));
  CHECK(bit.core(1).slice(1)(0, 0) == cdouble(1.0, 0.0));
  CHECK(bit.core(1).slice(0).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("ring_from_basis rejects bad arguments") {
  CHECK_THROWS_AS(ring_from_basis(1, parse_bits("0"), 2), std::invalid_argument);
  CHECK_THROWS_AS(ring_from_basis(2, parse_bits("00"), 0), std::invalid_argument);
  CHECK_THROWS_AS(ring_from_basis(3, parse_bits("00"), 2), std::invalid_argument);
}

TEST_CASE("amplitude validates bitstring length") {
  const TensorRing ring = ring_from_basis(3, parse_bits("000"), 2);
  CHECK_THROWS_AS(amplitude(ring, parse_bits("00")), std::invalid_argument);
}

TEST_CASE("amplitude of a product-state ring is the per-qubit product") {
  // Each qubit rotated by a known Rx angle; amplitudes factorize.
  const int n = 5;
  Rng rng(11);
  std::vector<double> angles(static_cast<size_t>(n));
  for (double& a : angles) a = rng.uniform(0.0, M_PI);

  TensorRing ring = ring_from_basis(n, BitString(static_cast<size_t>(n), 0), 3);
  for (int q = 0; q < n; ++q) {
    ring = apply_single(ring, q, rx(angles[static_cast<size_t>(q)]));
  }

  for (uint64_t idx = 0; idx < (uint64_t{1} << n); ++idx) {
    const BitString bits = index_to_bits(idx, n);
    cdouble expected(1.0, 0.0);
    for (int q = 0; q < n; ++q) {
      const double half = angles[static_cast<size_t>(q)] / 2;
      expected *= bits[static_cast<size_t>(q)] == 0
                      ? cdouble(std::cos(half), 0.0)
                      : cdouble(0.0, -std::sin(half));
    }
    CHECK(std::abs(amplitude(ring, bits) - expected) < 1e-12);
  }
}

TEST_CASE("norm_sq matches direct amplitude sums and scaling") {
  TensorRing ring = ring_from_basis(3, parse_bits("010"), 2);
  CHECK(norm_sq(ring) == doctest::Approx(1.0).epsilon(1e-12));

  ring.core(1).slice(0) *= 2.0;
  ring.core(1).slice(1) *= 2.0;
  CHECK(norm_sq(ring) == doctest::Approx(4.0).epsilon(1e-12));

  Rng rng(5);
  const TensorRing random = random_ring(4, 3, rng);
  CHECK(norm_sq(random) ==
        doctest::Approx(sum_probabilities(random)).epsilon(1e-10));
}

TEST_CASE("norm_sq of a full-rank circuit state matches the oracle") {
  CircuitSpec spec = basic_spec(6, 3);
  Rng rng(17);
  const ParamVector params = ParamVector::random_init(6, 3, rng.next_u64());
  const FeatureVector features = random_features(6, rng);
  const TensorRing ring = forward(spec, params, features, 8);
  CHECK(norm_sq(ring) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("contract_pair matches the quadruple-loop reference") {
  Rng rng(23);
  const TensorRing ring = random_ring(4, 3, rng);
  for (int site = 0; site < 4; ++site) {
    const PairTensor fast = contract_pair(ring, site);
    const PairTensor slow = contract_pair_naive(ring, site);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        CHECK((fast.slice(i, j) - slow.slice(i, j)).cwiseAbs().maxCoeff() <
              1e-12);
      }
    }
  }
  CHECK_THROWS_AS(contract_pair(ring, 4), std::invalid_argument);
  CHECK_THROWS_AS(contract_pair(ring, -1), std::invalid_argument);
}

TEST_CASE("contract_pair on basis and identity-slice rings") {
  const TensorRing basis = ring_from_basis(2, parse_bits("00"), 2);
  const PairTensor pair = contract_pair(basis, 0);
  CHECK(pair.slice(0, 0)(0, 0) == cdouble(1.0, 0.0));
  CHECK(pair.slice(0, 1).cwiseAbs().maxCoeff() == 0.0);
  CHECK(pair.slice(1, 0).cwiseAbs().maxCoeff() == 0.0);
  CHECK(pair.slice(1, 1).cwiseAbs().maxCoeff() == 0.0);

  TensorRing identity(3, 3);
  for (int k = 0; k < 3; ++k) {
    identity.core(k).slice(0) = CMat::Identity(3, 3);
    identity.core(k).slice(1) = CMat::Identity(3, 3);
  }
  const PairTensor id_pair = contract_pair(identity, 1);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      CHECK((id_pair.slice(i, j) - CMat::Identity(3, 3)).cwiseAbs().maxCoeff() <
            1e-14);
    }
  }
}

TEST_CASE("truncated_svd basics") {
  SUBCASE("identity keep 2") {
    const SvdFactors f = truncated_svd(CMat::Identity(4, 4), 2);
    CHECK(f.singular_values.size() == 2);
    CHECK(f.singular_values(0) == doctest::Approx(1.0));
    CHECK(f.singular_values(1) == doctest::Approx(1.0));
    CHECK(f.reconstruction_error() == doctest::Approx(std::sqrt(2.0)));
  }
  SUBCASE("rank-1 matrix is reconstructed exactly") {
    Rng rng(3);
    CMat u(5, 1), v(4, 1);
    for (int i = 0; i < 5; ++i) u(i, 0) = cdouble(rng.normal(), rng.normal());
    for (int i = 0; i < 4; ++i) v(i, 0) = cdouble(rng.normal(), rng.normal());
    const CMat m = u * v.adjoint();
    const SvdFactors f = truncated_svd(m, 2);
    CHECK(f.singular_values(1) == doctest::Approx(0.0).epsilon(1e-12));
    const CMat rebuilt = f.left * f.singular_values.asDiagonal() * f.right;
    CHECK((rebuilt - m).norm() < 1e-10);
  }
  SUBCASE("keep below 1 is rejected") {
    CHECK_THROWS_AS(truncated_svd(CMat::Identity(2, 2), 0),
                    std::invalid_argument);
  }
}

TEST_CASE("truncated_svd error matches a reference eigendecomposition") {
  Rng rng(31);
  CMat m(8, 8);
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) m(i, j) = cdouble(rng.normal(), rng.normal());
  }
  const SvdFactors f = truncated_svd(m, 4);
  const CMat rebuilt = f.left * f.singular_values.asDiagonal() * f.right;
  const double frob_err = (rebuilt - m).norm();

  // Reference spectrum from M^H M.
  Eigen::SelfAdjointEigenSolver<CMat> solver(m.adjoint() * m);
  const RVec eigs = solver.eigenvalues();  // ascending
  double tail = 0.0;
  for (int i = 0; i < 4; ++i) tail += std::max(0.0, eigs(i));
  CHECK(frob_err == doctest::Approx(std::sqrt(tail)).epsilon(1e-8));
  CHECK(f.reconstruction_error() ==
        doctest::Approx(std::sqrt(tail)).epsilon(1e-8));

  // Factor orthonormality.
  CHECK((f.left.adjoint() * f.left - CMat::Identity(4, 4))
            .cwiseAbs()
            .maxCoeff() < 1e-10);
  CHECK((f.right * f.right.adjoint() - CMat::Identity(4, 4))
            .cwiseAbs()
            .maxCoeff() < 1e-10);
}

TEST_CASE("truncated_svd with full keep reconstructs the input") {
  Rng rng(37);
  CMat m(6, 6);
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) m(i, j) = cdouble(rng.normal(), rng.normal());
  }
  const SvdFactors f = truncated_svd(m, 6);
  const CMat rebuilt = f.left * f.singular_values.asDiagonal() * f.right;
  CHECK((rebuilt - m).norm() < 1e-10);
}

TEST_CASE("split_pair round trip preserves the pair tensor") {
  Rng rng(41);
  const TensorRing ring = random_ring(4, 3, rng);
  const PairTensor pair = contract_pair(ring, 1);
  // 2*chi singular values exist but at most chi are nonzero (the pair was
  // built through a rank-chi bond), so keep=chi is exact.
  const auto [left, right] = split_pair(pair, 3);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const CMat rebuilt = left.slice(i) * right.slice(j);
      CHECK((rebuilt - pair.slice(i, j)).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("split_pair on a product pair is exact at keep=1") {
  TensorRing ring = ring_from_basis(2, parse_bits("00"), 2);
  ring = apply_single(ring, 0, rx(0.7));
  ring = apply_single(ring, 1, ry(1.1));
  const PairTensor pair = contract_pair(ring, 0);
  const auto [left, right] = split_pair(pair, 1);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const CMat rebuilt = left.slice(i) * right.slice(j);
      CHECK((rebuilt - pair.slice(i, j)).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("split_pair at keep=1 on a Bell pair has fidelity one half") {
  TensorRing ring = ring_from_basis(2, parse_bits("00"), 2);
  ring = apply_single(ring, 0, hadamard());
  ring = apply_two(ring, 0, cnot());
  // Bell state: two equal singular values 1/sqrt(2) across the pair cut.
  const PairTensor pair = contract_pair(ring, 0);
  const auto [left, right] = split_pair(pair, 1);

  StateVector bell = StateVector::basis(2, parse_bits("00"));
  sv_apply_single(bell, 0, hadamard().data);
  sv_apply_two(bell, 0, cnot().data);

  cdouble overlap(0.0, 0.0);
  double truncated_norm = 0.0;
  for (uint64_t idx = 0; idx < 4; ++idx) {
    const BitString bits = index_to_bits(idx, 2);
    const cdouble amp = (left.slice(bits[0]) * right.slice(bits[1])).trace();
    overlap += std::conj(bell.amps[idx]) * amp;
    truncated_norm += std::norm(amp);
  }
  const double fidelity = std::norm(overlap) / truncated_norm;
  CHECK(fidelity == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("truncation is monotone in the pair Frobenius norm") {
  // Eckart-Young: the truncated factorization never increases the pair
  // tensor's Frobenius norm. The GLOBAL state norm is a different story:
  // without a canonical form the ring's environment is not isometric, so
  // cutting the locally smallest singular values can increase the state
  // norm. Both behaviors are pinned here.
  Rng rng(47);
  int global_increases = 0;
  for (int trial = 0; trial < 60; ++trial) {
    TensorRing ring = random_ring(4, 4, rng);
    const double before = norm_sq(ring);
    const int site = trial % 4;
    const int keep = 1 + static_cast<int>(rng.uniform_int(3));
    const PairTensor pair = contract_pair(ring, site);
    const auto [left, right] = split_pair(pair, keep);

    double pair_before = 0.0, pair_after = 0.0;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        pair_before += pair.slice(i, j).squaredNorm();
        pair_after += (left.slice(i) * right.slice(j)).squaredNorm();
      }
    }
    CHECK(pair_after <= pair_before * (1.0 + 1e-12));

    TensorRing truncated = ring;
    truncated.core(site) = left;
    truncated.core((site + 1) % 4) = right;
    if (norm_sq(truncated) > before * (1.0 + 1e-12)) ++global_increases;
  }
  // The counterexamples are real (a few percent of random draws); if they
  // ever vanish the canonical-form caveat should be revisited.
  CHECK(global_increases > 0);
}

TEST_CASE("amplitude is invariant under simultaneous cyclic rotation") {
  Rng rng(53);
  const int n = 5;
  const TensorRing ring = random_ring(n, 3, rng);
  for (int trial = 0; trial < 8; ++trial) {
    const BitString bits = index_to_bits(rng.uniform_int(1 << n), n);
    const cdouble reference = amplitude(ring, bits);
    for (int shift = 1; shift < n; ++shift) {
      TensorRing rotated(n, 3);
      BitString rotated_bits(static_cast<size_t>(n));
      for (int k = 0; k < n; ++k) {
        rotated.core(k) = ring.core((k + shift) % n);
        rotated_bits[static_cast<size_t>(k)] =
            bits[static_cast<size_t>((k + shift) % n)];
      }
      CHECK(std::abs(amplitude(rotated, rotated_bits) - reference) < 1e-12);
    }
  }
}

TEST_CASE("probabilities sum to norm_sq exhaustively") {
  Rng rng(59);
  for (int n : {2, 4, 7}) {
    const TensorRing ring = random_ring(n, 3, rng);
    CHECK(sum_probabilities(ring) ==
          doctest::Approx(norm_sq(ring)).epsilon(1e-10));
  }
}

TEST_CASE("split after contract leaves circuit-state amplitudes unchanged") {
  // A depth-1 circuit state has pair spectra with at most chi nonzero
  // values, so the no-gate round trip is exact.
  CircuitSpec spec = basic_spec(4, 1);
  Rng rng(61);
  const ParamVector params = ParamVector::random_init(4, 1, rng.next_u64());
  const FeatureVector features = random_features(4, rng);
  const TensorRing ring = forward(spec, params, features, 4);

  for (int site = 0; site < 4; ++site) {
    const auto [left, right] = split_pair(contract_pair(ring, site), 4);
    TensorRing rebuilt = ring;
    rebuilt.core(site) = left;
    rebuilt.core((site + 1) % 4) = right;
    for (uint64_t idx = 0; idx < 16; ++idx) {
      const BitString bits = index_to_bits(idx, 4);
      CHECK(std::abs(amplitude(rebuilt, bits) - amplitude(ring, bits)) < 1e-10);
    }
  }
}

TEST_CASE("ring storage is N * chi^2 * 2 complex entries") {
  const TensorRing ring = ring_from_basis(6, BitString(6, 0), 5);
  CHECK(ring.storage_complex_entries() == 6u * 5u * 5u * 2u);
}

TEST_CASE("validate rejects inconsistent rings") {
  TensorRing ring = ring_from_basis(3, parse_bits("000"), 2);
  CHECK_NOTHROW(ring.validate());
  ring.core(1).slice(0)(0, 0) = cdouble(std::nan(""), 0.0);
  CHECK_THROWS_AS(ring.validate(), std::invalid_argument);
}
