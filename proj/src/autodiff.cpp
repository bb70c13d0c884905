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

#include "trsim/autodiff.hpp"

#include <cmath>
#include <stdexcept>

namespace trsim {
namespace {

// Adjoint packing for a complex intermediate z: dL/dRe(z) + i dL/dIm(z).
// With this convention, w = a*z propagates as z_bar += conj(a) * w_bar,
// matrix products as (A*B)_bar: A_bar += C_bar B^H, B_bar += A^H C_bar,
// and w = conj(z) as z_bar += conj(w_bar).

constexpr double kDegenerateGap = 1e-12;

}  // namespace

namespace detail {

// Adjoint of the full square SVD a = u diag(s) v^H with the phase gauge
// held fixed. Unused directions carry zero columns in u_bar / v_bar.
//
// The textbook coefficient (s_j Hu_ij + s_i Hv_ij) / (s_j^2 - s_i^2) is
// assembled from the algebraically identical split
//     (Hu - Hv)_ij / (2 (s_i + s_j)) + (Hu + Hv)_ij / (2 (s_j - s_i)).
// Equal singular pairs are structural in a closed ring (the pair spectrum
// is the cut spectrum tensored with the loop spectrum), so the second
// denominator vanishes routinely. There its numerator also vanishes for
// any loss invariant under the bond gauge - which every readout-derived
// loss is - so below the gap tolerance the term is dropped (the
// subgradient at a degenerate cut) instead of being clamped into noise.
// Pairs inside the null spectrum are pure gauge and contribute nothing.
CMat svd_backward(const CMat& u, const RVec& s, const CMat& v,
                  const CMat& u_bar, const RVec& s_bar, const CMat& v_bar) {
  const Eigen::Index k = s.size();
  const CMat gu = u.adjoint() * u_bar;
  const CMat gv = v.adjoint() * v_bar;
  const CMat hu = gu - gu.adjoint();
  const CMat hv = gv - gv.adjoint();
  const double null_tol = 1e-10 * (k > 0 ? s(0) : 0.0);

  CMat w = CMat::Zero(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      if (std::max(s(i), s(j)) < null_tol) continue;
      w(i, j) += (hu(i, j) - hv(i, j)) / (2.0 * (s(i) + s(j)));
      if (i == j) continue;
      const double gap = s(j) * s(j) - s(i) * s(i);
      if (std::abs(gap) >= kDegenerateGap) {
        w(i, j) += (hu(i, j) + hv(i, j)) / (2.0 * (s(j) - s(i)));
      }
    }
    w(i, i) += s_bar(i);
  }
  return u * w * v.adjoint();
}

}  // namespace detail

namespace {

using detail::svd_backward;

// Reverse of one two-qubit update. Consumes the adjoints of the two new
// cores and replaces them with the adjoints of the pre-gate cores.
void backward_two(const GateOp& op, const TwoQubitRecord& rec,
                  const CMat& gate, CoreTensor& adj_left,
                  CoreTensor& adj_right) {
  const Eigen::Index l = rec.left_in.left_dim();
  const Eigen::Index r = rec.right_in.right_dim();
  const Eigen::Index total = rec.s.size();
  const Eigen::Index kept = adj_left.right_dim();

  // Through the new cores: left = u_kept * diag(s'), right = v_kept^H.
  // Channels at or beyond rec.live were zeroed in the forward pass; they
  // are constants and receive no adjoint.
  RVec scaled = rec.s.head(kept) * rec.rescale;
  scaled.tail(kept - rec.live).setZero();
  CMat u_bar = CMat::Zero(rec.u.rows(), rec.u.cols());
  CMat v_bar = CMat::Zero(rec.v.rows(), rec.v.cols());
  RVec scaled_bar = RVec::Zero(kept);
  for (int i = 0; i < 2; ++i) {
    u_bar.block(i * l, 0, l, kept) +=
        adj_left.slice(i) * scaled.asDiagonal();
    for (Eigen::Index m = 0; m < rec.live; ++m) {
      scaled_bar(m) += (adj_left.slice(i).col(m).adjoint() *
                        rec.u.block(i * l, 0, l, kept).col(m))(0, 0)
                           .real();
    }
    for (Eigen::Index b = 0; b < r; ++b) {
      for (Eigen::Index m = 0; m < rec.live; ++m) {
        v_bar(i * r + b, m) += std::conj(adj_right.slice(i)(m, b));
      }
    }
  }

  // Through the spectrum rescale s' = s_kept * (|s_full| / |s_kept|).
  RVec s_bar = RVec::Zero(total);
  const double q = rec.s.head(kept).norm();
  const double p = rec.s.norm();
  if (q > 0.0 && p > 0.0) {
    const double dot = scaled_bar.dot(rec.s.head(kept));
    for (Eigen::Index m = 0; m < total; ++m) {
      double d_factor = rec.s(m) / (p * q);
      if (m < kept) {
        d_factor -= p * rec.s(m) / (q * q * q);
        s_bar(m) += rec.rescale * scaled_bar(m);
      }
      s_bar(m) += dot * d_factor;
    }
  } else {
    s_bar.head(kept) = scaled_bar;
  }

  const CMat a_bar = svd_backward(rec.u, rec.s, rec.v, u_bar, s_bar, v_bar);

  // Through the reshape and the gate action.
  PairTensor gated_bar = matrix_to_pair(a_bar, l, r);
  PairTensor pair_bar(l, r);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      CMat acc = CMat::Zero(l, r);
      for (int ip = 0; ip < 2; ++ip) {
        for (int jp = 0; jp < 2; ++jp) {
          const cdouble coeff = std::conj(gate(2 * ip + jp, 2 * i + j));
          if (coeff != cdouble(0.0, 0.0)) acc += coeff * gated_bar.slice(ip, jp);
        }
      }
      pair_bar.slice(i, j) = std::move(acc);
    }
  }

  // Through the pair contraction T[i,j] = left[i] * right[j].
  CoreTensor new_left(rec.left_in.left_dim(), rec.left_in.right_dim());
  CoreTensor new_right(rec.right_in.left_dim(), rec.right_in.right_dim());
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      new_left.slice(i) += pair_bar.slice(i, j) * rec.right_in.slice(j).adjoint();
      new_right.slice(j) += rec.left_in.slice(i).adjoint() * pair_bar.slice(i, j);
    }
  }
  adj_left = std::move(new_left);
  adj_right = std::move(new_right);
  (void)op;
}

// Seeds the adjoint ring from the readout gradient: p_c = |a_c|^2 / nu.
void seed_readout_adjoint(const Tape& tape, const std::vector<double>& loss_grad,
                          std::vector<CoreTensor>& adj) {
  const int n = tape.output.num_qubits();
  const double nu = norm_sq(tape.output);
  double nu_bar = 0.0;

  for (size_t c = 0; c < tape.spec.readout_states.size(); ++c) {
    if (loss_grad[c] == 0.0) continue;
    const BitString& bits = tape.spec.readout_states[c];
    const cdouble amp_c = amplitude(tape.output, bits);
    const cdouble amp_bar = 2.0 * amp_c * (loss_grad[c] / nu);
    nu_bar -= loss_grad[c] * std::norm(amp_c) / (nu * nu);

    std::vector<CMat> prefix(static_cast<size_t>(n + 1));
    std::vector<CMat> suffix(static_cast<size_t>(n + 1));
    const Eigen::Index chi = tape.output.core(0).left_dim();
    prefix[0] = CMat::Identity(chi, chi);
    suffix[static_cast<size_t>(n)] = CMat::Identity(chi, chi);
    for (int k = 0; k < n; ++k) {
      prefix[static_cast<size_t>(k + 1)] =
          prefix[static_cast<size_t>(k)] *
          tape.output.core(k).slice(bits[static_cast<size_t>(k)]);
    }
    for (int k = n - 1; k >= 0; --k) {
      suffix[static_cast<size_t>(k)] =
          tape.output.core(k).slice(bits[static_cast<size_t>(k)]) *
          suffix[static_cast<size_t>(k + 1)];
    }
    for (int k = 0; k < n; ++k) {
      const CMat env = suffix[static_cast<size_t>(k + 1)] *
                       prefix[static_cast<size_t>(k)];
      adj[static_cast<size_t>(k)].slice(bits[static_cast<size_t>(k)]) +=
          env.adjoint() * amp_bar;
    }
  }

  if (nu_bar != 0.0) {
    std::vector<CMat> transfer(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
      transfer[static_cast<size_t>(k)] = transfer_matrix(tape.output.core(k));
    }
    const Eigen::Index dim = transfer[0].rows();
    std::vector<CMat> prefix(static_cast<size_t>(n + 1));
    std::vector<CMat> suffix(static_cast<size_t>(n + 1));
    prefix[0] = CMat::Identity(dim, dim);
    suffix[static_cast<size_t>(n)] = CMat::Identity(dim, dim);
    for (int k = 0; k < n; ++k) {
      prefix[static_cast<size_t>(k + 1)] =
          prefix[static_cast<size_t>(k)] * transfer[static_cast<size_t>(k)];
    }
    for (int k = n - 1; k >= 0; --k) {
      suffix[static_cast<size_t>(k)] =
          transfer[static_cast<size_t>(k)] * suffix[static_cast<size_t>(k + 1)];
    }
    for (int k = 0; k < n; ++k) {
      const CMat g_e = (suffix[static_cast<size_t>(k + 1)] *
                        prefix[static_cast<size_t>(k)])
                           .adjoint() *
                       nu_bar;
      const CoreTensor& core = tape.output.core(k);
      const Eigen::Index l = core.left_dim();
      const Eigen::Index r = core.right_dim();
      for (int i = 0; i < 2; ++i) {
        const CMat& m = core.slice(i);
        CMat& target = adj[static_cast<size_t>(k)].slice(i);
        for (Eigen::Index a = 0; a < l; ++a) {
          for (Eigen::Index b = 0; b < r; ++b) {
            for (Eigen::Index cc = 0; cc < l; ++cc) {
              for (Eigen::Index d = 0; d < r; ++d) {
                const cdouble g = g_e(a * l + cc, b * r + d);
                target(a, b) += m(cc, d) * g;
                target(cc, d) += m(a, b) * std::conj(g);
              }
            }
          }
        }
      }
    }
  }
}

}  // namespace

Tape forward_with_tape(const CircuitSpec& spec, const ParamVector& params,
                       const FeatureVector& features, int rank) {
  spec.validate();
  Tape tape;
  tape.spec = spec;
  tape.rank = rank;
  tape.params = params;
  tape.features = features;
  tape.ops = build_ops(spec, params, features);
  tape.records.reserve(tape.ops.size());

  TensorRing ring = ring_from_basis(
      spec.num_qubits, BitString(static_cast<size_t>(spec.num_qubits), 0), rank);
  const GateMatrix cnot_gate = cnot();
  for (const GateOp& op : tape.ops) {
    if (op.kind == GateOp::Kind::Two) {
      TwoQubitRecord rec;
      ring = apply_two(ring, op.site, cnot_gate, &rec);
      tape.records.emplace_back(std::move(rec));
    } else {
      SingleQubitRecord rec{ring.core(op.site)};
      ring = apply_single(ring, op.site, single_gate_matrix(op.single, op.angle));
      tape.records.emplace_back(std::move(rec));
    }
  }
  tape.output = std::move(ring);
  tape.readout = readout(tape.output, spec.readout_states);
  return tape;
}

TensorRing replay(const Tape& tape) {
  TensorRing ring = ring_from_basis(
      tape.spec.num_qubits,
      BitString(static_cast<size_t>(tape.spec.num_qubits), 0), tape.rank);
  const GateMatrix cnot_gate = cnot();
  for (const GateOp& op : tape.ops) {
    if (op.kind == GateOp::Kind::Two) {
      ring = apply_two(ring, op.site, cnot_gate);
    } else {
      ring = apply_single(ring, op.site, single_gate_matrix(op.single, op.angle));
    }
  }
  return ring;
}

GradVector backward(const Tape& tape, const std::vector<double>& loss_grad) {
  if (loss_grad.size() != tape.spec.readout_states.size()) {
    throw std::invalid_argument(
        "loss gradient size does not match readout state count");
  }
  GradVector grad(static_cast<size_t>(tape.spec.param_count()), 0.0);

  std::vector<CoreTensor> adj;
  adj.reserve(static_cast<size_t>(tape.output.num_qubits()));
  for (int k = 0; k < tape.output.num_qubits(); ++k) {
    adj.emplace_back(tape.output.core(k).left_dim(),
                     tape.output.core(k).right_dim());
  }
  seed_readout_adjoint(tape, loss_grad, adj);

  const GateMatrix cnot_gate = cnot();
  for (size_t idx = tape.ops.size(); idx-- > 0;) {
    const GateOp& op = tape.ops[idx];
    if (op.kind == GateOp::Kind::Two) {
      const auto& rec = std::get<TwoQubitRecord>(tape.records[idx]);
      const int partner = (op.site + 1) % tape.spec.num_qubits;
      backward_two(op, rec, cnot_gate.data, adj[static_cast<size_t>(op.site)],
                   adj[static_cast<size_t>(partner)]);
    } else {
      const auto& rec = std::get<SingleQubitRecord>(tape.records[idx]);
      const CMat u = single_gate_matrix(op.single, op.angle).data;
      CoreTensor& a = adj[static_cast<size_t>(op.site)];
      if (op.param_index >= 0) {
        CMat du(2, 2);
        switch (op.single) {
          case GateOp::Single::Rx: du = rx_deriv(op.angle); break;
          case GateOp::Single::Ry: du = ry_deriv(op.angle); break;
          case GateOp::Single::Rz: du = rz_deriv(op.angle); break;
          default:
            throw std::logic_error("trainable gate must be a rotation");
        }
        double dtheta = 0.0;
        for (int ip = 0; ip < 2; ++ip) {
          const CMat d_slice =
              du(ip, 0) * rec.input.slice(0) + du(ip, 1) * rec.input.slice(1);
          dtheta += (a.slice(ip).conjugate().cwiseProduct(d_slice)).sum().real();
        }
        grad[static_cast<size_t>(op.param_index)] += dtheta;
      }
      CoreTensor propagated(rec.input.left_dim(), rec.input.right_dim());
      for (int i = 0; i < 2; ++i) {
        propagated.slice(i) =
            std::conj(u(0, i)) * a.slice(0) + std::conj(u(1, i)) * a.slice(1);
      }
      a = std::move(propagated);
    }
  }
  return grad;
}

GradVector finite_diff_grad(const ParamLoss& loss, const ParamVector& params,
                            double epsilon) {
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("finite difference epsilon must be positive");
  }
  GradVector grad(params.values.size(), 0.0);
  ParamVector probe = params;
  for (size_t i = 0; i < params.values.size(); ++i) {
    const double saved = probe.values[i];
    probe.values[i] = saved + epsilon;
    const double up = loss(probe);
    probe.values[i] = saved - epsilon;
    const double down = loss(probe);
    probe.values[i] = saved;
    grad[i] = (up - down) / (2.0 * epsilon);
  }
  return grad;
}

ParamLoss make_circuit_loss(
    const CircuitSpec& spec, const FeatureVector& features, int rank,
    std::function<double(const std::vector<double>&)> readout_loss) {
  return [spec, features, rank,
          readout_loss = std::move(readout_loss)](const ParamVector& params) {
    const TensorRing ring = forward(spec, params, features, rank);
    return readout_loss(readout(ring, spec.readout_states));
  };
}

}  // namespace trsim
