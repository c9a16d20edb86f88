// Copyright 2026 The ucs Authors.
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

#include <algorithm>
#include <bit>
#include <cmath>
#include <vector>

#include "ucs/circuit.hpp"
#include "ucs/diag.hpp"
#include "ucs/matrix.hpp"
#include "ucs/mux.hpp"
#include "ucs/numeric.hpp"
#include "ucs/peephole.hpp"
#include "ucs/svd.hpp"
#include "ucs/ucrot.hpp"

namespace ucs {

/// Ruler function: one plus the 2-adic valuation (Sloane A001511).
inline int ruler(std::size_t i) {
  if (i == 0) throw ValidationError("ruler function needs i >= 1");
  return std::countr_zero(static_cast<unsigned long long>(i)) + 1;
}

// ---------------------------------------------------------------------------
// Cosine-sine decomposition of a single unitary:
//   U = diag(L1, L2) [[C, -S], [S, C]] diag(R1, R2)
// with C = diag(cos theta_i/2) >= 0 descending and S = diag(sin theta_i/2).
// ---------------------------------------------------------------------------

struct CSDFactors {
  ComplexMatrix l1, l2, r1, r2;
  std::vector<double> theta;  // theta_i = 2 atan2(s_i, c_i), in [0, pi]
};

inline CSDFactors csd(const ComplexMatrix& u) {
  if (u.rows() != u.cols() || u.rows() % 2 != 0)
    throw ShapeError("csd: need an even-dimensional square matrix");
  const std::size_t m = u.rows() / 2;
  ComplexMatrix u11(m, m), u12(m, m), u21(m, m), u22(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      u11(i, j) = u(i, j);
      u12(i, j) = u(i, j + m);
      u21(i, j) = u(i + m, j);
      u22(i, j) = u(i + m, j + m);
    }

  SvdResult f = svd(u11);
  ComplexMatrix l1 = f.u;
  ComplexMatrix r1 = f.v.dagger();
  std::vector<double> c = f.sigma, s(m);
  for (std::size_t i = 0; i < m; ++i) {
    c[i] = std::clamp(c[i], 0.0, 1.0);
    s[i] = std::sqrt(std::max(0.0, 1.0 - c[i] * c[i]));
  }

  // Columns of L2 with a healthy sine come straight from U21 R1†; rows of R2
  // with a healthy sine from -L1† U12. The small-sine prefix (c close to 1)
  // is fixed by factoring the residual of U22 over that cluster, which keeps
  // the S block exactly diagonal across degenerate cosines.
  const double tau = 0.5;
  std::size_t zcount = 0;
  while (zcount < m && s[zcount] < tau) ++zcount;

  ComplexMatrix t = u21 * r1.dagger();
  ComplexMatrix l2(m, m);
  ComplexMatrix r2pre(m, m);
  ComplexMatrix l1dag_u12 = l1.dagger() * u12;
  for (std::size_t i = zcount; i < m; ++i) {
    for (std::size_t r = 0; r < m; ++r) l2(r, i) = t(r, i) / s[i];
    for (std::size_t col = 0; col < m; ++col)
      r2pre(i, col) = -l1dag_u12(i, col) / s[i];
  }
  if (zcount > 0) {
    // G = U22 - sum_{i >= zcount} c_i L2[:,i] R2pre[i,:]
    ComplexMatrix g = u22;
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t col = 0; col < m; ++col) {
        cplx acc = 0;
        for (std::size_t i = zcount; i < m; ++i)
          acc += c[i] * l2(r, i) * r2pre(i, col);
        g(r, col) -= acc;
      }
    SvdResult gf = svd(g);
    for (std::size_t j = 0; j < zcount; ++j)
      for (std::size_t r = 0; r < m; ++r) l2(r, j) = gf.u(r, j);
    // R2 rows over the cluster: (1/c) W† G.
    for (std::size_t j = 0; j < zcount; ++j) {
      for (std::size_t col = 0; col < m; ++col) {
        cplx acc = 0;
        for (std::size_t r = 0; r < m; ++r) acc += std::conj(gf.u(r, j)) * g(r, col);
        r2pre(j, col) = acc / c[j];
      }
    }
  }
  l2 = polar_unitary(l2);

  // Consistent right factor: R2 = C L2† U22 + S (-L1† U12).
  ComplexMatrix l2dag_u22 = l2.dagger() * u22;
  ComplexMatrix r2(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t col = 0; col < m; ++col)
      r2(i, col) = c[i] * l2dag_u22(i, col) - s[i] * l1dag_u12(i, col);
  r2 = polar_unitary(r2);
  (void)r2pre;

  CSDFactors out;
  out.l1 = std::move(l1);
  out.l2 = std::move(l2);
  out.r1 = std::move(r1);
  out.r2 = std::move(r2);
  out.theta.resize(m);
  for (std::size_t i = 0; i < m; ++i) out.theta[i] = 2.0 * std::atan2(s[i], c[i]);
  return out;
}

/// Reassembles diag(L1,L2) [[C,-S],[S,C]] diag(R1,R2); test oracle and
/// internal verification helper.
inline ComplexMatrix csd_reassemble(const CSDFactors& f) {
  const std::size_t m = f.l1.rows();
  ComplexMatrix u(2 * m, 2 * m);
  for (std::size_t i = 0; i < m; ++i) {
    double ci = std::cos(f.theta[i] / 2.0), si = std::sin(f.theta[i] / 2.0);
    for (std::size_t j = 0; j < m; ++j) {
      // Row block 1: L1 (C R1 | -S R2), row block 2: L2 (S R1 | C R2).
      for (std::size_t rr = 0; rr < m; ++rr) {
        u(rr, j) += f.l1(rr, i) * ci * f.r1(i, j);
        u(rr, j + m) += f.l1(rr, i) * -si * f.r2(i, j);
        u(rr + m, j) += f.l2(rr, i) * si * f.r1(i, j);
        u(rr + m, j + m) += f.l2(rr, i) * ci * f.r2(i, j);
      }
    }
  }
  return u;
}

// ---------------------------------------------------------------------------
// Block-diagonal gates: the working representation of uniformly controlled
// multi-qubit gates inside the recursion.
// ---------------------------------------------------------------------------

struct BlockDiagGate {
  std::vector<int> controls;  // sorted ascending; pattern bit 0 = controls[0] (MSB)
  std::vector<int> targets;   // sorted ascending
  std::vector<ComplexMatrix> blocks;
};

struct CsdStepResult {
  BlockDiagGate left, right;
  UCRotation ry;
};

namespace detail {

/// Basis permutation that moves qubit m to the front of the block's
/// target-qubit ordering; remaining targets keep relative order.
inline std::vector<std::size_t> front_permutation(const std::vector<int>& targets,
                                                  int m) {
  const std::size_t s = targets.size();
  std::size_t pos = 0;
  while (targets[pos] != m) ++pos;
  std::vector<std::size_t> map(std::size_t{1} << s);
  for (std::size_t x = 0; x < map.size(); ++x) {
    std::size_t mbit = (x >> (s - 1 - pos)) & 1U;
    std::size_t rest = 0;
    for (std::size_t j = 0; j < s; ++j) {
      if (j == pos) continue;
      rest = (rest << 1) | ((x >> (s - 1 - j)) & 1U);
    }
    map[x] = (mbit << (s - 1)) | rest;
  }
  return map;
}

inline std::size_t insert_sorted_bit(std::size_t pattern, std::size_t width_after,
                                     std::size_t pos, std::size_t bit) {
  std::size_t low_bits = width_after - pos;
  std::size_t high = pattern >> low_bits;
  std::size_t low = pattern & ((std::size_t{1} << low_bits) - 1);
  return (((high << 1) | bit) << low_bits) | low;
}

}  // namespace detail

/// One CS recursion step: every block splits at the operational qubit m into
/// left/right half-size blocks around a shared uniformly controlled y
/// rotation with n-1 controls.
inline CsdStepResult csd_step(const BlockDiagGate& gate, int m, int n) {
  const std::size_t s = gate.targets.size();
  if (s < 1 || std::find(gate.targets.begin(), gate.targets.end(), m) ==
                   gate.targets.end())
    throw ValidationError("csd_step: operational qubit must be a target");

  const bool front = gate.targets.front() == m;
  std::vector<std::size_t> perm;
  if (!front) perm = detail::front_permutation(gate.targets, m);

  CsdStepResult out;
  out.left.controls = gate.controls;
  out.left.controls.push_back(m);
  std::sort(out.left.controls.begin(), out.left.controls.end());
  out.left.targets = gate.targets;
  out.left.targets.erase(
      std::find(out.left.targets.begin(), out.left.targets.end(), m));
  out.right = out.left;
  const std::size_t m_ctrl_pos = static_cast<std::size_t>(
      std::find(out.left.controls.begin(), out.left.controls.end(), m) -
      out.left.controls.begin());

  out.left.blocks.resize(2 * gate.blocks.size());
  out.right.blocks.resize(2 * gate.blocks.size());

  out.ry.axis = Axis::Y;
  out.ry.target = m;
  for (int q = 1; q <= n; ++q)
    if (q != m) out.ry.controls.push_back(q);
  out.ry.angles.assign(std::size_t{1} << (n - 1), 0.0);

  // Bit positions (within the ry pattern) of this gate's controls and of the
  // remaining targets, to scatter per-block angles into the global table.
  const std::size_t kq = out.ry.controls.size();
  std::vector<std::size_t> ctrl_pos, tgt_pos;
  for (int q : gate.controls)
    ctrl_pos.push_back(kq - 1 -
                       static_cast<std::size_t>(
                           std::find(out.ry.controls.begin(), out.ry.controls.end(), q) -
                           out.ry.controls.begin()));
  for (int q : out.left.targets)
    tgt_pos.push_back(kq - 1 -
                      static_cast<std::size_t>(
                          std::find(out.ry.controls.begin(), out.ry.controls.end(), q) -
                          out.ry.controls.begin()));

  for (std::size_t bi = 0; bi < gate.blocks.size(); ++bi) {
    ComplexMatrix blk = gate.blocks[bi];
    if (!front) {
      ComplexMatrix p(blk.rows(), blk.cols());
      for (std::size_t r = 0; r < blk.rows(); ++r)
        for (std::size_t c2 = 0; c2 < blk.cols(); ++c2)
          p(perm[r], perm[c2]) = blk(r, c2);
      blk = std::move(p);
    }
    CSDFactors f = csd(blk);

    std::size_t i0 = detail::insert_sorted_bit(bi, gate.controls.size(), m_ctrl_pos, 0);
    std::size_t i1 = detail::insert_sorted_bit(bi, gate.controls.size(), m_ctrl_pos, 1);
    out.left.blocks[i0] = f.l1;
    out.left.blocks[i1] = f.l2;
    out.right.blocks[i0] = f.r1;
    out.right.blocks[i1] = f.r2;

    for (std::size_t w = 0; w < f.theta.size(); ++w) {
      std::size_t idx = 0;
      for (std::size_t j = 0; j < gate.controls.size(); ++j)
        idx |= ((bi >> (gate.controls.size() - 1 - j)) & 1U) << ctrl_pos[j];
      for (std::size_t j = 0; j < tgt_pos.size(); ++j)
        idx |= ((w >> (tgt_pos.size() - 1 - j)) & 1U) << tgt_pos[j];
      out.ry.angles[idx] = f.theta[w];
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Full decomposition of an arbitrary n-qubit unitary.
// ---------------------------------------------------------------------------

namespace detail {

struct CsdFactor {
  bool is_ry = false;
  UCGate gate;    // when !is_ry
  UCRotation ry;  // when is_ry
};

inline void expand_csd(const BlockDiagGate& g, const std::vector<int>& split_order,
                       std::size_t depth, int n, std::vector<CsdFactor>& out) {
  if (g.targets.size() == 1) {
    CsdFactor f;
    f.gate.controls = g.controls;
    f.gate.target = g.targets[0];
    f.gate.blocks.reserve(g.blocks.size());
    for (const ComplexMatrix& b : g.blocks) f.gate.blocks.push_back(b.as_mat2());
    out.push_back(std::move(f));
    return;
  }
  CsdStepResult step = csd_step(g, split_order[depth], n);
  expand_csd(step.right, split_order, depth + 1, n, out);
  CsdFactor mid;
  mid.is_ry = true;
  mid.ry = std::move(step.ry);
  out.push_back(std::move(mid));
  expand_csd(step.left, split_order, depth + 1, n, out);
}

inline UCGate promote_ry(const UCRotation& r) {
  UCGate g;
  g.controls = r.controls;
  g.target = r.target;
  g.blocks.reserve(r.angles.size());
  for (double a : r.angles) g.blocks.push_back(ry(a));
  return g;
}

}  // namespace detail

inline int qubit_count_of_dim(std::size_t dim) {
  int n = 0;
  while ((std::size_t{1} << n) < dim) ++n;
  if ((std::size_t{1} << n) != dim)
    throw ShapeError("matrix dimension must be a power of two");
  return n;
}

/// Factor sequence of the CS recursion in application order: 2^{n-1}
/// uniformly controlled gates on the final target interleaved with 2^{n-1}-1
/// uniformly controlled y rotations whose targets follow the ruler pattern
/// over the split order.
inline std::vector<detail::CsdFactor> csd_factor_sequence(
    const ComplexMatrix& u, const std::vector<int>& split_order, int n) {
  BlockDiagGate root;
  for (int q = 1; q <= n; ++q) root.targets.push_back(q);
  root.blocks.push_back(u);
  std::vector<detail::CsdFactor> factors;
  detail::expand_csd(root, split_order, 0, n, factors);
  return factors;
}

/// Shared tail of the two backends: sweep the factor sequence, extracting
/// each gate's diagonal and merging it into the next factor, then synthesize
/// the leftover diagonal as a z-rotation cascade.
template <typename CompileUcu, typename CompileUcr>
inline Circuit synthesize_factors(std::vector<detail::CsdFactor>& factors, int n,
                                  CompileUcu&& compile_ucu,
                                  CompileUcr&& compile_ucr) {
  Circuit circuit(n);
  DiagonalGate carry = DiagonalGate::identity(n);
  bool have_carry = false;
  for (detail::CsdFactor& f : factors) {
    UCGate g = f.is_ry ? detail::promote_ry(f.ry) : std::move(f.gate);
    if (have_carry) g = merge_ucu_with_diag(g, carry);
    UcuDecomposition dec = compile_ucu(g);
    for (const Gate& gg : dec.ftilde.gates()) circuit.push(gg);
    carry = ucrz_cascade_to_diag(dec.delta, n);
    have_carry = true;
  }
  if (have_carry) {
    DiagDecomposition dd = diag_decompose(carry);
    for (const UCRotation& r : dd.rotations) {
      if (r.controls.empty() && std::abs(r.angles[0]) < 1e-14) continue;
      Circuit rc = compile_ucr(r);
      for (const Gate& gg : rc.gates()) circuit.push(gg);
    }
    circuit.push_global_phase(dd.global_phase);
  }
  return circuit;
}

/// Decomposition of an arbitrary n-qubit unitary into one-qubit gates and
/// CNOTs: full CS recursion, sequential diagonal extraction and merging, the
/// multiplexor construction for every uniformly controlled factor, and a
/// final peephole pass.
inline Circuit decompose_unitary(const ComplexMatrix& u, bool run_peephole = true) {
  if (u.rows() != u.cols()) throw ShapeError("decompose_unitary: square input required");
  const int n = qubit_count_of_dim(u.rows());
  if (n < 1 || n > 8)
    throw ResourceError("decompose_unitary: supported range is 1..8 qubits");
  if (unitarity_defect(u) > 1e-9)
    throw ValidationError("decompose_unitary: input is not unitary");

  if (n == 1) {
    Circuit c(1);
    double alpha = arg0(u.as_mat2().det()) / 2.0;
    c.push_one_qubit(1, std::polar(1.0, -alpha) * u.as_mat2());
    c.push_global_phase(alpha);
    return run_peephole ? peephole(c) : c;
  }

  std::vector<int> split_order;
  for (int q = 1; q < n; ++q) split_order.push_back(q);
  std::vector<detail::CsdFactor> factors = csd_factor_sequence(u, split_order, n);

  Circuit circuit = synthesize_factors(
      factors, n,
      [&](const UCGate& g) { return ucu_decompose(g, n); },
      [&](const UCRotation& r) { return ucr_compile(r, n); });
  return run_peephole ? peephole(circuit) : circuit;
}

}  // namespace ucs
