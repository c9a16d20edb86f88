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
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <vector>

#include "ucs/circuit.hpp"
#include "ucs/matrix.hpp"
#include "ucs/numeric.hpp"
#include "ucs/svd.hpp"
#include "ucs/ucrot.hpp"

namespace ucs {

// ---------------------------------------------------------------------------
// Uniformly controlled one-qubit gate F^k_t: a distinct 2x2 unitary on the
// target for each classical pattern of the k controls. Block i corresponds to
// pattern i with controls[0] as the most significant pattern bit.
// ---------------------------------------------------------------------------

struct UCGate {
  std::vector<int> controls;
  int target = 1;
  std::vector<Mat2> blocks;
};

inline void validate_ucgate(const UCGate& g, int n) {
  if (g.target < 1 || g.target > n) throw ValidationError("uc-gate target out of range");
  if (g.blocks.size() != (std::size_t{1} << g.controls.size()))
    throw ValidationError("uc-gate needs 2^k blocks");
  std::vector<int> seen;
  for (int c : g.controls) {
    if (c < 1 || c > n) throw ValidationError("uc-gate control out of range");
    if (c == g.target) throw ValidationError("uc-gate control equals target");
    if (std::find(seen.begin(), seen.end(), c) != seen.end())
      throw ValidationError("uc-gate controls must be distinct");
    seen.push_back(c);
  }
  for (const Mat2& b : g.blocks)
    if (b.dagger().frob_dist_to_inverse_of(b) > numeric_policy().exact_tol)
      throw ValidationError("uc-gate block is not unitary");
}

inline ComplexMatrix embed_ucgate(const UCGate& g, int n) {
  validate_ucgate(g, n);
  const std::size_t dim = std::size_t{1} << n;
  const std::size_t tmask = std::size_t{1} << (n - g.target);
  ComplexMatrix m(dim, dim);
  for (std::size_t b = 0; b < dim; ++b) {
    if (b & tmask) continue;
    const Mat2& blk = g.blocks[control_pattern(g.controls, n, b)];
    m(b, b) = blk.a;
    m(b, b | tmask) = blk.b;
    m(b | tmask, b) = blk.c;
    m(b | tmask, b | tmask) = blk.d;
  }
  return m;
}

/// Reorders the control list to ascending qubit index, permuting block
/// indices to match.
inline UCGate canonicalize_ucgate(const UCGate& g) {
  const std::size_t k = g.controls.size();
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return g.controls[a] < g.controls[b];
  });
  UCGate out;
  out.target = g.target;
  out.controls.resize(k);
  for (std::size_t j = 0; j < k; ++j) out.controls[j] = g.controls[order[j]];
  out.blocks.resize(g.blocks.size());
  for (std::size_t p = 0; p < g.blocks.size(); ++p) {
    std::size_t q = 0;
    for (std::size_t j = 0; j < k; ++j) {
      std::size_t bit = (p >> (k - 1 - order[j])) & 1U;
      q = (q << 1) | bit;
    }
    out.blocks[q] = g.blocks[p];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Single demultiplexing step of the constant multiplexor:
//   diag(a, b) = e^{i sigma} R (I (x) u) D (I (x) v)
// with R = diag(r†, r), r = diag(e^{i rho1}, e^{i rho2}), the fixed
// D = e^{i pi/4 sigma_z (x) sigma_z}, and u, v in SU(2). The phases rho are
// chosen so the eigenvalues of rXr, X = ab†, are exactly {i, -i}.
// ---------------------------------------------------------------------------

struct DemuxResult {
  Mat2 u;                // special unitary
  Mat2 v;                // special unitary
  double rho1 = 0;
  double rho2 = 0;
  double residual_phase = 0;
};

namespace detail {

struct DemuxCore {
  Mat2 u;      // SU(2)
  Mat2 v_raw;  // U(2); diag(a,b) = R (I(x)u) D (I(x)v_raw) exactly
  double rho1, rho2;
};

inline DemuxCore demux_core(const Mat2& a, const Mat2& b) {
  const double delta = PI / 2.0;
  Mat2 x = a * b.dagger();
  double phi = arg0(x.det());
  cplx x1 = x.a * std::polar(1.0, -phi / 2.0);
  double ax1 = arg0(x1);
  // Integer choice k = 0, m = 1 (k + m odd).
  double rho1 = 0.5 * (delta - phi / 2.0 - ax1);
  double rho2 = 0.5 * (delta - phi / 2.0 + ax1 + PI);
  cplx r1 = std::polar(1.0, rho1), r2 = std::polar(1.0, rho2);
  Mat2 rxr{r1 * r1 * x.a, r1 * r2 * x.b, r2 * r1 * x.c, r2 * r2 * x.d};

  Eig2Result eig = eig2_unitary(rxr);
  // Order the eigenpair so the first eigenvalue is +i, matching d^2 = diag(i, -i).
  Mat2 u = eig.vectors;
  if (std::abs(eig.values[0] - I_UNIT) > std::abs(eig.values[1] - I_UNIT)) {
    u = Mat2{u.b, -u.a, u.d, -u.c};  // swap columns, keep det = +1
  }
  // v = d u† r† b with d = diag(e^{i pi/4}, e^{-i pi/4}).
  Mat2 udag = u.dagger();
  cplx d0 = std::polar(1.0, PI / 4.0), d1 = std::polar(1.0, -PI / 4.0);
  Mat2 du{d0 * udag.a, d0 * udag.b, d1 * udag.c, d1 * udag.d};
  Mat2 rb{std::conj(r1) * b.a, std::conj(r1) * b.b, std::conj(r2) * b.c,
          std::conj(r2) * b.d};
  return {u, du * rb, rho1, rho2};
}

}  // namespace detail

inline DemuxResult demultiplex_step(const Mat2& a, const Mat2& b) {
  const double tol = numeric_policy().exact_tol;
  if (a.dagger().frob_dist_to_inverse_of(a) > tol ||
      b.dagger().frob_dist_to_inverse_of(b) > tol)
    throw ValidationError("demultiplex_step: inputs must be unitary");
  detail::DemuxCore core = detail::demux_core(a, b);
  DemuxResult out;
  out.u = core.u;
  out.rho1 = core.rho1;
  out.rho2 = core.rho2;
  out.residual_phase = arg0(core.v_raw.det()) / 2.0;
  out.v = std::polar(1.0, -out.residual_phase) * core.v_raw;
  return out;
}

/// The two-qubit gate D = e^{i pi/4 sigma_z (x) sigma_z} as a matrix.
inline ComplexMatrix d_gate_matrix() {
  ComplexMatrix m(4, 4);
  m(0, 0) = std::polar(1.0, PI / 4.0);
  m(1, 1) = std::polar(1.0, -PI / 4.0);
  m(2, 2) = std::polar(1.0, -PI / 4.0);
  m(3, 3) = std::polar(1.0, PI / 4.0);
  return m;
}

/// Elementary-gate realization of D on qubits (1, 2): one CNOT, Hadamards and
/// z rotations, and a tracked global phase of -pi/4.
inline Circuit d_gate_circuit() {
  Circuit c(2);
  c.push_one_qubit(2, hadamard());
  c.push_cnot(1, 2);
  c.push_one_qubit(2, hadamard());
  c.push_one_qubit(1, rz(-PI / 2.0));
  c.push_one_qubit(2, rz(-PI / 2.0));
  c.push_global_phase(-PI / 4.0);
  return c;
}

// ---------------------------------------------------------------------------
// Full recursive decomposition of F^k_t into
//   embed(g) = Delta_{k+1} * ftilde
// where ftilde alternates 2^k one-qubit gates with 2^k - 1 CNOTs on the
// target, and Delta is a cascade of k uniformly controlled z rotations, one
// per recursion level, targeting the demultiplexed controls.
//
// The same sweep also serves the nearest-neighbor backend: there the
// multiplexing CNOT(m, t) becomes the fan-in cascade implemented with
// nearest-neighbor CNOTs, and the leftover fan-in factors are absorbed into
// the right-hand sub-gate as controlled-Z block twiddles (which leave every
// later demultiplexing step untouched, since X = ab† cancels them).
// ---------------------------------------------------------------------------

struct UcuDecomposition {
  Circuit ftilde;
  std::vector<UCRotation> delta;  // level order, outermost first; all commute
};

/// Default demultiplexing order: controls sorted by distance from the target,
/// furthest first, ties toward the lower qubit index.
inline std::vector<int> default_demux_order(const UCGate& g) {
  std::vector<int> order = g.controls;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    int da = std::abs(a - g.target), db = std::abs(b - g.target);
    if (da != db) return da > db;
    return a < b;
  });
  return order;
}

/// Nearest-neighbor fan-in cascade: equivalent to the product of CNOT(j, t)
/// for every j from m through the qubits strictly between m and t, using only
/// |i-j| = 1 CNOTs. Palindrome of 2|m-t| - 1 gates.
inline Circuit cascade_nn(int m, int t, int n) {
  if (m < 1 || m > n || t < 1 || t > n || m == t)
    throw ValidationError("cascade_nn: bad qubit pair");
  Circuit c(n);
  int step = (t > m) ? 1 : -1;
  for (int j = m; j != t; j += step) c.push_cnot(j, j + step);
  for (int j = t - 2 * step; (step > 0) ? j >= m : j <= m; j -= step)
    c.push_cnot(j, j + step);
  return c;
}

namespace detail {

struct UcuNode {
  bool is_token = false;
  int token_m = 0;
  std::vector<Mat2> blocks;  // gate node: one block per pattern of `rem`
};

inline std::size_t insert_bit(std::size_t pattern, std::size_t width_after,
                              std::size_t pos, std::size_t bit) {
  // `pattern` has width_after bits; insert `bit` at position pos (0 = MSB of
  // the widened pattern).
  std::size_t low_bits = width_after - pos;
  std::size_t high = pattern >> low_bits;
  std::size_t low = pattern & ((std::size_t{1} << low_bits) - 1);
  return (((high << 1) | bit) << low_bits) | low;
}

inline UcuDecomposition ucu_core(const UCGate& g_in, int n,
                                 const std::vector<int>& order, bool nn) {
  UCGate g = g_in;
  validate_ucgate(g, n);
  {
    std::vector<int> a = g.controls, b = order;
    std::sort(a.begin(), a.end());
    std::vector<int> bs = b;
    std::sort(bs.begin(), bs.end());
    if (a != bs)
      throw ValidationError("demux order must be a permutation of the controls");
  }
  const int t = g.target;

  UcuDecomposition out;
  out.ftilde = Circuit(n);
  if (g.controls.empty()) {
    out.ftilde.push_one_qubit(t, g.blocks[0]);
    return out;
  }

  std::vector<int> rem = g.controls;
  std::vector<UcuNode> seq;
  {
    UcuNode root;
    root.blocks = g.blocks;
    seq.push_back(std::move(root));
  }

  for (int m : order) {
    const std::size_t k = rem.size();
    const std::size_t pos_m =
        static_cast<std::size_t>(std::find(rem.begin(), rem.end(), m) - rem.begin());
    std::vector<int> rem_after = rem;
    rem_after.erase(rem_after.begin() + static_cast<long>(pos_m));

    // Parity mask over rem_after for qubits strictly between m and t (the
    // fan-in factors the nearest-neighbor cascade leaves behind).
    std::size_t between_mask = 0;
    if (nn) {
      int lo = std::min(m, t), hi = std::max(m, t);
      int covered = 0;
      for (std::size_t j = 0; j < rem_after.size(); ++j) {
        if (rem_after[j] > lo && rem_after[j] < hi) {
          between_mask |= std::size_t{1} << (rem_after.size() - 1 - j);
          ++covered;
        }
      }
      if (covered != hi - lo - 1)
        throw ValidationError(
            "nearest-neighbor compilation needs a chain-spanning gate with "
            "furthest-first demultiplexing");
    }

    std::optional<std::vector<double>> pending;
    std::vector<UcuNode> next_seq;
    for (UcuNode& node : seq) {
      if (node.is_token) {
        next_seq.push_back(node);  // diagonal comp commutes across D tokens
        continue;
      }
      std::vector<Mat2> blocks = std::move(node.blocks);
      if (pending) {
        const std::vector<double>& theta = *pending;
        for (std::size_t q = 0; q < blocks.size(); ++q) {
          std::size_t low_bits = k - 1 - pos_m;
          std::size_t bm = (q >> low_bits) & 1U;
          std::size_t high = q >> (low_bits + 1);
          std::size_t p_rest = (high << low_bits) | (q & ((std::size_t{1} << low_bits) - 1));
          double sign = bm ? 0.5 : -0.5;
          cplx ph0 = std::polar(1.0, sign * theta[(p_rest << 1) | 0]);
          cplx ph1 = std::polar(1.0, sign * theta[(p_rest << 1) | 1]);
          Mat2& blk = blocks[q];
          blk.a *= ph0;
          blk.c *= ph0;
          blk.b *= ph1;
          blk.d *= ph1;
        }
        pending.reset();
      }

      const std::size_t half = blocks.size() / 2;
      UcuNode right, left, token;
      token.is_token = true;
      token.token_m = m;
      right.blocks.resize(half);
      left.blocks.resize(half);
      std::vector<double> comp(2 * half);
      for (std::size_t p = 0; p < half; ++p) {
        const Mat2& a = blocks[insert_bit(p, k - 1, pos_m, 0)];
        const Mat2& b = blocks[insert_bit(p, k - 1, pos_m, 1)];
        DemuxCore core = demux_core(a, b);
        left.blocks[p] = core.u;
        right.blocks[p] = core.v_raw;
        if (nn && between_mask &&
            (std::popcount(static_cast<unsigned long long>(p & between_mask)) & 1)) {
          // Leftover controlled-Z factors of the fan-in, applied after v.
          right.blocks[p] = pauli_z() * right.blocks[p];
        }
        comp[(p << 1) | 0] = 2.0 * core.rho1;
        comp[(p << 1) | 1] = 2.0 * core.rho2;
      }
      next_seq.push_back(std::move(right));
      next_seq.push_back(std::move(token));
      next_seq.push_back(std::move(left));
      pending = std::move(comp);
    }
    seq = std::move(next_seq);

    UCRotation survivor;
    survivor.axis = Axis::Z;
    survivor.controls = rem_after;
    survivor.controls.push_back(t);
    survivor.target = m;
    survivor.angles = std::move(*pending);
    out.delta.push_back(std::move(survivor));
    rem = std::move(rem_after);
  }

  // Emission: fold the one-qubit dressings that turn each D token into a
  // plain CNOT (or a nearest-neighbor fan-in cascade) into the neighboring
  // blocks, shift the control-side z rotations into the matching survivor,
  // and track the global phase of -pi/4 per token.
  const Mat2 rzh_after = rz(-PI / 2.0) * hadamard();
  const Mat2 h = hadamard();
  std::map<int, int> token_count;
  std::vector<Gate> emitted;
  double phase_acc = 0;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (seq[i].is_token) {
      ++token_count[seq[i].token_m];
      phase_acc += -PI / 4.0;
      if (!nn) {
        emitted.push_back(Gate::cnot(seq[i].token_m, t));
      } else {
        for (const Gate& gg : cascade_nn(seq[i].token_m, t, n).gates())
          emitted.push_back(gg);
      }
      continue;
    }
    Mat2 b = seq[i].blocks[0];
    if (i > 0) b = b * rzh_after;           // token before this block
    if (i + 1 < seq.size()) b = h * b;      // token after this block
    emitted.push_back(Gate::one_qubit(t, b));
  }
  for (UCRotation& s : out.delta) {
    auto it = token_count.find(s.target);
    if (it == token_count.end()) continue;
    double shift = -PI / 2.0 * it->second;
    for (double& a : s.angles) a += shift;
  }
  for (const Gate& gg : emitted) out.ftilde.push(gg);
  out.ftilde.push_global_phase(phase_acc);
  return out;
}

}  // namespace detail

inline UcuDecomposition ucu_decompose(const UCGate& g, int n,
                                      const std::vector<int>& demux_order) {
  return detail::ucu_core(g, n, demux_order, /*nn=*/false);
}

inline UcuDecomposition ucu_decompose(const UCGate& g, int n) {
  return detail::ucu_core(g, n, default_demux_order(g), /*nn=*/false);
}

}  // namespace ucs
