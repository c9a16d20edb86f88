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
#include <vector>

#include "ucs/circuit.hpp"
#include "ucs/csd.hpp"
#include "ucs/mux.hpp"
#include "ucs/numeric.hpp"
#include "ucs/peephole.hpp"
#include "ucs/stateprep.hpp"
#include "ucs/ucrot.hpp"

namespace ucs {

// ---------------------------------------------------------------------------
// Chain bookkeeping and the closed-form CNOT bounds.
// ---------------------------------------------------------------------------

struct ChainSpec {
  int n = 2;  // chain length, adjacency |i-j| = 1
  int s = 1;  // distance of the designated target from the nearer end
};

inline int chain_end_distance(int n, int t) { return std::min(t, n + 1 - t); }

inline double c_u2_bound(int n, int s) {
  return (5.0 / 6.0) * std::pow(2.0, n) + 2.0 * n - 6.0 * s -
         ((n % 2 == 0) ? 1.0 / 3.0 : 5.0 / 3.0);
}
inline double c_r_bound(int n, int s) {
  return (5.0 / 6.0) * std::pow(2.0, n) + 3.0 * n - 6.0 * s -
         ((n % 2 == 0) ? 4.0 / 3.0 : 5.0 / 3.0);
}
inline double c_u_bound(int n) {
  return (5.0 / 6.0) * std::pow(4.0, n) - n * std::pow(2.0, n) - 2.0 * n +
         ((n % 2 == 0) ? (5.0 / 6.0) * std::pow(2.0, n) - 5.0 / 3.0
                       : 0.5 * std::pow(2.0, n) - 1.0 / 3.0);
}
inline double c_sp_bound(int n) {
  return (10.0 / 3.0) * std::pow(2.0, n) + 2.0 * n * n - 12.0 * n +
         ((n % 2 == 0) ? 14.0 / 3.0 : 10.0 / 3.0);
}

/// The bounds are rational by construction but must land on integers; a
/// non-integer value would mean the formula was transcribed wrong.
inline long long bound_as_integer(double x) {
  double r = std::round(x);
  if (std::abs(x - r) > 1e-9)
    throw NumericError("gate-count bound did not evaluate to an integer");
  return static_cast<long long>(r);
}

inline bool all_cnots_nearest_neighbor(const Circuit& c) {
  for (const Gate& g : c.gates())
    if (g.kind == GateKind::Cnot && std::abs(g.control - g.target) != 1)
      return false;
  return true;
}

// ---------------------------------------------------------------------------
// Cost models of the actual construction, used to pick the compile position.
// A multiplexing CNOT at distance d costs 2d-1 nearest-neighbor CNOTs; an
// adjacent swap costs 3.
// ---------------------------------------------------------------------------

namespace detail {

inline long long nn_ucu_inner_cost(int n, int p) {
  std::vector<int> dist;
  for (int q = 1; q <= n; ++q)
    if (q != p) dist.push_back(std::abs(q - p));
  std::sort(dist.begin(), dist.end(), std::greater<int>());
  long long cost = 0;
  long long sites = 1;
  for (int d : dist) {
    cost += sites * (2LL * d - 1);
    sites *= 2;
  }
  return cost;
}

inline long long nn_ucr_inner_cost(const std::vector<int>& controls, int p) {
  std::vector<int> dist;
  for (int q : controls) dist.push_back(std::abs(q - p));
  std::sort(dist.begin(), dist.end(), std::greater<int>());
  const std::size_t k = dist.size();
  if (k == 0) return 0;
  long long cost = 0;
  for (std::size_t j = 0; j < k; ++j) {
    // Control j (furthest first) sits at pattern bit j; bit l from the LSB
    // flips 2^{k-1-l} times plus once more for the wrap on the MSB.
    std::size_t l = k - 1 - j;
    long long flips = 1LL << (k - 1 - l);
    if (l == k - 1) flips += 1;
    cost += flips * (2LL * dist[j] - 1);
  }
  return cost;
}

template <typename InnerCost>
inline int choose_position(int t, int lo, int hi, InnerCost&& inner) {
  int best = t;
  long long best_cost = inner(t);
  for (int p = lo; p <= hi; ++p) {
    long long cost = 6LL * std::abs(p - t) + inner(p);
    if (cost < best_cost ||
        (cost == best_cost && std::abs(p - t) < std::abs(best - t)) ||
        (cost == best_cost && std::abs(p - t) == std::abs(best - t) && p < best)) {
      best = p;
      best_cost = cost;
    }
  }
  return best;
}

/// Relabeling that moves qubit t to position p on the chain, shifting the
/// block in between by one.
inline std::vector<int> move_permutation(int n, int t, int p) {
  std::vector<int> perm(n + 1);
  for (int q = 0; q <= n; ++q) perm[q] = q;
  if (t < p) {
    perm[t] = p;
    for (int q = t + 1; q <= p; ++q) perm[q] = q - 1;
  } else if (t > p) {
    perm[t] = p;
    for (int q = p; q < t; ++q) perm[q] = q + 1;
  }
  return perm;
}

inline void push_swap(Circuit& c, int a, int b) {
  c.push_cnot(a, b);
  c.push_cnot(b, a);
  c.push_cnot(a, b);
}

inline void push_move_chain(Circuit& c, int t, int p) {
  int step = (p > t) ? 1 : -1;
  for (int q = t; q != p; q += step) push_swap(c, q, q + step);
}

inline void push_move_chain_back(Circuit& c, int t, int p) {
  int step = (p > t) ? 1 : -1;
  for (int q = p; q != t; q -= step) push_swap(c, q - step, q);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Nearest-neighbor compilation of a uniformly controlled one-qubit gate that
// spans a contiguous chain segment. Swaps move the target toward the cheapest
// position when that pays for itself; swap CNOTs count toward the tally.
// ---------------------------------------------------------------------------

struct NnUcuResult {
  Circuit circuit;
  std::vector<UCRotation> delta;  // same diagonal as the general pipeline
  int compile_position = 0;
};

inline NnUcuResult nn_ucu(const UCGate& g, int n, int chain_lo = 1,
                          int chain_hi = 0) {
  if (chain_hi == 0) chain_hi = n;
  validate_ucgate(g, n);
  const int t = g.target;
  int p = detail::choose_position(t, chain_lo, chain_hi, [&](int q) {
    return detail::nn_ucu_inner_cost(chain_hi - chain_lo + 1,
                                     q - chain_lo + 1);
  });

  std::vector<int> perm = detail::move_permutation(n, t, p);
  UCGate relabeled;
  relabeled.target = p;
  relabeled.controls.reserve(g.controls.size());
  for (int c : g.controls) relabeled.controls.push_back(perm[c]);
  relabeled.blocks = g.blocks;
  relabeled = canonicalize_ucgate(relabeled);

  UcuDecomposition inner =
      detail::ucu_core(relabeled, n, default_demux_order(relabeled), /*nn=*/true);

  NnUcuResult out;
  out.compile_position = p;
  out.circuit = Circuit(n);
  detail::push_move_chain(out.circuit, t, p);
  for (const Gate& gg : inner.ftilde.gates()) out.circuit.push(gg);
  detail::push_move_chain_back(out.circuit, t, p);

  out.delta.reserve(inner.delta.size());
  std::vector<int> inv(n + 1);
  for (int q = 1; q <= n; ++q) inv[perm[q]] = q;
  for (const UCRotation& r : inner.delta) {
    UCRotation back = r;
    back.target = inv[r.target];
    for (int& c : back.controls) c = inv[c];
    out.delta.push_back(std::move(back));
  }
  return out;
}

/// Nearest-neighbor compilation of a uniformly controlled rotation about an
/// axis perpendicular to x: the Gray-coded walk with every multiplexing CNOT
/// realized as a fan-in cascade. Exact (no leftover diagonal).
inline Circuit nn_ucr(const UCRotation& r, int n, int chain_lo = 1,
                      int chain_hi = 0) {
  if (chain_hi == 0) chain_hi = n;
  validate_ucr(r, n);
  const int t = r.target;
  int p = detail::choose_position(t, chain_lo, chain_hi, [&](int q) {
    std::vector<int> pm = detail::move_permutation(n, t, q);
    std::vector<int> mapped = r.controls;
    for (int& c : mapped) c = pm[c];
    return detail::nn_ucr_inner_cost(mapped, q);
  });

  std::vector<int> perm = detail::move_permutation(n, t, p);
  UCRotation rel = r;
  rel.target = p;
  for (int& c : rel.controls) c = perm[c];
  // Furthest-first control ordering, ties toward the lower qubit.
  {
    const std::size_t k = rel.controls.size();
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      int dx = std::abs(rel.controls[x] - p), dy = std::abs(rel.controls[y] - p);
      if (dx != dy) return dx > dy;
      return rel.controls[x] < rel.controls[y];
    });
    UCRotation sorted = rel;
    for (std::size_t j = 0; j < k; ++j) sorted.controls[j] = rel.controls[order[j]];
    for (std::size_t q = 0; q < rel.angles.size(); ++q) {
      std::size_t mapped = 0;
      for (std::size_t j = 0; j < k; ++j)
        mapped = (mapped << 1) | ((q >> (k - 1 - order[j])) & 1U);
      sorted.angles[mapped] = rel.angles[q];
    }
    rel = std::move(sorted);
  }

  Circuit c(n);
  detail::push_move_chain(c, t, p);
  const std::size_t k = rel.controls.size();
  if (k == 0) {
    c.push_one_qubit(p, rotation(rel.axis, rel.angles[0]));
  } else {
    const std::size_t N = std::size_t{1} << k;
    std::vector<double> a = ucr_circuit_angles(rel.angles);
    for (std::size_t i = 1; i <= N; ++i) {
      c.push_one_qubit(p, rotation(rel.axis, a[i - 1]));
      int bit = (i == N) ? static_cast<int>(k - 1)
                         : std::countr_zero(static_cast<unsigned long long>(i));
      int control = rel.controls[k - 1 - static_cast<std::size_t>(bit)];
      if (std::abs(control - p) == 1) {
        c.push_cnot(control, p);
      } else {
        for (const Gate& gg : cascade_nn(control, p, n).gates()) c.push(gg);
      }
    }
  }
  detail::push_move_chain_back(c, t, p);
  return c;
}

// ---------------------------------------------------------------------------
// Full pipelines on the chain.
// ---------------------------------------------------------------------------

/// Split order that starts from the ends of the chain and moves alternately
/// toward the center, leaving a near-central qubit as the common target.
inline std::vector<int> nn_split_order(int n) {
  std::vector<int> order;
  int lo = 1, hi = n;
  bool from_lo = true;
  while (static_cast<int>(order.size()) < n - 1) {
    if (from_lo) order.push_back(lo++);
    else order.push_back(hi--);
    from_lo = !from_lo;
  }
  return order;
}

inline Circuit nn_decompose_unitary(const ComplexMatrix& u,
                                    bool run_peephole = true) {
  if (u.rows() != u.cols())
    throw ShapeError("nn_decompose_unitary: square input required");
  const int n = qubit_count_of_dim(u.rows());
  if (n < 1 || n > 7)
    throw ResourceError("nn_decompose_unitary: supported range is 1..7 qubits");
  if (unitarity_defect(u) > 1e-9)
    throw ValidationError("nn_decompose_unitary: input is not unitary");
  if (n == 1) return decompose_unitary(u, run_peephole);

  std::vector<detail::CsdFactor> factors =
      csd_factor_sequence(u, nn_split_order(n), n);
  Circuit circuit = synthesize_factors(
      factors, n,
      [&](const UCGate& g) {
        NnUcuResult r = nn_ucu(g, n);
        UcuDecomposition dec;
        dec.ftilde = std::move(r.circuit);
        dec.delta = std::move(r.delta);
        return dec;
      },
      [&](const UCRotation& r) { return nn_ucr(r, n); });
  return run_peephole ? peephole(circuit) : circuit;
}

/// Nearest-neighbor state-to-state preparation: the level gates of the local
/// preparation sweep, each compiled on its subchain 1..level.
inline Circuit nn_prepare_to_e1(const StateVector& a) {
  a.validate();
  const int n = a.n;
  Circuit circuit(n);
  std::vector<cplx> amps = a.amps;
  const std::size_t tail = std::size_t{1} << n;

  for (int level = n; level >= 1; --level) {
    const std::size_t live = std::size_t{1} << level;
    const std::size_t stride = tail >> level;
    std::vector<std::pair<cplx, cplx>> pairs(live / 2);
    for (std::size_t y = 0; y < live / 2; ++y)
      pairs[y] = {amps[(2 * y) * stride], amps[(2 * y + 1) * stride]};
    NullifyAngles ang = nullify_angles(pairs);

    bool trivial = true;
    for (std::size_t y = 0; y < pairs.size() && trivial; ++y)
      trivial = std::abs(ang.rz_angles[y]) < 1e-14 && std::abs(ang.ry_angles[y]) < 1e-14;
    if (trivial) continue;

    UCGate g;
    g.target = level;
    for (int q = 1; q < level; ++q) g.controls.push_back(q);
    g.blocks.reserve(pairs.size());
    for (std::size_t y = 0; y < pairs.size(); ++y)
      g.blocks.push_back(ry(ang.ry_angles[y]) * rz(ang.rz_angles[y]));

    NnUcuResult dec = nn_ucu(g, n, 1, level);
    for (const Gate& gg : dec.circuit.gates()) {
      circuit.push(gg);
      detail::apply_gate_to_amps(gg, n, amps);
    }
  }
  return circuit;
}

inline Circuit nn_prepare_state(const StateVector& a, const StateVector& b) {
  if (a.n != b.n) throw ShapeError("nn_prepare_state: qubit counts differ");
  if (a.n > 9) throw ResourceError("nn_prepare_state: supported range is 1..9 qubits");
  Circuit c = nn_prepare_to_e1(a);
  c.append(nn_prepare_to_e1(b).inverse());
  return c;
}

}  // namespace ucs
