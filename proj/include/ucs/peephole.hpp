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

#include <cmath>
#include <vector>

#include "ucs/circuit.hpp"
#include "ucs/matrix.hpp"
#include "ucs/numeric.hpp"

namespace ucs {

namespace detail {

inline bool is_diagonal_mat2(const Mat2& m, double tol = 1e-12) {
  return std::sqrt(std::norm(m.b) + std::norm(m.c)) <= tol;
}

/// True when the two CNOTs commute (shared control, shared target, or
/// disjoint supports).
inline bool cnots_commute(const Gate& x, const Gate& y) {
  return x.target != y.control && x.control != y.target;
}

/// Commutation of gate `g` (a candidate slider) with an earlier gate `e`.
inline bool slides_past(const Gate& g, const Gate& e) {
  if (e.kind == GateKind::GlobalPhase) return true;
  if (g.kind == GateKind::OneQubit) {
    if (!e.touches(g.target)) return true;
    // A diagonal one-qubit gate commutes with a CNOT through its control.
    return is_diagonal_mat2(g.matrix) && e.kind == GateKind::Cnot &&
           e.control == g.target;
  }
  if (g.kind == GateKind::Cnot) {
    if (!e.touches(g.target) && !e.touches(g.control)) return true;
    if (e.kind == GateKind::Cnot) return cnots_commute(g, e);
    if (e.kind == GateKind::OneQubit)
      return e.target == g.control && is_diagonal_mat2(e.matrix);
    return false;
  }
  return true;
}

}  // namespace detail

/// Unitary-preserving rewrite (up to a tracked global phase): merges
/// one-qubit gates separated only by gates they commute past, cancels equal
/// CNOT pairs likewise, and drops one-qubit gates that are a phase times the
/// identity, folding the phase into a single trailing PHASE gate.
inline Circuit peephole(const Circuit& input) {
  std::vector<Gate> out;
  double phase = 0;
  bool phase_seen = false;

  auto drop_if_identity = [&](std::vector<Gate>& gates, std::size_t idx) -> bool {
    double alpha;
    if (gates[idx].kind == GateKind::OneQubit &&
        gates[idx].matrix.is_phase_of_identity(numeric_policy().identity_tol,
                                               &alpha)) {
      phase += alpha;
      phase_seen = true;
      gates.erase(gates.begin() + static_cast<long>(idx));
      return true;
    }
    return false;
  };

  std::vector<Gate> pendingv = input.gates();
  bool changed = true;
  while (changed) {
    changed = false;
    out.clear();
    for (const Gate& g0 : pendingv) {
      Gate g = g0;
      if (g.kind == GateKind::GlobalPhase) {
        phase += g.phase;
        phase_seen = true;
        changed = changed || true;
        continue;
      }
      if (g.kind == GateKind::OneQubit) {
        // Walk back past everything this gate commutes with; merge into an
        // earlier one-qubit gate on the same qubit if we reach one.
        std::size_t i = out.size();
        bool merged = false;
        while (i > 0) {
          const Gate& e = out[i - 1];
          if (e.kind == GateKind::OneQubit && e.target == g.target) {
            out[i - 1].matrix = g.matrix * e.matrix;
            if (!drop_if_identity(out, i - 1)) {
              // keep merged gate in place
            }
            merged = true;
            changed = true;
            break;
          }
          if (!detail::slides_past(g, e)) break;
          --i;
        }
        if (!merged) {
          double alpha;
          if (g.matrix.is_phase_of_identity(numeric_policy().identity_tol,
                                            &alpha)) {
            phase += alpha;
            phase_seen = true;
            changed = true;
          } else {
            out.push_back(g);
          }
        }
        continue;
      }
      // CNOT: cancel against an identical earlier CNOT when everything in
      // between commutes with it.
      std::size_t i = out.size();
      bool cancelled = false;
      while (i > 0) {
        const Gate& e = out[i - 1];
        if (e.kind == GateKind::Cnot && e.control == g.control &&
            e.target == g.target) {
          out.erase(out.begin() + static_cast<long>(i - 1));
          cancelled = true;
          changed = true;
          break;
        }
        if (!detail::slides_past(g, e)) break;
        --i;
      }
      if (!cancelled) out.push_back(g);
    }
    pendingv = out;
  }

  Circuit result(input.n());
  for (const Gate& g : pendingv) result.push(g);
  if (phase_seen) result.push_global_phase(phase);
  return result;
}

}  // namespace ucs
