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

#include <vector>

#include "ucs/matrix.hpp"
#include "ucs/mux.hpp"
#include "ucs/numeric.hpp"
#include "ucs/ucrot.hpp"

namespace ucs {

/// Diagonal n-qubit gate, entry j = e^{i phases[j]}.
struct DiagonalGate {
  int n = 1;
  std::vector<double> phases;

  static DiagonalGate identity(int n) {
    DiagonalGate d;
    d.n = n;
    d.phases.assign(std::size_t{1} << n, 0.0);
    return d;
  }
};

inline void validate_diag(const DiagonalGate& d) {
  if (d.phases.size() != (std::size_t{1} << d.n))
    throw ShapeError("diagonal gate needs 2^n phases");
}

inline ComplexMatrix embed_diag(const DiagonalGate& d) {
  validate_diag(d);
  ComplexMatrix m(d.phases.size(), d.phases.size());
  for (std::size_t j = 0; j < d.phases.size(); ++j)
    m(j, j) = std::polar(1.0, d.phases[j]);
  return m;
}

struct DiagDecomposition {
  std::vector<UCRotation> rotations;  // z cascade, application order
  double global_phase = 0;
};

/// Peels the least significant qubit first: level j (from n down to 1) emits
/// a uniformly controlled z rotation on qubit j controlled by 1..j-1, angle
/// per pair phi_(p,1) - phi_(p,0), carrying the pair means upward.
inline DiagDecomposition diag_decompose(const DiagonalGate& d) {
  validate_diag(d);
  DiagDecomposition out;
  std::vector<double> phi = d.phases;
  for (int j = d.n; j >= 1; --j) {
    const std::size_t half = phi.size() / 2;
    UCRotation r;
    r.axis = Axis::Z;
    r.target = j;
    for (int c = 1; c < j; ++c) r.controls.push_back(c);
    r.angles.resize(half);
    std::vector<double> next(half);
    for (std::size_t p = 0; p < half; ++p) {
      r.angles[p] = phi[2 * p + 1] - phi[2 * p];
      next[p] = 0.5 * (phi[2 * p] + phi[2 * p + 1]);
    }
    out.rotations.push_back(std::move(r));
    phi = std::move(next);
  }
  out.global_phase = phi[0];
  return out;
}

/// Accumulates a cascade of uniformly controlled z rotations (plus a phase)
/// into a dense phase table. Cheap: no matrices involved.
inline DiagonalGate ucrz_cascade_to_diag(const std::vector<UCRotation>& rotations,
                                         int n, double global_phase = 0.0) {
  DiagonalGate d = DiagonalGate::identity(n);
  for (double& p : d.phases) p = global_phase;
  for (const UCRotation& r : rotations) {
    if (r.axis != Axis::Z)
      throw ValidationError("cascade accumulation needs z rotations");
    const std::size_t tmask = std::size_t{1} << (n - r.target);
    for (std::size_t b = 0; b < d.phases.size(); ++b) {
      std::size_t p = control_pattern(r.controls, n, b);
      d.phases[b] += (b & tmask) ? r.angles[p] / 2.0 : -r.angles[p] / 2.0;
    }
  }
  return d;
}

/// embed(result) = embed(d) * embed(g): the diagonal is applied after the
/// gate, so each block picks up the restricted phases on the left.
inline UCGate merge_diag_into_ucu(const DiagonalGate& d, const UCGate& g) {
  validate_diag(d);
  validate_ucgate(g, d.n);
  const int n = d.n;
  const std::size_t tmask = std::size_t{1} << (n - g.target);
  UCGate out = g;
  for (std::size_t b = 0; b < d.phases.size(); ++b) {
    if (b & tmask) continue;
    std::size_t p = control_pattern(g.controls, n, b);
    cplx ph0 = std::polar(1.0, d.phases[b]);
    cplx ph1 = std::polar(1.0, d.phases[b | tmask]);
    Mat2& blk = out.blocks[p];
    blk.a *= ph0;
    blk.b *= ph0;
    blk.c *= ph1;
    blk.d *= ph1;
  }
  return out;
}

/// Same merge with the diagonal applied before the gate (right factor).
inline UCGate merge_ucu_with_diag(const UCGate& g, const DiagonalGate& d) {
  validate_diag(d);
  validate_ucgate(g, d.n);
  const int n = d.n;
  const std::size_t tmask = std::size_t{1} << (n - g.target);
  UCGate out = g;
  for (std::size_t b = 0; b < d.phases.size(); ++b) {
    if (b & tmask) continue;
    std::size_t p = control_pattern(g.controls, n, b);
    cplx ph0 = std::polar(1.0, d.phases[b]);
    cplx ph1 = std::polar(1.0, d.phases[b | tmask]);
    Mat2& blk = out.blocks[p];
    blk.a *= ph0;
    blk.c *= ph0;
    blk.b *= ph1;
    blk.d *= ph1;
  }
  return out;
}

}  // namespace ucs
