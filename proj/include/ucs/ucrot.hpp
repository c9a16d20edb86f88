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

#include <bit>
#include <cstdint>
#include <vector>

#include "ucs/circuit.hpp"
#include "ucs/matrix.hpp"
#include "ucs/numeric.hpp"

namespace ucs {

enum class Axis : std::uint8_t { Y, Z };

/// Uniformly controlled rotation: one rotation angle about a fixed axis per
/// classical pattern of the control qubits. Pattern bit j corresponds to
/// controls[j], controls[0] most significant.
struct UCRotation {
  Axis axis = Axis::Z;
  std::vector<int> controls;
  int target = 1;
  std::vector<double> angles;
};

inline Mat2 rotation(Axis axis, double theta) {
  return axis == Axis::Y ? ry(theta) : rz(theta);
}

inline void validate_ucr(const UCRotation& r, int n) {
  if (r.target < 1 || r.target > n)
    throw ValidationError("uc-rotation target out of range");
  if (r.angles.size() != (std::size_t{1} << r.controls.size()))
    throw ValidationError("uc-rotation needs 2^k angles");
  for (int c : r.controls) {
    if (c < 1 || c > n) throw ValidationError("uc-rotation control out of range");
    if (c == r.target) throw ValidationError("uc-rotation control equals target");
  }
}

inline std::size_t control_pattern(const std::vector<int>& controls, int n,
                                   std::size_t basis_index) {
  std::size_t p = 0;
  for (int c : controls)
    p = (p << 1) | ((basis_index >> (n - c)) & 1U);
  return p;
}

/// Dense embedding of the rotation on an n-qubit register.
inline ComplexMatrix embed_ucr(const UCRotation& r, int n) {
  validate_ucr(r, n);
  const std::size_t dim = std::size_t{1} << n;
  const std::size_t tmask = std::size_t{1} << (n - r.target);
  ComplexMatrix m(dim, dim);
  for (std::size_t b = 0; b < dim; ++b) {
    if (b & tmask) continue;
    std::size_t p = control_pattern(r.controls, n, b);
    Mat2 g = rotation(r.axis, r.angles[p]);
    m(b, b) = g.a;
    m(b, b | tmask) = g.b;
    m(b | tmask, b) = g.c;
    m(b | tmask, b | tmask) = g.d;
  }
  return m;
}

namespace detail {

/// In-place Walsh-Hadamard transform; w[g] = sum_p (-1)^{<g,p>} theta[p].
inline std::vector<double> walsh(const std::vector<double>& theta) {
  std::vector<double> w = theta;
  for (std::size_t len = 1; len < w.size(); len <<= 1) {
    for (std::size_t base = 0; base < w.size(); base += 2 * len) {
      for (std::size_t i = base; i < base + len; ++i) {
        double x = w[i], y = w[i + len];
        w[i] = x + y;
        w[i + len] = x - y;
      }
    }
  }
  return w;
}

inline std::size_t gray(std::size_t x) { return x ^ (x >> 1); }

}  // namespace detail

/// Rotation angles in the Gray-coded circuit order: the i-th emitted rotation
/// (i from 1) carries w[gray(i-1)] / 2^k. This is the fully unrolled form of
/// the half-sum / half-difference demultiplexing recursion, with the mirrored
/// halves already folded so junction CNOTs cancel structurally.
inline std::vector<double> ucr_circuit_angles(const std::vector<double>& theta) {
  std::vector<double> w = detail::walsh(theta);
  std::vector<double> out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i)
    out[i] = w[detail::gray(i)] / static_cast<double>(w.size());
  return out;
}

/// Compiles a uniformly controlled rotation into exactly 2^k one-qubit
/// rotations and 2^k CNOTs, all CNOTs targeting r.target. Conjugation by the
/// CNOT negates the rotation angle for axes perpendicular to x, which is what
/// makes the angle bookkeeping linear.
inline Circuit ucr_compile(const UCRotation& r, int n) {
  validate_ucr(r, n);
  Circuit c(n);
  const std::size_t k = r.controls.size();
  if (k == 0) {
    c.push_one_qubit(r.target, rotation(r.axis, r.angles[0]));
    return c;
  }
  const std::size_t N = std::size_t{1} << k;
  std::vector<double> a = ucr_circuit_angles(r.angles);
  for (std::size_t i = 1; i <= N; ++i) {
    c.push_one_qubit(r.target, rotation(r.axis, a[i - 1]));
    // Bit that flips between gray(i-1) and gray(i); the wrap step flips the
    // most significant bit.
    int bit = (i == N) ? static_cast<int>(k - 1)
                       : std::countr_zero(static_cast<unsigned long long>(i));
    int control = r.controls[k - 1 - static_cast<std::size_t>(bit)];
    c.push_cnot(control, r.target);
  }
  return c;
}

/// Horizontal mirror of a compiled uniformly controlled rotation. For
/// rotation circuits about a fixed axis perpendicular to x all factors
/// commute blockwise, so reversing the gate order leaves the unitary intact.
inline Circuit ucr_mirror(const Circuit& c) {
  Circuit out(c.n());
  for (auto it = c.gates().rbegin(); it != c.gates().rend(); ++it) out.push(*it);
  return out;
}

}  // namespace ucs
