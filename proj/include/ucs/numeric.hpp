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

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ucs {

using cplx = std::complex<double>;

inline constexpr double PI = std::numbers::pi;
inline constexpr cplx I_UNIT{0.0, 1.0};

/// Single knob for all tolerances. Exactness checks use exact_tol,
/// iterative numerics use iter_tol.
struct NumericPolicy {
  double exact_tol = 1e-10;    // unitarity, reconstruction of closed forms
  double iter_tol = 1e-9;      // SVD and other iterative kernels
  double identity_tol = 1e-12; // "is this gate a phase times identity"
  double zero_tol = 1e-14;     // amplitudes treated as exactly zero
};

inline NumericPolicy& numeric_policy() {
  static NumericPolicy policy;
  return policy;
}

/// arg with the convention arg(0) := 0, which keeps the multiplexor phase
/// formulas total.
inline double arg0(cplx z) {
  if (z == cplx(0.0, 0.0)) return 0.0;
  return std::arg(z);
}

struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg),
        line_number(line) {}
  std::size_t line_number;
};

}  // namespace ucs
