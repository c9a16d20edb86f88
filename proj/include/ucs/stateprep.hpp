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
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "ucs/circuit.hpp"
#include "ucs/matrix.hpp"
#include "ucs/mux.hpp"
#include "ucs/numeric.hpp"

namespace ucs {

struct NullifyAngles {
  std::vector<double> rz_angles;
  std::vector<double> ry_angles;
  std::vector<double> residual_phases;     // never compiled; absorbed diagonal
  std::vector<double> merged_magnitudes;   // sqrt(|a|^2 + |b|^2) per pair
};

/// Per amplitude pair (alpha, beta): R_z aligns the two phases, R_y rotates
/// the weight into the first component, sending (alpha, beta) to
/// (e^{i psi} r, 0). Pairs below the zero threshold get zero angles.
inline NullifyAngles nullify_angles(const std::vector<std::pair<cplx, cplx>>& pairs) {
  NullifyAngles out;
  out.rz_angles.reserve(pairs.size());
  out.ry_angles.reserve(pairs.size());
  out.residual_phases.reserve(pairs.size());
  out.merged_magnitudes.reserve(pairs.size());
  const double zero_tol = numeric_policy().zero_tol;
  for (const auto& [alpha, beta] : pairs) {
    double r = std::sqrt(std::norm(alpha) + std::norm(beta));
    if (std::abs(alpha) < zero_tol && std::abs(beta) < zero_tol) {
      out.rz_angles.push_back(0.0);
      out.ry_angles.push_back(0.0);
      out.residual_phases.push_back(0.0);
      out.merged_magnitudes.push_back(r);
      continue;
    }
    double a = arg0(alpha), b = arg0(beta);
    double theta_z = a - b;
    double theta_y = -2.0 * std::atan2(std::abs(beta), std::abs(alpha));
    out.rz_angles.push_back(theta_z);
    out.ry_angles.push_back(theta_y);
    out.residual_phases.push_back(0.5 * (a + b));
    out.merged_magnitudes.push_back(r);
  }
  return out;
}

/// Circuit sending |a> to e^{i chi} |e_1>. Per level i = n..1 the pair of
/// uniformly controlled rotations from nullify_angles combines into one
/// uniformly controlled gate, implemented up to its diagonal (the diagonal
/// does not mix the states, so it only reshuffles phases the next level
/// absorbs). Levels whose angles all vanish are skipped.
inline Circuit prepare_to_e1(const StateVector& a) {
  a.validate();
  const int n = a.n;
  Circuit circuit(n);
  std::vector<cplx> amps = a.amps;
  const std::size_t tail = std::size_t{1} << n;  // stride bookkeeping below

  for (int level = n; level >= 1; --level) {
    const std::size_t live = std::size_t{1} << level;       // qubits 1..level
    const std::size_t stride = tail >> level;                // index spacing
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

    UcuDecomposition dec = ucu_decompose(g, n);
    for (const Gate& gg : dec.ftilde.gates()) {
      circuit.push(gg);
      detail::apply_gate_to_amps(gg, n, amps);
    }
  }
  return circuit;
}

/// |a> to |b>: forward to |e_1>, then the inverse of the |b> preparation.
inline Circuit prepare_state(const StateVector& a, const StateVector& b) {
  if (a.n != b.n) throw ShapeError("prepare_state: qubit counts differ");
  Circuit c = prepare_to_e1(a);
  c.append(prepare_to_e1(b).inverse());
  return c;
}

// ---------------------------------------------------------------------------
// State text format: line 1 = n, then 2^n lines "re im" in index order.
// ---------------------------------------------------------------------------

inline void write_state(std::ostream& os, const StateVector& s) {
  os.precision(17);
  os << s.n << '\n';
  for (const cplx& z : s.amps) os << z.real() << ' ' << z.imag() << '\n';
}

inline StateVector read_state(std::istream& is) {
  std::string line;
  std::size_t lineno = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(is, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
      if (line[line.find_first_not_of(" \t")] == '#') continue;
      return true;
    }
    return false;
  };
  if (!next_line()) throw ParseError("expected qubit count", lineno + 1);
  StateVector s;
  {
    std::istringstream ss(line);
    if (!(ss >> s.n) || s.n < 1) throw ParseError("bad qubit count", lineno);
  }
  const std::size_t dim = std::size_t{1} << s.n;
  s.amps.reserve(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    if (!next_line()) throw ParseError("unexpected end of state data", lineno + 1);
    std::istringstream ss(line);
    double re, im;
    if (!(ss >> re >> im)) throw ParseError("expected 're im' amplitude", lineno);
    s.amps.emplace_back(re, im);
  }
  return s;
}

inline StateVector random_state(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  StateVector s;
  s.n = n;
  s.amps.resize(std::size_t{1} << n);
  double norm = 0;
  for (cplx& z : s.amps) {
    z = cplx(gauss(rng), gauss(rng));
    norm += std::norm(z);
  }
  norm = std::sqrt(norm);
  for (cplx& z : s.amps) z /= norm;
  return s;
}

/// Fidelity |<b|psi>|.
inline double fidelity(const StateVector& b, const StateVector& psi) {
  if (b.n != psi.n) throw ShapeError("fidelity: qubit counts differ");
  cplx overlap = 0;
  for (std::size_t i = 0; i < b.amps.size(); ++i)
    overlap += std::conj(b.amps[i]) * psi.amps[i];
  return std::abs(overlap);
}

}  // namespace ucs
