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
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ucs/matrix.hpp"
#include "ucs/numeric.hpp"

namespace ucs {

// Qubit convention, locked project-wide: qubit 1 is the most significant bit
// of the computational-basis index, qubit n the least significant. A
// one-qubit gate g on qubit p embeds as I_{2^{p-1}} (x) g (x) I_{2^{n-p}}.
// The leftmost gate in a Circuit's list is applied first.

enum class GateKind : std::uint8_t { OneQubit, Cnot, GlobalPhase };

struct Gate {
  GateKind kind = GateKind::OneQubit;
  int target = 0;   // OneQubit, Cnot
  int control = 0;  // Cnot only
  Mat2 matrix;      // OneQubit only
  double phase = 0; // GlobalPhase only

  static Gate one_qubit(int target, const Mat2& m) {
    Gate g;
    g.kind = GateKind::OneQubit;
    g.target = target;
    g.matrix = m;
    return g;
  }
  static Gate cnot(int control, int target) {
    Gate g;
    g.kind = GateKind::Cnot;
    g.control = control;
    g.target = target;
    return g;
  }
  static Gate global_phase(double angle) {
    Gate g;
    g.kind = GateKind::GlobalPhase;
    g.phase = angle;
    return g;
  }

  bool touches(int qubit) const {
    switch (kind) {
      case GateKind::OneQubit: return qubit == target;
      case GateKind::Cnot: return qubit == target || qubit == control;
      case GateKind::GlobalPhase: return false;
    }
    return false;
  }
};

struct GateCounts {
  std::size_t cnot = 0;
  std::size_t one_qubit = 0;
};

struct StateVector {
  int n = 0;
  std::vector<cplx> amps;

  static StateVector basis(int n, std::size_t index = 0) {
    StateVector s;
    s.n = n;
    s.amps.assign(std::size_t{1} << n, cplx{0.0});
    s.amps[index] = 1.0;
    return s;
  }
  double norm() const {
    double t = 0;
    for (const cplx& z : amps) t += std::norm(z);
    return std::sqrt(t);
  }
  void validate(double tol = 1e-12) const {
    if (amps.size() != (std::size_t{1} << n))
      throw ShapeError("state vector length must be 2^n");
    if (std::abs(norm() - 1.0) > tol)
      throw ValidationError("state vector is not normalized");
  }
};

class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(int n) : n_(n) {
    if (n < 1) throw ValidationError("circuit needs at least one qubit");
  }

  int n() const { return n_; }
  const std::vector<Gate>& gates() const { return gates_; }
  std::vector<Gate>& gates() { return gates_; }

  void push(const Gate& g) {
    check(g);
    gates_.push_back(g);
  }
  void push_one_qubit(int target, const Mat2& m) { push(Gate::one_qubit(target, m)); }
  void push_cnot(int control, int target) { push(Gate::cnot(control, target)); }
  void push_global_phase(double angle) { push(Gate::global_phase(angle)); }

  void append(const Circuit& other) {
    if (other.n_ != n_) throw ShapeError("append: qubit counts differ");
    for (const Gate& g : other.gates_) push(g);
  }

  /// The inverse circuit: reversed order, each gate conjugated.
  Circuit inverse() const {
    Circuit inv(n_);
    for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) {
      switch (it->kind) {
        case GateKind::OneQubit:
          inv.push_one_qubit(it->target, it->matrix.dagger());
          break;
        case GateKind::Cnot:
          inv.push_cnot(it->control, it->target);
          break;
        case GateKind::GlobalPhase:
          inv.push_global_phase(-it->phase);
          break;
      }
    }
    return inv;
  }

 private:
  void check(const Gate& g) const {
    switch (g.kind) {
      case GateKind::OneQubit:
        if (g.target < 1 || g.target > n_)
          throw ValidationError("gate target out of range");
        if (g.matrix.dagger().frob_dist_to_inverse_of(g.matrix) >
            numeric_policy().exact_tol)
          throw ValidationError("one-qubit gate matrix is not unitary");
        break;
      case GateKind::Cnot:
        if (g.target < 1 || g.target > n_ || g.control < 1 || g.control > n_)
          throw ValidationError("CNOT qubit out of range");
        if (g.target == g.control)
          throw ValidationError("CNOT control equals target");
        break;
      case GateKind::GlobalPhase:
        break;
    }
  }

  int n_ = 1;
  std::vector<Gate> gates_;
};

// ---------------------------------------------------------------------------
// Simulation
// ---------------------------------------------------------------------------

namespace detail {

inline void apply_gate_to_amps(const Gate& g, int n, std::vector<cplx>& amps) {
  const std::size_t dim = amps.size();
  switch (g.kind) {
    case GateKind::OneQubit: {
      const std::size_t stride = std::size_t{1} << (n - g.target);
      const Mat2& m = g.matrix;
      for (std::size_t base = 0; base < dim; base += 2 * stride) {
        for (std::size_t i = base; i < base + stride; ++i) {
          cplx x = amps[i], y = amps[i + stride];
          amps[i] = m.a * x + m.b * y;
          amps[i + stride] = m.c * x + m.d * y;
        }
      }
      break;
    }
    case GateKind::Cnot: {
      const std::size_t cbit = std::size_t{1} << (n - g.control);
      const std::size_t tbit = std::size_t{1} << (n - g.target);
      for (std::size_t i = 0; i < dim; ++i) {
        if ((i & cbit) && !(i & tbit)) std::swap(amps[i], amps[i | tbit]);
      }
      break;
    }
    case GateKind::GlobalPhase: {
      cplx ph = std::polar(1.0, g.phase);
      for (cplx& z : amps) z *= ph;
      break;
    }
  }
}

}  // namespace detail

/// Applies the circuit gate by gate without forming the dense unitary.
inline StateVector apply(const Circuit& c, const StateVector& in) {
  if (in.n != c.n() || in.amps.size() != (std::size_t{1} << c.n()))
    throw ShapeError("apply: state dimension does not match circuit");
  StateVector out = in;
  for (const Gate& g : c.gates()) detail::apply_gate_to_amps(g, c.n(), out.amps);
  return out;
}

/// Dense unitary of the circuit under the fixed qubit convention.
inline ComplexMatrix unitary_of(const Circuit& c) {
  if (c.n() > 12)
    throw ResourceError("unitary_of: dense simulation capped at 12 qubits");
  const std::size_t dim = std::size_t{1} << c.n();
  // Work column-by-column so each column stays cache resident.
  ComplexMatrix u(dim, dim);
  std::vector<cplx> col(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    std::fill(col.begin(), col.end(), cplx{0.0});
    col[j] = 1.0;
    for (const Gate& g : c.gates()) detail::apply_gate_to_amps(g, c.n(), col);
    for (std::size_t i = 0; i < dim; ++i) u(i, j) = col[i];
  }
  return u;
}

inline GateCounts counts(const Circuit& c) {
  GateCounts out;
  for (const Gate& g : c.gates()) {
    if (g.kind == GateKind::Cnot) ++out.cnot;
    else if (g.kind == GateKind::OneQubit) ++out.one_qubit;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Text format. One gate per line in application order:
//   QUBITS <n>
//   U1 <target> <a_re> <a_im> <b_re> <b_im> <c_re> <c_im> <d_re> <d_im>
//   CX <control> <target>
//   PHASE <angle>
// Lines starting with '#' are comments.
// ---------------------------------------------------------------------------

inline void serialize(std::ostream& os, const Circuit& c,
                      const std::string& header_comment = "") {
  os.precision(17);
  if (!header_comment.empty()) os << "# " << header_comment << '\n';
  os << "QUBITS " << c.n() << '\n';
  for (const Gate& g : c.gates()) {
    switch (g.kind) {
      case GateKind::OneQubit:
        os << "U1 " << g.target << ' ' << g.matrix.a.real() << ' '
           << g.matrix.a.imag() << ' ' << g.matrix.b.real() << ' '
           << g.matrix.b.imag() << ' ' << g.matrix.c.real() << ' '
           << g.matrix.c.imag() << ' ' << g.matrix.d.real() << ' '
           << g.matrix.d.imag() << '\n';
        break;
      case GateKind::Cnot:
        os << "CX " << g.control << ' ' << g.target << '\n';
        break;
      case GateKind::GlobalPhase:
        os << "PHASE " << g.phase << '\n';
        break;
    }
  }
}

inline Circuit parse_circuit(std::istream& is) {
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  Circuit c;
  while (std::getline(is, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) continue;
    if (line[first] == '#') continue;
    std::istringstream ss(line);
    std::string tok;
    ss >> tok;
    if (!have_header) {
      if (tok != "QUBITS") throw ParseError("expected QUBITS header", lineno);
      int n;
      if (!(ss >> n) || n < 1) throw ParseError("bad qubit count", lineno);
      c = Circuit(n);
      have_header = true;
      continue;
    }
    try {
      if (tok == "U1") {
        int t;
        double re[4], im[4];
        if (!(ss >> t >> re[0] >> im[0] >> re[1] >> im[1] >> re[2] >> im[2] >>
              re[3] >> im[3]))
          throw ParseError("malformed U1 line", lineno);
        c.push_one_qubit(t, Mat2::from({re[0], im[0]}, {re[1], im[1]},
                                       {re[2], im[2]}, {re[3], im[3]}));
      } else if (tok == "CX") {
        int ctl, t;
        if (!(ss >> ctl >> t)) throw ParseError("malformed CX line", lineno);
        c.push_cnot(ctl, t);
      } else if (tok == "PHASE") {
        double a;
        if (!(ss >> a)) throw ParseError("malformed PHASE line", lineno);
        c.push_global_phase(a);
      } else {
        throw ParseError("unknown gate '" + tok + "'", lineno);
      }
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  if (!have_header) throw ParseError("empty circuit file, missing QUBITS header", 1);
  return c;
}

inline bool operator==(const Gate& x, const Gate& y) {
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case GateKind::OneQubit:
      return x.target == y.target && x.matrix.a == y.matrix.a &&
             x.matrix.b == y.matrix.b && x.matrix.c == y.matrix.c &&
             x.matrix.d == y.matrix.d;
    case GateKind::Cnot:
      return x.control == y.control && x.target == y.target;
    case GateKind::GlobalPhase:
      return x.phase == y.phase;
  }
  return false;
}

// ---------------------------------------------------------------------------
// One-way OpenQASM 2.0 flavored export (u3 / cx, global phase as a comment).
// ---------------------------------------------------------------------------

namespace detail {

struct Zyz {
  double theta, phi, lambda, alpha;  // U = e^{i alpha} Rz(phi) Ry(theta) Rz(lambda)
};

inline Zyz zyz_angles(const Mat2& m) {
  Zyz out{};
  out.alpha = arg0(m.det()) / 2.0;
  Mat2 v = std::polar(1.0, -out.alpha) * m;  // now in SU(2)
  double c = std::abs(v.a), s = std::abs(v.c);
  out.theta = 2.0 * std::atan2(s, c);
  double sum = (c > 1e-12) ? -2.0 * arg0(v.a) : 0.0;   // phi + lambda
  double diff = (s > 1e-12) ? 2.0 * arg0(v.c) : 0.0;   // phi - lambda
  out.phi = (sum + diff) / 2.0;
  out.lambda = (sum - diff) / 2.0;
  return out;
}

}  // namespace detail

inline void export_qasm(std::ostream& os, const Circuit& c) {
  os.precision(17);
  os << "OPENQASM 2.0;\n";
  os << "include \"qelib1.inc\";\n";
  os << "qreg q[" << c.n() << "];\n";
  double phase = 0;
  for (const Gate& g : c.gates()) {
    switch (g.kind) {
      case GateKind::OneQubit: {
        detail::Zyz z = detail::zyz_angles(g.matrix);
        os << "u3(" << z.theta << ',' << z.phi << ',' << z.lambda << ") q["
           << (g.target - 1) << "];\n";
        phase += z.alpha - (z.phi + z.lambda) / 2.0;
        break;
      }
      case GateKind::Cnot:
        os << "cx q[" << (g.control - 1) << "],q[" << (g.target - 1) << "];\n";
        break;
      case GateKind::GlobalPhase:
        phase += g.phase;
        break;
    }
  }
  os << "// global phase: " << phase << "\n";
}

}  // namespace ucs
