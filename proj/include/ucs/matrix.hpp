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
#include <cstddef>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <vector>

#include "ucs/numeric.hpp"

namespace ucs {

// ---------------------------------------------------------------------------
// Mat2: fixed-size 2x2 complex matrix, the workhorse for gate blocks.
// ---------------------------------------------------------------------------

struct Mat2 {
  // Row-major entries a b / c d.
  cplx a{1.0}, b{0.0}, c{0.0}, d{1.0};

  static Mat2 identity() { return {}; }
  static Mat2 from(cplx a, cplx b, cplx c, cplx d) { return {a, b, c, d}; }

  Mat2 dagger() const {
    return {std::conj(a), std::conj(c), std::conj(b), std::conj(d)};
  }
  cplx det() const { return a * d - b * c; }
  cplx trace() const { return a + d; }

  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
            x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
  }
  friend Mat2 operator*(cplx s, const Mat2& x) {
    return {s * x.a, s * x.b, s * x.c, s * x.d};
  }

  double frob_dist(const Mat2& o) const {
    return std::sqrt(std::norm(a - o.a) + std::norm(b - o.b) +
                     std::norm(c - o.c) + std::norm(d - o.d));
  }
  bool is_unitary(double tol) const {
    return dagger().frob_dist_to_inverse_of(*this) <= tol;
  }
  // ||M†M - I||_F, spelled out to avoid a temporary helper type.
  double frob_dist_to_inverse_of(const Mat2& m) const {
    Mat2 p = *this * m;
    p.a -= 1.0;
    p.d -= 1.0;
    return std::sqrt(std::norm(p.a) + std::norm(p.b) + std::norm(p.c) +
                     std::norm(p.d));
  }
  /// True when this matrix is a phase times the identity; if so, *phase is
  /// set to that phase angle.
  bool is_phase_of_identity(double tol, double* phase = nullptr) const {
    double alpha = arg0(a);
    cplx u = std::polar(1.0, alpha);
    double dist = std::sqrt(std::norm(a - u) + std::norm(b) + std::norm(c) +
                            std::norm(d - u));
    if (dist > tol) return false;
    if (phase) *phase = alpha;
    return true;
  }
};

inline Mat2 pauli_x() { return {0, 1, 1, 0}; }
inline Mat2 pauli_y() { return {0, cplx(0, -1), cplx(0, 1), 0}; }
inline Mat2 pauli_z() { return {1, 0, 0, -1}; }
inline Mat2 hadamard() {
  const double s = 1.0 / std::sqrt(2.0);
  return {s, s, s, -s};
}

/// R_z(t) = diag(e^{-it/2}, e^{it/2}).
inline Mat2 rz(double theta) {
  return {std::polar(1.0, -theta / 2), 0, 0, std::polar(1.0, theta / 2)};
}
/// R_y(t) = [[cos t/2, -sin t/2], [sin t/2, cos t/2]].
inline Mat2 ry(double theta) {
  double c = std::cos(theta / 2), s = std::sin(theta / 2);
  return {c, -s, s, c};
}

// ---------------------------------------------------------------------------
// ComplexMatrix: dense dynamic complex matrix, row-major.
// ---------------------------------------------------------------------------

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0}) {
    if (rows == 0 || cols == 0) throw ShapeError("matrix dimensions must be >= 1");
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }
  static ComplexMatrix from_mat2(const Mat2& g) {
    ComplexMatrix m(2, 2);
    m(0, 0) = g.a;
    m(0, 1) = g.b;
    m(1, 0) = g.c;
    m(1, 1) = g.d;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  ComplexMatrix dagger() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c)
        out(c, r) = std::conj((*this)(r, c));
    return out;
  }

  Mat2 as_mat2() const {
    if (rows_ != 2 || cols_ != 2) throw ShapeError("as_mat2 requires a 2x2 matrix");
    return {(*this)(0, 0), (*this)(0, 1), (*this)(1, 0), (*this)(1, 1)};
  }

  double frob_norm() const {
    double s = 0;
    for (const cplx& z : data_) s += std::norm(z);
    return std::sqrt(s);
  }

  cplx trace() const {
    cplx t = 0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
  }

  friend ComplexMatrix operator*(cplx s, const ComplexMatrix& m) {
    ComplexMatrix out = m;
    for (cplx& z : out.data_) z *= s;
    return out;
  }
  friend ComplexMatrix operator-(const ComplexMatrix& x, const ComplexMatrix& y) {
    if (x.rows_ != y.rows_ || x.cols_ != y.cols_)
      throw ShapeError("matrix subtraction: shape mismatch");
    ComplexMatrix out = x;
    for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] -= y.data_[i];
    return out;
  }

  bool same_shape(const ComplexMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<cplx> data_;
};

inline ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw ShapeError("matmul: inner dimensions differ");
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      cplx aik = a(i, k);
      if (aik == cplx{0.0}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  return matmul(a, b);
}

/// (A ⊗ B)[i*p + k, j*q + l] = A[i,j] * B[k,l] where B is p x q.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      cplx aij = a(i, j);
      if (aij == cplx{0.0}) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

/// ||A†A - I||_F
inline double unitarity_defect(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) return 1e300;
  ComplexMatrix p = a.dagger() * a;
  double s = 0;
  for (std::size_t i = 0; i < p.rows(); ++i)
    for (std::size_t j = 0; j < p.cols(); ++j) {
      cplx v = p(i, j);
      if (i == j) v -= 1.0;
      s += std::norm(v);
    }
  return std::sqrt(s);
}

inline bool is_unitary(const ComplexMatrix& a,
                       double tol = numeric_policy().exact_tol) {
  return unitarity_defect(a) <= tol;
}

/// ||A - e^{i t*} B||_F with t* = arg tr(B†A); plain ||A - B||_F when the
/// trace vanishes.
inline double dist_up_to_global_phase(const ComplexMatrix& a,
                                      const ComplexMatrix& b) {
  if (!a.same_shape(b) || a.rows() != a.cols())
    throw ShapeError("dist_up_to_global_phase: need equal square shapes");
  cplx t = (b.dagger() * a).trace();
  cplx phase = (t == cplx{0.0}) ? cplx{1.0} : std::polar(1.0, std::arg(t));
  double s = 0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      s += std::norm(a(i, j) - phase * b(i, j));
  return std::sqrt(s);
}

// ---------------------------------------------------------------------------
// Random sampling (Haar unitaries via QR of a Ginibre matrix).
// ---------------------------------------------------------------------------

inline ComplexMatrix random_unitary(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = cplx(gauss(rng), gauss(rng));
  // Gram-Schmidt on columns with the R-diagonal phase fixed, which makes the
  // distribution Haar.
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      cplx dot = 0;
      for (std::size_t i = 0; i < n; ++i) dot += std::conj(a(i, k)) * a(i, j);
      for (std::size_t i = 0; i < n; ++i) a(i, j) -= dot * a(i, k);
    }
    double norm = 0;
    for (std::size_t i = 0; i < n; ++i) norm += std::norm(a(i, j));
    norm = std::sqrt(norm);
    cplx lead = a(0, j);
    cplx phase = (std::abs(lead) > 0) ? lead / std::abs(lead) : cplx{1.0};
    for (std::size_t i = 0; i < n; ++i) a(i, j) /= norm * phase;
  }
  return a;
}

inline Mat2 random_unitary2(std::mt19937_64& rng) {
  return random_unitary(2, rng).as_mat2();
}

// ---------------------------------------------------------------------------
// Matrix text format: one header line "rows cols", then rows lines each with
// cols "re im" pairs.
// ---------------------------------------------------------------------------

inline void write_matrix(std::ostream& os, const ComplexMatrix& m) {
  os << m.rows() << ' ' << m.cols() << '\n';
  os.precision(17);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) os << ' ';
      os << m(r, c).real() << ' ' << m(r, c).imag();
    }
    os << '\n';
  }
}

inline ComplexMatrix read_matrix(std::istream& is) {
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
  if (!next_line()) throw ParseError("expected matrix header 'rows cols'", lineno + 1);
  std::istringstream header(line);
  long long rows = 0, cols = 0;
  if (!(header >> rows >> cols) || rows < 1 || cols < 1)
    throw ParseError("bad matrix header, expected two positive integers", lineno);
  ComplexMatrix m(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
  for (long long r = 0; r < rows; ++r) {
    if (!next_line()) throw ParseError("unexpected end of matrix data", lineno + 1);
    std::istringstream row(line);
    for (long long c = 0; c < cols; ++c) {
      double re, im;
      if (!(row >> re >> im))
        throw ParseError("expected " + std::to_string(2 * cols) +
                             " numbers in matrix row",
                         lineno);
      m(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = cplx(re, im);
    }
  }
  return m;
}

}  // namespace ucs
