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
#include <numeric>
#include <vector>

#include "ucs/matrix.hpp"
#include "ucs/numeric.hpp"

namespace ucs {

struct SvdResult {
  ComplexMatrix u;             // rows x rows, unitary
  std::vector<double> sigma;   // min(rows, cols), descending, >= 0
  ComplexMatrix v;             // cols x cols, unitary; A = U diag(sigma) V†
};

namespace detail {

// Orthonormalizes near-null columns of u against the others in place.
inline void complete_orthonormal_columns(ComplexMatrix& u,
                                         const std::vector<bool>& fixed) {
  const std::size_t n = u.rows();
  for (std::size_t j = 0; j < u.cols(); ++j) {
    if (fixed[j]) continue;
    // Try basis vectors until one survives projection.
    for (std::size_t cand = 0; cand <= n; ++cand) {
      if (cand == n)
        throw NumericError("svd: failed to complete orthonormal basis");
      for (std::size_t i = 0; i < n; ++i) u(i, j) = (i == cand) ? 1.0 : 0.0;
      for (std::size_t k = 0; k < u.cols(); ++k) {
        if (k == j || (!fixed[k] && k > j)) continue;
        cplx dot = 0;
        for (std::size_t i = 0; i < n; ++i) dot += std::conj(u(i, k)) * u(i, j);
        for (std::size_t i = 0; i < n; ++i) u(i, j) -= dot * u(i, k);
      }
      double norm = 0;
      for (std::size_t i = 0; i < n; ++i) norm += std::norm(u(i, j));
      norm = std::sqrt(norm);
      if (norm > 0.5) {
        for (std::size_t i = 0; i < n; ++i) u(i, j) /= norm;
        break;
      }
    }
  }
}

}  // namespace detail

/// One-sided Jacobi SVD of a square complex matrix. Deterministic, high
/// relative accuracy, quadratic convergence; plenty for the dimensions the
/// synthesis pipeline touches.
inline SvdResult svd(const ComplexMatrix& a_in) {
  if (a_in.rows() != a_in.cols())
    throw ShapeError("svd: only square matrices are supported");
  const std::size_t n = a_in.rows();
  ComplexMatrix a = a_in;
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double tol = 1e-15;
  const int max_sweeps = 64;
  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double app = 0, aqq = 0;
        cplx apq = 0;
        for (std::size_t i = 0; i < n; ++i) {
          app += std::norm(a(i, p));
          aqq += std::norm(a(i, q));
          apq += std::conj(a(i, p)) * a(i, q);
        }
        double mag = std::abs(apq);
        if (mag <= tol * std::sqrt(app * aqq) || mag == 0.0) continue;
        rotated = true;
        double phi = std::arg(apq);
        double tau = (aqq - app) / (2.0 * mag);
        double t = (tau >= 0 ? 1.0 : -1.0) /
                   (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = t * c;
        cplx eip = std::polar(1.0, phi);
        for (std::size_t i = 0; i < n; ++i) {
          cplx xp = a(i, p), xq = a(i, q);
          a(i, p) = c * xp - s * std::conj(eip) * xq;
          a(i, q) = s * eip * xp + c * xq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          cplx xp = v(i, p), xq = v(i, q);
          v(i, p) = c * xp - s * std::conj(eip) * xq;
          v(i, q) = s * eip * xp + c * xq;
        }
      }
    }
    if (!rotated) break;
  }
  if (sweep == max_sweeps)
    throw NumericError("svd: Jacobi iteration did not converge after " +
                       std::to_string(max_sweeps) + " sweeps");

  std::vector<double> sigma(n);
  double sig_max = 0;
  for (std::size_t j = 0; j < n; ++j) {
    double norm = 0;
    for (std::size_t i = 0; i < n; ++i) norm += std::norm(a(i, j));
    sigma[j] = std::sqrt(norm);
    sig_max = std::max(sig_max, sigma[j]);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  ComplexMatrix u(n, n), vs(n, n);
  std::vector<double> sig_sorted(n);
  std::vector<bool> fixed(n, true);
  const double null_tol = (sig_max > 0 ? sig_max : 1.0) * 1e-14;
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t src = order[j];
    sig_sorted[j] = sigma[src];
    for (std::size_t i = 0; i < n; ++i) vs(i, j) = v(i, src);
    if (sigma[src] > null_tol) {
      for (std::size_t i = 0; i < n; ++i) u(i, j) = a(i, src) / sigma[src];
    } else {
      fixed[j] = false;
      sig_sorted[j] = 0.0;
    }
  }
  detail::complete_orthonormal_columns(u, fixed);
  return {std::move(u), std::move(sig_sorted), std::move(vs)};
}

/// Unitary polar factor of a (square) matrix: the nearest unitary, U V† from
/// the SVD.
inline ComplexMatrix polar_unitary(const ComplexMatrix& a) {
  SvdResult f = svd(a);
  return f.u * f.v.dagger();
}

// ---------------------------------------------------------------------------
// Closed-form eigendecomposition of a 2x2 unitary.
// ---------------------------------------------------------------------------

struct Eig2Result {
  cplx values[2];
  Mat2 vectors;      // columns are eigenvectors, det = 1
  double det_phase;  // phase stripped off to reach det 1
};

/// Solves the characteristic quadratic exactly; eigenvectors come from the
/// larger-norm row of (X - lambda I) to dodge cancellation. Degenerate input
/// (a phase times identity) returns the identity basis.
inline Eig2Result eig2_unitary(const Mat2& x,
                               double tol = numeric_policy().exact_tol) {
  if (x.dagger().frob_dist_to_inverse_of(x) > tol)
    throw ValidationError("eig2_unitary: input is not unitary");

  Eig2Result out;
  double phase_if_id;
  if (x.is_phase_of_identity(1e-12, &phase_if_id)) {
    out.values[0] = out.values[1] = std::polar(1.0, phase_if_id);
    out.vectors = Mat2::identity();
    out.det_phase = 0.0;
    return out;
  }

  cplx tr = x.trace();
  cplx det = x.det();
  cplx disc = std::sqrt(tr * tr - 4.0 * det);
  cplx l0 = (tr + disc) / 2.0;
  cplx l1 = (tr - disc) / 2.0;
  out.values[0] = l0;
  out.values[1] = l1;

  // Rows of (X - l0 I); pick the better-conditioned one.
  cplx r0a = x.a - l0, r0b = x.b;
  cplx r1a = x.c, r1b = x.d - l0;
  cplx vx, vy;
  if (std::norm(r0a) + std::norm(r0b) >= std::norm(r1a) + std::norm(r1b)) {
    vx = r0b;
    vy = -r0a;
  } else {
    vx = r1b;
    vy = -r1a;
  }
  double nrm = std::sqrt(std::norm(vx) + std::norm(vy));
  vx /= nrm;
  vy /= nrm;
  // Second column: the Hermitian-orthogonal partner; this already gives
  // det = |vx|^2 + |vy|^2 = 1.
  Mat2 v{vx, -std::conj(vy), vy, std::conj(vx)};
  double beta = arg0(v.det()) / 2.0;
  out.vectors = std::polar(1.0, -beta) * v;
  out.det_phase = beta;
  return out;
}

}  // namespace ucs
