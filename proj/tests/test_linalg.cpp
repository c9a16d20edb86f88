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

#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "ucs/matrix.hpp"
#include "ucs/svd.hpp"

using namespace ucs;

namespace {

ComplexMatrix random_matrix(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = cplx(g(rng), g(rng));
  return m;
}

}  // namespace

TEST_CASE("matmul identities and triple-loop oracle") {
  ComplexMatrix i2 = ComplexMatrix::identity(2);
  ComplexMatrix sx = ComplexMatrix::from_mat2(pauli_x());
  CHECK((i2 * i2 - i2).frob_norm() == 0.0);
  CHECK((sx * sx - i2).frob_norm() == 0.0);

  std::mt19937_64 rng(11);
  ComplexMatrix a = random_matrix(4, rng), b = random_matrix(4, rng);
  ComplexMatrix ab = a * b;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      cplx acc = 0;
      for (std::size_t k = 0; k < 4; ++k) acc += a(i, k) * b(k, j);
      CHECK(std::abs(ab(i, j) - acc) < 1e-13);
    }

  ComplexMatrix bad(4, 3);
  CHECK_THROWS_AS(matmul(bad, bad), ShapeError);
}

TEST_CASE("kron diagonal cases and index-formula oracle") {
  ComplexMatrix i2 = ComplexMatrix::identity(2);
  ComplexMatrix sz = ComplexMatrix::from_mat2(pauli_z());

  ComplexMatrix k1 = kron(i2, sz);
  double expected1[4] = {1, -1, 1, -1};
  for (std::size_t i = 0; i < 4; ++i)
    CHECK(std::abs(k1(i, i) - cplx(expected1[i])) < 1e-15);

  ComplexMatrix k2 = kron(sz, i2);
  double expected2[4] = {1, 1, -1, -1};
  for (std::size_t i = 0; i < 4; ++i)
    CHECK(std::abs(k2(i, i) - cplx(expected2[i])) < 1e-15);

  std::mt19937_64 rng(12);
  ComplexMatrix a = random_matrix(2, rng), b = random_matrix(2, rng);
  ComplexMatrix k = kron(a, b);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t p = 0; p < 2; ++p)
        for (std::size_t q = 0; q < 2; ++q)
          CHECK(k(i * 2 + p, j * 2 + q) == a(i, j) * b(p, q));
}

TEST_CASE("dist_up_to_global_phase") {
  ComplexMatrix i2 = ComplexMatrix::identity(2);
  ComplexMatrix phased = std::polar(1.0, PI / 7.0) * i2;
  CHECK(dist_up_to_global_phase(i2, phased) < 1e-14);

  ComplexMatrix sx = ComplexMatrix::from_mat2(pauli_x());
  CHECK(dist_up_to_global_phase(sx, sx) < 1e-14);

  // tr(sx† I) = 0, so the plain Frobenius distance applies: ||I - sx||_F = 2.
  CHECK(dist_up_to_global_phase(i2, sx) == Catch::Approx(2.0).margin(1e-13));

  ComplexMatrix m3 = ComplexMatrix::identity(3);
  CHECK_THROWS_AS(dist_up_to_global_phase(i2, m3), ShapeError);
}

TEST_CASE("eig2_unitary closed form") {
  Eig2Result r = eig2_unitary(pauli_z());
  CHECK(std::abs(r.values[0] - cplx(1.0)) < 1e-14);
  CHECK(std::abs(r.values[1] - cplx(-1.0)) < 1e-14);

  Mat2 dzi{cplx(0, 1), 0, 0, cplx(0, -1)};
  Eig2Result r2 = eig2_unitary(dzi);
  bool has_i = std::abs(r2.values[0] - I_UNIT) < 1e-14 ||
               std::abs(r2.values[1] - I_UNIT) < 1e-14;
  bool has_mi = std::abs(r2.values[0] + I_UNIT) < 1e-14 ||
                std::abs(r2.values[1] + I_UNIT) < 1e-14;
  CHECK(has_i);
  CHECK(has_mi);

  // Degenerate input keeps the identity basis.
  Mat2 ph = std::polar(1.0, 0.3) * Mat2::identity();
  Eig2Result r3 = eig2_unitary(ph);
  CHECK(r3.vectors.frob_dist(Mat2::identity()) < 1e-14);

  Mat2 not_unitary{2, 0, 0, 1};
  CHECK_THROWS_AS(eig2_unitary(not_unitary), ValidationError);
}

TEST_CASE("eig2_unitary reconstruction on random unitaries") {
  std::mt19937_64 rng(13);
  double worst = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    Mat2 x = random_unitary2(rng);
    Eig2Result r = eig2_unitary(x);
    // X = V diag(l) V†
    Mat2 v = r.vectors;
    Mat2 lam{r.values[0], 0, 0, r.values[1]};
    Mat2 rec = v * lam * v.dagger();
    worst = std::max(worst, rec.frob_dist(x));
    CHECK(std::abs(std::abs(r.values[0]) - 1.0) < 1e-12);
    CHECK(std::abs(std::abs(r.values[1]) - 1.0) < 1e-12);
    CHECK(v.dagger().frob_dist_to_inverse_of(v) < 1e-12);
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("svd trivial cases") {
  SvdResult f = svd(ComplexMatrix::identity(4));
  for (double s : f.sigma) CHECK(s == Catch::Approx(1.0).margin(1e-14));

  ComplexMatrix d(3, 3);
  d(0, 0) = 3;
  d(1, 1) = 2;
  d(2, 2) = 1;
  SvdResult f2 = svd(d);
  CHECK(f2.sigma[0] == Catch::Approx(3.0).margin(1e-13));
  CHECK(f2.sigma[1] == Catch::Approx(2.0).margin(1e-13));
  CHECK(f2.sigma[2] == Catch::Approx(1.0).margin(1e-13));
}

TEST_CASE("svd reconstruction on random matrices") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 20; ++trial) {
    ComplexMatrix a = random_matrix(8, rng);
    SvdResult f = svd(a);
    CHECK(unitarity_defect(f.u) < 1e-12);
    CHECK(unitarity_defect(f.v) < 1e-12);
    for (std::size_t i = 0; i + 1 < f.sigma.size(); ++i)
      CHECK(f.sigma[i] >= f.sigma[i + 1]);
    ComplexMatrix sig(8, 8);
    for (std::size_t i = 0; i < 8; ++i) sig(i, i) = f.sigma[i];
    ComplexMatrix rec = f.u * sig * f.v.dagger();
    CHECK((rec - a).frob_norm() <= 1e-9 * std::max(1.0, a.frob_norm()));
  }
}

TEST_CASE("svd handles rank deficiency") {
  ComplexMatrix a(4, 4);  // rank 1
  std::mt19937_64 rng(15);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<cplx> u(4), v(4);
  for (auto& z : u) z = cplx(g(rng), g(rng));
  for (auto& z : v) z = cplx(g(rng), g(rng));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) a(i, j) = u[i] * std::conj(v[j]);
  SvdResult f = svd(a);
  CHECK(unitarity_defect(f.u) < 1e-12);
  CHECK(f.sigma[1] < 1e-12);
  ComplexMatrix sig(4, 4);
  for (std::size_t i = 0; i < 4; ++i) sig(i, i) = f.sigma[i];
  CHECK((f.u * sig * f.v.dagger() - a).frob_norm() < 1e-11 * a.frob_norm());
}

TEST_CASE("matrix text format round trip and errors") {
  std::mt19937_64 rng(16);
  ComplexMatrix u = random_unitary(4, rng);
  std::stringstream ss;
  write_matrix(ss, u);
  ComplexMatrix back = read_matrix(ss);
  CHECK((back - u).frob_norm() == 0.0);

  std::istringstream bad("2 2\n1 0 0 0\n");
  CHECK_THROWS_AS(read_matrix(bad), ParseError);
  std::istringstream bad2("x\n");
  CHECK_THROWS_AS(read_matrix(bad2), ParseError);
}

TEST_CASE("random_unitary is unitary") {
  std::mt19937_64 rng(17);
  for (std::size_t n : {2u, 4u, 8u, 16u}) {
    ComplexMatrix u = random_unitary(n, rng);
    CHECK(unitarity_defect(u) < 1e-12);
  }
}
