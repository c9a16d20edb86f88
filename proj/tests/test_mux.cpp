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

#include "ucs/circuit.hpp"
#include "ucs/diag.hpp"
#include "ucs/matrix.hpp"
#include "ucs/mux.hpp"

using namespace ucs;

namespace {

/// Multiply-back oracle for the demultiplexing factorization.
double demux_residual(const Mat2& a, const Mat2& b, const DemuxResult& r) {
  ComplexMatrix target(4, 4);
  target(0, 0) = a.a;
  target(0, 1) = a.b;
  target(1, 0) = a.c;
  target(1, 1) = a.d;
  target(2, 2) = b.a;
  target(2, 3) = b.b;
  target(3, 2) = b.c;
  target(3, 3) = b.d;

  ComplexMatrix rr(4, 4);
  rr(0, 0) = std::polar(1.0, -r.rho1);
  rr(1, 1) = std::polar(1.0, -r.rho2);
  rr(2, 2) = std::polar(1.0, r.rho1);
  rr(3, 3) = std::polar(1.0, r.rho2);

  ComplexMatrix iu = kron(ComplexMatrix::identity(2), ComplexMatrix::from_mat2(r.u));
  ComplexMatrix iv = kron(ComplexMatrix::identity(2), ComplexMatrix::from_mat2(r.v));
  ComplexMatrix rec = std::polar(1.0, r.residual_phase) *
                      (rr * iu * d_gate_matrix() * iv);
  return (rec - target).frob_norm();
}

UCGate random_ucgate(std::vector<int> controls, int target, std::mt19937_64& rng) {
  UCGate g;
  g.controls = std::move(controls);
  g.target = target;
  g.blocks.resize(std::size_t{1} << g.controls.size());
  for (Mat2& b : g.blocks) b = random_unitary2(rng);
  return g;
}

}  // namespace

TEST_CASE("demultiplex_step on equal Hadamard blocks") {
  DemuxResult r = demultiplex_step(hadamard(), hadamard());
  CHECK(demux_residual(hadamard(), hadamard(), r) < 1e-12);
  // d^2 = diag(i, -i): the eigenvalues of rXr are the fixed antipodal pair.
  CHECK(std::abs(r.u.det() - cplx(1.0)) < 1e-12);
  CHECK(std::abs(r.v.det() - cplx(1.0)) < 1e-12);
}

TEST_CASE("demultiplex_step on (I, sigma_z)") {
  DemuxResult r = demultiplex_step(Mat2::identity(), pauli_z());
  CHECK(demux_residual(Mat2::identity(), pauli_z(), r) < 1e-12);
}

TEST_CASE("demultiplex_step random pairs: residual and antipodal eigenvalues") {
  std::mt19937_64 rng(31);
  double worst = 0, worst_eig = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    Mat2 a = random_unitary2(rng), b = random_unitary2(rng);
    DemuxResult r = demultiplex_step(a, b);
    worst = std::max(worst, demux_residual(a, b, r));

    Mat2 x = a * b.dagger();
    cplx r1 = std::polar(1.0, r.rho1), r2 = std::polar(1.0, r.rho2);
    Mat2 rxr{r1 * r1 * x.a, r1 * r2 * x.b, r2 * r1 * x.c, r2 * r2 * x.d};
    Eig2Result eig = eig2_unitary(rxr);
    double e = std::min(std::abs(eig.values[0] - I_UNIT),
                        std::abs(eig.values[0] + I_UNIT)) +
               std::min(std::abs(eig.values[1] - I_UNIT),
                        std::abs(eig.values[1] + I_UNIT));
    worst_eig = std::max(worst_eig, e);
    CHECK(std::abs(r.u.det() - cplx(1.0)) < 1e-11);
    CHECK(std::abs(r.v.det() - cplx(1.0)) < 1e-11);
  }
  CHECK(worst < 1e-10);
  CHECK(worst_eig < 1e-11);
}

TEST_CASE("demultiplex_step rejects non-unitary input") {
  Mat2 bad{2, 0, 0, 1};
  CHECK_THROWS_AS(demultiplex_step(bad, Mat2::identity()), ValidationError);
}

TEST_CASE("d gate circuit") {
  Circuit c = d_gate_circuit();
  ComplexMatrix u = unitary_of(c);
  ComplexMatrix d = d_gate_matrix();
  CHECK((u - d).frob_norm() < 1e-12);

  GateCounts k = counts(c);
  CHECK(k.cnot == 1);
  CHECK(k.one_qubit == 4);

  ComplexMatrix dd = d * d.dagger();
  CHECK((dd - ComplexMatrix::identity(4)).frob_norm() < 1e-14);
}

TEST_CASE("ucu_decompose base case k = 0") {
  std::mt19937_64 rng(32);
  Mat2 g = random_unitary2(rng);
  UCGate uc;
  uc.target = 1;
  uc.blocks = {g};
  UcuDecomposition dec = ucu_decompose(uc, 1);
  CHECK(dec.delta.empty());
  REQUIRE(dec.ftilde.gates().size() == 1);
  CHECK(dec.ftilde.gates()[0].matrix.frob_dist(g) < 1e-15);
}

TEST_CASE("ucu_decompose k = 1 matches the single demultiplexing step") {
  std::mt19937_64 rng(33);
  UCGate g = random_ucgate({1}, 2, rng);
  UcuDecomposition dec = ucu_decompose(g, 2);
  REQUIRE(dec.delta.size() == 1);
  CHECK(dec.delta[0].target == 1);
  REQUIRE(dec.delta[0].controls == std::vector<int>{2});

  GateCounts k = counts(dec.ftilde);
  CHECK(k.cnot == 1);
  CHECK(k.one_qubit == 2);

  ComplexMatrix delta = embed_diag(ucrz_cascade_to_diag(dec.delta, 2));
  ComplexMatrix rec = delta * unitary_of(dec.ftilde);
  CHECK((rec - embed_ucgate(g, 2)).frob_norm() < 1e-10);
}

TEST_CASE("ucu_decompose k = 3 counts and reconstruction") {
  std::mt19937_64 rng(34);
  UCGate g = random_ucgate({1, 2, 3}, 4, rng);
  UcuDecomposition dec = ucu_decompose(g, 4);

  GateCounts k = counts(dec.ftilde);
  CHECK(k.cnot == 7);
  CHECK(k.one_qubit == 8);

  // Cascade shape: level i has k - i controls... the survivor at level i
  // targets the i-th demultiplexed control and is controlled by everything
  // not yet demultiplexed plus the target.
  REQUIRE(dec.delta.size() == 3);
  CHECK(dec.delta[0].controls.size() == 3);
  CHECK(dec.delta[1].controls.size() == 2);
  CHECK(dec.delta[2].controls.size() == 1);

  ComplexMatrix delta = embed_diag(ucrz_cascade_to_diag(dec.delta, 4));
  ComplexMatrix rec = delta * unitary_of(dec.ftilde);
  CHECK((rec - embed_ucgate(g, 4)).frob_norm() < 1e-9);
}

TEST_CASE("ucu_decompose arbitrary target position") {
  std::mt19937_64 rng(35);
  UCGate g = random_ucgate({1, 3, 4}, 2, rng);
  UcuDecomposition dec = ucu_decompose(g, 4);
  ComplexMatrix delta = embed_diag(ucrz_cascade_to_diag(dec.delta, 4));
  CHECK((delta * unitary_of(dec.ftilde) - embed_ucgate(g, 4)).frob_norm() < 1e-9);
  GateCounts k = counts(dec.ftilde);
  CHECK(k.cnot == 7);
  CHECK(k.one_qubit == 8);
}

TEST_CASE("ucu_decompose validates the demux order") {
  std::mt19937_64 rng(36);
  UCGate g = random_ucgate({1, 2}, 3, rng);
  CHECK_THROWS_AS(ucu_decompose(g, 3, std::vector<int>{1, 3}), ValidationError);
}

TEST_CASE("uc-gate group closure under multiplication and inversion") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 20; ++trial) {
    UCGate a = random_ucgate({1, 3}, 2, rng);
    UCGate b = random_ucgate({1, 3}, 2, rng);
    ComplexMatrix ea = embed_ucgate(a, 3), eb = embed_ucgate(b, 3);
    ComplexMatrix prod = ea * eb;
    ComplexMatrix inv = ea.dagger();

    // Blockwise product/inverse of the same uc-gate family reproduces them.
    UCGate ab = a;
    for (std::size_t i = 0; i < a.blocks.size(); ++i)
      ab.blocks[i] = a.blocks[i] * b.blocks[i];
    UCGate ainv = a;
    for (std::size_t i = 0; i < a.blocks.size(); ++i)
      ainv.blocks[i] = a.blocks[i].dagger();
    CHECK((prod - embed_ucgate(ab, 3)).frob_norm() < 1e-12);
    CHECK((inv - embed_ucgate(ainv, 3)).frob_norm() < 1e-12);
  }
}

TEST_CASE("canonicalize_ucgate preserves the embedding") {
  std::mt19937_64 rng(38);
  UCGate g = random_ucgate({4, 1, 3}, 2, rng);
  UCGate c = canonicalize_ucgate(g);
  CHECK(c.controls == std::vector<int>{1, 3, 4});
  CHECK((embed_ucgate(g, 4) - embed_ucgate(c, 4)).frob_norm() < 1e-12);
}

TEST_CASE("cascade_nn equals the fan-in cascade") {
  for (auto [m, t, n] : {std::tuple{1, 2, 2}, {1, 3, 3}, {1, 5, 5}, {5, 2, 5}}) {
    Circuit c = cascade_nn(m, t, n);
    for (const Gate& g : c.gates())
      CHECK(std::abs(g.control - g.target) == 1);
    // Oracle: product of CNOT(j -> t) for j from m toward t, exclusive of t.
    Circuit fan(n);
    int step = (t > m) ? 1 : -1;
    for (int j = m; j != t; j += step) fan.push_cnot(j, t);
    CHECK((unitary_of(c) - unitary_of(fan)).frob_norm() < 1e-12);
    CHECK(counts(c).cnot == static_cast<std::size_t>(2 * std::abs(m - t) - 1));
  }
}
