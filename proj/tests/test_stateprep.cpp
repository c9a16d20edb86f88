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

#include "ucs/circuit.hpp"
#include "ucs/peephole.hpp"
#include "ucs/stateprep.hpp"

using namespace ucs;

TEST_CASE("nullify_angles closed forms") {
  NullifyAngles a = nullify_angles({{1.0, 0.0}});
  CHECK(a.rz_angles[0] == 0.0);
  CHECK(a.ry_angles[0] == 0.0);
  CHECK(a.merged_magnitudes[0] == Catch::Approx(1.0));

  NullifyAngles b = nullify_angles({{0.0, 1.0}});
  CHECK(b.ry_angles[0] == Catch::Approx(-PI));

  NullifyAngles z = nullify_angles({{0.0, 0.0}});
  CHECK(z.rz_angles[0] == 0.0);
  CHECK(z.ry_angles[0] == 0.0);
}

TEST_CASE("nullify_angles zeroes the second component") {
  std::mt19937_64 rng(71);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    cplx alpha(g(rng), g(rng)), beta(g(rng), g(rng));
    NullifyAngles a = nullify_angles({{alpha, beta}});
    Mat2 rot = ry(a.ry_angles[0]) * rz(a.rz_angles[0]);
    cplx top = rot.a * alpha + rot.b * beta;
    cplx bottom = rot.c * alpha + rot.d * beta;
    CHECK(std::abs(bottom) < 1e-12);
    CHECK(std::abs(std::abs(top) - a.merged_magnitudes[0]) < 1e-12);
    CHECK(std::abs(top - std::polar(a.merged_magnitudes[0],
                                    a.residual_phases[0])) < 1e-12);
  }
}

TEST_CASE("prepare_to_e1 of a basis state is empty") {
  StateVector e1 = StateVector::basis(4, 0);
  Circuit c = prepare_to_e1(e1);
  CHECK(c.gates().empty());
}

TEST_CASE("prepare_to_e1 n = 1 closed form") {
  StateVector a;
  a.n = 1;
  a.amps = {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
  Circuit c = prepare_to_e1(a);
  REQUIRE(counts(c).one_qubit == 1);
  CHECK(counts(c).cnot == 0);
  // Single R_y(-pi/2) up to phase.
  CHECK(dist_up_to_global_phase(unitary_of(c),
                                ComplexMatrix::from_mat2(ry(-PI / 2))) < 1e-12);
}

TEST_CASE("prepare_to_e1 reaches |e1> with unit fidelity") {
  std::mt19937_64 rng(72);
  for (int n = 1; n <= 5; ++n) {
    StateVector a = random_state(n, rng);
    Circuit c = prepare_to_e1(a);
    StateVector out = apply(c, a);
    CHECK(std::abs(std::abs(out.amps[0]) - 1.0) < 1e-10);
    GateCounts k = counts(c);
    CHECK(k.cnot <= (std::size_t{1} << n) - n - 1);
    CHECK(k.one_qubit <= (std::size_t{1} << n) - 1);
  }
}

TEST_CASE("level invariant: each level nullifies half the live amplitudes") {
  std::mt19937_64 rng(73);
  const int n = 4;
  StateVector a = random_state(n, rng);
  Circuit c = prepare_to_e1(a);

  // The sweep emits the level-i gates (one-qubit gates targeting i) in
  // descending level order. After the chunk for level i, every amplitude
  // whose bits on qubits i..n are not all zero must vanish.
  StateVector running = a;
  int current_level = n;
  auto check_level_zeroed = [&](int level) {
    for (std::size_t b = 0; b < running.amps.size(); ++b) {
      std::size_t low_mask = (std::size_t{1} << (n - level + 1)) - 1;
      if (b & low_mask) CHECK(std::abs(running.amps[b]) < 1e-11);
    }
  };
  for (const Gate& g : c.gates()) {
    if (g.kind == GateKind::OneQubit && g.target < current_level) {
      check_level_zeroed(current_level);
      current_level = g.target;
    }
    detail::apply_gate_to_amps(g, n, running.amps);
  }
  check_level_zeroed(1);
}

TEST_CASE("inverse consistency: reversed circuit maps |e1> back to a") {
  std::mt19937_64 rng(74);
  StateVector a = random_state(4, rng);
  Circuit c = prepare_to_e1(a);
  StateVector e1 = StateVector::basis(4, 0);
  StateVector back = apply(c.inverse(), e1);
  double overlap = fidelity(a, back);
  CHECK(std::abs(overlap - 1.0) < 1e-10);
}

TEST_CASE("prepare_state identity task") {
  std::mt19937_64 rng(75);
  StateVector a = random_state(3, rng);
  Circuit c = peephole(prepare_state(a, a));
  StateVector out = apply(c, a);
  CHECK(fidelity(a, out) >= 1.0 - 1e-12);
}

TEST_CASE("prepare_state n = 3 counts after peephole") {
  std::mt19937_64 rng(76);
  for (int trial = 0; trial < 5; ++trial) {
    StateVector a = random_state(3, rng), b = random_state(3, rng);
    Circuit c = peephole(prepare_state(a, b));
    GateCounts k = counts(c);
    INFO("n=3 stateprep counts: cnot=" << k.cnot << " one_qubit=" << k.one_qubit);
    CHECK(k.cnot <= 8);
    CHECK(k.one_qubit <= 11);
    CHECK(fidelity(b, apply(c, a)) >= 1.0 - 1e-10);
  }
}

TEST_CASE("prepare_state n = 6 fidelity") {
  std::mt19937_64 rng(77);
  StateVector a = random_state(6, rng), b = random_state(6, rng);
  Circuit c = prepare_state(a, b);
  CHECK(fidelity(b, apply(c, a)) >= 1.0 - 1e-10);
}

TEST_CASE("prepare_state validates inputs") {
  StateVector bad;
  bad.n = 2;
  bad.amps = {1.0, 1.0, 0.0, 0.0};
  StateVector ok = StateVector::basis(2, 0);
  CHECK_THROWS_AS(prepare_state(bad, ok), ValidationError);
  StateVector other = StateVector::basis(3, 0);
  CHECK_THROWS_AS(prepare_state(ok, other), ShapeError);
}

TEST_CASE("state text format round trip") {
  std::mt19937_64 rng(78);
  StateVector s = random_state(3, rng);
  std::stringstream ss;
  write_state(ss, s);
  StateVector back = read_state(ss);
  CHECK(back.n == 3);
  for (std::size_t i = 0; i < s.amps.size(); ++i) CHECK(back.amps[i] == s.amps[i]);

  std::istringstream bad("2\n1 0\n0 0\n");
  CHECK_THROWS_AS(read_state(bad), ParseError);
}
