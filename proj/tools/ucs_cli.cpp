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

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ucs/circuit.hpp"
#include "ucs/csd.hpp"
#include "ucs/matrix.hpp"
#include "ucs/nnmap.hpp"
#include "ucs/peephole.hpp"
#include "ucs/stateprep.hpp"

namespace {

struct RunReport {
  std::string digest;
  std::string backend;  // general | nn
  int n = 0;
  ucs::GateCounts gate_counts;
  double residual = 0;
  long long bound_cnot = 0;
  long long bound_1q = 0;
  bool pass = false;
};

void print_report(const RunReport& r) {
  std::cout.precision(17);
  std::cout << "digest=" << r.digest << '\n';
  std::cout << "backend=" << r.backend << '\n';
  std::cout << "n=" << r.n << '\n';
  std::cout << "cnot=" << r.gate_counts.cnot << '\n';
  std::cout << "one_qubit=" << r.gate_counts.one_qubit << '\n';
  std::cout << "bound_cnot=" << r.bound_cnot << '\n';
  std::cout << "bound_1q=" << r.bound_1q << '\n';
  std::cout << "residual=" << r.residual << '\n';
  std::cout << "pass=" << (r.pass ? "true" : "false") << '\n';
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ucs::ParseError("cannot open file '" + path + "'", 0);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

double default_tolerance(double fallback) {
  if (const char* env = std::getenv("UCG_TOL")) {
    try {
      return std::stod(env);
    } catch (...) {
      throw ucs::ValidationError("UCG_TOL is not a number");
    }
  }
  return fallback;
}

long long cs_cnot_bound(int n) {
  if (n == 1) return 0;
  return static_cast<long long>(std::pow(4.0, n) / 2 - std::pow(2.0, n) / 2 - 2);
}
long long cs_one_qubit_bound(int n) {
  if (n == 1) return 1;
  return static_cast<long long>(std::pow(4.0, n) / 2 + std::pow(2.0, n) / 2 - n - 1);
}
long long sp_cnot_bound(int n) {
  return 2LL * (1LL << n) - 2LL * n - 2;
}
long long sp_one_qubit_bound(int n) {
  return 2LL * (1LL << n) - n - 2;
}

void write_circuit_file(const std::string& path, const ucs::Circuit& c, bool nn) {
  std::ofstream f(path);
  if (!f) throw ucs::ParseError("cannot write file '" + path + "'", 0);
  ucs::serialize(f, c, nn ? "topology: chain" : "");
}

int cmd_decompose(const std::string& input, int random_n, unsigned long long seed,
                  bool nn, bool no_peephole, const std::string& out,
                  std::optional<double> tol_flag, const std::string& qasm_out) {
  ucs::ComplexMatrix u(1, 1);
  std::string digest;
  if (random_n > 0) {
    std::mt19937_64 rng(seed);
    u = ucs::random_unitary(std::size_t{1} << random_n, rng);
    digest = fnv1a_hex("random:" + std::to_string(random_n) + ":" +
                       std::to_string(seed));
  } else {
    std::string bytes = slurp(input);
    digest = fnv1a_hex(bytes);
    std::istringstream ss(bytes);
    u = ucs::read_matrix(ss);
  }
  if (u.rows() != u.cols() || ucs::unitarity_defect(u) > 1e-9)
    throw ucs::ValidationError("input matrix is not unitary within 1e-9");

  ucs::Circuit c = nn ? ucs::nn_decompose_unitary(u, !no_peephole)
                      : ucs::decompose_unitary(u, !no_peephole);
  const int n = c.n();

  RunReport r;
  r.digest = digest;
  r.backend = nn ? "nn" : "general";
  r.n = n;
  r.gate_counts = ucs::counts(c);
  r.residual = ucs::dist_up_to_global_phase(ucs::unitary_of(c), u);
  if (nn) {
    r.bound_cnot = ucs::bound_as_integer(ucs::c_u_bound(n));
    // One-qubit bound for the chain backend: the raw rotation accounting,
    // 2^{n-1} per uniformly controlled factor plus the final cascade.
    r.bound_1q = static_cast<long long>(std::pow(4.0, n) / 2 + std::pow(2.0, n) / 2 - 1);
  } else {
    r.bound_cnot = cs_cnot_bound(n);
    r.bound_1q = cs_one_qubit_bound(n);
  }
  double tol = tol_flag ? *tol_flag
                        : default_tolerance(1e-7 * std::pow(2.0, n / 2.0));
  bool nn_ok = !nn || ucs::all_cnots_nearest_neighbor(c);
  r.pass = (r.residual <= tol) &&
           (static_cast<long long>(r.gate_counts.cnot) <= r.bound_cnot) &&
           (static_cast<long long>(r.gate_counts.one_qubit) <= r.bound_1q) && nn_ok;
  print_report(r);
  if (!out.empty()) write_circuit_file(out, c, nn);
  if (!qasm_out.empty()) {
    std::ofstream f(qasm_out);
    ucs::export_qasm(f, c);
  }
  return r.pass ? 0 : 1;
}

int cmd_stateprep(const std::string& file_a, const std::string& file_b,
                  int random_n, unsigned long long seed, bool nn, bool no_peephole,
                  const std::string& out, std::optional<double> tol_flag) {
  ucs::StateVector a, b;
  std::string digest;
  if (random_n > 0) {
    std::mt19937_64 rng(seed);
    a = ucs::random_state(random_n, rng);
    b = ucs::random_state(random_n, rng);
    digest = fnv1a_hex("random:" + std::to_string(random_n) + ":" +
                       std::to_string(seed));
  } else {
    std::string bytes_a = slurp(file_a), bytes_b = slurp(file_b);
    digest = fnv1a_hex(bytes_a + "|" + bytes_b);
    std::istringstream sa(bytes_a), sb(bytes_b);
    a = ucs::read_state(sa);
    b = ucs::read_state(sb);
  }
  a.validate();
  b.validate();
  if (a.n != b.n) throw ucs::ValidationError("state qubit counts differ");

  ucs::Circuit c = nn ? ucs::nn_prepare_state(a, b) : ucs::prepare_state(a, b);
  if (!no_peephole) c = ucs::peephole(c);
  const int n = a.n;

  RunReport r;
  r.digest = digest;
  r.backend = nn ? "nn" : "general";
  r.n = n;
  r.gate_counts = ucs::counts(c);
  ucs::StateVector produced = ucs::apply(c, a);
  r.residual = 1.0 - ucs::fidelity(b, produced);
  r.bound_cnot = nn ? ucs::bound_as_integer(ucs::c_sp_bound(n)) : sp_cnot_bound(n);
  r.bound_1q = sp_one_qubit_bound(n);
  double tol = tol_flag ? *tol_flag : default_tolerance(1e-9);
  bool nn_ok = !nn || ucs::all_cnots_nearest_neighbor(c);
  r.pass = (r.residual <= tol) &&
           (static_cast<long long>(r.gate_counts.cnot) <= r.bound_cnot) &&
           (static_cast<long long>(r.gate_counts.one_qubit) <= r.bound_1q) && nn_ok;
  print_report(r);
  if (!out.empty()) write_circuit_file(out, c, nn);
  return r.pass ? 0 : 1;
}

int cmd_verify(const std::string& circuit_file, const std::string& matrix_file,
               std::optional<double> tol_flag) {
  std::string cb = slurp(circuit_file), mb = slurp(matrix_file);
  std::istringstream cs(cb), ms(mb);
  ucs::Circuit c = ucs::parse_circuit(cs);
  ucs::ComplexMatrix u = ucs::read_matrix(ms);
  if (u.rows() != (std::size_t{1} << c.n()))
    throw ucs::ShapeError("circuit and matrix qubit counts differ");

  RunReport r;
  r.digest = fnv1a_hex(cb + "|" + mb);
  r.backend = ucs::all_cnots_nearest_neighbor(c) ? "nn" : "general";
  r.n = c.n();
  r.gate_counts = ucs::counts(c);
  r.residual = ucs::dist_up_to_global_phase(ucs::unitary_of(c), u);
  r.bound_cnot = static_cast<long long>(r.gate_counts.cnot);
  r.bound_1q = static_cast<long long>(r.gate_counts.one_qubit);
  double tol = tol_flag ? *tol_flag : default_tolerance(1e-7);
  r.pass = r.residual <= tol;
  print_report(r);
  return r.pass ? 0 : 1;
}

int cmd_count(const std::string& circuit_file) {
  std::string cb = slurp(circuit_file);
  std::istringstream cs(cb);
  ucs::Circuit c = ucs::parse_circuit(cs);
  ucs::GateCounts k = ucs::counts(c);
  std::cout << "n=" << c.n() << '\n';
  std::cout << "cnot=" << k.cnot << '\n';
  std::cout << "one_qubit=" << k.one_qubit << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ucs: synthesis of n-qubit unitaries, uniformly controlled "
               "gates and state preparation into one-qubit gates and CNOTs"};
  app.require_subcommand(1);

  std::string input, input_b, out, qasm_out;
  int random_n = 0;
  unsigned long long seed = 0;
  bool nn = false, no_peephole = false;
  std::optional<double> tol;
  double tol_value = 0;

  auto* dec = app.add_subcommand("decompose", "compile a unitary matrix file");
  dec->add_option("matrix", input, "matrix text file");
  dec->add_option("--random-n", random_n, "use a seeded random unitary on n qubits");
  dec->add_option("--seed", seed, "seed for --random-n");
  dec->add_flag("--nn", nn, "restrict to nearest-neighbor CNOTs");
  dec->add_flag("--no-peephole", no_peephole, "skip the peephole pass");
  dec->add_option("--out", out, "write the circuit to this file");
  dec->add_option("--qasm", qasm_out, "also export OpenQASM to this file");
  dec->add_option("--tol", tol_value, "override the pass/fail tolerance");

  auto* sp = app.add_subcommand("stateprep", "compile |a> -> |b> preparation");
  sp->add_option("state_a", input, "state text file for |a>");
  sp->add_option("state_b", input_b, "state text file for |b>");
  sp->add_option("--random-n", random_n, "use seeded random states on n qubits");
  sp->add_option("--seed", seed, "seed for --random-n");
  sp->add_flag("--nn", nn, "restrict to nearest-neighbor CNOTs");
  sp->add_flag("--no-peephole", no_peephole, "skip the peephole pass");
  sp->add_option("--out", out, "write the circuit to this file");
  sp->add_option("--tol", tol_value, "override the pass/fail tolerance");

  auto* ver = app.add_subcommand("verify", "check a circuit file against a matrix");
  ver->add_option("circuit", input, "circuit text file")->required();
  ver->add_option("matrix", input_b, "matrix text file")->required();
  ver->add_option("--tol", tol_value, "residual threshold (default 1e-7)");

  auto* cnt = app.add_subcommand("count", "print gate counts of a circuit file");
  cnt->add_option("circuit", input, "circuit text file")->required();

  CLI11_PARSE(app, argc, argv);
  for (CLI::App* sub : {dec, sp, ver}) {
    if (sub->parsed() && sub->count("--tol") > 0) tol = tol_value;
  }

  try {
    if (dec->parsed()) {
      if (input.empty() && random_n == 0)
        throw ucs::ValidationError("decompose needs a matrix file or --random-n");
      return cmd_decompose(input, random_n, seed, nn, no_peephole, out, tol,
                           qasm_out);
    }
    if (sp->parsed()) {
      if (random_n == 0 && (input.empty() || input_b.empty()))
        throw ucs::ValidationError("stateprep needs two state files or --random-n");
      return cmd_stateprep(input, input_b, random_n, seed, nn, no_peephole, out,
                           tol);
    }
    if (ver->parsed()) return cmd_verify(input, input_b, tol);
    if (cnt->parsed()) return cmd_count(input);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
