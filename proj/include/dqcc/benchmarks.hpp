#pragma once

#include "dqcc/circuit.hpp"
#include "dqcc/partition.hpp"

#include <string>
#include <utility>
#include <vector>

namespace dqcc {

enum class BenchFamily { QFT, QAOA, BV, RCA, MCTR };

struct BenchmarkSpec {
  BenchFamily family = BenchFamily::QFT;
  int num_qubits = 0;
  // QAOA
  std::vector<std::pair<int, int>> edges;
  int layers = 1;
  // BV
  std::string secret;  // bitstring, length num_qubits-1
  // MCTR
  int controls = 0;    // 0 = derived from num_qubits
};

Circuit generate(const BenchmarkSpec& spec);

Circuit gen_qft(int n);
Circuit gen_qaoa(int n, const std::vector<std::pair<int, int>>& edges, int layers);
Circuit gen_bv(int n, const std::string& secret);
Circuit gen_rca(int n);   // Cuccaro ripple-carry adder, n = 2m+2
Circuit gen_mctr(int n);  // multi-controlled X via a V-chain of Toffolis

/// Ring-of-8 QAOA instance with 6 remote ZZ interactions under the
/// contiguous 4|4 split; every remote interaction shares a qubit with
/// another one.
std::vector<std::pair<int, int>> qaoa_ring8_edges();

/// Canonical 100-qubit BV instance: ancilla is the last qubit of node 9;
/// the secret sets all 9 data qubits of node 9, eight in node 0 and six in
/// each of nodes 1..8 (65 ones, 56 remote CX under the contiguous split).
std::string bv100_secret();

/// Six-qubit, three-node arithmetic-style example program used throughout
/// the docs and tests: one qubit-node pair carries five remote CX in four
/// isolated runs, with a remote blocker splitting them.
Circuit fig5_program();
Partition fig5_partition();

}  // namespace dqcc
