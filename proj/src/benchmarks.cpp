#include "dqcc/benchmarks.hpp"

#include <cmath>
#include <stdexcept>

namespace dqcc {

namespace {

// 6-CX Toffoli decomposition (CX + T/Tdg + H).
void add_toffoli(Circuit& c, int a, int b, int t) {
  c.h(t);
  c.cx(b, t);
  c.tdg(t);
  c.cx(a, t);
  c.t(t);
  c.cx(b, t);
  c.tdg(t);
  c.cx(a, t);
  c.t(b);
  c.t(t);
  c.h(t);
  c.cx(a, b);
  c.t(a);
  c.tdg(b);
  c.cx(a, b);
}

}  // namespace

Circuit gen_qft(int n) {
  if (n < 2) throw CircuitError("qft needs at least 2 qubits");
  Circuit c(n);
  for (int i = 0; i < n; ++i) {
    c.h(i);
    for (int j = i + 1; j < n; ++j) c.crz(j, i, M_PI / std::pow(2.0, j - i));
  }
  return c;
}

Circuit gen_qaoa(int n, const std::vector<std::pair<int, int>>& edges, int layers) {
  if (n < 2) throw CircuitError("qaoa needs at least 2 qubits");
  Circuit c(n);
  for (int q = 0; q < n; ++q) c.h(q);
  for (int l = 0; l < layers; ++l) {
    double gamma = 0.4 * (l + 1);
    double beta = 0.7 * (l + 1);
    for (auto [u, v] : edges) {
      if (u < 0 || u >= n || v < 0 || v >= n)
        throw CircuitError("qaoa edge references an invalid qubit");
      c.cx(u, v);
      c.rz(v, 2 * gamma);
      c.cx(u, v);
    }
    for (int q = 0; q < n; ++q) c.rx(q, 2 * beta);
  }
  return c;
}

Circuit gen_bv(int n, const std::string& secret) {
  if (n < 2) throw CircuitError("bv needs at least 2 qubits");
  if (static_cast<int>(secret.size()) != n - 1)
    throw CircuitError("bv secret length must be num_qubits - 1");
  Circuit c(n);
  int anc = n - 1;
  for (int q = 0; q < n; ++q) c.h(q);
  for (int i = 0; i < n - 1; ++i) {
    if (secret[static_cast<size_t>(i)] == '1') c.cx(i, anc);
    else if (secret[static_cast<size_t>(i)] != '0')
      throw CircuitError("bv secret must be a bitstring");
  }
  for (int q = 0; q < n; ++q) c.h(q);
  return c;
}

Circuit gen_rca(int n) {
  if (n < 4 || n % 2 != 0) throw CircuitError("rca needs n = 2m + 2 qubits");
  int m = (n - 2) / 2;
  // layout: carry, a0, b0, a1, b1, ..., a_{m-1}, b_{m-1}, z
  Circuit c(n);
  auto a = [&](int i) { return 1 + 2 * i; };
  auto b = [&](int i) { return 2 + 2 * i; };
  int carry = 0, z = n - 1;
  // MAJ ladder
  auto maj = [&](int x, int y, int t) {
    c.cx(t, y);
    c.cx(t, x);
    add_toffoli(c, x, y, t);
  };
  auto uma = [&](int x, int y, int t) {
    add_toffoli(c, x, y, t);
    c.cx(t, x);
    c.cx(x, y);
  };
  maj(carry, b(0), a(0));
  for (int i = 1; i < m; ++i) maj(a(i - 1), b(i), a(i));
  c.cx(a(m - 1), z);
  for (int i = m - 1; i >= 1; --i) uma(a(i - 1), b(i), a(i));
  uma(carry, b(0), a(0));
  return c;
}

Circuit gen_mctr(int n) {
  if (n < 3) throw CircuitError("mctr needs at least 3 qubits");
  // k controls, k-2 ancillas, 1 target; uses 2k-1 qubits.
  int k = (n + 1) / 2;
  Circuit c(n);
  int target = 2 * k - 2;
  auto anc = [&](int i) { return k + i; };
  if (k == 1) {
    c.x(target);
    return c;
  }
  if (k == 2) {
    add_toffoli(c, 0, 1, target);
    return c;
  }
  add_toffoli(c, 0, 1, anc(0));
  for (int i = 2; i < k - 1; ++i) add_toffoli(c, i, anc(i - 2), anc(i - 1));
  add_toffoli(c, k - 1, anc(k - 3), target);
  for (int i = k - 2; i >= 2; --i) add_toffoli(c, i, anc(i - 2), anc(i - 1));
  add_toffoli(c, 0, 1, anc(0));
  return c;
}

Circuit generate(const BenchmarkSpec& spec) {
  switch (spec.family) {
    case BenchFamily::QFT: return gen_qft(spec.num_qubits);
    case BenchFamily::QAOA: return gen_qaoa(spec.num_qubits, spec.edges, spec.layers);
    case BenchFamily::BV: return gen_bv(spec.num_qubits, spec.secret);
    case BenchFamily::RCA: return gen_rca(spec.num_qubits);
    case BenchFamily::MCTR: return gen_mctr(spec.num_qubits);
  }
  throw CircuitError("unknown benchmark family");
}

std::vector<std::pair<int, int>> qaoa_ring8_edges() {
  // ring order 0,1,4,2,5,6,3,7 over nodes {0,1,2,3} | {4,5,6,7}
  return {{0, 1}, {1, 4}, {4, 2}, {2, 5}, {5, 6}, {6, 3}, {3, 7}, {7, 0}};
}

std::string bv100_secret() {
  std::string secret(99, '0');
  auto set_ones = [&](int node, int count) {
    for (int i = 0; i < count; ++i) secret[static_cast<size_t>(10 * node + i)] = '1';
  };
  set_ones(0, 8);
  for (int node = 1; node <= 8; ++node) set_ones(node, 6);
  for (int q = 90; q <= 98; ++q) secret[static_cast<size_t>(q)] = '1';
  return secret;
}

Circuit fig5_program() {
  // qubits q1..q6 -> ids 0..5; nodes A{0,1} B{2,3} C{4,5}
  Circuit c(6);
  for (int q = 0; q < 6; ++q) c.set_qubit_name(q, "q[" + std::to_string(q) + "]");
  c.t(2);         // prelude on q3
  c.cx(0, 2);     // A1: first controlled-U half, (q3, A)
  c.t(2);         // the U between the pair
  c.cx(0, 2);     // A2
  c.cx(5, 3);     // D1: foreign gate splitting the first runs
  c.s(0);         // only single-qubit gates otherwise between runs 1 and 2
  c.cx(2, 0);     // A3: pivot q3 flips to control
  c.cx(4, 2);     // C1: CX q5,q3 -- blocks merging runs 2 and 3
  c.cx(2, 4);     // C2
  c.cx(4, 2);     // C3
  c.cx(2, 4);     // C4
  c.cx(4, 2);     // C5
  c.t(1);
  c.cx(2, 1);     // A4
  c.h(1);
  c.cx(5, 3);     // D2: splits runs 3 and 4
  c.cx(1, 2);     // A5
  c.rx(4, 0.7);
  c.h(3);
  return c;
}

Partition fig5_partition() {
  Partition p;
  p.num_nodes = 3;
  p.capacity = 2;
  p.node_of = {0, 0, 1, 1, 2, 2};
  return p;
}

}  // namespace dqcc
