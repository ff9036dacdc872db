#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dqcc {

enum class GateKind {
  H, X, Y, Z, S, Sdg, T, Tdg,
  RX, RY, RZ, U1, U2, U3,
  CX, CZ, CRZ, SWAP,
  Measure, Barrier,
};

const char* gate_name(GateKind k);
int gate_arity(GateKind k);       // Barrier reports 0 (variadic)
int gate_param_count(GateKind k);

/// One gate application. For CX/CZ/CRZ the control comes first.
struct Gate {
  GateKind kind{GateKind::H};
  std::vector<int> qubits;
  std::vector<double> params;
  int id = -1;

  bool is_two_qubit() const { return qubits.size() == 2 && kind != GateKind::Barrier; }
  bool touches(int q) const;
  bool disjoint(const Gate& other) const;
};

/// Ordered gate sequence over a fixed set of named qubits.
class Circuit {
public:
  Circuit() = default;
  explicit Circuit(int num_qubits);

  int num_qubits() const { return num_qubits_; }
  const std::vector<Gate>& gates() const { return gates_; }
  const Gate& gate(int idx) const { return gates_.at(static_cast<size_t>(idx)); }
  size_t size() const { return gates_.size(); }

  const std::string& qubit_name(int q) const { return names_.at(static_cast<size_t>(q)); }
  void set_qubit_name(int q, std::string name) { names_.at(static_cast<size_t>(q)) = std::move(name); }

  Gate& add(GateKind kind, std::vector<int> qubits, std::vector<double> params = {});

  // builder helpers
  Circuit& h(int q) { add(GateKind::H, {q}); return *this; }
  Circuit& x(int q) { add(GateKind::X, {q}); return *this; }
  Circuit& y(int q) { add(GateKind::Y, {q}); return *this; }
  Circuit& z(int q) { add(GateKind::Z, {q}); return *this; }
  Circuit& s(int q) { add(GateKind::S, {q}); return *this; }
  Circuit& sdg(int q) { add(GateKind::Sdg, {q}); return *this; }
  Circuit& t(int q) { add(GateKind::T, {q}); return *this; }
  Circuit& tdg(int q) { add(GateKind::Tdg, {q}); return *this; }
  Circuit& rx(int q, double a) { add(GateKind::RX, {q}, {a}); return *this; }
  Circuit& ry(int q, double a) { add(GateKind::RY, {q}, {a}); return *this; }
  Circuit& rz(int q, double a) { add(GateKind::RZ, {q}, {a}); return *this; }
  Circuit& u1(int q, double a) { add(GateKind::U1, {q}, {a}); return *this; }
  Circuit& cx(int c, int t) { add(GateKind::CX, {c, t}); return *this; }
  Circuit& cz(int c, int t) { add(GateKind::CZ, {c, t}); return *this; }
  Circuit& crz(int c, int t, double a) { add(GateKind::CRZ, {c, t}, {a}); return *this; }
  Circuit& swap(int a, int b) { add(GateKind::SWAP, {a, b}); return *this; }
  Circuit& measure(int q) { add(GateKind::Measure, {q}); return *this; }
  Circuit& barrier(std::vector<int> qs) { add(GateKind::Barrier, std::move(qs)); return *this; }

private:
  int num_qubits_ = 0;
  std::vector<Gate> gates_;
  std::vector<std::string> names_;
};

/// True iff swapping adjacent a,b preserves the circuit unitary, per the
/// rule table (diagonal gates through CX controls, X-axis gates through CX
/// targets, matching-axis sharing, disjoint support). Conservative: returns
/// false for anything outside the table.
bool commutes(const Gate& a, const Gate& b);

bool commutes_with_set(const Gate& g, std::span<const Gate> gs);
bool commutes_with_set(const Circuit& c, int g, std::span<const int> gate_ids);

/// Per-qubit action class used by the rule table.
enum class Axis { Z, X, Other };
Axis gate_axis_on(const Gate& g, int qubit);

bool is_diagonal(GateKind k);

/// Rewrites CRZ/CZ/SWAP into CX + single-qubit gates. Everything else is
/// copied through. Preserves the unitary exactly.
Circuit decompose_to_basis(const Circuit& c);

struct CircuitError : std::runtime_error {
  explicit CircuitError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dqcc
