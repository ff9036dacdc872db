#include "dqcc/circuit.hpp"

#include <algorithm>
#include <cmath>

namespace dqcc {

const char* gate_name(GateKind k) {
  switch (k) {
    case GateKind::H: return "h";
    case GateKind::X: return "x";
    case GateKind::Y: return "y";
    case GateKind::Z: return "z";
    case GateKind::S: return "s";
    case GateKind::Sdg: return "sdg";
    case GateKind::T: return "t";
    case GateKind::Tdg: return "tdg";
    case GateKind::RX: return "rx";
    case GateKind::RY: return "ry";
    case GateKind::RZ: return "rz";
    case GateKind::U1: return "u1";
    case GateKind::U2: return "u2";
    case GateKind::U3: return "u3";
    case GateKind::CX: return "cx";
    case GateKind::CZ: return "cz";
    case GateKind::CRZ: return "crz";
    case GateKind::SWAP: return "swap";
    case GateKind::Measure: return "measure";
    case GateKind::Barrier: return "barrier";
  }
  return "?";
}

int gate_arity(GateKind k) {
  switch (k) {
    case GateKind::CX:
    case GateKind::CZ:
    case GateKind::CRZ:
    case GateKind::SWAP:
      return 2;
    case GateKind::Barrier:
      return 0;
    default:
      return 1;
  }
}

int gate_param_count(GateKind k) {
  switch (k) {
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
    case GateKind::U1:
    case GateKind::CRZ:
      return 1;
    case GateKind::U2:
      return 2;
    case GateKind::U3:
      return 3;
    default:
      return 0;
  }
}

bool Gate::touches(int q) const {
  return std::find(qubits.begin(), qubits.end(), q) != qubits.end();
}

bool Gate::disjoint(const Gate& other) const {
  for (int q : qubits)
    if (other.touches(q)) return false;
  return true;
}

Circuit::Circuit(int num_qubits) : num_qubits_(num_qubits) {
  names_.resize(static_cast<size_t>(num_qubits));
  for (int q = 0; q < num_qubits; ++q) names_[static_cast<size_t>(q)] = "q[" + std::to_string(q) + "]";
}

Gate& Circuit::add(GateKind kind, std::vector<int> qubits, std::vector<double> params) {
  int arity = gate_arity(kind);
  if (arity != 0 && static_cast<int>(qubits.size()) != arity)
    throw CircuitError(std::string("operand count mismatch for ") + gate_name(kind));
  if (static_cast<int>(params.size()) != gate_param_count(kind))
    throw CircuitError(std::string("parameter count mismatch for ") + gate_name(kind));
  for (double p : params)
    if (!std::isfinite(p)) throw CircuitError("non-finite gate angle");
  for (size_t i = 0; i < qubits.size(); ++i) {
    if (qubits[i] < 0 || qubits[i] >= num_qubits_)
      throw CircuitError("qubit index out of range: " + std::to_string(qubits[i]));
    for (size_t j = i + 1; j < qubits.size(); ++j)
      if (qubits[i] == qubits[j]) throw CircuitError("duplicate operand qubit");
  }
  Gate g;
  g.kind = kind;
  g.qubits = std::move(qubits);
  g.params = std::move(params);
  g.id = static_cast<int>(gates_.size());
  gates_.push_back(std::move(g));
  return gates_.back();
}

bool is_diagonal(GateKind k) {
  switch (k) {
    case GateKind::Z:
    case GateKind::S:
    case GateKind::Sdg:
    case GateKind::T:
    case GateKind::Tdg:
    case GateKind::RZ:
    case GateKind::U1:
    case GateKind::CZ:
    case GateKind::CRZ:
      return true;
    default:
      return false;
  }
}

Axis gate_axis_on(const Gate& g, int qubit) {
  switch (g.kind) {
    case GateKind::X:
    case GateKind::RX:
      return Axis::X;
    case GateKind::Z:
    case GateKind::S:
    case GateKind::Sdg:
    case GateKind::T:
    case GateKind::Tdg:
    case GateKind::RZ:
    case GateKind::U1:
    case GateKind::CZ:
    case GateKind::CRZ:
      return Axis::Z;
    case GateKind::CX:
      return qubit == g.qubits[0] ? Axis::Z : Axis::X;
    default:
      return Axis::Other;
  }
}

bool commutes(const Gate& a, const Gate& b) {
  if (a.kind == GateKind::Barrier || b.kind == GateKind::Barrier) return false;
  if (a.disjoint(b)) return true;
  // shared support from here on
  if (a.kind == GateKind::Measure || b.kind == GateKind::Measure) return false;
  for (int q : a.qubits) {
    if (!b.touches(q)) continue;
    Axis ax = gate_axis_on(a, q);
    Axis bx = gate_axis_on(b, q);
    if (ax == Axis::Other || bx == Axis::Other || ax != bx) return false;
  }
  return true;
}

bool commutes_with_set(const Gate& g, std::span<const Gate> gs) {
  for (const Gate& other : gs)
    if (!commutes(g, other)) return false;
  return true;
}

bool commutes_with_set(const Circuit& c, int g, std::span<const int> gate_ids) {
  for (int other : gate_ids)
    if (!commutes(c.gate(g), c.gate(other))) return false;
  return true;
}

Circuit decompose_to_basis(const Circuit& c) {
  Circuit out(c.num_qubits());
  for (int q = 0; q < c.num_qubits(); ++q) out.set_qubit_name(q, c.qubit_name(q));
  for (const Gate& g : c.gates()) {
    switch (g.kind) {
      case GateKind::CRZ: {
        // control u, target v: RZ(a/2) v; CX; RZ(-a/2) v; CX
        int u = g.qubits[0], v = g.qubits[1];
        double a = g.params[0];
        out.rz(v, a / 2).cx(u, v).rz(v, -a / 2).cx(u, v);
        break;
      }
      case GateKind::CZ: {
        int u = g.qubits[0], v = g.qubits[1];
        out.h(v).cx(u, v).h(v);
        break;
      }
      case GateKind::SWAP: {
        int u = g.qubits[0], v = g.qubits[1];
        out.cx(u, v).cx(v, u).cx(u, v);
        break;
      }
      default:
        out.add(g.kind, g.qubits, g.params);
    }
  }
  return out;
}

}  // namespace dqcc
