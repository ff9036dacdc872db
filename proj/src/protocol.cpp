#include "dqcc/protocol.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace dqcc {

ProtocolBuilder::ProtocolBuilder(const Circuit& c, const Partition& p) : c_(c), p_(p) {
  pc_.num_data_qubits = c.num_qubits();
  pc_.num_nodes = p.num_nodes;
  slot_busy_.assign(static_cast<size_t>(p.num_nodes) * 2, false);
  location_.resize(static_cast<size_t>(c.num_qubits()));
  for (int q = 0; q < c.num_qubits(); ++q) location_[static_cast<size_t>(q)] = q;
}

int ProtocolBuilder::alloc(int node) {
  for (int s = 0; s < 2; ++s) {
    if (!slot_busy_[static_cast<size_t>(2 * node + s)]) {
      slot_busy_[static_cast<size_t>(2 * node + s)] = true;
      return pc_.comm_qubit(node, s);
    }
  }
  throw CircuitError("no free communication qubit on node " + std::to_string(node) +
                     " (scheduler contract violation)");
}

void ProtocolBuilder::release(int phys) {
  int idx = phys - pc_.num_data_qubits;
  slot_busy_.at(static_cast<size_t>(idx)) = false;
}

bool ProtocolBuilder::has_free_slot(int node) const {
  return !slot_busy_[static_cast<size_t>(2 * node)] || !slot_busy_[static_cast<size_t>(2 * node + 1)];
}

void ProtocolBuilder::epr(int qa, int qb) {
  ProtoEvent e;
  e.kind = ProtoEventKind::EprPrepare;
  e.qubits = {qa, qb};
  pc_.events.push_back(std::move(e));
  ++epr_count_;
}

void ProtocolBuilder::local(const Gate& g) {
  ProtoEvent e;
  e.kind = ProtoEventKind::LocalGate;
  e.gate = g;
  e.qubits = g.qubits;
  pc_.events.push_back(std::move(e));
}

void ProtocolBuilder::local_remapped(const Gate& g) {
  Gate r = g;
  for (int& q : r.qubits) q = where(q);
  local(r);
}

int ProtocolBuilder::measure(int q, bool x_basis) {
  ProtoEvent e;
  e.kind = x_basis ? ProtoEventKind::MeasureX : ProtoEventKind::MeasureZ;
  e.qubits = {q};
  e.bit = pc_.num_bits++;
  pc_.events.push_back(e);
  return e.bit;
}

void ProtocolBuilder::send(int bit, int from, int to) {
  ProtoEvent e;
  e.kind = ProtoEventKind::Send;
  e.bit = bit;
  e.node_from = from;
  e.node_to = to;
  pc_.events.push_back(std::move(e));
}

void ProtocolBuilder::cond(ProtoEventKind kind, int q, int bit) {
  ProtoEvent e;
  e.kind = kind;
  e.qubits = {q};
  e.bit = bit;
  pc_.events.push_back(std::move(e));
}

void ProtocolBuilder::expand_cat(const CommBlock& b, const Circuit& c) {
  int pivot = b.pivot;
  if (where(pivot) != pivot) throw CircuitError("cat expansion on a displaced pivot");
  int home = p_.node(pivot);
  int remote = b.node;
  std::vector<int> span = b.ordered_gates();
  int first_m = b.members.front(), last_m = b.members.back();

  for (int gi : span)
    if (gi < first_m) local_remapped(c.gate(gi));

  int c_home = alloc(home);
  int c_rem = alloc(remote);
  epr(c_home, c_rem);
  // cat-entangler
  Gate ent;
  ent.kind = GateKind::CX;
  ent.qubits = {pivot, c_home};
  local(ent);
  int m1 = measure(c_home, /*x_basis=*/false);
  release(c_home);
  send(m1, home, remote);
  cond(ProtoEventKind::CondX, c_rem, m1);

  for (int gi : span) {
    if (gi < first_m || gi > last_m) continue;
    bool is_member = std::binary_search(b.members.begin(), b.members.end(), gi);
    const Gate& g = c.gate(gi);
    if (is_member) {
      if (g.qubits[0] != pivot) throw CircuitError("cat expansion with a target-role member");
      Gate m;
      m.kind = GateKind::CX;
      m.qubits = {c_rem, where(g.qubits[1])};
      local(m);
    } else if (g.touches(pivot)) {
      // Z-axis action on the pivot operates on the cat pair logically and
      // stays node-local; anything else needs the dirty/TP path.
      if (gate_axis_on(g, pivot) != Axis::Z)
        throw CircuitError("cat expansion on a dirty block");
      local_remapped(g);
    } else {
      local_remapped(g);
    }
  }

  // cat-disentangler
  int m2 = measure(c_rem, /*x_basis=*/true);
  release(c_rem);
  send(m2, remote, home);
  cond(ProtoEventKind::CondZ, pivot, m2);

  for (int gi : span)
    if (gi > last_m) local_remapped(c.gate(gi));
}

int ProtocolBuilder::teleport(int src_phys, int src_node, int dst_node) {
  int c_src = alloc(src_node);
  int c_dst = alloc(dst_node);
  epr(c_src, c_dst);
  Gate bell;
  bell.kind = GateKind::CX;
  bell.qubits = {src_phys, c_src};
  local(bell);
  int m1 = measure(c_src, /*x_basis=*/false);
  int m2 = measure(src_phys, /*x_basis=*/true);
  release(c_src);
  if (src_phys >= pc_.num_data_qubits) release(src_phys);
  send(m1, src_node, dst_node);
  send(m2, src_node, dst_node);
  cond(ProtoEventKind::CondX, c_dst, m1);
  cond(ProtoEventKind::CondZ, c_dst, m2);
  return c_dst;
}

void ProtocolBuilder::exec_tp_block(const CommBlock& b, const Circuit& c) {
  for (int gi : b.ordered_gates()) local_remapped(c.gate(gi));
}

void ProtocolBuilder::teleport_home(int q) {
  // The home half of the pair lives on q's own slot, empty since q was
  // measured away; the state lands straight back where it belongs.
  int host = where(q);
  int host_node = (host - pc_.num_data_qubits) / 2;
  int home = p_.node(q);
  int c_src = alloc(host_node);
  epr(c_src, q);
  Gate bell;
  bell.kind = GateKind::CX;
  bell.qubits = {host, c_src};
  local(bell);
  int m1 = measure(c_src, /*x_basis=*/false);
  int m2 = measure(host, /*x_basis=*/true);
  release(c_src);
  if (host >= pc_.num_data_qubits) release(host);
  send(m1, host_node, home);
  send(m2, host_node, home);
  cond(ProtoEventKind::CondX, q, m1);
  cond(ProtoEventKind::CondZ, q, m2);
  set_where(q, q);
}

ProtocolCircuit expand(const CommBlock& b, Scheme s, const Circuit& c, const Partition& p) {
  ProtocolBuilder ex(c, p);
  if (s == Scheme::Cat) {
    ex.expand_cat(b, c);
  } else {
    int pivot = b.pivot;
    int host = ex.teleport(pivot, p.node(pivot), b.node);
    ex.set_where(pivot, host);
    ex.exec_tp_block(b, c);
    ex.teleport_home(pivot);
  }
  return ex.take();
}

ExpandedProgram expand_program(const Circuit& c, const Partition& p,
                               const std::vector<CommBlock>& blocks,
                               const std::vector<Scheme>& schemes,
                               const std::vector<FusionChain>& chains) {
  ExpandedProgram out;
  ProtocolBuilder ex(c, p);

  std::vector<int> block_at(c.size(), -1);
  for (size_t bi = 0; bi < blocks.size(); ++bi)
    for (int pos = blocks[bi].span_first(); pos <= blocks[bi].span_last(); ++pos)
      block_at[static_cast<size_t>(pos)] = static_cast<int>(bi);

  std::vector<int> chain_of(blocks.size(), -1), chain_pos(blocks.size(), -1);
  for (size_t ci = 0; ci < chains.size(); ++ci)
    for (size_t k = 0; k < chains[ci].block_indices.size(); ++k) {
      chain_of[chains[ci].block_indices[k]] = static_cast<int>(ci);
      chain_pos[chains[ci].block_indices[k]] = static_cast<int>(k);
    }

  for (int pos = 0; pos < static_cast<int>(c.size()); ++pos) {
    int bi = block_at[static_cast<size_t>(pos)];
    if (bi < 0) {
      ex.local_remapped(c.gate(pos));
      continue;
    }
    const CommBlock& b = blocks[static_cast<size_t>(bi)];
    if (pos != b.span_first()) continue;
    int epr_before = ex.epr_count();
    if (schemes[static_cast<size_t>(bi)] == Scheme::Cat) {
      ex.expand_cat(b, c);
    } else {
      int ci = chain_of[static_cast<size_t>(bi)];
      int k = ci < 0 ? 0 : chain_pos[static_cast<size_t>(bi)];
      int pivot = b.pivot;
      if (k == 0) {
        int host = ex.teleport(pivot, p.node(pivot), b.node);
        ex.set_where(pivot, host);
      } else {
        int host = ex.where(pivot);
        int host_node = (host - c.num_qubits()) / 2;
        if (host_node != b.node) {
          int nh = ex.teleport(host, host_node, b.node);
          ex.set_where(pivot, nh);
        } else {
          ++out.elided_teleports;  // same-node successor reuses the hosted pivot
        }
      }
      ex.exec_tp_block(b, c);
      bool last_in_chain =
          ci < 0 || k + 1 == static_cast<int>(chains[static_cast<size_t>(ci)].block_indices.size());
      if (last_in_chain) ex.teleport_home(pivot);
      else ++out.elided_teleports;
      out.epr_tp += ex.epr_count() - epr_before;
    }
    pos = b.span_last();
  }
  out.epr_total = ex.epr_count();
  out.pc = ex.take();
  return out;
}

std::string protocol_to_extended_qasm(const ProtocolCircuit& pc) {
  std::ostringstream os;
  os << "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
  os << "qreg q[" << pc.num_data_qubits << "];\n";
  os << "qreg comm[" << 2 * pc.num_nodes << "];\n";
  if (pc.num_bits > 0) os << "creg m[" << pc.num_bits << "];\n";
  auto qname = [&](int q) {
    if (q < pc.num_data_qubits) return "q[" + std::to_string(q) + "]";
    return "comm[" + std::to_string(q - pc.num_data_qubits) + "]";
  };
  for (const ProtoEvent& e : pc.events) {
    switch (e.kind) {
      case ProtoEventKind::EprPrepare:
        os << "epr " << qname(e.qubits[0]) << "," << qname(e.qubits[1]) << ";\n";
        break;
      case ProtoEventKind::LocalGate: {
        os << gate_name(e.gate.kind);
        if (!e.gate.params.empty()) {
          os << "(";
          for (size_t i = 0; i < e.gate.params.size(); ++i)
            os << (i ? "," : "") << e.gate.params[i];
          os << ")";
        }
        os << " ";
        for (size_t i = 0; i < e.qubits.size(); ++i) os << (i ? "," : "") << qname(e.qubits[i]);
        os << ";\n";
        break;
      }
      case ProtoEventKind::MeasureZ:
        os << "measure " << qname(e.qubits[0]) << " -> m[" << e.bit << "];\n";
        break;
      case ProtoEventKind::MeasureX:
        os << "xmeasure " << qname(e.qubits[0]) << " -> m[" << e.bit << "];\n";
        break;
      case ProtoEventKind::CondX:
        os << "if (m[" << e.bit << "]) x " << qname(e.qubits[0]) << ";\n";
        break;
      case ProtoEventKind::CondZ:
        os << "if (m[" << e.bit << "]) z " << qname(e.qubits[0]) << ";\n";
        break;
      case ProtoEventKind::Send:
        os << "send m[" << e.bit << "] node" << e.node_from << " -> node" << e.node_to << ";\n";
        break;
    }
  }
  return os.str();
}

}  // namespace dqcc
