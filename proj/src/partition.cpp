#include "dqcc/partition.hpp"

#include <algorithm>

namespace dqcc {

int Partition::count_remote_cx(const Circuit& c) const {
  int n = 0;
  for (const Gate& g : c.gates())
    if (g.kind == GateKind::CX && is_remote(g)) ++n;
  return n;
}

int InteractionGraph::weight(int u, int v) const {
  auto it = weights.find({std::min(u, v), std::max(u, v)});
  return it == weights.end() ? 0 : it->second;
}

void InteractionGraph::add(int u, int v, int w) {
  weights[{std::min(u, v), std::max(u, v)}] += w;
}

InteractionGraph interaction_graph(const Circuit& c) {
  InteractionGraph g;
  g.num_qubits = c.num_qubits();
  for (const Gate& gate : c.gates())
    if (gate.is_two_qubit()) g.add(gate.qubits[0], gate.qubits[1]);
  return g;
}

Partition contiguous_partition(int num_qubits, int num_nodes, int capacity) {
  if (static_cast<long>(num_nodes) * capacity < num_qubits)
    throw InfeasiblePartition("capacity " + std::to_string(capacity) + " x " +
                              std::to_string(num_nodes) + " nodes < " + std::to_string(num_qubits) +
                              " qubits");
  Partition p;
  p.num_nodes = num_nodes;
  p.capacity = capacity;
  p.node_of.resize(static_cast<size_t>(num_qubits));
  for (int q = 0; q < num_qubits; ++q) p.node_of[static_cast<size_t>(q)] = q / capacity;
  return p;
}

Partition round_robin_partition(int num_qubits, int num_nodes, int capacity) {
  if (static_cast<long>(num_nodes) * capacity < num_qubits)
    throw InfeasiblePartition("infeasible capacity");
  Partition p;
  p.num_nodes = num_nodes;
  p.capacity = capacity;
  p.node_of.resize(static_cast<size_t>(num_qubits));
  for (int q = 0; q < num_qubits; ++q) p.node_of[static_cast<size_t>(q)] = q % num_nodes;
  return p;
}

long cut_weight(const InteractionGraph& g, const Partition& p) {
  long cut = 0;
  for (const auto& [edge, w] : g.weights)
    if (p.node(edge.first) != p.node(edge.second)) cut += w;
  return cut;
}

namespace {

// Cut-weight change if qubit q moved from its node to node `dst`.
long move_gain(const InteractionGraph& g, const Partition& p, int q, int dst) {
  long gain = 0;  // positive gain = cut reduction
  int src = p.node(q);
  for (const auto& [edge, w] : g.weights) {
    int other;
    if (edge.first == q) other = edge.second;
    else if (edge.second == q) other = edge.first;
    else continue;
    int onode = p.node(other);
    if (onode == src) gain -= w;       // becomes cut
    else if (onode == dst) gain += w;  // becomes local
  }
  return gain;
}

}  // namespace

Partition oee_partition(const InteractionGraph& g, int num_nodes, int capacity) {
  Partition p = contiguous_partition(g.num_qubits, num_nodes, capacity);
  int n = g.num_qubits;
  std::vector<int> load(static_cast<size_t>(num_nodes), 0);
  for (int q = 0; q < n; ++q) ++load[static_cast<size_t>(p.node(q))];

  while (true) {
    long best_gain = 0;
    int best_u = -1, best_v = -1, best_dst = -1;  // v == -1 means single move
    // pairwise exchanges
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) {
        if (p.node(u) == p.node(v)) continue;
        // The (u,v) edge stays cut after a swap; each move_gain wrongly
        // credits it as healed, so subtract both credits.
        long gain = move_gain(g, p, u, p.node(v)) + move_gain(g, p, v, p.node(u)) -
                    2L * g.weight(u, v);
        if (gain > best_gain) {
          best_gain = gain;
          best_u = u;
          best_v = v;
          best_dst = -1;
        }
      }
      // single move into free capacity
      for (int dst = 0; dst < num_nodes; ++dst) {
        if (dst == p.node(u) || load[static_cast<size_t>(dst)] >= capacity) continue;
        long gain = move_gain(g, p, u, dst);
        if (gain > best_gain) {
          best_gain = gain;
          best_u = u;
          best_v = -1;
          best_dst = dst;
        }
      }
    }
    if (best_gain <= 0) break;
    if (best_v >= 0) {
      int nu = p.node(best_u), nv = p.node(best_v);
      p.node_of[static_cast<size_t>(best_u)] = nv;
      p.node_of[static_cast<size_t>(best_v)] = nu;
    } else {
      --load[static_cast<size_t>(p.node(best_u))];
      ++load[static_cast<size_t>(best_dst)];
      p.node_of[static_cast<size_t>(best_u)] = best_dst;
    }
  }
  return p;
}

Partition make_partition(const Circuit& c, int num_nodes, int capacity, PartitionStrategy s) {
  switch (s) {
    case PartitionStrategy::Contiguous:
      return contiguous_partition(c.num_qubits(), num_nodes, capacity);
    case PartitionStrategy::RoundRobin:
      return round_robin_partition(c.num_qubits(), num_nodes, capacity);
    case PartitionStrategy::StaticOee:
    default:
      return oee_partition(interaction_graph(c), num_nodes, capacity);
  }
}

}  // namespace dqcc
