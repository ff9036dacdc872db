#pragma once

#include "dqcc/circuit.hpp"

#include <map>
#include <utility>
#include <vector>

namespace dqcc {

/// Qubit-to-node assignment. Communication qubits are a hardware constant
/// (two per node) and are not part of the map.
struct Partition {
  std::vector<int> node_of;
  int num_nodes = 0;
  int capacity = 0;

  int node(int q) const { return node_of.at(static_cast<size_t>(q)); }
  bool is_remote(const Gate& g) const {
    return g.is_two_qubit() && node(g.qubits[0]) != node(g.qubits[1]);
  }
  int count_remote_cx(const Circuit& c) const;
};

/// Weighted qubit interaction graph: weight(u,v) = number of two-qubit
/// gates on {u,v}.
struct InteractionGraph {
  int num_qubits = 0;
  std::map<std::pair<int, int>, int> weights;  // key (min,max)

  int weight(int u, int v) const;
  void add(int u, int v, int w = 1);
};

InteractionGraph interaction_graph(const Circuit& c);

enum class PartitionStrategy { StaticOee, Contiguous, RoundRobin };

Partition contiguous_partition(int num_qubits, int num_nodes, int capacity);
Partition round_robin_partition(int num_qubits, int num_nodes, int capacity);

/// Static Overall Extreme Exchange style pass: contiguous start, then the
/// best pairwise exchange (or single move into free capacity) until no
/// exchange strictly reduces the cut weight. Deterministic tie-break by
/// lowest qubit id.
Partition oee_partition(const InteractionGraph& g, int num_nodes, int capacity);

Partition make_partition(const Circuit& c, int num_nodes, int capacity, PartitionStrategy s);

long cut_weight(const InteractionGraph& g, const Partition& p);

struct InfeasiblePartition : std::runtime_error {
  explicit InfeasiblePartition(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dqcc
