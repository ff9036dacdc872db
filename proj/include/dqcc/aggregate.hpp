#pragma once

#include "dqcc/circuit.hpp"
#include "dqcc/partition.hpp"

#include <utility>
#include <vector>

namespace dqcc {

/// A burst-communication unit: remote CX gates between one pivot qubit and
/// one remote node, contiguous in the rewritten circuit up to local gates.
struct CommBlock {
  int pivot = -1;
  int node = -1;                // remote node, != node_of(pivot)
  std::vector<int> members;     // positions of remote CX gates, ascending
  std::vector<int> interior;    // positions of local gates trapped in the span

  int span_first() const;
  int span_last() const;
  /// members + interior in circuit order.
  std::vector<int> ordered_gates() const;
};

using QubitNodePair = std::pair<int, int>;

struct RankedPair {
  QubitNodePair pair;
  int remote_cx = 0;
};

/// All (qubit, remote node) pairs with at least one remote CX, descending
/// by count; ties by (qubit id, node id).
std::vector<RankedPair> rank_pairs(const Circuit& c, const Partition& p);

/// Maximal runs of the pair's remote CX gates uninterrupted by any other
/// remote gate, in position order.
std::vector<CommBlock> preprocess(const Circuit& c, const Partition& p, QubitNodePair pair);

struct LinearMergeResult {
  Circuit circuit;               // rewritten (commutable gates reordered)
  std::vector<CommBlock> blocks; // merged blocks of the pair, repositioned
};

/// Greedy left-to-right merge of one pair's blocks (forward, then reverse
/// on failure). Gates between blocks either float out commutably or are
/// trapped inside as non-commuting interior; a non-commutable remote
/// two-qubit gate (or Measure/Barrier) aborts the merge.
LinearMergeResult linear_merge(const Circuit& c, const Partition& p, std::vector<CommBlock> blocks);

struct AggregateResult {
  Circuit circuit;                // rewritten, blocks contiguous, unitary-equivalent to input
  std::vector<CommBlock> blocks;  // disjoint cover of all remote CX gates
  int sweeps = 0;
  bool converged = true;
};

/// Full aggregation: rank pairs, preprocess + linear-merge each in
/// descending order of remote-gate count, rewriting after each pair;
/// repeat whole sweeps until block count and total size stabilize.
AggregateResult aggregate(const Circuit& c, const Partition& p);

enum class Scheme { Cat, TP };
inline int epr_cost(Scheme s) { return s == Scheme::Cat ? 1 : 2; }

/// Remote-CX count carried per communication and the cumulative
/// Pr[one communication carries >= X].
struct BurstStats {
  std::vector<double> per_comm;       // one entry per communication
  std::vector<double> pr_ge;          // pr_ge[x-1] = Pr[carried >= x], x = 1..max
  double fraction_ge(double x) const; // fraction of communications carrying >= x
};

BurstStats burst_stats(const std::vector<CommBlock>& blocks, const std::vector<Scheme>& schemes);

}  // namespace dqcc
