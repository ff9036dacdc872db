#pragma once

#include "dqcc/aggregate.hpp"
#include "dqcc/circuit.hpp"
#include "dqcc/partition.hpp"
#include "dqcc/protocol.hpp"

#include <string>
#include <vector>

namespace dqcc {

/// Operation durations in CX-time units.
struct LatencyModel {
  double t_1q = 0.1;
  double t_2q = 1.0;
  double t_ms = 5.0;
  double t_ep = 12.0;
  double t_cb = 1.0;
};

/// One teleport excluding EPR preparation: the Bell CX, the two readouts in
/// parallel (basis rotation inside the readout window), and two classical
/// bits queued on the node-pair channel. Conditioned Pauli corrections are
/// frame updates and cost nothing.
double teleport_time(const LatencyModel& lm);
double cat_entangler_time(const LatencyModel& lm);    // CX + readout + one bit
double cat_disentangler_time(const LatencyModel& lm); // readout + one bit

/// Schedulable items: communication blocks plus standalone local gates.
struct BlockDag {
  struct Item {
    bool is_block = false;
    size_t block = 0;  // into the blocks vector
    int gate = -1;     // circuit position for standalone gates
  };
  std::vector<Item> items;
  std::vector<std::vector<int>> preds;
  std::vector<std::vector<int>> succs;
  std::vector<FusionChain> chains;  // filled by fuse_tp
  bool align = false;               // set by align_tp
  /// EPR preparation runs as early as slots free up; turning this off makes
  /// every preparation wait for its consuming teleport (independent
  /// per-block execution, the comparator for the fusion saving).
  bool prefetch_epr = true;
};

/// Item-level dependencies: edge u -> v iff u precedes v in circuit order
/// and some gate pair across them fails to commute.
BlockDag build_block_dag(const Circuit& c, const Partition& p, const std::vector<CommBlock>& blocks);

/// Enables concurrent teleport phases for commutable TP blocks; without it
/// TP blocks run completion-first, one at a time.
BlockDag& align_tp(BlockDag& dag);

/// Fuses consecutive same-pivot TP blocks into teleport cycles, eliding the
/// intermediate return teleports. A block or two-qubit gate touching the
/// pivot between two candidates breaks the chain.
BlockDag& fuse_tp(BlockDag& dag, const Circuit& c, const Partition& p,
                  const std::vector<CommBlock>& blocks, const std::vector<Scheme>& schemes);

struct TimelineEvent {
  double start = 0;
  double duration = 0;
  std::string kind;  // epr | entangle | exec | disentangle | teleport | move | gate
  int block = -1;    // owning block index, -1 for standalone
  std::vector<int> qubits;
  std::vector<int> nodes;
};

struct CommClaim {
  int node = 0;
  int slot = 0;
  double start = 0;
  double end = 0;
};

struct Timeline {
  std::vector<TimelineEvent> events;
  std::vector<CommClaim> claims;
  double makespan = 0;
  int epr_total = 0;
  int epr_tp = 0;           // EPRs consumed by TP blocks/chains
  int elided_teleports = 0;
  /// Max simultaneous claims on any node (2 is the hardware bound).
  int peak_comm_claims() const;
};

/// Resource-constrained greedy list schedule: every ready block starts as
/// soon as its nodes have free communication qubits, EPR preparation is
/// prefetched by critical-path priority, and durations come from the
/// latency model.
Timeline schedule(const Circuit& c, const Partition& p, const std::vector<CommBlock>& blocks,
                  const std::vector<Scheme>& schemes, const BlockDag& dag, const LatencyModel& lm);

}  // namespace dqcc
