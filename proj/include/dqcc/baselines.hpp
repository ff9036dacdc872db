#pragma once

#include "dqcc/aggregate.hpp"
#include "dqcc/circuit.hpp"
#include "dqcc/partition.hpp"
#include "dqcc/protocol.hpp"
#include "dqcc/schedule.hpp"

#include <vector>

namespace dqcc {

/// Per-gate Cat-Comm compiler: every remote CX is a one-member block
/// expanded independently, scheduled as soon as possible under the same
/// two-communication-qubit constraint.
struct BaselineCatResult {
  std::vector<CommBlock> blocks;  // singleton per remote CX
  std::vector<Scheme> schemes;    // all Cat
  Timeline timeline;
  int tot_comm = 0;  // == remote CX count
};

BaselineCatResult baseline_cat(const Circuit& c, const Partition& p, const LatencyModel& lm);

/// Teleport-to-localize baseline: scans gates in order; a remote CX
/// teleports the endpoint with more upcoming gates on the other side's node
/// (lookahead 20) into that node, then executes locally. A full destination
/// evicts its oldest visitor first. Tot Comm counts 2 EPR per move.
struct GpTpResult {
  ProtocolCircuit pc;  // expansion incl. end-of-program returns (uncounted)
  Timeline timeline;
  int moves = 0;
  int forced_returns = 0;
  int tot_comm = 0;  // 2 * moves
};

GpTpResult gp_tp(const Circuit& c, const Partition& p, const LatencyModel& lm, int lookahead = 20);

}  // namespace dqcc
