#pragma once

#include "dqcc/aggregate.hpp"
#include "dqcc/assign.hpp"
#include "dqcc/baselines.hpp"
#include "dqcc/benchmarks.hpp"
#include "dqcc/circuit.hpp"
#include "dqcc/partition.hpp"
#include "dqcc/protocol.hpp"
#include "dqcc/report.hpp"
#include "dqcc/schedule.hpp"

#include <optional>
#include <string>

namespace dqcc {

enum class Strategy { AutoComm, BaselineCat, GpTp };

struct CompileOptions {
  Strategy strategy = Strategy::AutoComm;
  LatencyModel latency;
  bool compare = false;      // also run baseline-cat and fill relative factors
  bool verify = false;       // small-scale unitary equivalence
  bool cat_only = false;     // hybrid assignment disabled (every block via Cat splits)
  bool fuse = true;
  bool align = true;
};

struct CompileResult {
  Circuit input_basis;       // after decompose_to_basis
  Circuit rewritten;         // after aggregation (+ target transforms)
  Partition partition;
  std::vector<CommBlock> blocks;
  std::vector<PatternClass> patterns;
  std::vector<Scheme> schemes;
  std::vector<FusionChain> chains;
  Timeline timeline;
  BurstStats stats;
  Metrics metrics;
  ExpandedProgram expansion;
  bool verified = false;     // set when verify ran and passed
  std::optional<double> verify_distance;
  int cat_only_tot_comm = 0; // Cat-only assignment cost of the same blocks
};

/// Full pipeline for one strategy. `c` may contain CRZ/CZ/SWAP; it is
/// decomposed to the CX + single-qubit basis first.
CompileResult compile_circuit(const Circuit& c, const Partition& p, const CompileOptions& opts);

json report_to_json(const CompileResult& r, const std::string& input_label,
                    const std::string& strategy_label);

const char* strategy_name(Strategy s);

struct VerificationError : std::runtime_error {
  explicit VerificationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dqcc
