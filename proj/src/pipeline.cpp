#include "dqcc/pipeline.hpp"

#include "dqcc/verify.hpp"

#include <algorithm>
#include <cmath>

namespace dqcc {

const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::AutoComm: return "autocomm";
    case Strategy::BaselineCat: return "baseline-cat";
    case Strategy::GpTp: return "gp-tp";
  }
  return "?";
}

namespace {

double peak_rem_cx(const BurstStats& st) {
  double mx = 0;
  for (double v : st.per_comm) mx = std::max(mx, v);
  return mx;
}

void run_verification(CompileResult& r, const ProtocolCircuit& pc) {
  if (r.input_basis.num_qubits() > 8) return;  // oracle applies at small scale only
  for (const Gate& g : r.input_basis.gates())
    if (g.kind == GateKind::Measure) return;  // only unitary programs are comparable
  Circuit deferred = defer_measurements(pc);
  std::vector<int> data(static_cast<size_t>(r.input_basis.num_qubits()));
  for (int q = 0; q < r.input_basis.num_qubits(); ++q) data[static_cast<size_t>(q)] = q;
  double dist = equivalence_distance(deferred, r.input_basis, data);
  r.verify_distance = dist;
  if (dist >= 1e-9)
    throw VerificationError("compiled program is not equivalent to its input (distance " +
                            std::to_string(dist) + ")");
  r.verified = true;
}

}  // namespace

CompileResult compile_circuit(const Circuit& c, const Partition& p, const CompileOptions& opts) {
  CompileResult r;
  r.partition = p;
  r.input_basis = decompose_to_basis(c);
  for (const Gate& g : r.input_basis.gates())
    if (g.is_two_qubit() && p.is_remote(g) && g.kind != GateKind::CX)
      throw CircuitError("remote two-qubit gate outside the CX basis");

  if (opts.strategy == Strategy::GpTp) {
    GpTpResult gp = gp_tp(r.input_basis, p, opts.latency);
    r.rewritten = r.input_basis;
    r.timeline = std::move(gp.timeline);
    r.metrics.tot_comm = gp.tot_comm;
    r.metrics.tp_comm = gp.tot_comm;  // every communication is a teleport
    r.metrics.latency = r.timeline.makespan;
    r.metrics.peak_rem_cx = 0;
    r.expansion.pc = std::move(gp.pc);
    r.expansion.epr_total = r.timeline.epr_total;
    if (opts.verify) run_verification(r, r.expansion.pc);
    if (opts.compare) {
      BaselineCatResult base = baseline_cat(r.input_basis, p, opts.latency);
      r.metrics.improv_factor = r.metrics.tot_comm > 0
                                    ? static_cast<double>(base.tot_comm) / r.metrics.tot_comm
                                    : 1.0;
      r.metrics.lat_dec_factor =
          r.metrics.latency > 0 ? base.timeline.makespan / r.metrics.latency : 1.0;
    }
    return r;
  }

  if (opts.strategy == Strategy::BaselineCat) {
    BaselineCatResult base = baseline_cat(r.input_basis, p, opts.latency);
    r.rewritten = r.input_basis;
    r.blocks = std::move(base.blocks);
    r.schemes = std::move(base.schemes);
    r.patterns.assign(r.blocks.size(), PatternClass::UniControlClean);
    r.timeline = std::move(base.timeline);
    r.stats = burst_stats(r.blocks, r.schemes);
    r.metrics.tot_comm = base.tot_comm;
    r.metrics.tp_comm = 0;
    r.metrics.peak_rem_cx = peak_rem_cx(r.stats);
    r.metrics.latency = r.timeline.makespan;
    r.expansion = expand_program(r.rewritten, p, r.blocks, r.schemes, {});
    if (opts.verify) run_verification(r, r.expansion.pc);
    if (opts.compare) {
      r.metrics.improv_factor = 1.0;
      r.metrics.lat_dec_factor = 1.0;
    }
    return r;
  }

  // ---- AutoComm ----------------------------------------------------------
  AggregateResult agg = aggregate(r.input_basis, p);
  AssignResult asg = assign(agg.circuit, std::move(agg.blocks));
  r.rewritten = std::move(asg.circuit);
  r.blocks = std::move(asg.blocks);
  r.patterns = std::move(asg.patterns);
  r.schemes = std::move(asg.schemes);

  r.cat_only_tot_comm = 0;
  for (size_t i = 0; i < r.blocks.size(); ++i)
    r.cat_only_tot_comm += cat_only_segments(r.blocks[i], r.rewritten);

  if (opts.cat_only) {
    // Cat-only variant: each block costs one Cat call per clean segment.
    // Comparative accounting only; no schedule or expansion.
    r.metrics.tot_comm = r.cat_only_tot_comm;
    r.metrics.tp_comm = 0;
    r.stats = burst_stats(r.blocks, std::vector<Scheme>(r.blocks.size(), Scheme::Cat));
    r.metrics.peak_rem_cx = peak_rem_cx(r.stats);
    if (opts.compare) {
      BaselineCatResult base = baseline_cat(r.input_basis, p, opts.latency);
      r.metrics.improv_factor =
          r.metrics.tot_comm > 0 ? static_cast<double>(base.tot_comm) / r.metrics.tot_comm : 1.0;
    }
    return r;
  }

  BlockDag dag = build_block_dag(r.rewritten, p, r.blocks);
  if (opts.align) align_tp(dag);
  if (opts.fuse) fuse_tp(dag, r.rewritten, p, r.blocks, r.schemes);
  r.chains = dag.chains;
  r.timeline = schedule(r.rewritten, p, r.blocks, r.schemes, dag, opts.latency);
  r.stats = burst_stats(r.blocks, r.schemes);

  r.metrics.tot_comm = r.timeline.epr_total;
  r.metrics.tp_comm = r.timeline.epr_tp;
  r.metrics.peak_rem_cx = peak_rem_cx(r.stats);
  r.metrics.latency = r.timeline.makespan;

  r.expansion = expand_program(r.rewritten, p, r.blocks, r.schemes, r.chains);
  if (r.expansion.epr_total != r.timeline.epr_total)
    throw CircuitError("EPR accounting mismatch between expansion and schedule");
  if (opts.verify) run_verification(r, r.expansion.pc);

  if (opts.compare) {
    BaselineCatResult base = baseline_cat(r.input_basis, p, opts.latency);
    r.metrics.improv_factor =
        r.metrics.tot_comm > 0 ? static_cast<double>(base.tot_comm) / r.metrics.tot_comm : 1.0;
    r.metrics.lat_dec_factor =
        r.metrics.latency > 0 ? base.timeline.makespan / r.metrics.latency : 1.0;
  }
  return r;
}

json report_to_json(const CompileResult& r, const std::string& input_label,
                    const std::string& strategy_label) {
  json j;
  j["input"] = input_label;
  j["partition"] = partition_to_json(r.partition);
  j["strategy"] = strategy_label;
  j["metrics"] = metrics_to_json(r.metrics);
  j["blocks"] = blocks_to_json(r.blocks, r.patterns, r.schemes);
  j["timeline"] = timeline_to_json(r.timeline);
  j["burst_stats"] = burst_stats_to_json(r.stats);
  return j;
}

}  // namespace dqcc
