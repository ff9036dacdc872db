#include "dqcc/baselines.hpp"

#include "dqcc/benchmarks.hpp"
#include "dqcc/pipeline.hpp"
#include "dqcc/verify.hpp"

#include <doctest.h>

using namespace dqcc;

namespace {
const LatencyModel kDefault;
}

TEST_CASE("baseline cat issues one communication per remote CX") {
  Circuit c = decompose_to_basis(gen_bv(100, bv100_secret()));
  Partition p = contiguous_partition(100, 10, 10);
  BaselineCatResult res = baseline_cat(c, p, kDefault);
  CHECK(res.tot_comm == 56);
  CHECK(res.timeline.epr_total == 56);
}

TEST_CASE("baseline cat on a fully local circuit") {
  Circuit c(4);
  c.h(0).cx(0, 1).cx(2, 3);
  Partition p = contiguous_partition(4, 2, 2);
  BaselineCatResult res = baseline_cat(c, p, kDefault);
  CHECK(res.tot_comm == 0);
  CHECK(res.timeline.epr_total == 0);
}

TEST_CASE("baseline cat on the example program: one communication per remote CX") {
  Circuit c = fig5_program();
  Partition p = fig5_partition();
  BaselineCatResult res = baseline_cat(c, p, kDefault);
  CHECK(res.tot_comm == p.count_remote_cx(c));
  CHECK(res.tot_comm == 12);
}

TEST_CASE("baseline cat expansion passes the oracle") {
  Circuit c = fig5_program();
  Partition p = fig5_partition();
  CompileOptions opts;
  opts.strategy = Strategy::BaselineCat;
  opts.verify = true;
  CompileResult r = compile_circuit(c, p, opts);
  CHECK(r.verified);
}

TEST_CASE("gp-tp moves one endpoint per remote interaction") {
  Circuit c(4);
  c.cx(0, 2);
  Partition p = contiguous_partition(4, 2, 2);
  GpTpResult res = gp_tp(c, p, kDefault);
  CHECK(res.moves == 1);
  CHECK(res.tot_comm == 2);  // two communications for one remote interaction
}

TEST_CASE("gp-tp on a fully local circuit") {
  Circuit c(4);
  c.h(0).cx(0, 1);
  Partition p = contiguous_partition(4, 2, 2);
  GpTpResult res = gp_tp(c, p, kDefault);
  CHECK(res.tot_comm == 0);
  CHECK(res.timeline.epr_total == 0);
}

TEST_CASE("gp-tp lookahead keeps a hot qubit in place") {
  // q0 interacts with node 1 three times: one move localizes everything
  Circuit c(4);
  c.cx(0, 2).cx(0, 3).cx(2, 0);
  Partition p = contiguous_partition(4, 2, 2);
  GpTpResult res = gp_tp(c, p, kDefault);
  CHECK(res.moves == 1);
  CHECK(res.tot_comm == 2);
}

TEST_CASE("gp-tp expansion is unitary-equivalent, visitors returned home") {
  Circuit c = decompose_to_basis(gen_qft(6));
  Partition p = contiguous_partition(6, 2, 3);
  GpTpResult res = gp_tp(c, p, kDefault);
  Circuit deferred = defer_measurements(res.pc);
  CHECK(equivalent(deferred, c, {0, 1, 2, 3, 4, 5}, 1e-9));
}

TEST_CASE("gp-tp eviction under capacity pressure") {
  // three qubits of node 0 all interact with node 1's qubits back and forth;
  // one visitor slot forces evictions
  Circuit c(6);
  c.cx(0, 3).cx(1, 4).cx(2, 5).cx(0, 4).cx(1, 5);
  Partition p = contiguous_partition(6, 2, 3);
  GpTpResult res = gp_tp(c, p, kDefault);
  CHECK(res.moves >= 2);
  CHECK(res.tot_comm == 2 * res.moves);
  Circuit deferred = defer_measurements(res.pc);
  CHECK(equivalent(deferred, c, {0, 1, 2, 3, 4, 5}, 1e-9));
  CHECK(res.timeline.peak_comm_claims() <= 2);
}

TEST_CASE("autocomm never loses to baseline cat in communications") {
  struct Case {
    Circuit c{0};
    Partition p;
  };
  std::vector<Case> cases;
  cases.push_back({decompose_to_basis(gen_qft(10)), contiguous_partition(10, 2, 5)});
  cases.push_back({decompose_to_basis(gen_bv(12, "11011011011")), contiguous_partition(12, 3, 4)});
  cases.push_back({fig5_program(), fig5_partition()});
  cases.push_back({decompose_to_basis(gen_rca(8)), contiguous_partition(8, 2, 4)});
  cases.push_back({decompose_to_basis(gen_mctr(9)), contiguous_partition(9, 3, 3)});
  for (auto& [c, p] : cases) {
    CompileOptions opts;
    opts.compare = true;
    CompileResult r = compile_circuit(c, p, opts);
    REQUIRE(r.metrics.improv_factor.has_value());
    CHECK(*r.metrics.improv_factor >= 1.0);
  }
}

TEST_CASE("per-gate baseline never beats autocomm on makespan") {
  struct Case {
    Circuit c{0};
    Partition p;
  };
  std::vector<Case> cases;
  cases.push_back({decompose_to_basis(gen_qft(10)), contiguous_partition(10, 2, 5)});
  cases.push_back({fig5_program(), fig5_partition()});
  cases.push_back({decompose_to_basis(gen_rca(8)), contiguous_partition(8, 2, 4)});
  for (auto& [c, p] : cases) {
    CompileOptions opts;
    opts.compare = true;
    CompileResult r = compile_circuit(c, p, opts);
    REQUIRE(r.metrics.lat_dec_factor.has_value());
    CHECK(*r.metrics.lat_dec_factor >= 1.0);
  }
}
