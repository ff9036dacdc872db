#include "dqcc/report.hpp"

#include "dqcc/benchmarks.hpp"
#include "dqcc/pipeline.hpp"

#include <doctest.h>

using namespace dqcc;

TEST_CASE("report json round-trips byte-identically") {
  Circuit c = fig5_program();
  Partition p = fig5_partition();
  CompileOptions opts;
  opts.compare = true;
  CompileResult r = compile_circuit(c, p, opts);
  json report = report_to_json(r, "fig5", "autocomm");
  std::string once = report.dump(2);
  json parsed = json::parse(once);
  CHECK(parsed.dump(2) == once);
}

TEST_CASE("identical inputs produce identical reports") {
  Circuit c = decompose_to_basis(gen_qft(8));
  Partition p = contiguous_partition(8, 2, 4);
  CompileOptions opts;
  opts.compare = true;
  CompileResult a = compile_circuit(c, p, opts);
  CompileResult b = compile_circuit(c, p, opts);
  CHECK(report_to_json(a, "qft-8-2", "autocomm").dump() ==
        report_to_json(b, "qft-8-2", "autocomm").dump());
}

TEST_CASE("partition serializes to and from json") {
  Partition p = fig5_partition();
  json j = partition_to_json(p);
  Partition back = partition_from_json(j);
  CHECK(back.num_nodes == p.num_nodes);
  CHECK(back.capacity == p.capacity);
  CHECK(back.node_of == p.node_of);

  json bad = j;
  bad["node_of"] = {0, 0, 0, 0, 0, 1};  // capacity 2 exceeded
  CHECK_THROWS_AS(partition_from_json(bad), CircuitError);
}

TEST_CASE("latency model json honors the documented keys") {
  json j = {{"t_1q", 0.1}, {"t_2q", 1.0}, {"t_ms", 5.0}, {"t_ep", 12.0}, {"t_cb", 1.0}};
  LatencyModel lm = latency_model_from_json(j);
  CHECK(lm.t_ep == 12.0);
  json partial = {{"t_ep", 24.0}};
  CHECK(latency_model_from_json(partial).t_ep == 24.0);
  CHECK(latency_model_from_json(partial).t_ms == 5.0);
  json bad = {{"t_ms", -1.0}};
  CHECK_THROWS_AS(latency_model_from_json(bad), CircuitError);
}

TEST_CASE("metrics invariants in a compare run") {
  Circuit c = decompose_to_basis(gen_bv(20, std::string(19, '1')));
  Partition p = contiguous_partition(20, 4, 5);
  CompileOptions opts;
  opts.compare = true;
  CompileResult r = compile_circuit(c, p, opts);
  CHECK(r.metrics.tp_comm <= r.metrics.tot_comm);
  REQUIRE(r.metrics.improv_factor.has_value());
  // improv = baseline tot_comm / strategy tot_comm
  BaselineCatResult base = baseline_cat(r.input_basis, p, opts.latency);
  CHECK(*r.metrics.improv_factor ==
        doctest::Approx(static_cast<double>(base.tot_comm) / r.metrics.tot_comm));
}

TEST_CASE("baseline-cat self-comparison reports factor one") {
  Circuit c = fig5_program();
  Partition p = fig5_partition();
  CompileOptions opts;
  opts.strategy = Strategy::BaselineCat;
  opts.compare = true;
  CompileResult r = compile_circuit(c, p, opts);
  CHECK(*r.metrics.improv_factor == 1.0);
  CHECK(*r.metrics.lat_dec_factor == 1.0);
}

TEST_CASE("gantt svg smoke") {
  Circuit c = fig5_program();
  Partition p = fig5_partition();
  CompileOptions opts;
  CompileResult r = compile_circuit(c, p, opts);
  std::string svg = timeline_to_svg(r.timeline, p.num_nodes);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("node 2") != std::string::npos);
  CHECK(svg.find("teleport") != std::string::npos);
}
