#include "dqcc/assign.hpp"

#include "dqcc/benchmarks.hpp"
#include "dqcc/protocol.hpp"
#include "dqcc/verify.hpp"

#include <doctest.h>

using namespace dqcc;

namespace {

Partition split2(int n) { return contiguous_partition(n, 2, (n + 1) / 2); }

CommBlock whole_circuit_block(const Circuit& c, const Partition& p, int pivot, int node) {
  CommBlock b;
  b.pivot = pivot;
  b.node = node;
  for (int pos = 0; pos < static_cast<int>(c.size()); ++pos) {
    const Gate& g = c.gate(pos);
    if (g.kind == GateKind::CX && p.is_remote(g)) b.members.push_back(pos);
    else b.interior.push_back(pos);
  }
  return b;
}

}  // namespace

TEST_CASE("classify the four pattern classes") {
  Partition p = split2(4);  // {0,1 | 2,3}

  Circuit clean(4);
  clean.cx(0, 2).cx(0, 3);
  CHECK(classify(whole_circuit_block(clean, p, 0, 1), clean) == PatternClass::UniControlClean);

  Circuit dirty(4);
  dirty.cx(0, 2).h(0).cx(0, 3);
  CHECK(classify(whole_circuit_block(dirty, p, 0, 1), dirty) == PatternClass::UniControlDirty);

  Circuit target(4);
  target.cx(2, 0).cx(3, 0);
  CHECK(classify(whole_circuit_block(target, p, 0, 1), target) == PatternClass::UniTarget);

  Circuit bidir(4);
  bidir.cx(0, 2).cx(2, 0);
  CHECK(classify(whole_circuit_block(bidir, p, 0, 1), bidir) == PatternClass::Bidirectional);
}

TEST_CASE("a diagonal pivot gate between members stays clean") {
  Partition p = split2(4);
  Circuit c(4);
  c.cx(0, 2).t(0).rz(0, 0.3).cx(0, 3);
  CHECK(classify(whole_circuit_block(c, p, 0, 1), c) == PatternClass::UniControlClean);
}

TEST_CASE("a stuck pivot gate before the first member does not dirty the block") {
  Partition p = split2(4);
  Circuit c(4);
  c.h(0).cx(0, 2).cx(0, 3);
  CHECK(classify(whole_circuit_block(c, p, 0, 1), c) == PatternClass::UniControlClean);
}

TEST_CASE("transform_target flips a single member and stays equivalent") {
  Partition p = split2(4);
  Circuit c(4);
  c.cx(2, 0);  // pivot 0 is the target
  std::vector<CommBlock> blocks{whole_circuit_block(c, p, 0, 1)};
  TransformResult tr = transform_target(c, blocks, 0);
  REQUIRE(tr.blocks[0].members.size() == 1);
  const Gate& m = tr.circuit.gate(tr.blocks[0].members[0]);
  CHECK(m.qubits[0] == 0);  // pivot now controls
  CHECK(unitaries_equal_up_to_phase(unitary_of(c), unitary_of(tr.circuit), 1e-12));
  CHECK(classify(tr.blocks[0], tr.circuit) == PatternClass::UniControlClean);
}

TEST_CASE("transform_target on a bv-style block becomes clean") {
  Partition p = split2(4);
  Circuit c(4);
  c.cx(2, 0).cx(3, 0);  // both members target the pivot
  std::vector<CommBlock> blocks{whole_circuit_block(c, p, 0, 1)};
  TransformResult tr = transform_target(c, blocks, 0);
  CHECK(classify(tr.blocks[0], tr.circuit) == PatternClass::UniControlClean);
  CHECK(unitaries_equal_up_to_phase(unitary_of(c), unitary_of(tr.circuit), 1e-12));
}

TEST_CASE("transform_target rejects non-UniTarget blocks") {
  Partition p = split2(4);
  Circuit c(4);
  c.cx(0, 2);
  std::vector<CommBlock> blocks{whole_circuit_block(c, p, 0, 1)};
  CHECK_THROWS_AS(transform_target(c, blocks, 0), CircuitError);
}

TEST_CASE("transform_target traps pivot gates between members as dirty") {
  Partition p = split2(4);
  Circuit c(4);
  c.cx(2, 0).rz(0, 0.4).cx(3, 0);
  std::vector<CommBlock> blocks{whole_circuit_block(c, p, 0, 1)};
  TransformResult tr = transform_target(c, blocks, 0);
  CHECK(unitaries_equal_up_to_phase(unitary_of(c), unitary_of(tr.circuit), 1e-12));
  CHECK(classify(tr.blocks[0], tr.circuit) == PatternClass::UniControlDirty);
}

TEST_CASE("assign: clean to Cat, dirty and bidirectional to TP") {
  Partition p = split2(4);

  Circuit clean(4);
  clean.cx(0, 2).cx(0, 3);
  AssignResult r1 = assign(clean, {whole_circuit_block(clean, p, 0, 1)});
  CHECK(r1.schemes[0] == Scheme::Cat);

  Circuit dirty(4);
  dirty.cx(0, 2).h(0).cx(0, 3);
  AssignResult r2 = assign(dirty, {whole_circuit_block(dirty, p, 0, 1)});
  CHECK(r2.schemes[0] == Scheme::TP);

  Circuit bidir(4);
  bidir.cx(0, 2).cx(2, 0).cx(0, 2);  // 3 CX: Cat would need 3 EPR, TP needs 2
  AssignResult r3 = assign(bidir, {whole_circuit_block(bidir, p, 0, 1)});
  CHECK(r3.patterns[0] == PatternClass::Bidirectional);
  CHECK(r3.schemes[0] == Scheme::TP);

  // UniTarget transforms first, then goes to Cat
  Circuit target(4);
  target.cx(2, 0).cx(3, 0);
  AssignResult r4 = assign(target, {whole_circuit_block(target, p, 0, 1)});
  CHECK(r4.patterns[0] == PatternClass::UniControlClean);
  CHECK(r4.schemes[0] == Scheme::Cat);
}

TEST_CASE("assign never maps a clean block to TP") {
  Circuit c = fig5_program();
  Partition p = fig5_partition();
  AggregateResult agg = aggregate(c, p);
  AssignResult asg = assign(agg.circuit, std::move(agg.blocks));
  for (size_t i = 0; i < asg.blocks.size(); ++i)
    if (asg.patterns[i] == PatternClass::UniControlClean) CHECK(asg.schemes[i] == Scheme::Cat);
  // EPR accounting: cost never exceeds the member count
  for (size_t i = 0; i < asg.blocks.size(); ++i)
    CHECK(epr_cost(asg.schemes[i]) <= static_cast<int>(asg.blocks[i].members.size()));
}

TEST_CASE("cat_only_segments") {
  Partition p = split2(4);

  Circuit clean(4);
  clean.cx(0, 2).cx(0, 3);
  CHECK(cat_only_segments(whole_circuit_block(clean, p, 0, 1), clean) == 1);

  Circuit dirty(4);
  dirty.cx(0, 2).h(0).cx(0, 3);
  CHECK(cat_only_segments(whole_circuit_block(dirty, p, 0, 1), dirty) == 2);

  Circuit bidir(4);
  bidir.cx(0, 2).cx(2, 0).cx(0, 2);
  CHECK(cat_only_segments(whole_circuit_block(bidir, p, 0, 1), bidir) == 3);
}

TEST_CASE("expand: one-member clean block costs one EPR pair") {
  Partition p = split2(4);
  Circuit c(4);
  c.cx(0, 2);
  CommBlock b = whole_circuit_block(c, p, 0, 1);
  ProtocolCircuit pc = expand(b, Scheme::Cat, c, p);
  int eprs = 0;
  for (const auto& e : pc.events)
    if (e.kind == ProtoEventKind::EprPrepare) ++eprs;
  CHECK(eprs == 1);
}

TEST_CASE("expand: controlled-unitary block runs on one EPR pair") {
  Partition p = split2(4);
  Circuit c(4);
  c.cx(0, 2).rz(2, 0.7).cx(0, 3).h(3);  // members interleaved with remote-side gates
  CommBlock b = whole_circuit_block(c, p, 0, 1);
  REQUIRE(classify(b, c) == PatternClass::UniControlClean);
  ProtocolCircuit pc = expand(b, Scheme::Cat, c, p);
  int eprs = 0;
  for (const auto& e : pc.events)
    if (e.kind == ProtoEventKind::EprPrepare) ++eprs;
  CHECK(eprs == 1);
  Circuit deferred = defer_measurements(pc);
  CHECK(equivalent(deferred, c, {0, 1, 2, 3}, 1e-9));
}

TEST_CASE("expand: any block via TP uses exactly two EPR pairs") {
  Partition p = split2(4);
  Circuit c(4);
  c.cx(0, 2).h(0).cx(2, 0).t(0).cx(0, 3);
  CommBlock b = whole_circuit_block(c, p, 0, 1);
  ProtocolCircuit pc = expand(b, Scheme::TP, c, p);
  int eprs = 0;
  for (const auto& e : pc.events)
    if (e.kind == ProtoEventKind::EprPrepare) ++eprs;
  CHECK(eprs == 2);
  Circuit deferred = defer_measurements(pc);
  CHECK(equivalent(deferred, c, {0, 1, 2, 3}, 1e-9));
}

TEST_CASE("expanded blocks act like their subcircuits across patterns") {
  Partition p = split2(4);
  std::vector<Circuit> cases;
  {
    Circuit c(4);
    c.cx(0, 2).t(0).cx(0, 3).rz(2, 0.3);  // clean with diagonal pivot gate
    cases.push_back(c);
  }
  {
    Circuit c(4);
    c.cx(2, 0).h(1).cx(3, 0);  // target pattern
    cases.push_back(c);
  }
  {
    Circuit c(4);
    c.cx(0, 2).cx(2, 0).cx(0, 3).h(2);  // bidirectional
    cases.push_back(c);
  }
  for (Circuit& c : cases) {
    AssignResult asg = assign(c, {whole_circuit_block(c, p, 0, 1)});
    ProtocolCircuit pc = expand(asg.blocks[0], asg.schemes[0], asg.circuit, p);
    Circuit deferred = defer_measurements(pc);
    CHECK(equivalent(deferred, asg.circuit, {0, 1, 2, 3}, 1e-9));
  }
}

TEST_CASE("protocol builder flags slot exhaustion as a contract violation") {
  Circuit c(4);
  c.cx(0, 2);
  Partition p = contiguous_partition(4, 2, 2);
  ProtocolBuilder pb(c, p);
  pb.alloc(0);
  pb.alloc(0);
  CHECK_THROWS_AS(pb.alloc(0), CircuitError);
  CHECK_FALSE(pb.has_free_slot(0));
  CHECK(pb.has_free_slot(1));
}

TEST_CASE("example-program blocks: three bidirectional TP, one Cat") {
  Circuit c = fig5_program();
  Partition p = fig5_partition();
  AggregateResult agg = aggregate(c, p);
  AssignResult asg = assign(agg.circuit, std::move(agg.blocks));
  int tp = 0, cat = 0;
  for (size_t i = 0; i < asg.blocks.size(); ++i) {
    if (asg.schemes[i] == Scheme::TP) {
      ++tp;
      CHECK(asg.patterns[i] == PatternClass::Bidirectional);
      CHECK(asg.blocks[i].pivot == 2);  // all TP blocks pivot on q3
    } else {
      ++cat;
      CHECK(asg.patterns[i] == PatternClass::UniControlClean);
    }
  }
  CHECK(tp == 3);
  CHECK(cat == 1);
}

TEST_CASE("a diagonal separator keeps the Cat assignment") {
  // commutation hoists genuinely diagonal pivot gates, so a tdg between two
  // control-role members does not force TP
  Partition p = contiguous_partition(4, 2, 2);
  Circuit c(4);
  c.cx(0, 2).tdg(0).cx(0, 3);
  AssignResult r = assign(c, {whole_circuit_block(c, p, 0, 1)});
  CHECK(r.patterns[0] == PatternClass::UniControlClean);
  CHECK(r.schemes[0] == Scheme::Cat);
  ProtocolCircuit pc = expand(r.blocks[0], r.schemes[0], r.circuit, p);
  Circuit deferred = defer_measurements(pc);
  CHECK(equivalent(deferred, r.circuit, {0, 1, 2, 3}, 1e-9));
}
