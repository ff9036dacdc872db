#include "dqcc/aggregate.hpp"

#include "dqcc/benchmarks.hpp"
#include "dqcc/verify.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace dqcc;

namespace {

Partition two_nodes(int n) { return contiguous_partition(n, 2, (n + 1) / 2); }

void check_cover(const Circuit& c, const Partition& p, const std::vector<CommBlock>& blocks) {
  // every remote CX in exactly one block; blocks pairwise member-disjoint
  std::set<int> covered;
  for (const CommBlock& b : blocks) {
    for (int m : b.members) {
      CHECK(c.gate(m).kind == GateKind::CX);
      CHECK(p.is_remote(c.gate(m)));
      CHECK(c.gate(m).touches(b.pivot));
      int other = c.gate(m).qubits[0] == b.pivot ? c.gate(m).qubits[1] : c.gate(m).qubits[0];
      CHECK(p.node(other) == b.node);
      CHECK(p.node(b.pivot) != b.node);
      CHECK(covered.insert(m).second);
    }
  }
  int remote = 0;
  for (const Gate& g : c.gates())
    if (g.kind == GateKind::CX && p.is_remote(g)) ++remote;
  CHECK(static_cast<int>(covered.size()) == remote);
  // continuity: within each span every non-member gate is local
  for (const CommBlock& b : blocks) {
    for (int pos = b.span_first(); pos <= b.span_last(); ++pos) {
      if (std::find(b.members.begin(), b.members.end(), pos) != b.members.end()) continue;
      CHECK_FALSE(p.is_remote(c.gate(pos)));
    }
  }
}

}  // namespace

TEST_CASE("rank_pairs on the example program") {
  Circuit c = fig5_program();
  Partition p = fig5_partition();
  auto ranked = rank_pairs(c, p);
  REQUIRE_FALSE(ranked.empty());
  CHECK(ranked[0].pair == QubitNodePair{2, 0});  // (q3, node A)
  CHECK(ranked[0].remote_cx == 5);
}

TEST_CASE("rank_pairs trivia") {
  Circuit local(4);
  local.h(0).cx(0, 1);
  Partition p = two_nodes(4);
  CHECK(rank_pairs(local, p).empty());  // cx(0,1) is local under 2|2

  Circuit one(4);
  one.cx(0, 2);
  auto ranked = rank_pairs(one, p);
  REQUIRE(ranked.size() == 2);
  CHECK(ranked[0].pair == QubitNodePair{0, 1});
  CHECK(ranked[0].remote_cx == 1);
  CHECK(ranked[1].pair == QubitNodePair{2, 0});
}

TEST_CASE("preprocess finds four isolated runs for the top pair") {
  Circuit c = fig5_program();
  Partition p = fig5_partition();
  auto blocks = preprocess(c, p, {2, 0});
  REQUIRE(blocks.size() == 4);
  CHECK(blocks[0].members.size() == 2);  // the controlled-unitary pair
  CHECK(blocks[1].members.size() == 1);
  CHECK(blocks[2].members.size() == 1);
  CHECK(blocks[3].members.size() == 1);
}

TEST_CASE("preprocess splits on foreign remote gates only") {
  Circuit c(6);
  c.cx(0, 3).t(0).cx(0, 3).cx(1, 4).cx(0, 3);
  Partition p = contiguous_partition(6, 2, 3);
  auto blocks = preprocess(c, p, {0, 1});
  REQUIRE(blocks.size() == 2);  // local t does not interrupt, cx(1,4) does
  CHECK(blocks[0].members == std::vector<int>{0, 2});
  CHECK(blocks[0].interior == std::vector<int>{1});
  CHECK(blocks[1].members == std::vector<int>{4});

  Circuit contiguous(6);
  contiguous.cx(0, 3).cx(0, 4).cx(0, 5);
  CHECK(preprocess(contiguous, p, {0, 1}).size() == 1);
}

TEST_CASE("linear_merge merges runs 1-2 and is blocked between 2-3") {
  Circuit c = fig5_program();
  Partition p = fig5_partition();
  auto runs = preprocess(c, p, {2, 0});
  auto merged = linear_merge(c, p, runs);
  REQUIRE(merged.blocks.size() == 2);
  CHECK(merged.blocks[0].members.size() == 3);  // runs 1+2
  CHECK(merged.blocks[1].members.size() == 2);  // runs 3+4
  // the rewritten circuit preserves the unitary
  CHECK(unitaries_equal_up_to_phase(unitary_of(c), unitary_of(merged.circuit), 1e-9));
}

TEST_CASE("linear_merge leaves a singleton unchanged") {
  Circuit c(4);
  c.cx(0, 2).h(1);
  Partition p = two_nodes(4);
  auto runs = preprocess(c, p, {0, 1});
  REQUIRE(runs.size() == 1);
  auto merged = linear_merge(c, p, runs);
  CHECK(merged.blocks.size() == 1);
  CHECK(merged.blocks[0].members == runs[0].members);
}

TEST_CASE("measure and barrier are hard merge barriers") {
  Circuit c(4);
  c.cx(0, 2).barrier({1}).cx(0, 2);
  Partition p = two_nodes(4);
  auto merged = linear_merge(c, p, preprocess(c, p, {0, 1}));
  CHECK(merged.blocks.size() == 2);

  Circuit m(4);
  m.cx(0, 2).measure(1).cx(0, 2);
  auto merged2 = linear_merge(m, p, preprocess(m, p, {0, 1}));
  CHECK(merged2.blocks.size() == 2);
}

TEST_CASE("aggregate on the example program") {
  Circuit c = fig5_program();
  Partition p = fig5_partition();
  AggregateResult res = aggregate(c, p);
  CHECK(res.converged);
  check_cover(res.circuit, p, res.blocks);
  CHECK(res.blocks.size() == 4);
  // (q3,A) carries five remote CX in two blocks of 3 and 2
  std::vector<size_t> q3a_sizes;
  for (const CommBlock& b : res.blocks)
    if (b.pivot == 2 && b.node == 0) q3a_sizes.push_back(b.members.size());
  REQUIRE(q3a_sizes.size() == 2);
  CHECK(q3a_sizes[0] == 3);
  CHECK(q3a_sizes[1] == 2);
  CHECK(unitaries_equal_up_to_phase(unitary_of(c), unitary_of(res.circuit), 1e-9));
}

TEST_CASE("aggregate on a fully local circuit") {
  Circuit c(4);
  c.h(0).cx(0, 1).cx(2, 3).t(3);
  Partition p = two_nodes(4);
  AggregateResult res = aggregate(c, p);
  CHECK(res.blocks.empty());
  CHECK(res.circuit.size() == c.size());
}

TEST_CASE("aggregate covers qft8 with a large block") {
  Circuit c = decompose_to_basis(gen_qft(8));
  Partition p = two_nodes(8);
  AggregateResult res = aggregate(c, p);
  check_cover(res.circuit, p, res.blocks);
  size_t largest = 0;
  for (const CommBlock& b : res.blocks) largest = std::max(largest, b.members.size());
  CHECK(largest >= 4);
  CHECK(unitaries_equal_up_to_phase(unitary_of(c), unitary_of(res.circuit), 1e-9));
}

TEST_CASE("bv with all-ones secret yields one block per remote node") {
  for (int k : {2, 3, 4}) {
    int n = 4 * k;
    Circuit c = decompose_to_basis(gen_bv(n, std::string(static_cast<size_t>(n - 1), '1')));
    Partition p = contiguous_partition(n, k, 4);
    AggregateResult res = aggregate(c, p);
    check_cover(res.circuit, p, res.blocks);
    CHECK(res.blocks.size() == static_cast<size_t>(k - 1));
  }
}

TEST_CASE("aggregate monotonicity: refinement never grows the first pair's cover") {
  Circuit c = fig5_program();
  Partition p = fig5_partition();
  auto merged = linear_merge(c, p, preprocess(c, p, {2, 0}));
  AggregateResult res = aggregate(c, p);
  size_t first_pair_blocks = 0;
  for (const CommBlock& b : res.blocks)
    if (b.pivot == 2 && b.node == 0) ++first_pair_blocks;
  CHECK(first_pair_blocks <= merged.blocks.size());
}

TEST_CASE("burst_stats") {
  std::vector<CommBlock> blocks(2);
  blocks[0].members = {0, 1, 2, 3, 4};
  blocks[1].members = {5, 6, 7, 8, 9, 10};
  SUBCASE("one cat block of five") {
    BurstStats st = burst_stats({blocks[0]}, {Scheme::Cat});
    REQUIRE(st.per_comm.size() == 1);
    CHECK(st.per_comm[0] == 5);
    CHECK(st.pr_ge.size() == 5);
    CHECK(st.pr_ge[4] == 1.0);  // Pr[>=5] = 1
    CHECK(st.pr_ge[0] == 1.0);  // Pr[>=1] = 1
  }
  SUBCASE("one tp block of six averages over two communications") {
    BurstStats st = burst_stats({blocks[1]}, {Scheme::TP});
    REQUIRE(st.per_comm.size() == 2);
    CHECK(st.per_comm[0] == 3.0);
    CHECK(st.per_comm[1] == 3.0);
  }
  SUBCASE("pr_ge is non-increasing") {
    BurstStats st = burst_stats(blocks, {Scheme::Cat, Scheme::TP});
    for (size_t i = 1; i < st.pr_ge.size(); ++i) CHECK(st.pr_ge[i] <= st.pr_ge[i - 1]);
    CHECK(st.pr_ge[0] == 1.0);
  }
}

TEST_CASE("qft12 k3: remote CX mass sits in blocks of at least 4 members") {
  Circuit c = decompose_to_basis(gen_qft(12));
  Partition p = contiguous_partition(12, 3, 4);
  AggregateResult res = aggregate(c, p);
  check_cover(res.circuit, p, res.blocks);
  int small = 0, total = 0;
  for (const CommBlock& b : res.blocks) {
    total += static_cast<int>(b.members.size());
    if (b.members.size() < 4) small += static_cast<int>(b.members.size());
  }
  CHECK(total == 96);
  double fraction = static_cast<double>(small) / total;
  CHECK(fraction <= 0.25);  // 1/t with t = 4
}
