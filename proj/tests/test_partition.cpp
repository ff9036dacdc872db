#include "dqcc/partition.hpp"

#include "dqcc/benchmarks.hpp"

#include <doctest.h>

#include <algorithm>

using namespace dqcc;

TEST_CASE("interaction graph counts two-qubit gates") {
  Circuit c(4);
  c.cx(0, 1).cx(1, 0).cx(0, 1).h(2);
  InteractionGraph g = interaction_graph(c);
  CHECK(g.weight(0, 1) == 3);
  CHECK(g.weight(1, 2) == 0);

  Circuit local_only(3);
  local_only.h(0).t(1);
  CHECK(interaction_graph(local_only).weights.empty());

  InteractionGraph qft = interaction_graph(decompose_to_basis(gen_qft(4)));
  for (int u = 0; u < 4; ++u)
    for (int v = u + 1; v < 4; ++v) CHECK(qft.weight(u, v) == 2);
}

TEST_CASE("single node puts everything on node 0") {
  Circuit c = decompose_to_basis(gen_qft(4));
  InteractionGraph g = interaction_graph(c);
  Partition p = oee_partition(g, 1, 4);
  for (int q = 0; q < 4; ++q) CHECK(p.node(q) == 0);
  CHECK(cut_weight(g, p) == 0);
}

TEST_CASE("two disconnected cliques split cleanly") {
  // cliques {0,1,2} and {3,4,5}, interleaved so the contiguous start is bad
  Circuit c(6);
  auto clique = [&](int a, int b, int x) { c.cx(a, b).cx(a, x).cx(b, x); };
  clique(0, 2, 4);
  clique(1, 3, 5);
  InteractionGraph g = interaction_graph(c);
  Partition p = oee_partition(g, 2, 3);
  CHECK(cut_weight(g, p) == 0);
  CHECK(p.node(0) == p.node(2));
  CHECK(p.node(0) == p.node(4));
  CHECK(p.node(1) == p.node(3));
  CHECK(p.node(1) == p.node(5));

  // exhaustive oracle: no balanced split does better than 0
  long best = 1000;
  for (int mask = 0; mask < 64; ++mask) {
    if (__builtin_popcount(mask) != 3) continue;
    Partition q;
    q.num_nodes = 2;
    q.capacity = 3;
    q.node_of.resize(6);
    for (int i = 0; i < 6; ++i) q.node_of[static_cast<size_t>(i)] = (mask >> i) & 1;
    best = std::min(best, cut_weight(g, q));
  }
  CHECK(best == 0);
}

TEST_CASE("qft4 balanced split cut weight is 8") {
  InteractionGraph g = interaction_graph(decompose_to_basis(gen_qft(4)));
  // every balanced split of K4 with weight-2 edges cuts 4 edges = weight 8
  Partition p = oee_partition(g, 2, 2);
  CHECK(cut_weight(g, p) == 8);
}

TEST_CASE("oee never loses to the contiguous start and matches remote count") {
  for (int n : {6, 9, 12}) {
    Circuit c = decompose_to_basis(gen_qft(n));
    InteractionGraph g = interaction_graph(c);
    int k = 3, t = (n + 2) / 3;
    Partition start = contiguous_partition(n, k, t);
    Partition p = oee_partition(g, k, t);
    CHECK(cut_weight(g, p) <= cut_weight(g, start));
    CHECK(p.count_remote_cx(c) == cut_weight(g, p));
  }
}

TEST_CASE("infeasible capacity throws") {
  CHECK_THROWS_AS(contiguous_partition(10, 2, 4), InfeasiblePartition);
  InteractionGraph g;
  g.num_qubits = 10;
  CHECK_THROWS_AS(oee_partition(g, 3, 3), InfeasiblePartition);
}

TEST_CASE("round robin strategy") {
  Partition p = round_robin_partition(7, 3, 3);
  for (int q = 0; q < 7; ++q) CHECK(p.node(q) == q % 3);
}
