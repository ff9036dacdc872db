#include "dqcc/schedule.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

namespace dqcc {

double teleport_time(const LatencyModel& lm) { return lm.t_2q + lm.t_ms + 2 * lm.t_cb; }
double cat_entangler_time(const LatencyModel& lm) { return lm.t_2q + lm.t_ms + lm.t_cb; }
double cat_disentangler_time(const LatencyModel& lm) { return lm.t_ms + lm.t_cb; }

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double gate_duration(const Gate& g, const LatencyModel& lm) {
  if (g.kind == GateKind::Measure) return lm.t_ms;
  if (g.kind == GateKind::Barrier) return 0.0;
  return g.qubits.size() == 2 ? lm.t_2q : lm.t_1q;
}

double asap_duration(const Circuit& c, const std::vector<int>& gates, const LatencyModel& lm) {
  std::map<int, double> free;
  double end = 0;
  for (int gi : gates) {
    const Gate& g = c.gate(gi);
    double s = 0;
    for (int q : g.qubits) s = std::max(s, free[q]);
    double e = s + gate_duration(g, lm);
    for (int q : g.qubits) free[q] = e;
    end = std::max(end, e);
  }
  return end;
}

std::vector<int> item_qubits(const BlockDag::Item& it, const Circuit& c,
                             const std::vector<CommBlock>& blocks) {
  std::set<int> qs;
  if (it.is_block) {
    const CommBlock& b = blocks[it.block];
    for (int gi : b.ordered_gates())
      for (int q : c.gate(gi).qubits) qs.insert(q);
  } else {
    for (int q : c.gate(it.gate).qubits) qs.insert(q);
  }
  return {qs.begin(), qs.end()};
}

bool items_commute(const BlockDag::Item& a, const BlockDag::Item& b, const Circuit& c,
                   const std::vector<CommBlock>& blocks) {
  std::vector<int> ga, gb;
  if (a.is_block) ga = blocks[a.block].ordered_gates();
  else ga = {a.gate};
  if (b.is_block) gb = blocks[b.block].ordered_gates();
  else gb = {b.gate};
  for (int x : ga)
    for (int y : gb)
      if (!commutes(c.gate(x), c.gate(y))) return false;
  return true;
}

int item_pos(const BlockDag::Item& it, const std::vector<CommBlock>& blocks) {
  return it.is_block ? blocks[it.block].span_first() : it.gate;
}

}  // namespace

BlockDag build_block_dag(const Circuit& c, const Partition& p, const std::vector<CommBlock>& blocks) {
  (void)p;
  BlockDag dag;
  std::vector<char> in_block(c.size(), 0);
  for (const CommBlock& b : blocks)
    for (int pos = b.span_first(); pos <= b.span_last(); ++pos) in_block[static_cast<size_t>(pos)] = 1;
  for (size_t bi = 0; bi < blocks.size(); ++bi) {
    BlockDag::Item it;
    it.is_block = true;
    it.block = bi;
    dag.items.push_back(it);
  }
  for (int pos = 0; pos < static_cast<int>(c.size()); ++pos) {
    if (in_block[static_cast<size_t>(pos)]) continue;
    BlockDag::Item it;
    it.gate = pos;
    dag.items.push_back(it);
  }
  std::stable_sort(dag.items.begin(), dag.items.end(),
                   [&](const BlockDag::Item& a, const BlockDag::Item& b) {
                     return item_pos(a, blocks) < item_pos(b, blocks);
                   });
  size_t n = dag.items.size();
  dag.preds.assign(n, {});
  dag.succs.assign(n, {});
  // per-qubit scans: any earlier item sharing a qubit and failing to commute
  std::map<int, std::vector<int>> on_qubit;
  for (size_t i = 0; i < n; ++i)
    for (int q : item_qubits(dag.items[i], c, blocks)) on_qubit[q].push_back(static_cast<int>(i));
  std::set<std::pair<int, int>> edges;
  for (auto& [q, list] : on_qubit) {
    for (size_t j = 1; j < list.size(); ++j)
      for (size_t i = 0; i < j; ++i) {
        int u = list[i], v = list[j];
        if (edges.count({u, v})) continue;
        if (!items_commute(dag.items[static_cast<size_t>(u)], dag.items[static_cast<size_t>(v)], c,
                           blocks))
          edges.insert({u, v});
      }
  }
  for (auto [u, v] : edges) {
    dag.preds[static_cast<size_t>(v)].push_back(u);
    dag.succs[static_cast<size_t>(u)].push_back(v);
  }
  return dag;
}

BlockDag& align_tp(BlockDag& dag) {
  dag.align = true;
  return dag;
}

BlockDag& fuse_tp(BlockDag& dag, const Circuit& c, const Partition& p,
                  const std::vector<CommBlock>& blocks, const std::vector<Scheme>& schemes) {
  dag.chains.clear();
  // item index of each block
  std::vector<int> item_of(blocks.size(), -1);
  for (size_t i = 0; i < dag.items.size(); ++i)
    if (dag.items[i].is_block) item_of[dag.items[i].block] = static_cast<int>(i);

  std::map<int, std::vector<size_t>> by_pivot;  // TP blocks per pivot, span order
  for (size_t bi = 0; bi < blocks.size(); ++bi)
    if (schemes[bi] == Scheme::TP) by_pivot[blocks[bi].pivot].push_back(bi);

  auto pivot_clear_between = [&](int pivot, int lo_pos, int hi_pos, size_t b_from, size_t b_to) {
    // No block or standalone two-qubit gate touching the pivot may sit
    // between the spans. Standalone single-qubit pivot gates ride along on
    // the travelling pivot instead.
    for (size_t bi = 0; bi < blocks.size(); ++bi) {
      if (bi == b_from || bi == b_to) continue;
      if (blocks[bi].span_first() > lo_pos && blocks[bi].span_first() < hi_pos) {
        for (int gi : blocks[bi].ordered_gates())
          if (c.gate(gi).touches(pivot)) return false;
      }
    }
    for (const auto& it : dag.items) {
      if (it.is_block) continue;
      if (it.gate > lo_pos && it.gate < hi_pos && c.gate(it.gate).touches(pivot) &&
          c.gate(it.gate).qubits.size() != 1)
        return false;
    }
    return true;
  };

  auto ancestors_of = [&](int item) {
    std::set<int> seen;
    std::vector<int> stack{item};
    while (!stack.empty()) {
      int cur = stack.back();
      stack.pop_back();
      for (int pr : dag.preds[static_cast<size_t>(cur)])
        if (seen.insert(pr).second) stack.push_back(pr);
    }
    return seen;
  };

  for (auto& [pivot, list] : by_pivot) {
    if (list.size() < 2) continue;
    std::sort(list.begin(), list.end(), [&](size_t a, size_t b) {
      return blocks[a].span_first() < blocks[b].span_first();
    });
    FusionChain chain;
    chain.block_indices.push_back(list[0]);
    std::set<int> head_anc = ancestors_of(item_of[list[0]]);
    auto flush = [&]() {
      if (chain.block_indices.size() >= 2) dag.chains.push_back(chain);
      chain.block_indices.clear();
    };
    for (size_t k = 1; k < list.size(); ++k) {
      size_t prev = chain.block_indices.empty() ? list[k - 1] : chain.block_indices.back();
      bool ok = !chain.block_indices.empty() &&
                pivot_clear_between(pivot, blocks[prev].span_last(), blocks[list[k]].span_first(),
                                    prev, list[k]);
      if (ok) {
        // A pivot-touching dependency of a non-head member must either sit in
        // the chain, ride along (standalone 1q pivot gate inside the chain
        // window), or already be ordered before the chain's first teleport;
        // anything else would wait on the pivot while the pivot waits on it.
        for (int pi : dag.preds[static_cast<size_t>(item_of[list[k]])]) {
          const auto& pit = dag.items[static_cast<size_t>(pi)];
          bool touches = false;
          for (int q : item_qubits(pit, c, blocks)) touches |= (q == pivot);
          if (!touches) continue;
          bool in_chain = false;
          for (size_t m : chain.block_indices)
            in_chain |= (pit.is_block && pit.block == m);
          bool rider = !pit.is_block && c.gate(pit.gate).qubits.size() == 1 &&
                       pit.gate > blocks[chain.block_indices.front()].span_first();
          if (!in_chain && !rider && !head_anc.count(pi) && pi != item_of[list[0]]) {
            ok = false;
            break;
          }
        }
      }
      if (ok) {
        chain.block_indices.push_back(list[k]);
      } else {
        flush();
        chain.block_indices.push_back(list[k]);
        head_anc = ancestors_of(item_of[list[k]]);
      }
    }
    flush();
  }
  (void)p;
  return dag;
}

namespace {

struct EprReq {
  int na = 0, nb = 0;
  bool hosts_dest = false;    // destination slot will hold a travelling pivot
  bool home_is_pivot = false; // the nb half lives on the pivot's own freed slot
  int consumer_stage = -1;    // stage index consuming this pair
  bool granted = false;
  double ready = kInf;
  int sa = -1, sb = -1;  // granted slots
  size_t claim_a = 0, claim_b = 0;
};

struct Stage {
  enum Kind { Gate, Pre, Ent, CatExec, Dis, Post, Out, TpExec, Hop, Back, Move } kind = Gate;
  double dur = 0;
  int epr = -1;                 // index into unit.eprs
  int block = -1;               // owning block (exec stages and cat stages)
  int dest_node = -1;           // teleport destination
  std::vector<int> qubits;      // data qubits to claim for the stage window
  std::vector<int> ext_preds;   // dag item ids gating this stage
  std::vector<int> rider_items; // standalone pivot gates folded into this stage
  double end = kInf;
  bool started = false;
};

struct Unit {
  std::vector<int> items;  // dag item ids covered
  std::vector<Stage> stages;
  std::vector<EprReq> eprs;
  bool is_tp = false;
  int pivot = -1;
  int first_pos = 0;
  double priority = 0;
  size_t next = 0;
  bool posted = false;
  // travelling pivot bookkeeping
  int host_node = -1, host_slot = -1;
  double pivot_slot_free_at = kInf;  // home slot empty after the outbound Bell
  double done = kInf;
};

struct Sim {
  const Circuit& c;
  const Partition& p;
  const std::vector<CommBlock>& blocks;
  const LatencyModel& lm;
  Timeline tl;
  std::vector<Unit> units;
  std::vector<double> qubit_free;
  std::vector<std::vector<double>> slot_free;  // [node][slot]
  std::vector<int> hosted;                     // travelling pivots per node
  std::vector<double> item_done;               // per dag item: gates complete
  std::vector<double> item_done_pivot;         // per dag item: pivot back home
  std::vector<int> unit_of_item;

  Sim(const Circuit& c_, const Partition& p_, const std::vector<CommBlock>& blocks_,
      const LatencyModel& lm_)
      : c(c_), p(p_), blocks(blocks_), lm(lm_) {}

  size_t open_claim(int node, int slot, double start) {
    tl.claims.push_back({node, slot, start, kInf});
    return tl.claims.size() - 1;
  }
  void close_claim(size_t idx, double end) { tl.claims[idx].end = end; }

  void event(double start, double dur, std::string kind, int block, std::vector<int> qubits,
             std::vector<int> nodes) {
    tl.events.push_back({start, dur, std::move(kind), block, std::move(qubits), std::move(nodes)});
  }
};

}  // namespace

Timeline schedule(const Circuit& c, const Partition& p, const std::vector<CommBlock>& blocks,
                  const std::vector<Scheme>& schemes, const BlockDag& dag, const LatencyModel& lm) {
  Sim sim(c, p, blocks, lm);
  const double tele = teleport_time(lm);
  const double ent_t = cat_entangler_time(lm);
  const double dis_t = cat_disentangler_time(lm);

  // ---- build units -------------------------------------------------------
  std::vector<int> item_of_block(blocks.size(), -1);
  for (size_t i = 0; i < dag.items.size(); ++i)
    if (dag.items[i].is_block) item_of_block[dag.items[i].block] = static_cast<int>(i);

  std::vector<int> chain_of(blocks.size(), -1);
  for (size_t ci = 0; ci < dag.chains.size(); ++ci)
    for (size_t b : dag.chains[ci].block_indices) chain_of[b] = static_cast<int>(ci);

  // standalone 1q pivot gates inside a chain window ride on the travelling
  // pivot: folded into the following block's exec
  std::map<size_t, std::vector<int>> chain_riders;  // block idx -> rider item ids
  std::vector<char> is_rider(dag.items.size(), 0);
  for (const auto& chain : dag.chains) {
    int pivot = blocks[chain.block_indices.front()].pivot;
    for (size_t k = 1; k < chain.block_indices.size(); ++k) {
      int lo = blocks[chain.block_indices[k - 1]].span_last();
      int hi = blocks[chain.block_indices[k]].span_first();
      for (size_t i = 0; i < dag.items.size(); ++i) {
        const auto& it = dag.items[i];
        if (it.is_block || it.gate <= lo || it.gate >= hi) continue;
        if (c.gate(it.gate).qubits.size() == 1 && c.gate(it.gate).touches(pivot)) {
          chain_riders[chain.block_indices[k]].push_back(static_cast<int>(i));
          is_rider[i] = 1;
        }
      }
    }
  }

  sim.unit_of_item.assign(dag.items.size(), -1);

  auto block_qubits_no_pivot = [&](const CommBlock& b) {
    std::set<int> qs;
    for (int gi : b.ordered_gates())
      for (int q : c.gate(gi).qubits)
        if (q != b.pivot) qs.insert(q);
    return std::vector<int>(qs.begin(), qs.end());
  };

  auto make_cat_unit = [&](size_t bi) {
    const CommBlock& b = blocks[bi];
    Unit u;
    u.items = {item_of_block[bi]};
    u.pivot = b.pivot;
    u.first_pos = b.span_first();
    int home = p.node(b.pivot);
    // split the span into pre / window / post
    std::vector<int> pre, win, post;
    for (int gi : b.ordered_gates()) {
      if (gi < b.members.front()) pre.push_back(gi);
      else if (gi > b.members.back()) post.push_back(gi);
      else win.push_back(gi);
    }
    if (!pre.empty()) {
      Stage s;
      s.kind = Stage::Pre;
      s.dur = asap_duration(c, pre, lm);
      s.block = static_cast<int>(bi);
      std::set<int> qs;
      for (int gi : pre)
        for (int q : c.gate(gi).qubits) qs.insert(q);
      s.qubits.assign(qs.begin(), qs.end());
      u.stages.push_back(std::move(s));
    }
    EprReq e;
    e.na = home;
    e.nb = b.node;
    u.eprs.push_back(e);
    Stage ent;
    ent.kind = Stage::Ent;
    ent.dur = ent_t;
    ent.epr = 0;
    ent.block = static_cast<int>(bi);
    u.stages.push_back(ent);
    Stage ex;
    ex.kind = Stage::CatExec;
    ex.dur = asap_duration(c, win, lm);
    ex.block = static_cast<int>(bi);
    ex.qubits = block_qubits_no_pivot(b);
    u.stages.push_back(ex);
    Stage dis;
    dis.kind = Stage::Dis;
    dis.dur = dis_t;
    dis.block = static_cast<int>(bi);
    u.stages.push_back(dis);
    if (!post.empty()) {
      Stage s;
      s.kind = Stage::Post;
      s.dur = asap_duration(c, post, lm);
      s.block = static_cast<int>(bi);
      std::set<int> qs;
      for (int gi : post)
        for (int q : c.gate(gi).qubits) qs.insert(q);
      s.qubits.assign(qs.begin(), qs.end());
      u.stages.push_back(std::move(s));
    }
    return u;
  };

  auto make_tp_unit = [&](const std::vector<size_t>& chain) {
    Unit u;
    u.is_tp = true;
    u.pivot = blocks[chain[0]].pivot;
    u.first_pos = blocks[chain[0]].span_first();
    int home = p.node(u.pivot);
    int cur_node = home;
    for (size_t k = 0; k < chain.size(); ++k) {
      size_t bi = chain[k];
      const CommBlock& b = blocks[bi];
      u.items.push_back(item_of_block[bi]);
      if (k == 0) {
        EprReq e;
        e.na = home;
        e.nb = b.node;
        e.hosts_dest = true;
        u.eprs.push_back(e);
        Stage out;
        out.kind = Stage::Out;
        out.dur = tele;
        out.epr = 0;
        out.block = static_cast<int>(bi);
        out.dest_node = b.node;
        u.stages.push_back(out);
        cur_node = b.node;
      } else if (b.node != cur_node) {
        EprReq e;
        e.na = cur_node;
        e.nb = b.node;
        e.hosts_dest = true;
        u.eprs.push_back(e);
        Stage hop;
        hop.kind = Stage::Hop;
        hop.dur = tele;
        hop.epr = static_cast<int>(u.eprs.size()) - 1;
        hop.block = static_cast<int>(bi);
        hop.dest_node = b.node;
        u.stages.push_back(hop);
        cur_node = b.node;
      }
      Stage ex;
      ex.kind = Stage::TpExec;
      ex.dur = asap_duration(c, b.ordered_gates(), lm);
      ex.block = static_cast<int>(bi);
      ex.qubits = block_qubits_no_pivot(b);
      auto riders = chain_riders.find(bi);
      if (riders != chain_riders.end()) {
        for (int item : riders->second) {
          ex.dur += gate_duration(c.gate(dag.items[static_cast<size_t>(item)].gate), lm);
          ex.rider_items.push_back(item);
          u.items.push_back(item);
        }
      }
      u.stages.push_back(ex);
    }
    EprReq back;
    back.na = cur_node;
    back.nb = home;
    back.home_is_pivot = true;  // lands straight in the freed home slot
    u.eprs.push_back(back);
    Stage bk;
    bk.kind = Stage::Back;
    bk.dur = tele;
    bk.epr = static_cast<int>(u.eprs.size()) - 1;
    bk.block = static_cast<int>(chain.back());
    bk.dest_node = home;
    u.stages.push_back(bk);
    // unfused cost would be 2 EPR per block; actual is one per teleport stage
    int teleports = 0;
    for (const Stage& s : u.stages)
      if (s.kind == Stage::Out || s.kind == Stage::Hop || s.kind == Stage::Back) ++teleports;
    sim.tl.elided_teleports += 2 * static_cast<int>(chain.size()) - teleports;
    return u;
  };

  for (size_t i = 0; i < dag.items.size(); ++i) {
    const auto& it = dag.items[i];
    if (!it.is_block) {
      if (is_rider[i]) continue;  // folded into a chain unit
      Unit u;
      u.items = {static_cast<int>(i)};
      u.first_pos = it.gate;
      Stage s;
      s.kind = Stage::Gate;
      s.dur = gate_duration(c.gate(it.gate), lm);
      s.qubits = c.gate(it.gate).qubits;
      u.stages.push_back(std::move(s));
      sim.units.push_back(std::move(u));
      continue;
    }
    size_t bi = it.block;
    int ci = chain_of[bi];
    if (schemes[bi] == Scheme::Cat) {
      sim.units.push_back(make_cat_unit(bi));
    } else if (ci < 0) {
      sim.units.push_back(make_tp_unit({bi}));
    } else if (dag.chains[static_cast<size_t>(ci)].block_indices.front() == bi) {
      sim.units.push_back(make_tp_unit(dag.chains[static_cast<size_t>(ci)].block_indices));
    } else {
      continue;  // non-head chain member: folded into the head unit
    }
  }
  for (size_t ui = 0; ui < sim.units.size(); ++ui)
    for (int item : sim.units[ui].items) sim.unit_of_item[static_cast<size_t>(item)] = static_cast<int>(ui);
  for (Unit& u : sim.units)
    for (size_t si = 0; si < u.stages.size(); ++si)
      if (u.stages[si].epr >= 0)
        u.eprs[static_cast<size_t>(u.stages[si].epr)].consumer_stage = static_cast<int>(si);

  // external dependencies onto stages (same-unit predecessors are already
  // sequenced by the stage order)
  for (size_t ui = 0; ui < sim.units.size(); ++ui) {
    Unit& u = sim.units[ui];
    for (size_t si = 0; si < u.stages.size(); ++si) {
      Stage& s = u.stages[si];
      int item = -1;
      if (s.kind == Stage::Gate || s.kind == Stage::Out || s.kind == Stage::Pre ||
          s.kind == Stage::Ent) {
        item = u.items[0];
      } else if (s.kind == Stage::TpExec) {
        for (int it : u.items)
          if (dag.items[static_cast<size_t>(it)].is_block &&
              static_cast<int>(dag.items[static_cast<size_t>(it)].block) == s.block)
            item = it;
        for (int rider : s.rider_items)
          for (int pred : dag.preds[static_cast<size_t>(rider)])
            if (sim.unit_of_item[static_cast<size_t>(pred)] != static_cast<int>(ui))
              s.ext_preds.push_back(pred);
      } else {
        continue;
      }
      if (item < 0) continue;
      for (int pred : dag.preds[static_cast<size_t>(item)])
        if (sim.unit_of_item[static_cast<size_t>(pred)] != static_cast<int>(ui))
          s.ext_preds.push_back(pred);
    }
  }

  // alignment off: TP units run completion-first, one at a time
  std::vector<int> tp_units;
  for (size_t ui = 0; ui < sim.units.size(); ++ui)
    if (sim.units[ui].is_tp) tp_units.push_back(static_cast<int>(ui));
  std::sort(tp_units.begin(), tp_units.end(),
            [&](int a, int b) { return sim.units[static_cast<size_t>(a)].first_pos <
                                       sim.units[static_cast<size_t>(b)].first_pos; });

  // critical-path priorities over items
  std::vector<double> item_cost(dag.items.size(), 0);
  for (size_t ui = 0; ui < sim.units.size(); ++ui) {
    double total = 0;
    for (const Stage& s : sim.units[ui].stages) total += s.dur;
    for (int item : sim.units[ui].items)
      item_cost[static_cast<size_t>(item)] = total / static_cast<double>(sim.units[ui].items.size());
  }
  std::vector<double> crit(dag.items.size(), 0);
  for (size_t i = dag.items.size(); i-- > 0;) {
    double best = 0;
    for (int s : dag.succs[i]) best = std::max(best, crit[static_cast<size_t>(s)]);
    crit[i] = item_cost[i] + best;
  }
  for (Unit& u : sim.units) {
    double pr = 0;
    for (int item : u.items) pr = std::max(pr, crit[static_cast<size_t>(item)]);
    u.priority = pr;
  }
  std::vector<int> order(sim.units.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const Unit& ua = sim.units[static_cast<size_t>(a)];
    const Unit& ub = sim.units[static_cast<size_t>(b)];
    if (ua.priority != ub.priority) return ua.priority > ub.priority;
    return ua.first_pos < ub.first_pos;
  });

  // ---- simulate ----------------------------------------------------------
  sim.qubit_free.assign(static_cast<size_t>(c.num_qubits()), 0.0);
  sim.slot_free.assign(static_cast<size_t>(p.num_nodes), {0.0, 0.0});
  sim.hosted.assign(static_cast<size_t>(p.num_nodes), 0);
  sim.item_done.assign(dag.items.size(), kInf);
  sim.item_done_pivot.assign(dag.items.size(), kInf);

  auto pred_release = [&](int pred_item, const Unit& succ_unit) -> double {
    // pivot-touching successors of a TP chain wait for the pivot's return
    int pu = sim.unit_of_item[static_cast<size_t>(pred_item)];
    const Unit& pred_unit = sim.units[static_cast<size_t>(pu)];
    if (pred_unit.is_tp) {
      bool touches = false;
      if (succ_unit.pivot == pred_unit.pivot && &succ_unit != &pred_unit) touches = true;
      for (int item : succ_unit.items)
        for (int q : item_qubits(dag.items[static_cast<size_t>(item)], c, blocks))
          if (q == pred_unit.pivot) touches = true;
      if (touches) return sim.item_done_pivot[static_cast<size_t>(pred_item)];
    }
    return sim.item_done[static_cast<size_t>(pred_item)];
  };

  double t = 0;
  size_t done_units = 0;
  std::vector<char> unit_done(sim.units.size(), 0);
  int guard = 0;

  while (done_units < sim.units.size()) {
    if (++guard > 10000000) throw std::logic_error("scheduler did not converge");
    bool progress = true;
    while (progress) {
      progress = false;
      // post EPR requests once a unit's first stage is dependency-ready
      for (int ui : order) {
        Unit& u = sim.units[static_cast<size_t>(ui)];
        if (u.posted || u.eprs.empty()) continue;
        bool ready = true;
        for (int pred : u.stages[0].ext_preds)
          if (pred_release(pred, u) > t) ready = false;
        if (ready) {
          u.posted = true;
          progress = true;
        }
      }
      // grant EPRs by priority
      for (int ui : order) {
        Unit& u = sim.units[static_cast<size_t>(ui)];
        if (!u.posted) continue;
        for (size_t ei = 0; ei < u.eprs.size(); ++ei) {
          EprReq& e = u.eprs[ei];
          if (e.granted) continue;
          if (e.hosts_dest && sim.hosted[static_cast<size_t>(e.nb)] >= 1) continue;
          if (!dag.prefetch_epr) {
            // independent execution: prepare only when the consuming
            // teleport is the unit's next step and otherwise ready
            if (static_cast<int>(u.next) != e.consumer_stage) continue;
            bool stage_ready = u.next == 0 || u.stages[u.next - 1].end <= t;
            for (int pred : u.stages[u.next].ext_preds)
              if (pred_release(pred, u) > t) stage_ready = false;
            if (!stage_ready) continue;
          } else {
            // Holding slots while an earlier stage still waits on another
            // unit invites a hold-and-wait cycle; prefetch only once the
            // path to the consumer has no unmet external dependency.
            bool path_clear = true;
            for (size_t si = 0; si < static_cast<size_t>(e.consumer_stage) && path_clear; ++si) {
              if (u.stages[si].started) continue;
              for (int pred : u.stages[si].ext_preds)
                if (pred_release(pred, u) > t) {
                  path_clear = false;
                  break;
                }
            }
            if (!path_clear) continue;
          }
          if (e.home_is_pivot && u.pivot_slot_free_at > t) continue;
          int sa = -1, sb = -1;
          for (int s = 0; s < 2; ++s)
            if (sim.slot_free[static_cast<size_t>(e.na)][static_cast<size_t>(s)] <= t && sa < 0) sa = s;
          if (!e.home_is_pivot)
            for (int s = 0; s < 2; ++s)
              if (sim.slot_free[static_cast<size_t>(e.nb)][static_cast<size_t>(s)] <= t && sb < 0)
                sb = s;
          if (sa < 0 || (sb < 0 && !e.home_is_pivot)) continue;
          e.granted = true;
          e.sa = sa;
          e.sb = sb;
          e.ready = t + lm.t_ep;
          sim.slot_free[static_cast<size_t>(e.na)][static_cast<size_t>(sa)] = kInf;
          e.claim_a = sim.open_claim(e.na, sa, t);
          if (!e.home_is_pivot) {
            sim.slot_free[static_cast<size_t>(e.nb)][static_cast<size_t>(sb)] = kInf;
            e.claim_b = sim.open_claim(e.nb, sb, t);
            if (e.hosts_dest) sim.hosted[static_cast<size_t>(e.nb)]++;
          }
          sim.event(t, lm.t_ep, "epr", -1, {}, {e.na, e.nb});
          ++sim.tl.epr_total;
          if (u.is_tp) ++sim.tl.epr_tp;
          progress = true;
        }
      }
      // start stages
      for (size_t oi = 0; oi < order.size(); ++oi) {
        int ui = order[oi];
        Unit& u = sim.units[static_cast<size_t>(ui)];
        if (u.next >= u.stages.size()) continue;
        Stage& s = u.stages[u.next];
        // previous stage done?
        if (u.next > 0 && u.stages[u.next - 1].end > t) continue;
        bool ok = true;
        for (int pred : s.ext_preds)
          if (pred_release(pred, u) > t) ok = false;
        if (!ok) continue;
        if (s.epr >= 0 && (!u.eprs[static_cast<size_t>(s.epr)].granted ||
                           u.eprs[static_cast<size_t>(s.epr)].ready > t))
          continue;
        // alignment off: serialize TP units completion-first
        if (!dag.align && u.is_tp && s.kind == Stage::Out) {
          bool blocked = false;
          for (int other : tp_units) {
            if (other == ui) break;
            const Unit& ou = sim.units[static_cast<size_t>(other)];
            // previous TP unit must have finished its return teleport
            double back_end = kInf;
            for (const Stage& os : ou.stages)
              if (os.kind == Stage::Back) back_end = os.end;
            if (back_end > t) blocked = true;
          }
          if (blocked) continue;
        }
        // qubit availability (exec stages exclude the pivot by construction;
        // Ent/Out check it explicitly before claiming it for the protocol)
        for (int q : s.qubits)
          if (sim.qubit_free[static_cast<size_t>(q)] > t) ok = false;
        if ((s.kind == Stage::Ent || s.kind == Stage::Out) &&
            sim.qubit_free[static_cast<size_t>(u.pivot)] > t)
          ok = false;
        if (!ok) continue;

        // ---- start the stage ----
        double end = t + s.dur;
        s.end = end;
        s.started = true;
        u.next++;
        progress = true;
        int home = u.pivot >= 0 ? p.node(u.pivot) : -1;
        switch (s.kind) {
          case Stage::Gate:
          case Stage::Pre:
          case Stage::Post: {
            for (int q : s.qubits) sim.qubit_free[static_cast<size_t>(q)] = end;
            sim.event(t, s.dur, s.kind == Stage::Gate ? "gate" : "local", s.block, s.qubits, {});
            if (s.kind == Stage::Gate) {
              sim.item_done[static_cast<size_t>(u.items[0])] = end;
              sim.item_done_pivot[static_cast<size_t>(u.items[0])] = end;
            }
            break;
          }
          case Stage::Ent: {
            EprReq& e = u.eprs[static_cast<size_t>(s.epr)];
            sim.qubit_free[static_cast<size_t>(u.pivot)] = kInf;  // released by Dis
            double sa_free = t + lm.t_2q + lm.t_ms;               // measured away
            sim.slot_free[static_cast<size_t>(e.na)][static_cast<size_t>(e.sa)] = sa_free;
            sim.close_claim(e.claim_a, sa_free);
            sim.event(t, s.dur, "entangle", s.block, {u.pivot}, {e.na, e.nb});
            break;
          }
          case Stage::CatExec: {
            for (int q : s.qubits) sim.qubit_free[static_cast<size_t>(q)] = end;
            sim.event(t, s.dur, "exec", s.block, s.qubits, {blocks[static_cast<size_t>(s.block)].node});
            break;
          }
          case Stage::Dis: {
            EprReq& e = u.eprs[0];
            double sb_free = t + lm.t_ms;
            sim.slot_free[static_cast<size_t>(e.nb)][static_cast<size_t>(e.sb)] = sb_free;
            sim.close_claim(e.claim_b, sb_free);
            sim.qubit_free[static_cast<size_t>(u.pivot)] = end;
            sim.event(t, s.dur, "disentangle", s.block, {u.pivot}, {e.na, e.nb});
            // cat unit complete at Dis (or Post); conservative: unit end set below
            break;
          }
          case Stage::Out:
          case Stage::Hop:
          case Stage::Back: {
            EprReq& e = u.eprs[static_cast<size_t>(s.epr)];
            double src_free = t + lm.t_2q + lm.t_ms;
            if (s.kind == Stage::Out) {
              sim.qubit_free[static_cast<size_t>(u.pivot)] = kInf;  // held until the return
              u.pivot_slot_free_at = src_free;  // empty once measured away
            } else {
              // departure frees the old host
              sim.slot_free[static_cast<size_t>(u.host_node)][static_cast<size_t>(u.host_slot)] =
                  src_free;
              for (size_t cl = 0; cl < sim.tl.claims.size(); ++cl)
                if (sim.tl.claims[cl].node == u.host_node && sim.tl.claims[cl].slot == u.host_slot &&
                    sim.tl.claims[cl].end == kInf)
                  sim.close_claim(cl, src_free);
              sim.hosted[static_cast<size_t>(u.host_node)]--;
            }
            sim.slot_free[static_cast<size_t>(e.na)][static_cast<size_t>(e.sa)] = src_free;
            sim.close_claim(e.claim_a, src_free);
            if (s.kind == Stage::Back) {
              // the pivot lands straight in its home slot
              sim.qubit_free[static_cast<size_t>(u.pivot)] = end;
              for (int item : u.items) sim.item_done_pivot[static_cast<size_t>(item)] = end;
              u.host_node = -1;
              u.host_slot = -1;
            } else {
              u.host_node = e.nb;
              u.host_slot = e.sb;
            }
            sim.event(t, s.dur, "teleport", s.block, {u.pivot}, {e.na, e.nb});
            (void)home;
            break;
          }
          case Stage::TpExec: {
            for (int q : s.qubits) sim.qubit_free[static_cast<size_t>(q)] = end;
            int item = -1;
            for (int it : u.items)
              if (dag.items[static_cast<size_t>(it)].is_block &&
                  static_cast<int>(dag.items[static_cast<size_t>(it)].block) == s.block)
                item = it;
            if (item >= 0) sim.item_done[static_cast<size_t>(item)] = end;
            for (int rider : s.rider_items) sim.item_done[static_cast<size_t>(rider)] = end;
            sim.event(t, s.dur, "exec", s.block, s.qubits, {blocks[static_cast<size_t>(s.block)].node});
            break;
          }
          case Stage::Move:
            break;  // unused: returns land in the home slot directly
        }
        // unit completion bookkeeping; cat blocks release conservatively at
        // the unit end (Dis or Post)
        if (u.next == u.stages.size()) {
          u.done = end;
          unit_done[static_cast<size_t>(ui)] = 1;
          ++done_units;
          if (!u.is_tp && dag.items[static_cast<size_t>(u.items[0])].is_block) {
            sim.item_done[static_cast<size_t>(u.items[0])] = end;
            sim.item_done_pivot[static_cast<size_t>(u.items[0])] = end;
          }
        }
      }
    }
    if (done_units >= sim.units.size()) break;
    // advance time
    double next_t = kInf;
    auto consider = [&](double v) {
      if (v > t && v < next_t) next_t = v;
    };
    for (const Unit& u : sim.units) {
      for (const Stage& s : u.stages)
        if (s.started) consider(s.end);
      for (const EprReq& e : u.eprs)
        if (e.granted) consider(e.ready);
    }
    for (double v : sim.qubit_free) consider(v);
    for (auto& node : sim.slot_free)
      for (double v : node) consider(v);
    if (next_t == kInf) {
      std::string msg = "scheduler stalled (resource deadlock) at t=" + std::to_string(t);
      for (size_t ui = 0; ui < sim.units.size(); ++ui) {
        const Unit& u = sim.units[static_cast<size_t>(ui)];
        if (u.next >= u.stages.size()) continue;
        msg += "\n unit " + std::to_string(ui) + " (pos " + std::to_string(u.first_pos) +
               ", tp=" + std::to_string(u.is_tp) + ") stuck at stage " + std::to_string(u.next) +
               " kind=" + std::to_string(static_cast<int>(u.stages[u.next].kind));
        if (u.stages[u.next].epr >= 0) {
          const EprReq& e = u.eprs[static_cast<size_t>(u.stages[u.next].epr)];
          msg += " epr(" + std::to_string(e.na) + "," + std::to_string(e.nb) +
                 ") granted=" + std::to_string(e.granted);
        }
      }
      throw std::logic_error(msg);
    }
    t = next_t;
  }

  for (const TimelineEvent& e : sim.tl.events)
    sim.tl.makespan = std::max(sim.tl.makespan, e.start + e.duration);
  return sim.tl;
}

int Timeline::peak_comm_claims() const {
  std::map<int, std::vector<std::pair<double, int>>> deltas;  // node -> (time, +-1)
  for (const CommClaim& cl : claims) {
    deltas[cl.node].push_back({cl.start, +1});
    deltas[cl.node].push_back({cl.end, -1});
  }
  int peak = 0;
  for (auto& [node, v] : deltas) {
    std::sort(v.begin(), v.end(), [](auto& a, auto& b) {
      if (a.first != b.first) return a.first < b.first;
      return a.second < b.second;  // releases before acquisitions at the same instant
    });
    int cur = 0;
    for (auto& [time, d] : v) {
      cur += d;
      peak = std::max(peak, cur);
    }
  }
  return peak;
}

}  // namespace dqcc
