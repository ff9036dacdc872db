#include "dqcc/aggregate.hpp"

#include <algorithm>
#include <cassert>
#include <iostream>
#include <map>

namespace dqcc {

int CommBlock::span_first() const {
  int lo = members.empty() ? -1 : members.front();
  for (int g : interior) lo = lo < 0 ? g : std::min(lo, g);
  return lo;
}

int CommBlock::span_last() const {
  int hi = members.empty() ? -1 : members.back();
  for (int g : interior) hi = std::max(hi, g);
  return hi;
}

std::vector<int> CommBlock::ordered_gates() const {
  std::vector<int> all = members;
  all.insert(all.end(), interior.begin(), interior.end());
  std::sort(all.begin(), all.end());
  return all;
}

std::vector<RankedPair> rank_pairs(const Circuit& c, const Partition& p) {
  std::map<QubitNodePair, int> counts;
  for (const Gate& g : c.gates()) {
    if (g.kind != GateKind::CX || !p.is_remote(g)) continue;
    counts[{g.qubits[0], p.node(g.qubits[1])}]++;
    counts[{g.qubits[1], p.node(g.qubits[0])}]++;
  }
  std::vector<RankedPair> out;
  out.reserve(counts.size());
  for (const auto& [pair, n] : counts) out.push_back({pair, n});
  std::stable_sort(out.begin(), out.end(), [](const RankedPair& a, const RankedPair& b) {
    if (a.remote_cx != b.remote_cx) return a.remote_cx > b.remote_cx;
    return a.pair < b.pair;
  });
  return out;
}

namespace {

bool is_hard_barrier(GateKind k) { return k == GateKind::Measure || k == GateKind::Barrier; }

/// Working engine for one aggregation pass: a mutable gate order with
/// block claims. Blocks are kept contiguous in the order after each merge.
class AggregateEngine {
 public:
  struct WB {
    int pivot = -1, node = -1;
    std::vector<int> members;   // pool ids, circuit order
    std::vector<int> interior;  // pool ids
    bool alive = true;
    std::vector<int> all() const {
      std::vector<int> v = members;
      v.insert(v.end(), interior.begin(), interior.end());
      return v;
    }
  };

  AggregateEngine(const Circuit& c, const Partition& p) : p_(p) {
    pool_ = c.gates();
    order_.resize(pool_.size());
    for (size_t i = 0; i < pool_.size(); ++i) order_[i] = static_cast<int>(i);
    claim_.assign(pool_.size(), -1);
    num_qubits_ = c.num_qubits();
    for (int q = 0; q < num_qubits_; ++q) names_.push_back(c.qubit_name(q));
    rebuild_pos();
  }

  bool is_remote(int gid) const { return p_.is_remote(pool_[static_cast<size_t>(gid)]); }
  bool is_remote_cx(int gid) const {
    return pool_[static_cast<size_t>(gid)].kind == GateKind::CX && is_remote(gid);
  }

  /// Unclaimed remote CX counts per pair, ranked.
  std::vector<RankedPair> rank_unclaimed() const {
    std::map<QubitNodePair, int> counts;
    for (size_t gid = 0; gid < pool_.size(); ++gid) {
      if (claim_[gid] >= 0 || !is_remote_cx(static_cast<int>(gid))) continue;
      const Gate& g = pool_[gid];
      counts[{g.qubits[0], p_.node(g.qubits[1])}]++;
      counts[{g.qubits[1], p_.node(g.qubits[0])}]++;
    }
    std::vector<RankedPair> out;
    for (const auto& [pair, n] : counts) out.push_back({pair, n});
    std::stable_sort(out.begin(), out.end(), [](const RankedPair& a, const RankedPair& b) {
      if (a.remote_cx != b.remote_cx) return a.remote_cx > b.remote_cx;
      return a.pair < b.pair;
    });
    return out;
  }

  bool pair_member(int gid, QubitNodePair pair) const {
    const Gate& g = pool_[static_cast<size_t>(gid)];
    if (g.kind != GateKind::CX || !is_remote(gid)) return false;
    if (g.qubits[0] == pair.first) return p_.node(g.qubits[1]) == pair.second;
    if (g.qubits[1] == pair.first) return p_.node(g.qubits[0]) == pair.second;
    return false;
  }

  /// Maximal runs of the pair's unclaimed remote CX gates uninterrupted by
  /// any other remote gate; trapped local gates become interior.
  std::vector<WB> preprocess_pair(QubitNodePair pair) const {
    std::vector<WB> runs;
    WB cur;
    cur.pivot = pair.first;
    cur.node = pair.second;
    int run_last_pos = -1;
    for (size_t pos = 0; pos < order_.size(); ++pos) {
      int gid = order_[pos];
      if (claim_[static_cast<size_t>(gid)] < 0 && pair_member(gid, pair)) {
        if (!cur.members.empty()) {
          // trap locals between the previous member and this one
          for (int ppos = run_last_pos + 1; ppos < static_cast<int>(pos); ++ppos) {
            int lid = order_[static_cast<size_t>(ppos)];
            if (!is_remote(lid)) cur.interior.push_back(lid);
          }
        }
        cur.members.push_back(gid);
        run_last_pos = static_cast<int>(pos);
      } else if (is_remote(gid) || is_hard_barrier(pool_[static_cast<size_t>(gid)].kind)) {
        if (!cur.members.empty()) {
          runs.push_back(cur);
          cur.members.clear();
          cur.interior.clear();
        }
      }
    }
    if (!cur.members.empty()) runs.push_back(cur);
    return runs;
  }

  int register_block(WB wb) {
    int idx = static_cast<int>(blocks_.size());
    for (int g : wb.members) claim_[static_cast<size_t>(g)] = idx;
    for (int g : wb.interior) claim_[static_cast<size_t>(g)] = idx;
    blocks_.push_back(std::move(wb));
    return idx;
  }

  int span_first(int b) const {
    int lo = -1;
    for (int g : blocks_[static_cast<size_t>(b)].all()) {
      int p = pos_[static_cast<size_t>(g)];
      lo = lo < 0 ? p : std::min(lo, p);
    }
    return lo;
  }
  int span_last(int b) const {
    int hi = -1;
    for (int g : blocks_[static_cast<size_t>(b)].all()) hi = std::max(hi, pos_[static_cast<size_t>(g)]);
    return hi;
  }

  /// Greedy merge of the given (already registered) block ids, Alg.-1 style.
  void merge_chain(const std::vector<int>& ids) {
    if (ids.empty()) return;
    int cur = ids[0];
    for (size_t i = 1; i < ids.size(); ++i) {
      int next = ids[i];
      if (try_merge(cur, next, /*forward=*/true)) continue;
      if (try_merge(cur, next, /*forward=*/false)) continue;
      cur = next;
    }
  }

  std::pair<Circuit, std::vector<CommBlock>> materialize() const {
    Circuit out(num_qubits_);
    for (int q = 0; q < num_qubits_; ++q) out.set_qubit_name(q, names_[static_cast<size_t>(q)]);
    std::vector<int> newpos(pool_.size());
    for (size_t pos = 0; pos < order_.size(); ++pos) {
      const Gate& g = pool_[static_cast<size_t>(order_[pos])];
      out.add(g.kind, g.qubits, g.params);
      newpos[static_cast<size_t>(order_[pos])] = static_cast<int>(pos);
    }
    std::vector<CommBlock> bs;
    for (const WB& wb : blocks_) {
      if (!wb.alive) continue;
      CommBlock b;
      b.pivot = wb.pivot;
      b.node = wb.node;
      for (int g : wb.members) b.members.push_back(newpos[static_cast<size_t>(g)]);
      for (int g : wb.interior) b.interior.push_back(newpos[static_cast<size_t>(g)]);
      std::sort(b.members.begin(), b.members.end());
      std::sort(b.interior.begin(), b.interior.end());
      bs.push_back(std::move(b));
    }
    std::sort(bs.begin(), bs.end(),
              [](const CommBlock& a, const CommBlock& b) { return a.span_first() < b.span_first(); });
    return {std::move(out), std::move(bs)};
  }

  bool has_unclaimed_remote() const {
    for (size_t gid = 0; gid < pool_.size(); ++gid)
      if (claim_[gid] < 0 && is_remote_cx(static_cast<int>(gid))) return true;
    return false;
  }

 private:
  void rebuild_pos() {
    pos_.assign(pool_.size(), -1);
    for (size_t pos = 0; pos < order_.size(); ++pos)
      pos_[static_cast<size_t>(order_[pos])] = static_cast<int>(pos);
  }

  bool commutes_gate_ids(int gid, const std::vector<int>& against) const {
    const Gate& g = pool_[static_cast<size_t>(gid)];
    for (int o : against)
      if (!commutes(g, pool_[static_cast<size_t>(o)])) return false;
    return true;
  }

  /// Attempt to make blocks a and b adjacent. Forward slides commutable
  /// in-between gates left past a; reverse slides them right past b.
  /// Non-commuting single-qubit and in-node two-qubit gates are trapped as
  /// interior; a non-commutable remote gate or Measure/Barrier aborts.
  bool try_merge(int a, int b, bool forward) {
    int lo = span_last(a) + 1;
    int hi = span_first(b) - 1;
    std::vector<int> anchor = forward ? blocks_[static_cast<size_t>(a)].all()
                                      : blocks_[static_cast<size_t>(b)].all();
    std::vector<int> nc;      // trapped gates, original order
    std::vector<int> floats;  // displaced gates, original order

    auto visit = [&](int pos_begin, int pos_end, int step) -> bool {
      int pos = pos_begin;
      while (step > 0 ? pos <= pos_end : pos >= pos_end) {
        int gid = order_[static_cast<size_t>(pos)];
        int owner = claim_[static_cast<size_t>(gid)];
        if (owner >= 0) {
          // whole block travels or nothing does
          std::vector<int> unit;
          int s = span_first(owner), e = span_last(owner);
          for (int q = s; q <= e; ++q) unit.push_back(order_[static_cast<size_t>(q)]);
          for (int u : unit)
            if (!commutes_gate_ids(u, anchor)) return false;
          if (step > 0) {
            floats.insert(floats.end(), unit.begin(), unit.end());
            pos = e + 1;
          } else {
            floats.insert(floats.begin(), unit.begin(), unit.end());
            pos = s - 1;
          }
          continue;
        }
        const Gate& g = pool_[static_cast<size_t>(gid)];
        if (is_hard_barrier(g.kind)) return false;
        if (commutes_gate_ids(gid, anchor)) {
          if (step > 0) floats.push_back(gid);
          else floats.insert(floats.begin(), gid);
        } else if (g.qubits.size() == 1 || !is_remote(gid)) {
          if (step > 0) nc.push_back(gid);
          else nc.insert(nc.begin(), gid);
          anchor.push_back(gid);
        } else {
          return false;
        }
        pos += step;
      }
      return true;
    };

    bool ok = forward ? visit(lo, hi, +1) : visit(hi, lo, -1);
    if (!ok) return false;

    // rebuild the region: forward puts floats before a, reverse after b
    std::vector<int> region;
    auto push_span = [&](int blk) {
      for (int p = span_first(blk); p <= span_last(blk); ++p)
        region.push_back(order_[static_cast<size_t>(p)]);
    };
    int region_lo = span_first(a), region_hi = span_last(b);
    if (forward) {
      region.insert(region.end(), floats.begin(), floats.end());
      push_span(a);
      region.insert(region.end(), nc.begin(), nc.end());
      push_span(b);
    } else {
      push_span(a);
      region.insert(region.end(), nc.begin(), nc.end());
      push_span(b);
      region.insert(region.end(), floats.begin(), floats.end());
    }
    for (int p = region_lo; p <= region_hi; ++p)
      order_[static_cast<size_t>(p)] = region[static_cast<size_t>(p - region_lo)];
    // fold b (and trapped gates) into a
    WB& wa = blocks_[static_cast<size_t>(a)];
    WB& wb = blocks_[static_cast<size_t>(b)];
    wa.members.insert(wa.members.end(), wb.members.begin(), wb.members.end());
    for (int g : nc) wa.interior.push_back(g);
    wa.interior.insert(wa.interior.end(), wb.interior.begin(), wb.interior.end());
    for (int g : wa.members) claim_[static_cast<size_t>(g)] = a;
    for (int g : wa.interior) claim_[static_cast<size_t>(g)] = a;
    wb.alive = false;
    wb.members.clear();
    wb.interior.clear();
    rebuild_pos();
    return true;
  }

  const Partition& p_;
  int num_qubits_ = 0;
  std::vector<std::string> names_;
  std::vector<Gate> pool_;
  std::vector<int> order_;
  std::vector<int> pos_;
  std::vector<int> claim_;
  std::vector<WB> blocks_;
};

CommBlock to_comm_block(const AggregateEngine::WB& wb) {
  CommBlock b;
  b.pivot = wb.pivot;
  b.node = wb.node;
  b.members = wb.members;
  b.interior = wb.interior;
  return b;
}

}  // namespace

std::vector<CommBlock> preprocess(const Circuit& c, const Partition& p, QubitNodePair pair) {
  AggregateEngine eng(c, p);
  std::vector<CommBlock> out;
  for (const auto& wb : eng.preprocess_pair(pair)) out.push_back(to_comm_block(wb));
  return out;
}

LinearMergeResult linear_merge(const Circuit& c, const Partition& p, std::vector<CommBlock> blocks) {
  AggregateEngine eng(c, p);
  std::vector<int> ids;
  for (const CommBlock& b : blocks) {
    AggregateEngine::WB wb;
    wb.pivot = b.pivot;
    wb.node = b.node;
    wb.members = b.members;
    wb.interior = b.interior;
    ids.push_back(eng.register_block(std::move(wb)));
  }
  eng.merge_chain(ids);
  auto [circuit, merged] = eng.materialize();
  return {std::move(circuit), std::move(merged)};
}

AggregateResult aggregate(const Circuit& c, const Partition& p) {
  constexpr int kMaxSweeps = 10;
  Circuit cur = c;
  std::pair<size_t, size_t> prev{SIZE_MAX, SIZE_MAX};
  AggregateResult result;
  for (int sweep = 1; sweep <= kMaxSweeps; ++sweep) {
    AggregateEngine eng(cur, p);
    while (eng.has_unclaimed_remote()) {
      auto ranked = eng.rank_unclaimed();
      if (ranked.empty()) break;
      auto runs = eng.preprocess_pair(ranked.front().pair);
      std::vector<int> ids;
      for (auto& wb : runs) ids.push_back(eng.register_block(std::move(wb)));
      eng.merge_chain(ids);
    }
    auto [circuit, blocks] = eng.materialize();
    size_t total = 0;
    for (const CommBlock& b : blocks) total += b.members.size();
    std::pair<size_t, size_t> stats{blocks.size(), total};
    result.circuit = std::move(circuit);
    result.blocks = std::move(blocks);
    result.sweeps = sweep;
    if (stats == prev) {
      result.converged = true;
      return result;
    }
    prev = stats;
    cur = result.circuit;
  }
  result.converged = false;
  std::cerr << "dqcc: aggregation did not converge within " << kMaxSweeps << " sweeps\n";
  return result;
}

double BurstStats::fraction_ge(double x) const {
  if (per_comm.empty()) return 0.0;
  size_t n = 0;
  for (double v : per_comm)
    if (v >= x) ++n;
  return static_cast<double>(n) / static_cast<double>(per_comm.size());
}

BurstStats burst_stats(const std::vector<CommBlock>& blocks, const std::vector<Scheme>& schemes) {
  BurstStats st;
  for (size_t i = 0; i < blocks.size(); ++i) {
    double m = static_cast<double>(blocks[i].members.size());
    if (schemes.at(i) == Scheme::Cat) {
      st.per_comm.push_back(m);
    } else {
      st.per_comm.push_back(m / 2.0);
      st.per_comm.push_back(m / 2.0);
    }
  }
  double mx = 0;
  for (double v : st.per_comm) mx = std::max(mx, v);
  for (int x = 1; x <= static_cast<int>(mx + 0.5); ++x)
    st.pr_ge.push_back(st.fraction_ge(static_cast<double>(x)));
  return st;
}

}  // namespace dqcc
