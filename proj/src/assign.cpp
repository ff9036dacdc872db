#include "dqcc/assign.hpp"

#include <algorithm>

namespace dqcc {

const char* pattern_name(PatternClass p) {
  switch (p) {
    case PatternClass::UniControlClean: return "uni_control_clean";
    case PatternClass::UniControlDirty: return "uni_control_dirty";
    case PatternClass::UniTarget: return "uni_target";
    case PatternClass::Bidirectional: return "bidirectional";
  }
  return "?";
}

namespace {

bool pivot_is_control(const Gate& g, int pivot) { return g.qubits[0] == pivot; }

// A pivot-touching interior gate strictly between members is "stuck" if it
// can be hoisted past neither the members before it nor the members after.
bool has_stuck_pivot_gate(const CommBlock& b, const Circuit& c) {
  if (b.members.size() < 2) return false;
  for (int gi : b.interior) {
    const Gate& g = c.gate(gi);
    if (!g.touches(b.pivot)) continue;
    if (gi < b.members.front() || gi > b.members.back()) continue;
    bool left_ok = true, right_ok = true;
    for (int m : b.members) {
      if (m < gi && !commutes(g, c.gate(m))) left_ok = false;
      if (m > gi && !commutes(g, c.gate(m))) right_ok = false;
    }
    if (!left_ok && !right_ok) return true;
  }
  return false;
}

}  // namespace

PatternClass classify(const CommBlock& b, const Circuit& c) {
  bool any_control = false, any_target = false;
  for (int m : b.members) {
    if (pivot_is_control(c.gate(m), b.pivot)) any_control = true;
    else any_target = true;
  }
  if (any_control && any_target) return PatternClass::Bidirectional;
  if (any_target) return PatternClass::UniTarget;
  return has_stuck_pivot_gate(b, c) ? PatternClass::UniControlDirty : PatternClass::UniControlClean;
}

TransformResult transform_target(const Circuit& c, const std::vector<CommBlock>& blocks, size_t index) {
  const CommBlock& b = blocks.at(index);
  if (classify(b, c) != PatternClass::UniTarget)
    throw CircuitError("transform_target: block is not UniTarget");

  int lo = b.span_first(), hi = b.span_last();
  std::vector<int> member_set(b.members.begin(), b.members.end());
  auto is_member = [&](int pos) {
    return std::binary_search(member_set.begin(), member_set.end(), pos);
  };

  Circuit out(c.num_qubits());
  for (int q = 0; q < c.num_qubits(); ++q) out.set_qubit_name(q, c.qubit_name(q));

  std::vector<int> remap(c.size(), -1);  // old position -> new position
  std::vector<int> new_members, new_interior;

  for (int pos = 0; pos < static_cast<int>(c.size()); ++pos) {
    if (pos == lo) {
      // emit the rewritten span
      bool open = false;
      for (int sp = lo; sp <= hi; ++sp) {
        const Gate& g = c.gate(sp);
        if (is_member(sp)) {
          int other = g.qubits[0] == b.pivot ? g.qubits[1] : g.qubits[0];
          if (!open) {
            out.h(b.pivot);
            new_interior.push_back(static_cast<int>(out.size()) - 1);
            open = true;
          }
          out.h(other);
          new_interior.push_back(static_cast<int>(out.size()) - 1);
          out.cx(b.pivot, other);
          new_members.push_back(static_cast<int>(out.size()) - 1);
          remap[static_cast<size_t>(sp)] = static_cast<int>(out.size()) - 1;
          out.h(other);
          new_interior.push_back(static_cast<int>(out.size()) - 1);
        } else {
          if (open && g.touches(b.pivot)) {
            out.h(b.pivot);
            new_interior.push_back(static_cast<int>(out.size()) - 1);
            open = false;
          }
          out.add(g.kind, g.qubits, g.params);
          remap[static_cast<size_t>(sp)] = static_cast<int>(out.size()) - 1;
          new_interior.push_back(static_cast<int>(out.size()) - 1);
        }
      }
      if (open) {
        out.h(b.pivot);
        new_interior.push_back(static_cast<int>(out.size()) - 1);
      }
      pos = hi;
      continue;
    }
    const Gate& g = c.gate(pos);
    out.add(g.kind, g.qubits, g.params);
    remap[static_cast<size_t>(pos)] = static_cast<int>(out.size()) - 1;
  }

  TransformResult res;
  res.blocks.reserve(blocks.size());
  for (size_t i = 0; i < blocks.size(); ++i) {
    CommBlock nb;
    nb.pivot = blocks[i].pivot;
    nb.node = blocks[i].node;
    if (i == index) {
      nb.members = new_members;
      nb.interior = new_interior;
    } else {
      for (int m : blocks[i].members) nb.members.push_back(remap[static_cast<size_t>(m)]);
      for (int m : blocks[i].interior) nb.interior.push_back(remap[static_cast<size_t>(m)]);
    }
    std::sort(nb.members.begin(), nb.members.end());
    std::sort(nb.interior.begin(), nb.interior.end());
    res.blocks.push_back(std::move(nb));
  }
  res.circuit = std::move(out);
  return res;
}

AssignResult assign(const Circuit& c, std::vector<CommBlock> blocks) {
  AssignResult res;
  res.circuit = c;
  res.blocks = std::move(blocks);
  for (size_t i = 0; i < res.blocks.size(); ++i) {
    if (classify(res.blocks[i], res.circuit) == PatternClass::UniTarget) {
      TransformResult tr = transform_target(res.circuit, res.blocks, i);
      res.circuit = std::move(tr.circuit);
      res.blocks = std::move(tr.blocks);
    }
  }
  for (const CommBlock& b : res.blocks) {
    PatternClass pc = classify(b, res.circuit);
    res.patterns.push_back(pc);
    res.schemes.push_back(pc == PatternClass::UniControlClean ? Scheme::Cat : Scheme::TP);
  }
  return res;
}

int cat_only_segments(const CommBlock& b, const Circuit& c) {
  if (b.members.empty()) return 0;
  int segments = 1;
  for (size_t i = 0; i + 1 < b.members.size(); ++i) {
    int m0 = b.members[i], m1 = b.members[i + 1];
    bool role0 = pivot_is_control(c.gate(m0), b.pivot);
    bool role1 = pivot_is_control(c.gate(m1), b.pivot);
    bool brk = role0 != role1;
    if (!brk) {
      for (int gi : b.interior) {
        if (gi < m0 || gi > m1) continue;
        const Gate& g = c.gate(gi);
        if (!g.touches(b.pivot)) continue;
        bool left_ok = true, right_ok = true;
        for (int m : b.members) {
          if (m < gi && !commutes(g, c.gate(m))) left_ok = false;
          if (m > gi && !commutes(g, c.gate(m))) right_ok = false;
        }
        if (!left_ok && !right_ok) {
          brk = true;
          break;
        }
      }
    }
    if (brk) ++segments;
  }
  return segments;
}

}  // namespace dqcc
