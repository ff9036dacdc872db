#include "dqcc/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dqcc {

json metrics_to_json(const Metrics& m) {
  json j;
  j["tot_comm"] = m.tot_comm;
  j["tp_comm"] = m.tp_comm;
  j["peak_rem_cx"] = m.peak_rem_cx;
  j["latency"] = m.latency;
  if (m.improv_factor) j["improv_factor"] = *m.improv_factor;
  if (m.lat_dec_factor) j["lat_dec_factor"] = *m.lat_dec_factor;
  return j;
}

json partition_to_json(const Partition& p) {
  json j;
  j["num_nodes"] = p.num_nodes;
  j["capacity"] = p.capacity;
  j["node_of"] = p.node_of;
  return j;
}

Partition partition_from_json(const json& j) {
  Partition p;
  p.num_nodes = j.at("num_nodes").get<int>();
  p.capacity = j.at("capacity").get<int>();
  p.node_of = j.at("node_of").get<std::vector<int>>();
  for (int n : p.node_of)
    if (n < 0 || n >= p.num_nodes) throw CircuitError("partition json: node id out of range");
  std::vector<int> load(static_cast<size_t>(p.num_nodes), 0);
  for (int n : p.node_of)
    if (++load[static_cast<size_t>(n)] > p.capacity)
      throw CircuitError("partition json: capacity exceeded");
  return p;
}

json blocks_to_json(const std::vector<CommBlock>& blocks, const std::vector<PatternClass>& patterns,
                    const std::vector<Scheme>& schemes) {
  json arr = json::array();
  for (size_t i = 0; i < blocks.size(); ++i) {
    json b;
    b["pivot"] = blocks[i].pivot;
    b["node"] = blocks[i].node;
    b["members"] = blocks[i].members;
    b["interior"] = blocks[i].interior;
    if (i < patterns.size()) b["pattern"] = pattern_name(patterns[i]);
    if (i < schemes.size()) b["scheme"] = schemes[i] == Scheme::Cat ? "cat" : "tp";
    arr.push_back(std::move(b));
  }
  return arr;
}

json timeline_to_json(const Timeline& tl) {
  json j;
  j["makespan"] = tl.makespan;
  j["epr_total"] = tl.epr_total;
  j["epr_tp"] = tl.epr_tp;
  j["elided_teleports"] = tl.elided_teleports;
  json evs = json::array();
  for (const TimelineEvent& e : tl.events) {
    json ev;
    ev["start"] = e.start;
    ev["duration"] = e.duration;
    ev["kind"] = e.kind;
    ev["block"] = e.block;
    ev["qubits"] = e.qubits;
    ev["nodes"] = e.nodes;
    evs.push_back(std::move(ev));
  }
  j["events"] = std::move(evs);
  json cls = json::array();
  for (const CommClaim& c : tl.claims) {
    json cl;
    cl["node"] = c.node;
    cl["slot"] = c.slot;
    cl["start"] = c.start;
    cl["end"] = c.end;
    cls.push_back(std::move(cl));
  }
  j["claims"] = std::move(cls);
  return j;
}

json burst_stats_to_json(const BurstStats& st) {
  json j;
  j["per_comm"] = st.per_comm;
  j["pr_ge"] = st.pr_ge;
  return j;
}

LatencyModel latency_model_from_json(const json& j) {
  LatencyModel lm;
  if (j.contains("t_1q")) lm.t_1q = j.at("t_1q").get<double>();
  if (j.contains("t_2q")) lm.t_2q = j.at("t_2q").get<double>();
  if (j.contains("t_ms")) lm.t_ms = j.at("t_ms").get<double>();
  if (j.contains("t_ep")) lm.t_ep = j.at("t_ep").get<double>();
  if (j.contains("t_cb")) lm.t_cb = j.at("t_cb").get<double>();
  for (double v : {lm.t_1q, lm.t_2q, lm.t_ms, lm.t_ep, lm.t_cb})
    if (!(v > 0)) throw CircuitError("latency model fields must be strictly positive");
  return lm;
}

json latency_model_to_json(const LatencyModel& lm) {
  json j;
  j["t_1q"] = lm.t_1q;
  j["t_2q"] = lm.t_2q;
  j["t_ms"] = lm.t_ms;
  j["t_ep"] = lm.t_ep;
  j["t_cb"] = lm.t_cb;
  return j;
}

std::string timeline_to_svg(const Timeline& tl, int num_nodes) {
  const double px_per_unit = tl.makespan > 0 ? std::max(2.0, 900.0 / tl.makespan) : 2.0;
  const int row_h = 34, pad = 46, label_w = 70;
  int width = static_cast<int>(tl.makespan * px_per_unit) + label_w + 20;
  int height = pad + num_nodes * row_h + 20;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\">\n";
  os << "<style>text{font-family:monospace;font-size:11px;}</style>\n";
  os << "<text x=\"8\" y=\"16\">makespan " << tl.makespan << " CX units, " << tl.epr_total
     << " EPR</text>\n";
  for (int n = 0; n < num_nodes; ++n) {
    int y = pad + n * row_h;
    os << "<text x=\"8\" y=\"" << y + 18 << "\">node " << n << "</text>\n";
    os << "<line x1=\"" << label_w << "\" y1=\"" << y + row_h - 4 << "\" x2=\"" << width - 10
       << "\" y2=\"" << y + row_h - 4 << "\" stroke=\"#ccc\"/>\n";
  }
  auto color = [](const std::string& kind) {
    if (kind == "epr") return "#f4b942";
    if (kind == "teleport") return "#d1495b";
    if (kind == "entangle" || kind == "disentangle") return "#30638e";
    if (kind == "exec") return "#3d8361";
    if (kind == "move") return "#9d6b9e";
    return "#8d99ae";
  };
  for (const TimelineEvent& e : tl.events) {
    if (e.nodes.empty()) continue;  // purely local gate, skip in node rows
    for (int n : e.nodes) {
      if (n < 0 || n >= num_nodes) continue;
      double x = label_w + e.start * px_per_unit;
      double w = std::max(1.0, e.duration * px_per_unit);
      int y = pad + n * row_h + 2;
      os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << w
         << "\" height=\"" << row_h - 10 << "\" fill=\"" << color(e.kind)
         << "\" fill-opacity=\"0.8\"><title>" << e.kind;
      if (e.block >= 0) os << " b" << e.block;
      os << " [" << e.start << "," << e.start + e.duration << "]</title></rect>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace dqcc
