#pragma once

#include "dqcc/aggregate.hpp"
#include "dqcc/assign.hpp"
#include "dqcc/partition.hpp"
#include "dqcc/schedule.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace dqcc {

using json = nlohmann::ordered_json;

struct Metrics {
  int tot_comm = 0;
  int tp_comm = 0;          // EPR pairs consumed by TP blocks
  double peak_rem_cx = 0;   // TP blocks averaged over two communications
  double latency = 0;       // CX units
  std::optional<double> improv_factor;
  std::optional<double> lat_dec_factor;
};

json metrics_to_json(const Metrics& m);
json partition_to_json(const Partition& p);
Partition partition_from_json(const json& j);
json blocks_to_json(const std::vector<CommBlock>& blocks, const std::vector<PatternClass>& patterns,
                    const std::vector<Scheme>& schemes);
json timeline_to_json(const Timeline& tl);
json burst_stats_to_json(const BurstStats& st);

LatencyModel latency_model_from_json(const json& j);
json latency_model_to_json(const LatencyModel& lm);

/// One row per node; EPR, teleport and block-execution segments.
std::string timeline_to_svg(const Timeline& tl, int num_nodes);

}  // namespace dqcc
