#include "dqcc/pipeline.hpp"
#include "dqcc/qasm.hpp"
#include "dqcc/verify.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

namespace {

using namespace dqcc;

constexpr int kExitUsage = 2;
constexpr int kExitParse = 3;
constexpr int kExitInfeasible = 4;
constexpr int kExitVerification = 5;

struct CompileArgs {
  std::string input_file;
  std::string bench;
  int n = 0;
  int nodes = 0;
  int capacity = 0;
  int layers = 1;
  int controls = 0;
  std::string secret;
  std::string edges;
  std::string partition_strategy = "static-oee";
  std::string strategy = "autocomm";
  bool compare = false;
  bool verify = false;
  std::string latency_file;
  std::string report_file;
  std::string gantt_file;
  std::string protocol_file;
};

std::vector<std::pair<int, int>> parse_edges(const std::string& s) {
  std::vector<std::pair<int, int>> edges;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto colon = item.find(':');
    if (colon == std::string::npos) throw CircuitError("bad edge '" + item + "', expected u:v");
    edges.emplace_back(std::stoi(item.substr(0, colon)), std::stoi(item.substr(colon + 1)));
  }
  return edges;
}

Circuit load_input(const CompileArgs& a, std::string& label) {
  if (!a.input_file.empty()) {
    std::ifstream in(a.input_file);
    if (!in) throw CircuitError("cannot open " + a.input_file);
    std::stringstream buf;
    buf << in.rdbuf();
    label = a.input_file;
    return parse_qasm(buf.str());
  }
  BenchmarkSpec spec;
  spec.num_qubits = a.n;
  label = a.bench + "-" + std::to_string(a.n) + "-" + std::to_string(a.nodes);
  if (a.bench == "qft") spec.family = BenchFamily::QFT;
  else if (a.bench == "qaoa") {
    spec.family = BenchFamily::QAOA;
    spec.layers = a.layers;
    spec.edges = a.edges == "ring8" ? qaoa_ring8_edges() : parse_edges(a.edges);
  } else if (a.bench == "bv") {
    spec.family = BenchFamily::BV;
    spec.secret = a.secret == "canonical" && a.n == 100 ? bv100_secret() : a.secret;
  } else if (a.bench == "rca") spec.family = BenchFamily::RCA;
  else if (a.bench == "mctr") {
    spec.family = BenchFamily::MCTR;
    spec.controls = a.controls;
  } else if (a.bench == "fig5") {
    label = "fig5";
    return fig5_program();
  } else {
    throw CircuitError("unknown benchmark family '" + a.bench + "'");
  }
  return generate(spec);
}

int run_compile(const CompileArgs& a) {
  std::string label;
  Circuit input = load_input(a, label);

  Partition part;
  if (a.bench == "fig5" && a.nodes == 0) {
    part = fig5_partition();
  } else {
    int capacity = a.capacity > 0 ? a.capacity
                                  : (input.num_qubits() + a.nodes - 1) / std::max(1, a.nodes);
    PartitionStrategy ps = PartitionStrategy::StaticOee;
    if (a.partition_strategy == "contiguous") ps = PartitionStrategy::Contiguous;
    else if (a.partition_strategy == "round-robin") ps = PartitionStrategy::RoundRobin;
    else if (a.partition_strategy != "static-oee")
      throw CLI::ValidationError("--partition", "unknown strategy");
    part = make_partition(decompose_to_basis(input), a.nodes, capacity, ps);
  }

  CompileOptions opts;
  if (a.strategy == "autocomm") opts.strategy = Strategy::AutoComm;
  else if (a.strategy == "baseline-cat") opts.strategy = Strategy::BaselineCat;
  else if (a.strategy == "gp-tp") opts.strategy = Strategy::GpTp;
  else if (a.strategy == "cat-only") {
    opts.strategy = Strategy::AutoComm;
    opts.cat_only = true;
  } else
    throw CLI::ValidationError("--strategy", "unknown strategy");
  opts.compare = a.compare;
  opts.verify = a.verify;
  if (!a.latency_file.empty()) {
    std::ifstream in(a.latency_file);
    if (!in) throw CircuitError("cannot open " + a.latency_file);
    opts.latency = latency_model_from_json(json::parse(in));
  }

  CompileResult result = compile_circuit(input, part, opts);

  json report = report_to_json(result, label, a.strategy);
  std::string serialized = report.dump(2) + "\n";
  if (!a.report_file.empty()) {
    std::ofstream out(a.report_file);
    out << serialized;
  }
  if (!a.gantt_file.empty()) {
    std::ofstream out(a.gantt_file);
    out << timeline_to_svg(result.timeline, part.num_nodes);
  }
  if (!a.protocol_file.empty()) {
    std::ofstream out(a.protocol_file);
    out << protocol_to_extended_qasm(result.expansion.pc);
  }

  std::cout << label << " strategy=" << a.strategy << " tot_comm=" << result.metrics.tot_comm
            << " tp_comm=" << result.metrics.tp_comm << " peak_rem_cx=" << result.metrics.peak_rem_cx
            << " latency=" << result.metrics.latency;
  if (result.metrics.improv_factor) std::cout << " improv=" << *result.metrics.improv_factor;
  if (result.metrics.lat_dec_factor) std::cout << " lat_dec=" << *result.metrics.lat_dec_factor;
  if (a.verify) std::cout << (result.verified ? " verify=ok" : " verify=skipped(n>8)");
  std::cout << "\n";
  return 0;
}

struct BenchRow {
  std::string name;
  CompileArgs args;
};

int run_bench(const std::string& report_file, bool verify) {
  std::vector<BenchRow> rows;
  auto mk = [&](std::string name, std::string family, int n, int k, std::string extra = "") {
    BenchRow r;
    r.name = std::move(name);
    r.args.bench = std::move(family);
    r.args.n = n;
    r.args.nodes = k;
    r.args.partition_strategy = "contiguous";
    r.args.strategy = "autocomm";
    r.args.compare = true;
    r.args.verify = verify;
    if (r.args.bench == "bv") r.args.secret = extra;
    if (r.args.bench == "qaoa") r.args.edges = extra;
    rows.push_back(std::move(r));
  };
  mk("qft-12-3", "qft", 12, 3);
  mk("qft-16-4", "qft", 16, 4);
  mk("qft-20-4", "qft", 20, 4);
  mk("bv-100-10", "bv", 100, 10, "canonical");
  mk("qaoa-ring8-2", "qaoa", 8, 2, "ring8");
  mk("rca-16-2", "rca", 16, 2);
  mk("mctr-15-3", "mctr", 15, 3);

  // independent instances, pure pipeline: run them concurrently
  std::vector<std::future<json>> futures;
  for (const BenchRow& row : rows) {
    futures.push_back(std::async(std::launch::async, [row]() {
      std::string label;
      Circuit input = load_input(row.args, label);
      Partition part = contiguous_partition(
          input.num_qubits(), row.args.nodes,
          (input.num_qubits() + row.args.nodes - 1) / row.args.nodes);
      CompileOptions opts;
      opts.compare = true;
      opts.verify = row.args.verify;
      CompileResult res = compile_circuit(input, part, opts);
      return report_to_json(res, row.name, "autocomm");
    }));
  }
  json all = json::array();
  for (size_t i = 0; i < futures.size(); ++i) {
    json r = futures[i].get();
    std::cout << rows[i].name << ": tot_comm=" << r["metrics"]["tot_comm"]
              << " tp_comm=" << r["metrics"]["tp_comm"]
              << " peak=" << r["metrics"]["peak_rem_cx"]
              << " improv=" << r["metrics"].value("improv_factor", 0.0)
              << " lat_dec=" << r["metrics"].value("lat_dec_factor", 0.0) << "\n";
    all.push_back(std::move(r));
  }
  if (!report_file.empty()) {
    std::ofstream out(report_file);
    out << all.dump(2) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"distributed quantum circuit communication compiler"};
  app.require_subcommand(1);

  CompileArgs a;
  CLI::App* compile = app.add_subcommand("compile", "compile one circuit");
  auto* input_opt = compile->add_option("--input", a.input_file, "OpenQASM 2.0 input file");
  auto* bench_opt =
      compile->add_option("--bench", a.bench, "benchmark family: qft|qaoa|bv|rca|mctr|fig5");
  input_opt->excludes(bench_opt);
  compile->add_option("--n", a.n, "qubit count for --bench");
  compile->add_option("--nodes", a.nodes, "number of quantum nodes");
  compile->add_option("--capacity", a.capacity, "data qubits per node (default: even split)");
  compile->add_option("--layers", a.layers, "qaoa layers");
  compile->add_option("--controls", a.controls, "mctr controls");
  compile->add_option("--secret", a.secret, "bv secret bitstring, or 'canonical'");
  compile->add_option("--edges", a.edges, "qaoa edges 'u:v,u:v,...' or 'ring8'");
  compile->add_option("--partition", a.partition_strategy, "static-oee|contiguous|round-robin");
  compile->add_option("--strategy", a.strategy, "autocomm|baseline-cat|gp-tp|cat-only");
  compile->add_flag("--compare", a.compare, "also run baseline-cat and report factors");
  compile->add_flag("--verify", a.verify, "unitary-equivalence oracle (<= 8 qubits)");
  compile->add_option("--latency-model", a.latency_file, "latency model JSON");
  compile->add_option("--report", a.report_file, "report JSON output");
  compile->add_option("--gantt", a.gantt_file, "SVG Gantt output");
  compile->add_option("--protocol", a.protocol_file,
                      "extended-QASM dump of the expanded protocols");

  std::string bench_report;
  bool bench_verify = false;
  CLI::App* bench = app.add_subcommand("bench", "run the bundled benchmark suite");
  bench->add_option("--report", bench_report, "aggregate report JSON");
  bench->add_flag("--verify", bench_verify, "verify small instances");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (compile->parsed()) {
      if (a.input_file.empty() && a.bench.empty()) {
        std::cerr << "one of --input or --bench is required\n";
        return kExitUsage;
      }
      if (a.input_file.empty() && a.bench != "fig5" && a.nodes <= 0) {
        std::cerr << "--nodes is required\n";
        return kExitUsage;
      }
      if (!a.input_file.empty() && a.nodes <= 0) {
        std::cerr << "--nodes is required\n";
        return kExitUsage;
      }
      return run_compile(a);
    }
    return run_bench(bench_report, bench_verify);
  } catch (const ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitParse;
  } catch (const InfeasiblePartition& e) {
    std::cerr << e.what() << "\n";
    return kExitInfeasible;
  } catch (const VerificationError& e) {
    std::cerr << e.what() << "\n";
    return kExitVerification;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
}
