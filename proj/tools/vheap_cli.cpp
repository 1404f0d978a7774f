// vheap: fuzz, trace-check and benchmark the violation heap.
//
//   vheap fuzz  --ops N --seeds S [--weights i:d:k:m] [--audit-every E] [--first-seed X]
//   vheap check --trace FILE
//   vheap bench --workload dijkstra|sort|mixed --heap violation|binary|pairing
//               [--n N] [--m M] [--seed S] [--wmax W] [--format csv|json] [--dimacs FILE]
//
// Exit codes: 0 success, 1 check/fuzz failure, 2 usage error.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "vheap/oracle.hpp"
#include "vheap/trace.hpp"
#include "vheap/workloads.hpp"

namespace {

constexpr int exit_failure = 1;
constexpr int exit_usage = 2;

struct FuzzArgs {
  std::size_t ops = 10000;
  std::size_t seeds = 1;
  std::uint64_t first_seed = 1;
  std::string weights = "0.45:0.25:0.25:0.05";
  std::size_t audit_every = 0;
};

struct BenchArgs {
  std::string workload;
  std::string heap = "violation";
  std::size_t n = 100000;
  std::size_t m = 0;
  std::uint64_t seed = 1;
  std::int64_t wmax = 1000;
  std::string format = "csv";
  std::string dimacs;
};

int cmd_fuzz(const FuzzArgs& a) {
  if (a.ops < 1 || a.seeds < 1) {
    std::cerr << "fuzz: --ops and --seeds must be at least 1\n";
    return exit_usage;
  }
  vheap::OpWeights w;
  try {
    w = vheap::OpWeights::parse(a.weights);
  } catch (const std::exception& e) {
    std::cerr << "fuzz: " << e.what() << '\n';
    return exit_usage;
  }
  vheap::DiffOptions opts;
  opts.audit_every = a.audit_every;
  bool all_pass = true;
  for (std::size_t i = 0; i < a.seeds; ++i) {
    auto script = vheap::gen_ops(a.first_seed + i, a.ops, w);
    auto verdict = vheap::run_differential(script, opts);
    std::cout << vheap::verdict_to_json(verdict) << '\n';
    all_pass &= verdict.pass;
  }
  return all_pass ? 0 : exit_failure;
}

int cmd_check(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "check: cannot open " << path << '\n';
    return exit_failure;
  }
  return vheap::run_trace(in, std::cout, std::cerr);
}

int cmd_bench(const BenchArgs& a) {
  auto kind = vheap::heap_kind_from_string(a.heap);
  if (!kind) {
    std::cerr << "bench: unknown heap '" << a.heap << "'\n";
    return exit_usage;
  }
  if (a.format != "csv" && a.format != "json") {
    std::cerr << "bench: unknown format '" << a.format << "'\n";
    return exit_usage;
  }
  vheap::BenchRecord rec;
  try {
    if (a.workload == "dijkstra") {
      vheap::Graph g;
      if (!a.dimacs.empty()) {
        g = vheap::read_dimacs(a.dimacs);
      } else if (a.m > 0) {
        g = vheap::gen_graph(a.seed, static_cast<std::uint32_t>(a.n), a.m, a.wmax);
      } else {
        std::cerr << "bench: dijkstra needs --m or --dimacs\n";
        return exit_usage;
      }
      rec = vheap::dijkstra(g, 0, *kind).record;
      rec.seed = a.dimacs.empty() ? a.seed : 0;
    } else if (a.workload == "sort") {
      rec = vheap::heapsort_bench(a.n, a.seed, *kind).record;
    } else if (a.workload == "mixed") {
      rec = vheap::mixed_bench(a.seed, a.n, vheap::OpWeights{}, *kind);
    } else {
      std::cerr << "bench: unknown workload '" << a.workload << "'\n";
      return exit_usage;
    }
  } catch (const vheap::parse_error& e) {
    std::cerr << "bench: " << a.dimacs << ": " << e.what() << '\n';
    return exit_failure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "bench: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    std::cerr << "bench: " << e.what() << '\n';
    return exit_failure;
  }

  if (a.format == "csv") {
    std::cout << vheap::bench_csv_header << '\n' << vheap::to_csv_row(rec) << '\n';
    if (rec.checksum && rec.workload == "dijkstra")
      std::cout << "# checksum " << *rec.checksum << '\n';
  } else {
    std::cout << vheap::to_json_line(rec) << '\n';
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Violation heap fuzzing, trace checking and benchmarks"};
  app.require_subcommand(1);

  FuzzArgs fuzz;
  auto* fuzz_cmd = app.add_subcommand("fuzz", "Differential fuzzing against a brute-force queue");
  fuzz_cmd->add_option("--ops", fuzz.ops, "Operations per script")->required();
  fuzz_cmd->add_option("--seeds", fuzz.seeds, "Number of seeds")->required();
  fuzz_cmd->add_option("--first-seed", fuzz.first_seed, "First seed");
  fuzz_cmd->add_option("--weights", fuzz.weights, "insert:delete-min:decrease-key:meld");
  fuzz_cmd->add_option("--audit-every", fuzz.audit_every, "Full audit every E ops (0 = automatic)");

  std::string trace_path;
  auto* check_cmd = app.add_subcommand("check", "Replay a trace file");
  check_cmd->add_option("--trace", trace_path, "Trace file")->required();

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run one benchmark and print a record");
  bench_cmd->add_option("--workload", bench.workload, "dijkstra | sort | mixed")->required();
  bench_cmd->add_option("--heap", bench.heap, "violation | binary | pairing");
  bench_cmd->add_option("--n", bench.n, "Elements, vertices or script length");
  bench_cmd->add_option("--m", bench.m, "Edges (dijkstra)");
  bench_cmd->add_option("--seed", bench.seed, "Seed");
  bench_cmd->add_option("--wmax", bench.wmax, "Largest edge weight (dijkstra)");
  bench_cmd->add_option("--format", bench.format, "csv | json");
  bench_cmd->add_option("--dimacs", bench.dimacs, "DIMACS shortest-path graph");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_usage;
  }

  if (fuzz_cmd->parsed())
    return cmd_fuzz(fuzz);
  if (check_cmd->parsed())
    return cmd_check(trace_path);
  return cmd_bench(bench);
}
