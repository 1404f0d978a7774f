#pragma once

// Benchmark workloads: graphs, Dijkstra with decrease-key, heapsort and
// replayed mixed scripts, each runnable on any of the three heaps.

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "vheap/oracle.hpp"

namespace vheap {

struct Edge {
  std::uint32_t to;
  std::int64_t weight;
};

struct Graph {
  std::uint32_t n = 0;
  std::vector<std::vector<Edge>> adjacency;

  std::size_t edge_count() const;
  void add_edge(std::uint32_t from, std::uint32_t to, std::int64_t weight);
};

class parse_error : public std::runtime_error {
public:
  parse_error(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// m directed edges, endpoints uniform over ordered pairs, weights uniform in [0, wmax].
Graph gen_graph(std::uint64_t seed, std::uint32_t n, std::size_t m, std::int64_t wmax);

/// DIMACS shortest-path format ("p sp n m", "a u v w", 1-based vertices).
Graph read_dimacs(const std::string& path);
Graph parse_dimacs(std::string_view text);

enum class HeapKind { violation, binary, pairing };

std::optional<HeapKind> heap_kind_from_string(std::string_view name);
std::string_view to_string(HeapKind kind);

inline constexpr std::int64_t unreachable = std::numeric_limits<std::int64_t>::max();

struct BenchRecord {
  std::string workload;
  std::string heap;
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  std::uint64_t seed = 0;
  std::uint64_t wall_ns = 0;
  std::uint64_t comparisons = 0;
  std::uint64_t links = 0;
  std::uint64_t cuts = 0;
  std::uint64_t rank_updates = 0;
  std::int64_t max_rank = 0;
  std::optional<std::uint64_t> checksum;
};

inline constexpr std::string_view bench_csv_header =
    "workload,heap,n,m,seed,wall_ns,comparisons,links,cuts,rank_updates,max_rank";

std::string to_csv_row(const BenchRecord& r);
std::string to_json_line(const BenchRecord& r);

struct DijkstraResult {
  std::vector<std::int64_t> dist;
  BenchRecord record;
};

/// Every vertex goes in up front at `unreachable`; relaxations decrease keys.
DijkstraResult dijkstra(const Graph& g, std::uint32_t source, HeapKind kind);

/// FNV-1a over a sequence of 64-bit values.
std::uint64_t checksum_of(const std::vector<std::int64_t>& values);

struct SortResult {
  std::vector<std::int64_t> output;
  BenchRecord record;
};

SortResult heapsort_bench(std::size_t n, std::uint64_t seed, HeapKind kind);

BenchRecord mixed_bench(std::uint64_t seed, std::size_t n, const OpWeights& weights, HeapKind kind);

} // namespace vheap
