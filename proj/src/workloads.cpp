#include "vheap/workloads.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "vheap/baselines.hpp"
#include "vheap/script_driver.hpp"
#include "vheap/violation_heap.hpp"

namespace vheap {

using VPool = ViolationPool<std::int64_t, std::uint64_t>;

std::size_t Graph::edge_count() const {
  std::size_t m = 0;
  for (const auto& adj : adjacency)
    m += adj.size();
  return m;
}

void Graph::add_edge(std::uint32_t from, std::uint32_t to, std::int64_t weight) {
  adjacency.at(from).push_back({to, weight});
}

Graph gen_graph(std::uint64_t seed, std::uint32_t n, std::size_t m, std::int64_t wmax) {
  if (n == 0)
    throw std::invalid_argument("graph needs at least one vertex");
  if (wmax < 1)
    throw std::invalid_argument("wmax must be at least 1");
  Graph g{n, std::vector<std::vector<Edge>>(n)};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> vertex(0, n - 1);
  std::uniform_int_distribution<std::int64_t> weight(0, wmax);
  for (std::size_t i = 0; i < m; ++i) {
    std::uint32_t u = vertex(rng);
    std::uint32_t v = vertex(rng);
    g.add_edge(u, v, weight(rng));
  }
  return g;
}

Graph parse_dimacs(std::string_view text) {
  Graph g;
  bool have_header = false;
  std::size_t declared = 0, arcs = 0, line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag == "c")
      continue;
    if (tag == "p") {
      std::string kind;
      long long n = -1, m = -1;
      if (have_header)
        throw parse_error(line_no, "duplicate header");
      if (!(ls >> kind >> n >> m) || kind != "sp" || n < 0 || m < 0 || n > 0xfffffffeLL)
        throw parse_error(line_no, "malformed header");
      g.n = static_cast<std::uint32_t>(n);
      g.adjacency.assign(g.n, {});
      declared = static_cast<std::size_t>(m);
      have_header = true;
    } else if (tag == "a") {
      if (!have_header)
        throw parse_error(line_no, "arc before header");
      long long u = 0, v = 0, w = 0;
      if (!(ls >> u >> v >> w))
        throw parse_error(line_no, "malformed arc");
      if (u < 1 || v < 1 || u > g.n || v > g.n)
        throw parse_error(line_no, "vertex out of range");
      g.add_edge(static_cast<std::uint32_t>(u - 1), static_cast<std::uint32_t>(v - 1), w);
      ++arcs;
    } else {
      throw parse_error(line_no, "unknown line type '" + tag + "'");
    }
  }
  if (!have_header)
    throw parse_error(line_no, "missing header");
  if (arcs != declared)
    throw parse_error(line_no, "arc count mismatch");
  return g;
}

Graph read_dimacs(const std::string& path) {
  std::ifstream f(path);
  if (!f)
    throw std::runtime_error("cannot open " + path);
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_dimacs(buf.str());
}

std::optional<HeapKind> heap_kind_from_string(std::string_view name) {
  if (name == "violation")
    return HeapKind::violation;
  if (name == "binary")
    return HeapKind::binary;
  if (name == "pairing")
    return HeapKind::pairing;
  return std::nullopt;
}

std::string_view to_string(HeapKind kind) {
  switch (kind) {
  case HeapKind::violation:
    return "violation";
  case HeapKind::binary:
    return "binary";
  case HeapKind::pairing:
    return "pairing";
  }
  return "?";
}

std::string to_csv_row(const BenchRecord& r) {
  std::ostringstream out;
  out << r.workload << ',' << r.heap << ',' << r.n << ',' << r.m << ',' << r.seed << ',' << r.wall_ns << ','
      << r.comparisons << ',' << r.links << ',' << r.cuts << ',' << r.rank_updates << ',' << r.max_rank;
  return out.str();
}

std::string to_json_line(const BenchRecord& r) {
  nlohmann::ordered_json j;
  j["workload"] = r.workload;
  j["heap"] = r.heap;
  j["n"] = r.n;
  j["m"] = r.m;
  j["seed"] = r.seed;
  j["wall_ns"] = r.wall_ns;
  j["comparisons"] = r.comparisons;
  j["links"] = r.links;
  j["cuts"] = r.cuts;
  j["rank_updates"] = r.rank_updates;
  j["max_rank"] = r.max_rank;
  if (r.checksum)
    j["checksum"] = *r.checksum;
  return j.dump();
}

std::uint64_t checksum_of(const std::vector<std::int64_t>& values) {
  std::uint64_t h = 14695981039346656037ull;
  for (std::int64_t v : values) {
    auto u = static_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) {
      h ^= (u >> (8 * b)) & 0xffu;
      h *= 1099511628211ull;
    }
  }
  return h;
}

namespace {

void fill_counters(BenchRecord& r, const VPool& pool) {
  const Telemetry& t = pool.telemetry();
  r.comparisons = t.comparisons;
  r.links = t.joins;
  r.cuts = t.cuts;
  r.rank_updates = t.rank_updates;
  r.max_rank = t.max_rank;
}

template <class Pool>
void fill_counters(BenchRecord& r, const Pool& pool) {
  r.comparisons = pool.counters().comparisons;
  r.links = pool.counters().links;
  r.cuts = pool.counters().cuts;
}

// Runs `body(pool)` on a fresh pool of the requested kind.
template <class Body>
auto with_pool(HeapKind kind, Body&& body) {
  switch (kind) {
  case HeapKind::binary: {
    BinaryPool pool;
    return body(pool);
  }
  case HeapKind::pairing: {
    PairingPool pool;
    return body(pool);
  }
  case HeapKind::violation:
  default: {
    VPool pool;
    return body(pool);
  }
  }
}

using Clock = std::chrono::steady_clock;

std::uint64_t elapsed_ns(Clock::time_point start) {
  auto ns = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count();
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(ns));
}

template <class Pool>
std::vector<std::int64_t> run_dijkstra(Pool& pool, const Graph& g, std::uint32_t source) {
  std::vector<std::int64_t> dist(g.n, unreachable);
  std::vector<typename Pool::handle_type> handle(g.n);
  std::vector<char> done(g.n, 0);
  auto heap = pool.heap_new();
  dist[source] = 0;
  for (std::uint32_t v = 0; v < g.n; ++v)
    handle[v] = pool.insert(heap, dist[v], v);
  while (!pool.empty(heap)) {
    auto [d, item] = pool.delete_min(heap);
    if (d == unreachable)
      break;
    auto u = static_cast<std::uint32_t>(item);
    done[u] = 1;
    for (const Edge& e : g.adjacency[u]) {
      if (done[e.to] || e.weight > unreachable - 1 - d)
        continue;
      std::int64_t nd = d + e.weight;
      if (nd < dist[e.to]) {
        dist[e.to] = nd;
        pool.decrease_key(heap, handle[e.to], nd);
      }
    }
  }
  return dist;
}

} // namespace

DijkstraResult dijkstra(const Graph& g, std::uint32_t source, HeapKind kind) {
  if (source >= g.n)
    throw std::invalid_argument("source out of range");
  for (const auto& adj : g.adjacency)
    for (const Edge& e : adj)
      if (e.weight < 0)
        throw std::invalid_argument("negative edge weight");

  return with_pool(kind, [&](auto& pool) {
    DijkstraResult res;
    auto start = Clock::now();
    res.dist = run_dijkstra(pool, g, source);
    res.record.wall_ns = elapsed_ns(start);
    res.record.workload = "dijkstra";
    res.record.heap = std::string(to_string(kind));
    res.record.n = g.n;
    res.record.m = g.edge_count();
    fill_counters(res.record, pool);
    res.record.checksum = checksum_of(res.dist);
    return res;
  });
}

SortResult heapsort_bench(std::size_t n, std::uint64_t seed, HeapKind kind) {
  if (n == 0)
    throw std::invalid_argument("n must be at least 1");
  std::vector<std::int64_t> keys(n);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> dist(0, std::int64_t{1} << 40);
  for (auto& k : keys)
    k = dist(rng);

  return with_pool(kind, [&](auto& pool) {
    SortResult res;
    res.output.reserve(n);
    auto start = Clock::now();
    auto heap = pool.heap_new();
    for (std::size_t i = 0; i < n; ++i)
      pool.insert(heap, keys[i], i);
    for (std::size_t i = 0; i < n; ++i)
      res.output.push_back(pool.delete_min(heap).key);
    res.record.wall_ns = elapsed_ns(start);
    if (!std::is_sorted(res.output.begin(), res.output.end()))
      throw std::logic_error("heapsort output is not sorted");
    res.record.workload = "sort";
    res.record.heap = std::string(to_string(kind));
    res.record.n = n;
    res.record.seed = seed;
    fill_counters(res.record, pool);
    res.record.checksum = checksum_of(res.output);
    return res;
  });
}

BenchRecord mixed_bench(std::uint64_t seed, std::size_t n, const OpWeights& weights, HeapKind kind) {
  OpScript script = gen_ops(seed, n, weights);
  return with_pool(kind, [&](auto& pool) {
    BenchRecord rec;
    ScriptDriver driver(pool);
    auto start = Clock::now();
    for (const Op& op : script.ops)
      driver.apply(op);
    rec.wall_ns = elapsed_ns(start);
    rec.workload = "mixed";
    rec.heap = std::string(to_string(kind));
    rec.n = n;
    rec.seed = seed;
    fill_counters(rec, pool);
    return rec;
  });
}

} // namespace vheap
