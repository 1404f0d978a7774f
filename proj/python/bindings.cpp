#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vheap/invariants.hpp"
#include "vheap/oracle.hpp"
#include "vheap/violation_heap.hpp"
#include "vheap/workloads.hpp"

namespace py = pybind11;

namespace {

using PyPool = vheap::ViolationPool<std::int64_t, std::int64_t>;

vheap::HeapKind parse_kind(const std::string& name) {
  auto k = vheap::heap_kind_from_string(name);
  if (!k)
    throw py::value_error("unknown heap '" + name + "'");
  return *k;
}

py::dict record_to_dict(const vheap::BenchRecord& r) {
  py::dict d;
  d["workload"] = r.workload;
  d["heap"] = r.heap;
  d["n"] = r.n;
  d["m"] = r.m;
  d["seed"] = r.seed;
  d["wall_ns"] = r.wall_ns;
  d["comparisons"] = r.comparisons;
  d["links"] = r.links;
  d["cuts"] = r.cuts;
  d["rank_updates"] = r.rank_updates;
  d["max_rank"] = r.max_rank;
  if (r.checksum)
    d["checksum"] = *r.checksum;
  return d;
}

py::dict report_to_dict(const vheap::AuditReport& r) {
  py::list violations;
  for (const auto& v : r.violations) {
    py::dict e;
    e["rule"] = v.rule;
    e["node"] = v.node == vheap::nil ? py::object(py::none()) : py::object(py::int_(v.node));
    e["detail"] = v.detail;
    violations.append(e);
  }
  py::dict d;
  d["violations"] = violations;
  d["nodes"] = r.nodes;
  d["max_rank"] = r.max_rank;
  return d;
}

vheap::Graph graph_from_edges(std::uint32_t n, const std::vector<std::tuple<std::uint32_t, std::uint32_t, std::int64_t>>& edges) {
  vheap::Graph g{n, std::vector<std::vector<vheap::Edge>>(n)};
  for (auto [u, v, w] : edges) {
    if (u >= n || v >= n)
      throw py::index_error("edge endpoint out of range");
    g.add_edge(u, v, w);
  }
  return g;
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Violation heap: mergeable priority queue with O(1) amortized decrease-key";

  py::register_exception<vheap::heap_error>(m, "HeapError", PyExc_ValueError);

  py::class_<vheap::HeapRef>(m, "Heap")
      .def("__eq__", [](const vheap::HeapRef& a, const vheap::HeapRef& b) { return a == b; });
  py::class_<vheap::NodeHandle>(m, "Node")
      .def("__eq__", [](const vheap::NodeHandle& a, const vheap::NodeHandle& b) { return a == b; })
      .def("__hash__", [](const vheap::NodeHandle& h) {
        return std::hash<std::uint64_t>{}((std::uint64_t{h.index} << 32) ^ h.stamp ^ (std::uint64_t{h.pool} << 20));
      });

  py::class_<PyPool>(m, "Pool")
      .def(py::init<>())
      .def("new_heap", &PyPool::heap_new)
      .def("insert", &PyPool::insert, py::arg("heap"), py::arg("key"), py::arg("item") = 0)
      .def("find_min",
           [](const PyPool& p, vheap::HeapRef h) -> std::optional<std::pair<std::int64_t, std::int64_t>> {
             auto e = p.find_min(h);
             if (!e)
               return std::nullopt;
             return std::make_pair(e->key, e->item);
           })
      .def("delete_min",
           [](PyPool& p, vheap::HeapRef h) {
             auto e = p.delete_min(h);
             return std::make_pair(e.key, e.item);
           })
      .def("decrease_key", &PyPool::decrease_key, py::arg("heap"), py::arg("node"), py::arg("new_key"))
      .def("decrease_key_by", &PyPool::decrease_key_by, py::arg("heap"), py::arg("node"), py::arg("delta"))
      .def("meld", &PyPool::meld)
      .def("size", &PyPool::size)
      .def("is_empty", &PyPool::empty)
      .def("contains", &PyPool::contains)
      .def("key", &PyPool::key)
      .def("rank", &PyPool::rank)
      .def_property_readonly("live_count", &PyPool::live_count)
      .def("audit",
           [](const PyPool& p, vheap::HeapRef h, bool root_multiplicity) {
             vheap::AuditOptions o;
             o.root_multiplicity = root_multiplicity;
             return report_to_dict(vheap::full_audit(p, h, o));
           },
           py::arg("heap"), py::arg("root_multiplicity") = false)
      .def("potential",
           [](const PyPool& p, vheap::HeapRef h) {
             auto s = vheap::potential_snapshot(p, h);
             py::dict d;
             d["gamma"] = s.gamma;
             d["theta2"] = s.theta2;
             d["tau"] = s.tau;
             return d;
           })
      .def_property_readonly("telemetry", [](const PyPool& p) {
        const auto& t = p.telemetry();
        py::dict d;
        d["comparisons"] = t.comparisons;
        d["joins"] = t.joins;
        d["cuts"] = t.cuts;
        d["rank_updates"] = t.rank_updates;
        d["propagation_faults"] = t.propagation_faults;
        d["decrease_keys"] = t.decrease_keys;
        d["delete_mins"] = t.delete_mins;
        d["max_rank"] = t.max_rank;
        return d;
      });

  m.def(
      "fuzz",
      [](std::uint64_t seed, std::size_t ops, std::tuple<double, double, double, double> w, std::size_t audit_every) {
        vheap::OpWeights weights{std::get<0>(w), std::get<1>(w), std::get<2>(w), std::get<3>(w)};
        vheap::DiffOptions o;
        o.audit_every = audit_every;
        auto v = vheap::run_differential(vheap::gen_ops(seed, ops, weights), o);
        py::dict d;
        d["seed"] = v.seed;
        d["ops"] = v.ops;
        d["verdict"] = v.pass ? "pass" : "fail";
        d["fail_at"] = v.fail_at ? py::object(py::int_(*v.fail_at)) : py::object(py::none());
        d["reason"] = v.reason;
        return d;
      },
      py::arg("seed"), py::arg("ops"), py::arg("weights") = std::make_tuple(0.45, 0.25, 0.25, 0.05),
      py::arg("audit_every") = 0, "Run one differential script and return its verdict.");

  m.def(
      "heapsort",
      [](std::size_t n, std::uint64_t seed, const std::string& heap) {
        auto r = vheap::heapsort_bench(n, seed, parse_kind(heap));
        return py::make_tuple(r.output, record_to_dict(r.record));
      },
      py::arg("n"), py::arg("seed") = 1, py::arg("heap") = "violation");

  m.def(
      "dijkstra",
      [](std::uint32_t n, const std::vector<std::tuple<std::uint32_t, std::uint32_t, std::int64_t>>& edges,
         std::uint32_t source, const std::string& heap) {
        auto r = vheap::dijkstra(graph_from_edges(n, edges), source, parse_kind(heap));
        py::list out;
        for (auto d : r.dist)
          out.append(d == vheap::unreachable ? py::object(py::none()) : py::object(py::int_(d)));
        return out;
      },
      py::arg("n"), py::arg("edges"), py::arg("source") = 0, py::arg("heap") = "violation",
      "Shortest-path distances; unreachable vertices map to None.");

  m.def(
      "gen_graph",
      [](std::uint64_t seed, std::uint32_t n, std::size_t m_edges, std::int64_t wmax) {
        auto g = vheap::gen_graph(seed, n, m_edges, wmax);
        std::vector<std::tuple<std::uint32_t, std::uint32_t, std::int64_t>> edges;
        for (std::uint32_t u = 0; u < g.n; ++u)
          for (const auto& e : g.adjacency[u])
            edges.emplace_back(u, e.to, e.weight);
        return edges;
      },
      py::arg("seed"), py::arg("n"), py::arg("m"), py::arg("wmax") = 1000);
}
