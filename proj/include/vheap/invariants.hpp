#pragma once

// Structural auditor and potential-function telemetry for violation heaps.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vheap/violation_heap.hpp"

namespace vheap {

namespace rule {
inline constexpr const char* structure = "structure";
inline constexpr const char* heap_order = "heap-order";
inline constexpr const char* first_root = "first-root";
inline constexpr const char* rank_bound = "rank-bound";
inline constexpr const char* active_shape = "active-shape";
inline constexpr const char* size_bound = "size-bound";
inline constexpr const char* root_multiplicity = "root-multiplicity";
inline constexpr const char* count = "count";
inline constexpr const char* max_rank = "max-rank";
} // namespace rule

struct AuditViolation {
  std::string rule;
  std::uint32_t node = nil; // slot index, nil for heap-level findings
  std::string detail;
};

struct AuditReport {
  std::vector<AuditViolation> violations;
  std::size_t nodes = 0;
  int max_rank = 0;

  bool ok() const noexcept { return violations.empty(); }
  std::size_t count(std::string_view rule_id) const {
    std::size_t n = 0;
    for (const auto& v : violations)
      n += v.rule == rule_id;
    return n;
  }
};

struct AuditOptions {
  // Only meaningful right after delete_min.
  bool root_multiplicity = false;
  // Size bound with F(1) = 2 instead of F(1) = 1.
  bool strong_fibonacci = false;
};

/// F(0) = 1, F(1) = 1 (or 2 in the strong variant), saturating.
inline std::uint64_t fibonacci_floor(int i, bool strong = false) {
  if (i <= 0)
    return 1;
  std::uint64_t a = 1, b = strong ? 2 : 1;
  for (int k = 1; k < i; ++k) {
    std::uint64_t c = a + b;
    if (c < b)
      return std::numeric_limits<std::uint64_t>::max();
    a = b;
    b = c;
  }
  return b;
}

/// ceil(log_phi(n)) + 2, the largest rank a heap of n nodes may carry.
inline int max_rank_bound(std::size_t n) {
  if (n <= 1)
    return 2;
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  return static_cast<int>(std::ceil(std::log(static_cast<double>(n)) / std::log(phi) - 1e-9)) + 2;
}

// Forest walk shared by the audit and the potential snapshot. Visits each
// node reachable from `roots` once, pre-order, recording parent links.
template <class Pool>
struct ForestWalk {
  std::vector<std::uint32_t> order;
  std::vector<std::uint32_t> parent;   // indexed by slot
  std::vector<std::uint64_t> subtree;  // indexed by slot
  std::vector<std::uint32_t> degree;   // indexed by slot
  std::vector<char> seen;

  void run(const Pool& pool, std::span<const std::uint32_t> roots,
           const std::function<void(std::uint32_t, std::string)>& bad_link = {}) {
    std::size_t slots = pool.slot_count();
    parent.assign(slots, nil);
    subtree.assign(slots, 0);
    degree.assign(slots, 0);
    seen.assign(slots, 0);
    order.clear();

    std::vector<std::uint32_t> stack;
    for (std::uint32_t r : roots) {
      if (r >= slots || seen[r])
        continue;
      seen[r] = 1;
      stack.push_back(r);
      while (!stack.empty()) {
        std::uint32_t u = stack.back();
        stack.pop_back();
        order.push_back(u);
        std::uint32_t newer = nil;
        for (std::uint32_t c = pool.record(u).down; c != nil; c = pool.record(c).prev) {
          if (c >= slots) {
            if (bad_link)
              bad_link(u, "child link out of range");
            break;
          }
          if (seen[c]) {
            if (bad_link)
              bad_link(c, "node reached twice");
            break;
          }
          const auto& rec = pool.record(c);
          if (bad_link) {
            if (!rec.live)
              bad_link(c, "retired slot reachable");
            if (newer == nil && rec.next != u)
              bad_link(c, "last child does not link to its parent");
            if (newer != nil && (rec.next != newer || pool.record(newer).prev != c))
              bad_link(c, "sibling links disagree");
          }
          seen[c] = 1;
          parent[c] = u;
          ++degree[u];
          stack.push_back(c);
          newer = c;
        }
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      subtree[*it] += 1;
      if (parent[*it] != nil)
        subtree[parent[*it]] += subtree[*it];
    }
  }
};

template <class Pool>
std::vector<std::uint32_t> collect_roots(const Pool& pool, HeapRef h, std::vector<AuditViolation>* out = nullptr) {
  std::vector<std::uint32_t> roots;
  std::uint32_t first = pool.first_root(h);
  if (first == nil)
    return roots;
  std::size_t guard = pool.slot_count() + 1;
  std::uint32_t r = first;
  do {
    if (r >= pool.slot_count()) {
      if (out)
        out->push_back({rule::structure, nil, "root link out of range"});
      break;
    }
    roots.push_back(r);
    r = pool.record(r).next;
    if (roots.size() > guard) {
      if (out)
        out->push_back({rule::structure, first, "root list does not close"});
      break;
    }
  } while (r != first);
  return roots;
}

template <class Pool>
AuditReport full_audit(const Pool& pool, HeapRef h, AuditOptions opts = {}) {
  AuditReport report;
  auto& v = report.violations;
  std::uint32_t first = pool.first_root(h);
  std::size_t expected = pool.size(h);
  if (expected == 0) {
    if (first != nil)
      v.push_back({rule::structure, first, "empty heap has a first root"});
    return report;
  }

  std::vector<std::uint32_t> roots = collect_roots(pool, h, &v);
  for (std::uint32_t r : roots) {
    const auto& rec = pool.record(r);
    if (!rec.live)
      v.push_back({rule::structure, r, "retired slot in root list"});
    if (rec.prev != nil)
      v.push_back({rule::structure, r, "root has a sibling link"});
  }

  ForestWalk<Pool> walk;
  walk.run(pool, roots, [&](std::uint32_t node, std::string why) {
    v.push_back({rule::structure, node, std::move(why)});
  });
  {
    std::vector<char> root_seen(pool.slot_count(), 0);
    for (std::uint32_t r : roots) {
      if (root_seen[r]++)
        v.push_back({rule::structure, r, "root appears twice in root list"});
    }
  }

  report.nodes = walk.order.size();
  if (report.nodes != expected)
    v.push_back({rule::count, nil,
                 "heap count " + std::to_string(expected) + " but " + std::to_string(report.nodes) + " reachable"});

  for (std::uint32_t r : roots) {
    if (pool.key_less(r, first))
      v.push_back({rule::first_root, r, "root key below first root"});
  }

  for (std::uint32_t u : walk.order) {
    const auto& rec = pool.record(u);
    report.max_rank = std::max(report.max_rank, rec.rank);
    if (walk.parent[u] != nil && pool.key_less(u, walk.parent[u]))
      v.push_back({rule::heap_order, u, "key below parent key"});

    int r1 = -1, r2 = -1;
    if (rec.down != nil && rec.down < pool.slot_count()) {
      r1 = pool.record(rec.down).rank;
      std::uint32_t s = pool.record(rec.down).prev;
      if (s != nil && s < pool.slot_count())
        r2 = pool.record(s).rank;
    }
    int bound = combine_ranks(r1, r2);
    if (rec.rank < 0 || rec.rank > bound) {
      v.push_back({rule::rank_bound, u,
                   "rank " + std::to_string(rec.rank) + " outside [0, " + std::to_string(bound) + "]"});
      continue; // size and shape rules follow from the rank bound
    }
    if (walk.subtree[u] < fibonacci_floor(rec.rank, opts.strong_fibonacci))
      v.push_back({rule::size_bound, u,
                   "subtree size " + std::to_string(walk.subtree[u]) + " below F(" + std::to_string(rec.rank) + ")"});
    if (r2 >= 0) {
      int hi = std::max(r1, r2), lo = std::min(r1, r2);
      bool shaped = hi >= rec.rank || (hi == rec.rank - 1 && (lo == rec.rank - 1 || lo == rec.rank - 2));
      if (!shaped)
        v.push_back({rule::active_shape, u, "active child ranks do not fit node rank"});
    }
  }

  if (report.max_rank > max_rank_bound(report.nodes))
    v.push_back({rule::max_rank, nil,
                 "max rank " + std::to_string(report.max_rank) + " exceeds " +
                     std::to_string(max_rank_bound(report.nodes))});

  if (opts.root_multiplicity) {
    std::vector<int> per_rank;
    for (std::uint32_t r : roots) {
      int rk = pool.record(r).rank;
      if (rk < 0)
        continue;
      if (static_cast<std::size_t>(rk) >= per_rank.size())
        per_rank.resize(static_cast<std::size_t>(rk) + 1, 0);
      if (++per_rank[static_cast<std::size_t>(rk)] == 3)
        v.push_back({rule::root_multiplicity, r, "three roots of rank " + std::to_string(rk)});
    }
  }
  return report;
}

struct PotentialSnapshot {
  std::int64_t gamma = 0;  // critical nodes
  std::int64_t theta2 = 0; // sum over nodes of max(0, degree - 2 * rank)
  std::int64_t tau = 0;    // trees
  std::vector<std::pair<std::uint32_t, std::uint64_t>> subtree_sizes;

  // 3*gamma + 2*theta + tau, with the history term left out.
  std::int64_t partial_potential() const { return 3 * gamma + theta2 + tau; }
};

template <class Pool>
std::int64_t theta2_of_node(const Pool& pool, std::uint32_t u, std::uint32_t degree) {
  std::int64_t excess = static_cast<std::int64_t>(degree) - 2 * static_cast<std::int64_t>(pool.record(u).rank);
  return excess > 0 ? excess : 0;
}

/// An active node is critical when its active children's ranks (missing = -1) sum to an odd value.
template <class Pool>
bool is_critical(const Pool& pool, std::uint32_t u) {
  auto pos = pool.locate(u);
  if (!pos.active)
    return false;
  const auto& rec = pool.record(u);
  int r1 = -1, r2 = -1;
  if (rec.down != nil) {
    r1 = pool.record(rec.down).rank;
    std::uint32_t s = pool.record(rec.down).prev;
    if (s != nil)
      r2 = pool.record(s).rank;
  }
  return ((r1 + r2) & 1) != 0;
}

template <class Pool>
PotentialSnapshot potential_snapshot(const Pool& pool, HeapRef h) {
  PotentialSnapshot snap;
  std::vector<std::uint32_t> roots = collect_roots(pool, h);
  ForestWalk<Pool> walk;
  walk.run(pool, roots);
  snap.tau = static_cast<std::int64_t>(roots.size());
  snap.subtree_sizes.reserve(walk.order.size());
  for (std::uint32_t u : walk.order) {
    snap.theta2 += theta2_of_node(pool, u, walk.degree[u]);
    if (walk.parent[u] != nil && is_critical(pool, u))
      ++snap.gamma;
    snap.subtree_sizes.emplace_back(u, walk.subtree[u]);
  }
  return snap;
}

/// theta2 restricted to the trees hanging off `roots`.
template <class Pool>
std::int64_t theta2_of_forest(const Pool& pool, std::span<const std::uint32_t> roots) {
  std::int64_t total = 0;
  std::vector<std::uint32_t> stack(roots.begin(), roots.end());
  while (!stack.empty()) {
    std::uint32_t u = stack.back();
    stack.pop_back();
    std::uint32_t degree = 0;
    for (std::uint32_t c = pool.record(u).down; c != nil; c = pool.record(c).prev) {
      ++degree;
      stack.push_back(c);
    }
    total += theta2_of_node(pool, u, degree);
  }
  return total;
}

inline bool assert_join_neutrality(const PotentialSnapshot& before, const PotentialSnapshot& after) {
  return before.theta2 == after.theta2;
}

/// Brackets every 3-way join of a pool with a theta2 scan of the joined trees.
template <class Pool>
class JoinNeutralityMonitor {
public:
  explicit JoinNeutralityMonitor(Pool& pool) : pool_(pool) {
    pool_.set_join_observer([this](const JoinEvent& e) { observe(e); });
  }
  ~JoinNeutralityMonitor() { pool_.set_join_observer({}); }
  JoinNeutralityMonitor(const JoinNeutralityMonitor&) = delete;
  JoinNeutralityMonitor& operator=(const JoinNeutralityMonitor&) = delete;

  std::uint64_t joins_checked() const noexcept { return checked_; }
  std::uint64_t failures() const noexcept { return failures_; }

private:
  void observe(const JoinEvent& e) {
    if (e.phase == JoinPhase::before) {
      before_ = theta2_of_forest(pool_, std::span<const std::uint32_t>(e.roots));
      return;
    }
    std::uint32_t winner = e.roots[0];
    std::int64_t after = theta2_of_forest(pool_, std::span<const std::uint32_t>(&winner, 1));
    ++checked_;
    if (after != before_)
      ++failures_;
  }

  Pool& pool_;
  std::int64_t before_ = 0;
  std::uint64_t checked_ = 0;
  std::uint64_t failures_ = 0;
};

/// {"violations":[{"rule":..,"node":..,"detail":..}],"nodes":N,"max_rank":R}
/// `label` maps a slot index to the node name written in the report; when
/// empty, the slot index is written as a number.
std::string audit_to_json(const AuditReport& report,
                          const std::function<std::string(std::uint32_t)>& label = {});

} // namespace vheap
