#include "catch_amalgamated.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "heap_builders.hpp"
#include "vheap/invariants.hpp"

using namespace vheap;
using vheap::test::child_keys;
using vheap::test::children_of;
using vheap::test::leaf;
using vheap::test::node;
using vheap::test::Pool;
using vheap::test::root_list;

namespace {

// Brute-force ceiling: the smallest k with 2k >= s.
int ceil_half_oracle(int s) {
  int k = -1000;
  while (2 * k < s)
    ++k;
  return k;
}

void require_clean(const Pool& p, HeapRef h, AuditOptions o = {}) {
  AuditReport r = full_audit(p, h, o);
  INFO(audit_to_json(r));
  REQUIRE(r.ok());
}

} // namespace

TEST_CASE("rank formula", "[rank]") {
  CHECK(combine_ranks(3, 2) == 4);
  CHECK(combine_ranks(-1, -1) == 0);
  CHECK(combine_ranks(4, -1) == 3);
  // One-child form ceil((r - 1) / 2) + 1.
  for (int r = 0; r < 40; ++r)
    CHECK(combine_ranks(r, -1) == ceil_half_oracle(r - 1) + 1);
  for (int a = -1; a < 40; ++a)
    for (int b = -1; b < 40; ++b)
      REQUIRE(combine_ranks(a, b) == ceil_half_oracle(a + b) + 1);
}

TEST_CASE("pool and heap creation", "[core]") {
  Pool p;
  CHECK(p.live_count() == 0);
  HeapRef h = p.heap_new();
  CHECK(p.size(h) == 0);
  CHECK(p.empty(h));
  CHECK(p.first_root(h) == nil);
  CHECK_FALSE(p.find_min(h).has_value());

  p.insert(h, 5, 0);
  CHECK(p.find_min(h)->key == 5);

  Pool q;
  CHECK(p.id() != q.id());
  HeapRef hq = q.heap_new();
  NodeHandle x = q.insert(hq, 1, 0);
  CHECK_THROWS_WITH(p.key(x), "pool mismatch");
  CHECK_THROWS_WITH(p.insert(hq, 2, 0), "pool mismatch");
  CHECK_THROWS_WITH(p.meld(h, hq), "pool mismatch");
}

TEST_CASE("insert places new minimum first, others second", "[core]") {
  Pool p;
  HeapRef h = p.heap_new();
  p.insert(h, 7, 0);
  p.insert(h, 3, 1);
  p.insert(h, 9, 2);
  CHECK(p.find_min(h)->key == 3);
  CHECK(p.find_min(h)->item == 1);

  Pool q;
  HeapRef g = q.heap_new();
  NodeHandle five = q.insert(g, 5, 0);
  NodeHandle eight = q.insert(g, 8, 0);
  auto roots = root_list(q, g);
  REQUIRE(roots.size() == 2);
  CHECK(roots[0] == q.index_of(five));
  CHECK(roots[1] == q.index_of(eight));
  NodeHandle three = q.insert(g, 3, 0);
  CHECK(q.first_root(g) == q.index_of(three));
  CHECK(q.rank(three) == 0);
}

TEST_CASE("delete_min order", "[core]") {
  Pool p;
  HeapRef h = p.heap_new();
  for (std::int64_t k : {7, 3, 9})
    p.insert(h, k, 0);
  CHECK(p.delete_min(h).key == 3);
  CHECK(p.find_min(h)->key == 7);

  Pool s;
  HeapRef one = s.heap_new();
  s.insert(one, 42, 9);
  auto e = s.delete_min(one);
  CHECK(e.key == 42);
  CHECK(e.item == 9);
  CHECK(s.empty(one));
  CHECK(s.live_count() == 0);
  CHECK_THROWS_WITH(s.delete_min(one), "empty");
}

TEST_CASE("size bookkeeping", "[core]") {
  Pool p;
  HeapRef h = p.heap_new();
  for (int i = 0; i < 5; ++i)
    p.insert(h, i, 0);
  p.delete_min(h);
  p.delete_min(h);
  CHECK(p.size(h) == 3);
  CHECK_FALSE(p.empty(h));

  HeapRef a = p.heap_new(), b = p.heap_new();
  for (int i = 0; i < 3; ++i)
    p.insert(a, i, 0);
  for (int i = 0; i < 4; ++i)
    p.insert(b, i, 0);
  CHECK(p.size(p.meld(a, b)) == 7);
}

TEST_CASE("meld", "[core]") {
  Pool p;
  SECTION("empty operand is an identity") {
    HeapRef e = p.heap_new(), h = p.heap_new();
    p.insert(h, 4, 0);
    p.insert(h, 2, 0);
    HeapRef m = p.meld(e, h);
    CHECK(p.size(m) == 2);
    CHECK(p.find_min(m)->key == 2);
    require_clean(p, m);
  }
  SECTION("{3,9} with {5}") {
    HeapRef a = p.heap_new(), b = p.heap_new();
    p.insert(a, 3, 0);
    p.insert(a, 9, 0);
    p.insert(b, 5, 0);
    HeapRef m = p.meld(a, b);
    CHECK(p.find_min(m)->key == 3);
    CHECK(p.size(m) == 3);
    CHECK(root_list(p, m).size() == 3);
    CHECK_THROWS_WITH(p.size(a), "stale heap");
    CHECK_THROWS_WITH(p.insert(b, 1, 0), "stale heap");
    require_clean(p, m);
  }
  SECTION("ties keep the first heap's minimum") {
    HeapRef a = p.heap_new(), b = p.heap_new();
    p.insert(a, 4, 1);
    p.insert(b, 4, 2);
    CHECK(p.find_min(p.meld(a, b))->item == 1);
  }
  SECTION("sorted union") {
    HeapRef a = p.heap_new(), b = p.heap_new();
    std::vector<std::int64_t> in_a, in_b;
    std::mt19937_64 rng(3);
    for (int i = 0; i < 40; ++i) {
      std::int64_t k = static_cast<std::int64_t>(rng() % 50);
      p.insert(i % 3 ? a : b, k, 0);
      (i % 3 ? in_a : in_b).push_back(k);
    }
    p.delete_min(a); // give one side some structure
    in_a.erase(std::min_element(in_a.begin(), in_a.end()));
    std::vector<std::int64_t> all = in_a;
    all.insert(all.end(), in_b.begin(), in_b.end());
    HeapRef m = p.meld(a, b);
    std::vector<std::int64_t> out;
    while (!p.empty(m))
      out.push_back(p.delete_min(m).key);
    std::sort(all.begin(), all.end());
    CHECK(out == all);
  }
  SECTION("self meld is rejected") {
    HeapRef a = p.heap_new();
    CHECK_THROWS_WITH(p.meld(a, a), "cannot meld a heap with itself");
    CHECK(p.is_live(a));
  }
}

TEST_CASE("three_way_join", "[join]") {
  Pool p;
  SECTION("three singletons") {
    std::uint32_t a = leaf(p, 5), b = leaf(p, 7), c = leaf(p, 9);
    std::uint32_t w = p.three_way_join(a, b, c);
    CHECK(w == a);
    CHECK(child_keys(p, w) == std::vector<std::int64_t>{7, 9});
    CHECK(p.record(w).rank == 1);
    CHECK(p.telemetry().joins == 1);
  }
  SECTION("winner from any position, losers keep call order") {
    std::uint32_t a = leaf(p, 8), b = leaf(p, 6), c = leaf(p, 2);
    std::uint32_t w = p.three_way_join(a, b, c);
    CHECK(w == c);
    CHECK(child_keys(p, w) == std::vector<std::int64_t>{8, 6});
  }
  SECTION("larger-rank active child is moved last before linking") {
    std::uint32_t r2 = node(p, 20, {node(p, 21, {leaf(p, 22), leaf(p, 23)}), node(p, 24, {leaf(p, 25), leaf(p, 26)})});
    std::uint32_t r1 = node(p, 30, {leaf(p, 31), leaf(p, 32)});
    REQUIRE(p.record(r2).rank == 2);
    REQUIRE(p.record(r1).rank == 1);
    std::uint32_t w = node(p, 1, {r2, r1}); // last = rank 1, second-to-last = rank 2
    REQUIRE(p.record(w).rank == 3);
    std::uint32_t l1 = leaf(p, 50), l2 = leaf(p, 60);
    p.debug_set_rank(l1, 3);
    p.debug_set_rank(l2, 3);
    REQUIRE(p.three_way_join(w, l1, l2) == w);
    CHECK(children_of(p, w) == std::vector<std::uint32_t>{r1, r2, l1, l2});
    CHECK(p.record(r2).next == l1);
    CHECK(p.record(l2).next == w);
    CHECK(p.record(w).rank == 4);
  }
  SECTION("equal keys: first argument wins") {
    std::uint32_t a = leaf(p, 4), b = leaf(p, 4), c = leaf(p, 4);
    CHECK(p.three_way_join(a, b, c) == a);
  }
  SECTION("unequal ranks are a logic error") {
    std::uint32_t a = leaf(p, 1), b = leaf(p, 2), c = leaf(p, 3);
    p.debug_set_rank(c, 1);
    CHECK_THROWS_AS(p.three_way_join(a, b, c), std::logic_error);
  }
}

TEST_CASE("delete_min consolidation", "[consolidate]") {
  Pool p;
  HeapRef h = p.heap_new();
  SECTION("four singletons join into one rank-1 tree") {
    for (std::int64_t k : {1, 2, 3, 4})
      p.insert(h, k, 0);
    CHECK(p.delete_min(h).key == 1);
    auto roots = root_list(p, h);
    REQUIRE(roots.size() == 1);
    CHECK(p.record(roots[0]).key == 2);
    CHECK(p.record(roots[0]).rank == 1);
    // Root list after removing 1 is 4, 3, 2; join(4, 3, 2) -> 2 adopts 4 then 3.
    CHECK(child_keys(p, roots[0]) == std::vector<std::int64_t>{4, 3});
    require_clean(p, h, {.root_multiplicity = true});
  }
  SECTION("seven leftover singletons") {
    for (std::int64_t k = 1; k <= 8; ++k)
      p.insert(h, k, 0);
    p.delete_min(h);
    auto roots = root_list(p, h);
    std::multiset<int> ranks;
    for (auto r : roots)
      ranks.insert(p.record(r).rank);
    CHECK(ranks == std::multiset<int>{0, 1, 1});
    CHECK(p.telemetry().joins == 2);
    // Ascending rank order, then rotated so the minimum leads.
    CHECK(p.record(p.first_root(h)).key == 2);
    require_clean(p, h, {.root_multiplicity = true});
  }
  SECTION("two leftover roots do not join") {
    for (std::int64_t k : {1, 2, 3})
      p.insert(h, k, 0);
    p.delete_min(h);
    CHECK(root_list(p, h).size() == 2);
    CHECK(p.telemetry().joins == 0);
  }
  SECTION("cascade 1,1,1,2,2 -> 3") {
    auto rank1 = [&](std::int64_t base) { return p.three_way_join(leaf(p, base), leaf(p, base + 1), leaf(p, base + 2)); };
    std::uint32_t a = rank1(10), b = rank1(20), c = rank1(30);
    std::uint32_t d = p.three_way_join(rank1(40), rank1(50), rank1(60));
    std::uint32_t e = p.three_way_join(rank1(70), rank1(80), rank1(90));
    REQUIRE(p.record(d).rank == 2);
    p.reset_telemetry();
    p.insert(h, 0, 0);
    for (std::uint32_t t : {a, b, c})
      p.adopt_tree(h, t, 3);
    for (std::uint32_t t : {d, e})
      p.adopt_tree(h, t, 9);
    require_clean(p, h);
    p.delete_min(h);
    auto roots = root_list(p, h);
    REQUIRE(roots.size() == 1);
    CHECK(p.record(roots[0]).rank == 3);
    CHECK(p.telemetry().joins == 2);
    CHECK(p.size(h) == 27);
    require_clean(p, h, {.root_multiplicity = true});
  }
}

TEST_CASE("decrease_key", "[decrease]") {
  Pool p;
  HeapRef h = p.heap_new();

  SECTION("root becomes first without structural change") {
    p.insert(h, 3, 0);
    NodeHandle nine = p.insert(h, 9, 0);
    p.decrease_key(h, nine, 1);
    CHECK(p.first_root(h) == p.index_of(nine));
    CHECK(p.telemetry().cuts == 0);
    CHECK(root_list(p, h).size() == 2);
  }

  SECTION("active child still above its parent stays put") {
    std::uint32_t x = leaf(p, 9);
    std::uint32_t par = node(p, 4, {x});
    p.adopt_tree(h, par, 2);
    p.decrease_key(h, p.handle_of(x), 6);
    CHECK(p.telemetry().cuts == 0);
    CHECK(p.record(par).down == x);
    CHECK(p.record(par).rank == 1);
    CHECK(p.record(x).key == 6);
    require_clean(p, h);
  }

  SECTION("larger-rank active child is glued into the vacated slot") {
    std::uint32_t c2 = node(p, 60, {node(p, 61, {leaf(p, 62), leaf(p, 63)}), node(p, 64, {leaf(p, 65), leaf(p, 66)})});
    std::uint32_t c1 = node(p, 70, {leaf(p, 71), leaf(p, 72)});
    std::uint32_t x = node(p, 50, {c2, c1});
    std::uint32_t q = leaf(p, 10);
    std::uint32_t par = node(p, 1, {q, x});
    REQUIRE(p.record(x).rank == 3);
    REQUIRE(p.record(par).rank == 3);
    p.adopt_tree(h, par, 13);
    require_clean(p, h);

    p.decrease_key(h, p.handle_of(x), 0);
    CHECK(children_of(p, par) == std::vector<std::uint32_t>{q, c2});
    CHECK(p.record(c2).next == par);
    CHECK(children_of(p, x) == std::vector<std::uint32_t>{c1});
    CHECK(p.record(x).rank == 1);
    CHECK(p.record(par).rank == 2);
    CHECK(p.first_root(h) == x);
    CHECK(p.telemetry().rank_updates == 1);
    require_clean(p, h);
  }

  SECTION("tie between active children picks the last") {
    std::uint32_t a = leaf(p, 60), b = leaf(p, 61);
    std::uint32_t x = node(p, 50, {a, b});
    std::uint32_t par = node(p, 1, {x});
    p.adopt_tree(h, par, 4);
    p.decrease_key(h, p.handle_of(x), 0);
    CHECK(children_of(p, par) == std::vector<std::uint32_t>{b});
    CHECK(children_of(p, x) == std::vector<std::uint32_t>{a});
    require_clean(p, h);
  }

  SECTION("non-active node is cut even when order holds") {
    std::uint32_t x = leaf(p, 9), u = leaf(p, 10), v = leaf(p, 11);
    std::uint32_t par = node(p, 4, {x, u, v});
    p.adopt_tree(h, par, 4);
    p.decrease_key(h, p.handle_of(x), 6);
    CHECK(p.telemetry().cuts == 1);
    CHECK(children_of(p, par) == std::vector<std::uint32_t>{u, v});
    CHECK(p.record(u).prev == nil);
    CHECK(root_list(p, h).size() == 2);
    CHECK(p.telemetry().rank_updates == 0);
    require_clean(p, h);
  }

  SECTION("non-active inner node glues its child between siblings") {
    std::uint32_t s = leaf(p, 20), y = leaf(p, 31), u = leaf(p, 21), v = leaf(p, 22);
    std::uint32_t x = node(p, 30, {y});
    std::uint32_t par = node(p, 4, {s, x, u, v});
    p.adopt_tree(h, par, 6);
    p.decrease_key(h, p.handle_of(x), 2);
    CHECK(children_of(p, par) == std::vector<std::uint32_t>{s, y, u, v});
    CHECK(p.record(s).next == y);
    CHECK(p.record(u).prev == y);
    CHECK(p.record(x).rank == 0);
    CHECK(p.first_root(h) == x);
    require_clean(p, h);
  }

  SECTION("errors") {
    NodeHandle x = p.insert(h, 5, 0);
    CHECK_THROWS_WITH(p.decrease_key(h, x, 6), "key increase not supported");
    p.decrease_key(h, x, 5); // equal key is fine
    p.decrease_key_by(h, x, 2);
    CHECK(p.key(x) == 3);
    CHECK_THROWS_WITH(p.decrease_key_by(h, x, -1), "key increase not supported");
    p.delete_min(h);
    CHECK_THROWS_WITH(p.decrease_key(h, x, 1), "stale handle");
  }
}

TEST_CASE("rank propagation", "[propagate]") {
  Pool p;
  HeapRef h = p.heap_new();

  SECTION("critical chain drops one rank per level") {
    std::uint32_t x = leaf(p, 50);
    std::uint32_t b = node(p, 40, {x});
    std::uint32_t a = node(p, 20, {leaf(p, 30), b});
    std::uint32_t d = node(p, 10, {leaf(p, 11), leaf(p, 12)});
    std::uint32_t g = node(p, 1, {d, a});
    REQUIRE(p.record(b).rank == 1);
    REQUIRE(p.record(a).rank == 2);
    REQUIRE(p.record(g).rank == 3);
    p.adopt_tree(h, g, 8);
    require_clean(p, h);

    p.decrease_key(h, p.handle_of(x), 0);
    CHECK(p.record(b).rank == 0);
    CHECK(p.record(a).rank == 1);
    CHECK(p.record(g).rank == 2);
    CHECK(p.telemetry().rank_updates == 3);
    CHECK(p.telemetry().longest_critical_path == 3);
    CHECK(p.telemetry().propagation_faults == 0);
    require_clean(p, h);
  }

  SECTION("unchanged recalculated rank stops immediately") {
    std::uint32_t x = leaf(p, 50);
    std::uint32_t b = node(p, 40, {leaf(p, 41), x});
    p.adopt_tree(h, b, 3);
    p.decrease_key(h, p.handle_of(x), 0);
    CHECK(p.record(b).rank == 1);
    CHECK(p.telemetry().rank_updates == 0);
    require_clean(p, h);
  }

  SECTION("non-active start node is re-ranked, walk stops there") {
    std::uint32_t x = leaf(p, 50);
    std::uint32_t s = node(p, 5, {x});
    std::uint32_t r = node(p, 1, {s, leaf(p, 6), leaf(p, 7)});
    REQUIRE(p.record(s).rank == 1);
    REQUIRE(p.record(r).rank == 1);
    p.adopt_tree(h, r, 5);
    p.decrease_key(h, p.handle_of(x), 0);
    CHECK(p.record(s).rank == 0);
    CHECK(p.record(r).rank == 1);
    CHECK(p.telemetry().rank_updates == 1);
    require_clean(p, h);
  }
}

TEST_CASE("handles stay valid across meld and die with their node", "[handles]") {
  Pool p;
  HeapRef a = p.heap_new(), b = p.heap_new();
  NodeHandle x = p.insert(a, 10, 1);
  NodeHandle y = p.insert(b, 20, 2);
  HeapRef m = p.meld(a, b);
  p.decrease_key(m, y, 5);
  CHECK(p.find_min(m)->item == 2);
  p.delete_min(m);
  CHECK_FALSE(p.contains(y));
  NodeHandle z = p.insert(m, 30, 3); // reuses y's slot
  CHECK(z.index == y.index);
  CHECK(z.stamp != y.stamp);
  CHECK_THROWS_WITH(p.decrease_key(m, y, 0), "stale handle");
  CHECK_THROWS_WITH(p.key(y), "stale handle");
  CHECK(p.key(z) == 30);
  CHECK(p.key(x) == 10);
  require_clean(p, m);
}

TEST_CASE("random operations agree with a multiset and keep every invariant", "[property]") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    CAPTURE(seed);
    Pool p;
    HeapRef h = p.heap_new();
    std::mt19937_64 rng(seed);
    std::multiset<std::int64_t> model;
    std::map<std::uint64_t, std::pair<NodeHandle, std::int64_t>> live;
    std::uint64_t next_item = 0;
    for (int step = 0; step < 600; ++step) {
      unsigned roll = rng() % 100;
      bool after_delete = false;
      if (roll < 45 || live.empty()) {
        std::int64_t k = static_cast<std::int64_t>(rng() % 200);
        std::uint64_t item = next_item++;
        live[item] = {p.insert(h, k, item), k};
        model.insert(k);
      } else if (roll < 70) {
        auto e = p.delete_min(h);
        REQUIRE(e.key == *model.begin());
        REQUIRE(live.at(e.item).second == e.key);
        model.erase(model.begin());
        live.erase(e.item);
        after_delete = true;
      } else {
        auto it = live.begin();
        std::advance(it, static_cast<long>(rng() % live.size()));
        auto& [handle, key] = it->second;
        std::int64_t nk = key - static_cast<std::int64_t>(rng() % 50);
        model.erase(model.find(key));
        model.insert(nk);
        p.decrease_key(h, handle, nk);
        key = nk;
      }
      REQUIRE(p.size(h) == model.size());
      if (!model.empty())
        REQUIRE(p.find_min(h)->key == *model.begin());
      require_clean(p, h, {.root_multiplicity = after_delete});
    }
    CHECK(p.telemetry().propagation_faults == 0);
  }
}
