#pragma once

// Violation heap: a mergeable priority queue with O(1) amortized insert,
// meld and decrease-key, and O(log n) amortized delete-min.
//
// Every node carries three links and a rank:
//   down  - last (newest) child, or nil
//   next  - root:        next root of the circular root list
//           last child:  the parent
//           other child: the next-newer sibling
//   prev  - next-older sibling; nil for first children and for roots
//
// The last two children of a node are its "active" children. A node's rank
// is bounded by ceil((r1 + r2) / 2) + 1 over the ranks of its active
// children (a missing child counts as -1). Instead of cascading cuts,
// decrease-key glues the larger-rank active child into the vacated slot and
// walks up the active chain lowering ranks one step at a time.

#include <algorithm>
#include <array>
#include <atomic>
#include <concepts>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace vheap {

class heap_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint32_t nil = std::numeric_limits<std::uint32_t>::max();

/// Rank implied by two active-child ranks, ceil((a + b) / 2) + 1.
/// Pass -1 for a missing child. Right shift of a signed value is a floor
/// division in C++20, so ceil(-1/2) comes out as 0.
constexpr int combine_ranks(int a, int b) noexcept { return ((a + b + 1) >> 1) + 1; }

/// Generation-stamped reference to a node slot.
struct NodeHandle {
  std::uint32_t pool = 0;
  std::uint32_t index = nil;
  std::uint32_t stamp = 0;

  bool is_nil() const noexcept { return index == nil; }
  friend bool operator==(const NodeHandle&, const NodeHandle&) = default;
};

/// Identity of one heap inside a pool. Meld retires both operands.
struct HeapRef {
  std::uint32_t pool = 0;
  std::uint32_t index = nil;
  std::uint32_t stamp = 0;

  friend bool operator==(const HeapRef&, const HeapRef&) = default;
};

struct Telemetry {
  std::uint64_t comparisons = 0;
  std::uint64_t inserts = 0;
  std::uint64_t melds = 0;
  std::uint64_t decrease_keys = 0;
  std::uint64_t delete_mins = 0;
  std::uint64_t joins = 0;
  std::uint64_t cuts = 0;
  std::uint64_t rank_updates = 0;      // rank mutations during propagation
  std::uint64_t propagation_faults = 0; // propagation steps that did not lower a rank by exactly 1
  std::uint32_t longest_critical_path = 0;
  int max_rank = 0;
};

enum class JoinPhase { before, after };

/// Reported around every 3-way join. `roots` are the three operands in call
/// order for `before`; for `after`, roots[0] is the winner.
struct JoinEvent {
  JoinPhase phase;
  std::array<std::uint32_t, 3> roots;
};

namespace detail {
inline std::uint32_t next_pool_id() {
  static std::atomic<std::uint32_t> counter{1};
  return counter.fetch_add(1, std::memory_order_relaxed);
}
} // namespace detail

template <class Key, class Item = std::uint64_t, class Compare = std::less<Key>>
class ViolationPool {
public:
  using key_type = Key;
  using item_type = Item;
  using handle_type = NodeHandle;
  using heap_type = HeapRef;

  struct Entry {
    Key key;
    Item item;
  };

  struct NodeRecord {
    Key key;
    Item item;
    int rank = 0;
    std::uint32_t down = nil;
    std::uint32_t next = nil;
    std::uint32_t prev = nil;
    std::uint32_t stamp = 0;
    bool live = false;
  };

  enum class Place { root, last_child, inner_child };

  /// Where a node sits, resolved from its own links in O(1).
  struct Position {
    Place place;
    bool active;
    std::uint32_t parent; // nil unless active
  };

  explicit ViolationPool(Compare less = Compare()) : id_(detail::next_pool_id()), less_(std::move(less)) {}

  ViolationPool(const ViolationPool&) = delete;
  ViolationPool& operator=(const ViolationPool&) = delete;
  ViolationPool(ViolationPool&&) noexcept = default;
  ViolationPool& operator=(ViolationPool&&) noexcept = default;

  std::uint32_t id() const noexcept { return id_; }
  std::size_t live_count() const noexcept { return live_nodes_; }
  std::size_t slot_count() const noexcept { return nodes_.size(); }

  HeapRef heap_new() {
    std::uint32_t slot;
    if (!free_heaps_.empty()) {
      slot = free_heaps_.back();
      free_heaps_.pop_back();
    } else {
      slot = static_cast<std::uint32_t>(heaps_.size());
      heaps_.push_back({});
    }
    HeapState& hs = heaps_[slot];
    hs.first = nil;
    hs.count = 0;
    hs.live = true;
    return HeapRef{id_, slot, hs.stamp};
  }

  bool is_live(HeapRef h) const noexcept {
    return h.pool == id_ && h.index < heaps_.size() && heaps_[h.index].live && heaps_[h.index].stamp == h.stamp;
  }

  bool contains(NodeHandle x) const noexcept {
    return x.pool == id_ && x.index < nodes_.size() && nodes_[x.index].live && nodes_[x.index].stamp == x.stamp;
  }

  std::size_t size(HeapRef h) const { return state(h).count; }
  bool empty(HeapRef h) const { return state(h).count == 0; }

  const Key& key(NodeHandle x) const { return nodes_[resolve(x)].key; }
  const Item& item(NodeHandle x) const { return nodes_[resolve(x)].item; }
  int rank(NodeHandle x) const { return nodes_[resolve(x)].rank; }

  std::optional<Entry> find_min(HeapRef h) const {
    const HeapState& hs = state(h);
    if (hs.count == 0)
      return std::nullopt;
    const NodeRecord& n = nodes_[hs.first];
    return Entry{n.key, n.item};
  }

  NodeHandle insert(HeapRef h, Key key, Item item) {
    HeapState& hs = state(h);
    std::uint32_t x = allocate(std::move(key), std::move(item));
    add_root(hs, x);
    ++hs.count;
    ++telemetry_.inserts;
    return handle_of(x);
  }

  /// Combines two heaps of this pool. Both operands are retired; node
  /// handles stay valid. On equal minimums the first heap's root leads.
  HeapRef meld(HeapRef a, HeapRef b) {
    if (a.pool != id_ || b.pool != id_)
      throw heap_error("pool mismatch");
    if (a == b)
      throw heap_error("cannot meld a heap with itself");
    HeapState sa = state(a);
    HeapState sb = state(b);
    retire_heap(a.index);
    retire_heap(b.index);
    HeapRef out = heap_new();
    HeapState& hs = heaps_[out.index];
    ++telemetry_.melds;
    if (sa.count == 0) {
      hs.first = sb.first;
    } else if (sb.count == 0) {
      hs.first = sa.first;
    } else {
      std::uint32_t after_a = nodes_[sa.first].next;
      nodes_[sa.first].next = nodes_[sb.first].next;
      nodes_[sb.first].next = after_a;
      hs.first = less(sb.first, sa.first) ? sb.first : sa.first;
    }
    hs.count = sa.count + sb.count;
    return out;
  }

  void decrease_key(HeapRef h, NodeHandle xh, Key new_key) {
    HeapState& hs = state(h);
    std::uint32_t x = resolve(xh);
    if (less_(nodes_[x].key, new_key))
      throw heap_error("key increase not supported");
    ++telemetry_.decrease_keys;
    nodes_[x].key = std::move(new_key);

    Position pos = locate(x);
    if (pos.place == Place::root) {
      if (less(x, hs.first))
        hs.first = x;
      return;
    }
    if (pos.active && !less(x, pos.parent))
      return;

    cut_and_glue(x, pos.place);
    set_rank(x, recalc_rank_at(x));
    add_root(hs, x);
    if (pos.active)
      propagate_ranks(pos.parent);
  }

  void decrease_key_by(HeapRef h, NodeHandle x, Key delta)
    requires std::integral<Key>
  {
    if (delta < 0)
      throw heap_error("key increase not supported");
    decrease_key(h, x, static_cast<Key>(key(x) - delta));
  }

  Entry delete_min(HeapRef h) {
    HeapState& hs = state(h);
    if (hs.count == 0)
      throw heap_error("empty");
    ++telemetry_.delete_mins;
    std::uint32_t z = hs.first;

    scratch_.clear();
    for (std::uint32_t r = nodes_[z].next; r != z; r = nodes_[r].next)
      scratch_.push_back(r);
    std::size_t mark = scratch_.size();
    for (std::uint32_t c = nodes_[z].down; c != nil; c = nodes_[c].prev)
      scratch_.push_back(c);
    std::reverse(scratch_.begin() + static_cast<std::ptrdiff_t>(mark), scratch_.end());
    for (std::size_t i = mark; i < scratch_.size(); ++i) {
      nodes_[scratch_[i]].prev = nil;
      nodes_[scratch_[i]].next = nil;
    }

    Entry out{std::move(nodes_[z].key), std::move(nodes_[z].item)};
    retire_node(z);
    --hs.count;
    hs.first = nil;
    consolidate(hs);
    return out;
  }

  // ---------------------------------------------------------------------
  // Structural access for auditors and tests. None of these keep a heap's
  // root list or count consistent on their own.

  const NodeRecord& record(std::uint32_t index) const { return nodes_.at(index); }
  std::uint32_t first_root(HeapRef h) const { return state(h).first; }
  NodeHandle handle_of(std::uint32_t index) const { return NodeHandle{id_, index, nodes_[index].stamp}; }
  std::uint32_t index_of(NodeHandle x) const { return resolve(x); }

  /// Formula rank over the current last two children; does not mutate.
  int recalc_rank(NodeHandle x) const { return recalc_rank_at(resolve(x)); }

  Position locate(std::uint32_t x) const {
    std::uint32_t n = nodes_[x].next;
    if (nodes_[n].down == x)
      return {Place::last_child, true, n};
    if (nodes_[n].prev == x) {
      std::uint32_t after = nodes_[n].next;
      if (nodes_[after].down == n)
        return {Place::inner_child, true, after};
      return {Place::inner_child, false, nil};
    }
    return {Place::root, false, nil};
  }

  /// 3-way join of three detached roots of equal rank. Returns the winner.
  std::uint32_t three_way_join(std::uint32_t a, std::uint32_t b, std::uint32_t c) {
    if (nodes_[a].rank != nodes_[b].rank || nodes_[a].rank != nodes_[c].rank)
      throw std::logic_error("3-way join on roots of unequal rank");
    if (join_observer_)
      join_observer_(JoinEvent{JoinPhase::before, {a, b, c}});

    std::uint32_t w = a, l1 = b, l2 = c;
    if (less(b, w)) {
      w = b;
      l1 = a;
      l2 = c;
    }
    if (less(c, w)) {
      w = c;
      l1 = a;
      l2 = b;
    }

    std::uint32_t last = nodes_[w].down;
    if (last != nil) {
      std::uint32_t second = nodes_[last].prev;
      if (second != nil && nodes_[second].rank > nodes_[last].rank)
        swap_last_two_children(w);
    }
    append_child(w, l1);
    append_child(w, l2);
    set_rank(w, nodes_[w].rank + 1);
    ++telemetry_.joins;

    if (join_observer_)
      join_observer_(JoinEvent{JoinPhase::after, {w, l1, l2}});
    return w;
  }

  /// A single-node tree not yet in any heap.
  std::uint32_t make_detached(Key key, Item item) { return allocate(std::move(key), std::move(item)); }

  void append_child(std::uint32_t parent, std::uint32_t child) {
    std::uint32_t last = nodes_[parent].down;
    nodes_[child].prev = last;
    if (last != nil)
      nodes_[last].next = child;
    nodes_[child].next = parent;
    nodes_[parent].down = child;
  }

  /// Puts a detached tree into the root list of `h`, counting `subtree_size` nodes.
  void adopt_tree(HeapRef h, std::uint32_t root, std::size_t subtree_size) {
    HeapState& hs = state(h);
    nodes_[root].prev = nil;
    add_root(hs, root);
    hs.count += subtree_size;
  }

  void debug_set_rank(std::uint32_t index, int r) { nodes_.at(index).rank = r; }

  const Telemetry& telemetry() const noexcept { return telemetry_; }
  void reset_telemetry() noexcept { telemetry_ = Telemetry{}; }

  void set_join_observer(std::function<void(const JoinEvent&)> fn) { join_observer_ = std::move(fn); }

  bool key_less(std::uint32_t a, std::uint32_t b) const { return less_(nodes_[a].key, nodes_[b].key); }

private:
  struct HeapState {
    std::uint32_t first = nil;
    std::size_t count = 0;
    std::uint32_t stamp = 0;
    bool live = false;
  };

  const HeapState& state(HeapRef h) const {
    if (h.pool != id_)
      throw heap_error("pool mismatch");
    if (h.index >= heaps_.size() || !heaps_[h.index].live || heaps_[h.index].stamp != h.stamp)
      throw heap_error("stale heap");
    return heaps_[h.index];
  }
  HeapState& state(HeapRef h) { return const_cast<HeapState&>(std::as_const(*this).state(h)); }

  std::uint32_t resolve(NodeHandle x) const {
    if (x.pool != id_)
      throw heap_error("pool mismatch");
    if (!contains(x))
      throw heap_error("stale handle");
    return x.index;
  }

  bool less(std::uint32_t a, std::uint32_t b) {
    ++telemetry_.comparisons;
    return less_(nodes_[a].key, nodes_[b].key);
  }

  std::uint32_t allocate(Key key, Item item) {
    std::uint32_t x;
    if (!free_nodes_.empty()) {
      x = free_nodes_.back();
      free_nodes_.pop_back();
    } else {
      if (nodes_.size() >= nil)
        throw heap_error("pool exhausted");
      x = static_cast<std::uint32_t>(nodes_.size());
      nodes_.push_back(NodeRecord{std::move(key), std::move(item)});
      nodes_[x].live = true;
      ++live_nodes_;
      return x;
    }
    NodeRecord& n = nodes_[x];
    n.key = std::move(key);
    n.item = std::move(item);
    n.rank = 0;
    n.down = n.next = n.prev = nil;
    n.live = true;
    ++live_nodes_;
    return x;
  }

  void retire_node(std::uint32_t x) {
    NodeRecord& n = nodes_[x];
    n.live = false;
    ++n.stamp;
    n.down = n.next = n.prev = nil;
    free_nodes_.push_back(x);
    --live_nodes_;
  }

  void retire_heap(std::uint32_t slot) {
    heaps_[slot].live = false;
    ++heaps_[slot].stamp;
    free_heaps_.push_back(slot);
  }

  void set_rank(std::uint32_t x, int r) {
    nodes_[x].rank = r;
    telemetry_.max_rank = std::max(telemetry_.max_rank, r);
  }

  int recalc_rank_at(std::uint32_t x) const {
    std::uint32_t last = nodes_[x].down;
    if (last == nil)
      return combine_ranks(-1, -1);
    std::uint32_t second = nodes_[last].prev;
    return combine_ranks(nodes_[last].rank, second == nil ? -1 : nodes_[second].rank);
  }

  // Root-list insertion: second position, or first if it beats the minimum.
  void add_root(HeapState& hs, std::uint32_t x) {
    nodes_[x].prev = nil;
    if (hs.first == nil) {
      nodes_[x].next = x;
      hs.first = x;
      return;
    }
    nodes_[x].next = nodes_[hs.first].next;
    nodes_[hs.first].next = x;
    if (less(x, hs.first))
      hs.first = x;
  }

  void swap_last_two_children(std::uint32_t w) {
    std::uint32_t last = nodes_[w].down;
    std::uint32_t second = nodes_[last].prev;
    std::uint32_t before = nodes_[second].prev;
    if (before != nil)
      nodes_[before].next = last;
    nodes_[last].prev = before;
    nodes_[last].next = second;
    nodes_[second].prev = last;
    nodes_[second].next = w;
    nodes_[w].down = second;
  }

  // Detaches the larger-rank active child of x (last child on ties).
  std::uint32_t detach_glue_child(std::uint32_t x) {
    std::uint32_t last = nodes_[x].down;
    if (last == nil)
      return nil;
    std::uint32_t second = nodes_[last].prev;
    if (second != nil && nodes_[second].rank > nodes_[last].rank) {
      nodes_[last].prev = nodes_[second].prev;
      if (nodes_[second].prev != nil)
        nodes_[nodes_[second].prev].next = last;
      return second;
    }
    nodes_[x].down = second;
    if (second != nil)
      nodes_[second].next = x;
    return last;
  }

  // Removes x's subtree from its sibling list and splices the glue child
  // (if any) into the vacated slot.
  void cut_and_glue(std::uint32_t x, Place place) {
    ++telemetry_.cuts;
    std::uint32_t y = detach_glue_child(x);
    std::uint32_t before = nodes_[x].prev;
    std::uint32_t after = nodes_[x].next; // parent if x was the last child

    if (y != nil) {
      nodes_[y].prev = before;
      nodes_[y].next = after;
      if (before != nil)
        nodes_[before].next = y;
      if (place == Place::last_child)
        nodes_[after].down = y;
      else
        nodes_[after].prev = y;
    } else {
      if (before != nil)
        nodes_[before].next = after;
      if (place == Place::last_child)
        nodes_[after].down = before;
      else
        nodes_[after].prev = before;
    }
    nodes_[x].prev = nil;
    nodes_[x].next = nil;
  }

  // Walks up from the former parent of a cut active node. The start node is
  // always re-ranked; the walk moves on only through active nodes.
  void propagate_ranks(std::uint32_t start) {
    std::uint32_t c = start;
    std::uint32_t steps = 0;
    for (;;) {
      int r = recalc_rank_at(c);
      if (r >= nodes_[c].rank)
        break;
      if (nodes_[c].rank - r != 1)
        ++telemetry_.propagation_faults;
      nodes_[c].rank = r;
      ++telemetry_.rank_updates;
      ++steps;
      Position pos = locate(c);
      if (!pos.active)
        break;
      c = pos.parent;
    }
    telemetry_.longest_critical_path = std::max(telemetry_.longest_critical_path, steps);
  }

  // At most two roots per rank survive; the root list is rebuilt in
  // ascending rank order with the minimum first.
  void consolidate(HeapState& hs) {
    int top = -1;
    for (std::uint32_t t : scratch_) {
      for (;;) {
        auto r = static_cast<std::size_t>(nodes_[t].rank);
        if (r >= table_.size())
          table_.resize(std::max(r + 1, table_.size() * 2), {nil, nil});
        top = std::max(top, static_cast<int>(r));
        auto& slot = table_[r];
        if (slot[0] == nil) {
          slot[0] = t;
          break;
        }
        if (slot[1] == nil) {
          slot[1] = t;
          break;
        }
        std::uint32_t a = slot[0], b = slot[1];
        slot = {nil, nil};
        t = three_way_join(a, b, t);
      }
    }

    std::uint32_t head = nil, tail = nil, best = nil;
    for (int r = 0; r <= top; ++r) {
      auto& slot = table_[static_cast<std::size_t>(r)];
      for (std::uint32_t t : slot) {
        if (t == nil)
          continue;
        nodes_[t].prev = nil;
        if (head == nil)
          head = t;
        else
          nodes_[tail].next = t;
        tail = t;
        if (best == nil || less(t, best))
          best = t;
      }
      slot = {nil, nil};
    }
    if (head != nil)
      nodes_[tail].next = head;
    hs.first = best;
  }

  std::uint32_t id_;
  Compare less_;
  std::vector<NodeRecord> nodes_;
  std::vector<std::uint32_t> free_nodes_;
  std::vector<HeapState> heaps_;
  std::vector<std::uint32_t> free_heaps_;
  std::size_t live_nodes_ = 0;
  std::vector<std::uint32_t> scratch_;
  std::vector<std::array<std::uint32_t, 2>> table_;
  Telemetry telemetry_;
  std::function<void(const JoinEvent&)> join_observer_;
};

} // namespace vheap
