#pragma once

// Baseline heaps for benchmarking, shaped like ViolationPool: a pool owns
// the elements, heaps are small ids inside it, handles survive meld.

#include <cstdint>
#include <optional>
#include <vector>

namespace vheap {

struct BaselineCounters {
  std::uint64_t comparisons = 0;
  std::uint64_t links = 0;
  std::uint64_t cuts = 0;
};

/// Array-backed binary min-heap with a position index per element.
/// Meld re-inserts the smaller heap into the larger one.
class BinaryPool {
public:
  struct Entry {
    std::int64_t key;
    std::uint64_t item;
  };
  using handle_type = std::uint32_t;
  using heap_type = std::uint32_t;

  heap_type heap_new();
  handle_type insert(heap_type h, std::int64_t key, std::uint64_t item);
  void decrease_key(heap_type h, handle_type x, std::int64_t key);
  std::optional<Entry> find_min(heap_type h) const;
  Entry delete_min(heap_type h);
  heap_type meld(heap_type a, heap_type b);
  std::size_t size(heap_type h) const { return heaps_.at(h).size(); }
  bool empty(heap_type h) const { return size(h) == 0; }

  const BaselineCounters& counters() const noexcept { return counters_; }

private:
  struct Elem {
    std::int64_t key;
    std::uint64_t item;
    std::uint32_t pos;
  };
  bool less(std::uint32_t a, std::uint32_t b) {
    ++counters_.comparisons;
    return elems_[a].key < elems_[b].key;
  }
  void place(std::vector<std::uint32_t>& heap, std::size_t pos, std::uint32_t x) {
    heap[pos] = x;
    elems_[x].pos = static_cast<std::uint32_t>(pos);
  }
  void sift_up(std::vector<std::uint32_t>& heap, std::size_t pos);
  void sift_down(std::vector<std::uint32_t>& heap, std::size_t pos);

  std::vector<Elem> elems_;
  std::vector<std::vector<std::uint32_t>> heaps_;
  BaselineCounters counters_;
};

/// Two-pass pairing heap (leftmost-child / sibling / back pointers).
class PairingPool {
public:
  struct Entry {
    std::int64_t key;
    std::uint64_t item;
  };
  using handle_type = std::uint32_t;
  using heap_type = std::uint32_t;

  heap_type heap_new();
  handle_type insert(heap_type h, std::int64_t key, std::uint64_t item);
  void decrease_key(heap_type h, handle_type x, std::int64_t key);
  std::optional<Entry> find_min(heap_type h) const;
  Entry delete_min(heap_type h);
  heap_type meld(heap_type a, heap_type b);
  std::size_t size(heap_type h) const { return heaps_.at(h).count; }
  bool empty(heap_type h) const { return size(h) == 0; }

  const BaselineCounters& counters() const noexcept { return counters_; }

private:
  static constexpr std::uint32_t none = 0xffffffffu;
  struct Node {
    std::int64_t key;
    std::uint64_t item;
    std::uint32_t child = none;
    std::uint32_t sibling = none;
    std::uint32_t back = none; // parent if leftmost child, else left sibling
  };
  struct Heap {
    std::uint32_t root = none;
    std::size_t count = 0;
  };
  std::uint32_t link(std::uint32_t a, std::uint32_t b);
  std::uint32_t combine_siblings(std::uint32_t first);

  std::vector<Node> nodes_;
  std::vector<Heap> heaps_;
  std::vector<std::uint32_t> pass_;
  BaselineCounters counters_;
};

} // namespace vheap
