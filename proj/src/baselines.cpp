#include "vheap/baselines.hpp"

#include <stdexcept>
#include <utility>

namespace vheap {

BinaryPool::heap_type BinaryPool::heap_new() {
  heaps_.emplace_back();
  return static_cast<heap_type>(heaps_.size() - 1);
}

BinaryPool::handle_type BinaryPool::insert(heap_type h, std::int64_t key, std::uint64_t item) {
  auto& heap = heaps_.at(h);
  auto x = static_cast<std::uint32_t>(elems_.size());
  elems_.push_back({key, item, 0});
  heap.push_back(x);
  place(heap, heap.size() - 1, x);
  sift_up(heap, heap.size() - 1);
  return x;
}

void BinaryPool::sift_up(std::vector<std::uint32_t>& heap, std::size_t pos) {
  std::uint32_t x = heap[pos];
  while (pos > 0) {
    std::size_t parent = (pos - 1) / 2;
    if (!less(x, heap[parent]))
      break;
    place(heap, pos, heap[parent]);
    pos = parent;
  }
  place(heap, pos, x);
}

void BinaryPool::sift_down(std::vector<std::uint32_t>& heap, std::size_t pos) {
  std::uint32_t x = heap[pos];
  std::size_t n = heap.size();
  for (;;) {
    std::size_t child = 2 * pos + 1;
    if (child >= n)
      break;
    if (child + 1 < n && less(heap[child + 1], heap[child]))
      ++child;
    if (!less(heap[child], x))
      break;
    place(heap, pos, heap[child]);
    pos = child;
  }
  place(heap, pos, x);
}

void BinaryPool::decrease_key(heap_type h, handle_type x, std::int64_t key) {
  auto& heap = heaps_.at(h);
  Elem& e = elems_.at(x);
  if (e.pos >= heap.size() || heap[e.pos] != x)
    throw std::out_of_range("element not in heap");
  if (key > e.key)
    throw std::invalid_argument("key increase not supported");
  e.key = key;
  sift_up(heap, e.pos);
}

std::optional<BinaryPool::Entry> BinaryPool::find_min(heap_type h) const {
  const auto& heap = heaps_.at(h);
  if (heap.empty())
    return std::nullopt;
  const Elem& e = elems_[heap.front()];
  return Entry{e.key, e.item};
}

BinaryPool::Entry BinaryPool::delete_min(heap_type h) {
  auto& heap = heaps_.at(h);
  if (heap.empty())
    throw std::out_of_range("empty");
  const Elem& top = elems_[heap.front()];
  Entry out{top.key, top.item};
  elems_[heap.front()].pos = 0xffffffffu;
  std::uint32_t last = heap.back();
  heap.pop_back();
  if (!heap.empty()) {
    place(heap, 0, last);
    sift_down(heap, 0);
  }
  return out;
}

BinaryPool::heap_type BinaryPool::meld(heap_type a, heap_type b) {
  if (a == b)
    throw std::invalid_argument("cannot meld a heap with itself");
  auto& ha = heaps_.at(a);
  auto& hb = heaps_.at(b);
  if (ha.size() < hb.size())
    std::swap(ha, hb);
  for (std::uint32_t x : hb) {
    ha.push_back(x);
    place(ha, ha.size() - 1, x);
    sift_up(ha, ha.size() - 1);
  }
  hb.clear();
  return a;
}

// ---------------------------------------------------------------------------

PairingPool::heap_type PairingPool::heap_new() {
  heaps_.emplace_back();
  return static_cast<heap_type>(heaps_.size() - 1);
}

std::uint32_t PairingPool::link(std::uint32_t a, std::uint32_t b) {
  if (a == none)
    return b;
  if (b == none)
    return a;
  ++counters_.comparisons;
  ++counters_.links;
  if (nodes_[b].key < nodes_[a].key)
    std::swap(a, b);
  // b becomes the leftmost child of a
  nodes_[b].sibling = nodes_[a].child;
  if (nodes_[a].child != none)
    nodes_[nodes_[a].child].back = b;
  nodes_[b].back = a;
  nodes_[a].child = b;
  nodes_[a].sibling = none;
  nodes_[a].back = none;
  return a;
}

PairingPool::handle_type PairingPool::insert(heap_type h, std::int64_t key, std::uint64_t item) {
  Heap& hp = heaps_.at(h);
  auto x = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back({key, item});
  hp.root = link(hp.root, x);
  ++hp.count;
  return x;
}

void PairingPool::decrease_key(heap_type h, handle_type x, std::int64_t key) {
  Heap& hp = heaps_.at(h);
  Node& n = nodes_.at(x);
  if (key > n.key)
    throw std::invalid_argument("key increase not supported");
  n.key = key;
  if (x == hp.root)
    return;
  ++counters_.cuts;
  std::uint32_t back = n.back;
  if (nodes_[back].child == x)
    nodes_[back].child = n.sibling;
  else
    nodes_[back].sibling = n.sibling;
  if (n.sibling != none)
    nodes_[n.sibling].back = back;
  n.sibling = none;
  n.back = none;
  hp.root = link(hp.root, x);
}

std::uint32_t PairingPool::combine_siblings(std::uint32_t first) {
  if (first == none)
    return none;
  pass_.clear();
  for (std::uint32_t c = first; c != none;) {
    std::uint32_t a = c;
    std::uint32_t b = nodes_[a].sibling;
    c = b == none ? none : nodes_[b].sibling;
    nodes_[a].sibling = nodes_[a].back = none;
    if (b != none)
      nodes_[b].sibling = nodes_[b].back = none;
    pass_.push_back(link(a, b));
  }
  std::uint32_t root = pass_.back();
  for (std::size_t i = pass_.size() - 1; i-- > 0;)
    root = link(pass_[i], root);
  return root;
}

std::optional<PairingPool::Entry> PairingPool::find_min(heap_type h) const {
  const Heap& hp = heaps_.at(h);
  if (hp.root == none)
    return std::nullopt;
  return Entry{nodes_[hp.root].key, nodes_[hp.root].item};
}

PairingPool::Entry PairingPool::delete_min(heap_type h) {
  Heap& hp = heaps_.at(h);
  if (hp.root == none)
    throw std::out_of_range("empty");
  Node& r = nodes_[hp.root];
  Entry out{r.key, r.item};
  std::uint32_t kids = r.child;
  r.child = none;
  hp.root = combine_siblings(kids);
  --hp.count;
  return out;
}

PairingPool::heap_type PairingPool::meld(heap_type a, heap_type b) {
  if (a == b)
    throw std::invalid_argument("cannot meld a heap with itself");
  Heap& ha = heaps_.at(a);
  Heap& hb = heaps_.at(b);
  ha.root = link(ha.root, hb.root);
  ha.count += hb.count;
  hb = Heap{};
  return a;
}

} // namespace vheap
