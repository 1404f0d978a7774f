#pragma once

// Reference priority queue, operation-script generator and the differential
// runner that replays a script on both the violation heap and the reference.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vheap {

struct OpWeights {
  double insert = 0.45;
  double delete_min = 0.25;
  double decrease_key = 0.25;
  double meld = 0.05;

  /// Parses "i:d:k:m"; each field a non-negative number, not all zero.
  static OpWeights parse(std::string_view text);
  void validate() const;
};

enum class OpKind : std::uint8_t { insert, delete_min, decrease_key, meld };

/// One scripted step. Decrease-key targets are resolved when replayed:
/// `pick` selects among the nodes live at that moment and the new key is
/// the target's key minus `delta`.
struct Op {
  OpKind kind = OpKind::insert;
  std::int64_t key = 0;    // insert
  bool side = false;       // insert goes to the side heap
  std::uint64_t pick = 0;  // decrease-key
  std::int64_t delta = 0;  // decrease-key, in [0, 1000]
};

struct OpScript {
  std::uint64_t seed = 0;
  std::vector<Op> ops;
};

inline constexpr std::int64_t max_decrease_delta = 1000;
inline constexpr std::int64_t insert_key_range = 1'000'000;

/// Deterministic script for (seed, n, weights). Delete-min on an empty main
/// heap and decrease-key with nothing live are redrawn.
OpScript gen_ops(std::uint64_t seed, std::size_t n, const OpWeights& weights = {});

/// Brute-force priority queues sharing one dense id space. Find/delete-min
/// scan every live entry; ties go to the smallest id.
class NaivePool {
public:
  struct Entry {
    std::int64_t key;
    std::uint64_t item;
  };
  using handle_type = std::uint64_t;
  using heap_type = std::uint32_t;

  heap_type heap_new();
  handle_type insert(heap_type h, std::int64_t key, std::uint64_t item);
  void decrease_key(heap_type h, handle_type id, std::int64_t key);
  std::optional<Entry> find_min(heap_type h) const;
  Entry delete_min(heap_type h);
  heap_type meld(heap_type a, heap_type b);
  /// Removes a specific live entry.
  void erase(handle_type id);

  std::size_t size(heap_type h) const;
  bool empty(heap_type h) const { return size(h) == 0; }
  bool alive(handle_type id) const { return id < entries_.size() && entries_[id].alive; }
  std::int64_t key(handle_type id) const { return entries_.at(id).key; }
  std::uint64_t item(handle_type id) const { return entries_.at(id).item; }
  heap_type heap_of(handle_type id) const { return entries_.at(id).heap; }
  /// Number of live entries holding `key` in heap `h`.
  std::size_t key_multiplicity(heap_type h, std::int64_t key) const;

private:
  struct Slot {
    std::int64_t key;
    std::uint64_t item;
    heap_type heap;
    std::size_t pos;
    bool alive;
  };
  struct Heap {
    std::vector<handle_type> ids;
    bool live = true;
  };
  const Heap& heap(heap_type h) const;
  Heap& heap(heap_type h);
  handle_type argmin(heap_type h) const;

  std::vector<Slot> entries_;
  std::vector<Heap> heaps_;
};

struct DiffOptions {
  /// Audit after every `audit_every` ops; 0 picks 1 for scripts of at most
  /// 2000 ops and disables periodic audits above that.
  std::size_t audit_every = 0;
  /// Bracket every 3-way join with a violation-sum scan.
  bool check_join_neutrality = false;
};

struct DiffStats {
  std::uint64_t inserts = 0;
  std::uint64_t delete_mins = 0;
  std::uint64_t decrease_keys = 0;
  std::uint64_t melds = 0;
  std::uint64_t joins = 0;
  std::uint64_t cuts = 0;
  std::uint64_t rank_updates = 0;
  std::uint64_t propagation_faults = 0;
  std::uint64_t joins_checked = 0;
  std::uint64_t neutrality_failures = 0;
  std::uint64_t audits = 0;
  std::uint64_t multiplicity_audits = 0;
  int max_rank = 0;
};

struct Verdict {
  std::uint64_t seed = 0;
  std::size_t ops = 0;
  bool pass = true;
  std::optional<std::size_t> fail_at;
  std::string reason;
  DiffStats stats;
};

Verdict run_differential(const OpScript& script, const DiffOptions& opts = {});

/// {"seed":..,"ops":..,"verdict":"pass"|"fail","fail_at":i}; fail_at is
/// null on pass, and a "reason" field accompanies failures.
std::string verdict_to_json(const Verdict& v);

} // namespace vheap
