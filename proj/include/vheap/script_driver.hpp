#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "vheap/oracle.hpp"

namespace vheap {

// Replays an OpScript against any pool exposing heap_new / insert /
// decrease_key / delete_min / meld. Items are insertion ordinals. Keeps the
// live set so decrease-key picks can be resolved deterministically.
template <class Pool>
class ScriptDriver {
public:
  using handle_type = typename Pool::handle_type;
  using heap_type = typename Pool::heap_type;

  struct Step {
    OpKind kind;
    std::uint64_t item = 0;       // inserted or decreased item
    std::int64_t key = 0;         // inserted key or new key
    bool side = false;
    std::optional<std::int64_t> popped_key;
    std::uint64_t popped_item = 0;
  };

  explicit ScriptDriver(Pool& pool) : pool_(pool), main_(pool.heap_new()), side_(pool.heap_new()) {}

  Step apply(const Op& op) {
    Step s;
    s.kind = op.kind;
    switch (op.kind) {
    case OpKind::insert: {
      s.item = tracked_.size();
      s.key = op.key;
      s.side = op.side;
      handle_type h = pool_.insert(op.side ? side_ : main_, op.key, s.item);
      tracked_.push_back({h, op.key, op.side ? epoch_ : 0, live_.size()});
      live_.push_back(s.item);
      break;
    }
    case OpKind::delete_min: {
      auto e = pool_.delete_min(main_);
      s.popped_key = e.key;
      s.popped_item = e.item;
      forget(e.item);
      break;
    }
    case OpKind::decrease_key: {
      s.item = live_[op.pick % live_.size()];
      Tracked& t = tracked_[s.item];
      s.key = t.key - op.delta;
      s.side = t.epoch == epoch_;
      pool_.decrease_key(s.side ? side_ : main_, t.handle, s.key);
      t.key = s.key;
      break;
    }
    case OpKind::meld:
      main_ = pool_.meld(main_, side_);
      side_ = pool_.heap_new();
      ++epoch_;
      break;
    }
    return s;
  }

  heap_type main_heap() const { return main_; }
  heap_type side_heap() const { return side_; }
  std::size_t live_count() const { return live_.size(); }

private:
  struct Tracked {
    handle_type handle;
    std::int64_t key;
    std::uint64_t epoch; // side-heap generation, 0 for the main heap
    std::size_t live_pos;
  };

  void forget(std::uint64_t item) {
    std::size_t pos = tracked_[item].live_pos;
    std::uint64_t moved = live_.back();
    live_[pos] = moved;
    tracked_[moved].live_pos = pos;
    live_.pop_back();
  }

  Pool& pool_;
  heap_type main_;
  heap_type side_;
  std::vector<Tracked> tracked_;
  std::vector<std::uint64_t> live_;
  std::uint64_t epoch_ = 1;
};

} // namespace vheap
