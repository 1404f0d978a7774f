#include "vheap/oracle.hpp"

#include <charconv>
#include <random>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "vheap/invariants.hpp"
#include "vheap/script_driver.hpp"
#include "vheap/violation_heap.hpp"

namespace vheap {

OpWeights OpWeights::parse(std::string_view text) {
  double vals[4];
  std::size_t field = 0;
  std::size_t start = 0;
  for (;;) {
    std::size_t colon = text.find(':', start);
    std::string piece(text.substr(start, colon == std::string_view::npos ? std::string_view::npos : colon - start));
    if (field >= 4 || piece.empty())
      throw std::invalid_argument("weights must look like i:d:k:m");
    std::size_t used = 0;
    try {
      vals[field] = std::stod(piece, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad weight '" + piece + "'");
    }
    if (used != piece.size())
      throw std::invalid_argument("bad weight '" + piece + "'");
    ++field;
    if (colon == std::string_view::npos)
      break;
    start = colon + 1;
  }
  if (field != 4)
    throw std::invalid_argument("weights must look like i:d:k:m");
  OpWeights w{vals[0], vals[1], vals[2], vals[3]};
  w.validate();
  return w;
}

void OpWeights::validate() const {
  for (double x : {insert, delete_min, decrease_key, meld}) {
    if (!(x >= 0.0) || x == std::numeric_limits<double>::infinity())
      throw std::invalid_argument("weights must be finite and non-negative");
  }
  if (insert + delete_min + decrease_key + meld <= 0.0)
    throw std::invalid_argument("weights are all zero");
}

OpScript gen_ops(std::uint64_t seed, std::size_t n, const OpWeights& weights) {
  weights.validate();
  if (n == 0)
    throw std::invalid_argument("script length must be at least 1");

  std::mt19937_64 rng(seed);
  std::discrete_distribution<int> pick_kind({weights.insert, weights.delete_min, weights.decrease_key, weights.meld});
  std::uniform_int_distribution<std::int64_t> key_dist(0, insert_key_range);
  std::uniform_int_distribution<std::int64_t> delta_dist(0, max_decrease_delta);
  std::uniform_int_distribution<int> side_run(1, 32);

  OpScript script{seed, {}};
  script.ops.reserve(n);
  std::size_t main_count = 0, side_count = 0;
  int side_budget = 0;
  std::size_t redraws = 0;

  while (script.ops.size() < n) {
    Op op;
    op.kind = static_cast<OpKind>(pick_kind(rng));
    bool usable = true;
    switch (op.kind) {
    case OpKind::insert:
      op.key = key_dist(rng);
      op.side = side_budget > 0;
      if (op.side) {
        --side_budget;
        ++side_count;
      } else {
        ++main_count;
      }
      break;
    case OpKind::delete_min:
      usable = main_count > 0;
      if (usable)
        --main_count;
      break;
    case OpKind::decrease_key:
      usable = main_count + side_count > 0;
      if (usable) {
        op.pick = rng();
        op.delta = delta_dist(rng);
      }
      break;
    case OpKind::meld:
      main_count += side_count;
      side_count = 0;
      side_budget = side_run(rng);
      break;
    }
    if (!usable) {
      if (++redraws > 1000 * (n + 1))
        throw std::invalid_argument("weights cannot produce a valid script");
      continue;
    }
    script.ops.push_back(op);
  }
  return script;
}

// ---------------------------------------------------------------------------

NaivePool::heap_type NaivePool::heap_new() {
  heaps_.push_back({});
  return static_cast<heap_type>(heaps_.size() - 1);
}

const NaivePool::Heap& NaivePool::heap(heap_type h) const {
  if (h >= heaps_.size() || !heaps_[h].live)
    throw std::out_of_range("unknown heap");
  return heaps_[h];
}

NaivePool::Heap& NaivePool::heap(heap_type h) {
  return const_cast<Heap&>(std::as_const(*this).heap(h));
}

NaivePool::handle_type NaivePool::insert(heap_type h, std::int64_t key, std::uint64_t item) {
  Heap& hp = heap(h);
  handle_type id = entries_.size();
  entries_.push_back({key, item, h, hp.ids.size(), true});
  hp.ids.push_back(id);
  return id;
}

void NaivePool::decrease_key(heap_type h, handle_type id, std::int64_t key) {
  if (!alive(id) || entries_[id].heap != h)
    throw std::out_of_range("dead or foreign id");
  if (key > entries_[id].key)
    throw std::invalid_argument("key increase not supported");
  entries_[id].key = key;
}

NaivePool::handle_type NaivePool::argmin(heap_type h) const {
  const Heap& hp = heap(h);
  handle_type best = hp.ids.front();
  for (handle_type id : hp.ids) {
    const Slot& s = entries_[id];
    if (s.key < entries_[best].key || (s.key == entries_[best].key && id < best))
      best = id;
  }
  return best;
}

std::optional<NaivePool::Entry> NaivePool::find_min(heap_type h) const {
  if (heap(h).ids.empty())
    return std::nullopt;
  handle_type id = argmin(h);
  return Entry{entries_[id].key, entries_[id].item};
}

NaivePool::Entry NaivePool::delete_min(heap_type h) {
  if (heap(h).ids.empty())
    throw std::out_of_range("empty");
  handle_type id = argmin(h);
  Entry e{entries_[id].key, entries_[id].item};
  erase(id);
  return e;
}

void NaivePool::erase(handle_type id) {
  if (!alive(id))
    throw std::out_of_range("dead id");
  Slot& s = entries_[id];
  Heap& hp = heap(s.heap);
  handle_type moved = hp.ids.back();
  hp.ids[s.pos] = moved;
  entries_[moved].pos = s.pos;
  hp.ids.pop_back();
  s.alive = false;
}

NaivePool::heap_type NaivePool::meld(heap_type a, heap_type b) {
  if (a == b)
    throw std::invalid_argument("cannot meld a heap with itself");
  Heap& ha = heap(a);
  Heap& hb = heap(b);
  for (handle_type id : hb.ids) {
    entries_[id].heap = a;
    entries_[id].pos = ha.ids.size();
    ha.ids.push_back(id);
  }
  hb.ids.clear();
  hb.live = false;
  return a;
}

std::size_t NaivePool::size(heap_type h) const { return heap(h).ids.size(); }

std::size_t NaivePool::key_multiplicity(heap_type h, std::int64_t key) const {
  std::size_t n = 0;
  for (handle_type id : heap(h).ids)
    n += entries_[id].key == key;
  return n;
}

// ---------------------------------------------------------------------------

namespace {

using Pool = ViolationPool<std::int64_t, std::uint64_t>;

class Differential {
public:
  Differential(const OpScript& script, const DiffOptions& opts) : script_(script), opts_(opts), driver_(pool_) {
    audit_every_ = opts.audit_every != 0 ? opts.audit_every : (script.ops.size() <= 2000 ? 1 : 0);
    omain_ = oracle_.heap_new();
    oside_ = oracle_.heap_new();
    if (opts.check_join_neutrality)
      monitor_.emplace(pool_);
  }

  Verdict run() {
    Verdict v;
    v.seed = script_.seed;
    v.ops = script_.ops.size();
    for (std::size_t i = 0; i < script_.ops.size(); ++i) {
      std::string why;
      try {
        why = step(script_.ops[i], i);
      } catch (const std::exception& e) {
        why = std::string("exception: ") + e.what();
      }
      if (!why.empty()) {
        v.pass = false;
        v.fail_at = i;
        v.reason = std::move(why);
        break;
      }
    }
    const Telemetry& t = pool_.telemetry();
    v.stats.joins = t.joins;
    v.stats.cuts = t.cuts;
    v.stats.rank_updates = t.rank_updates;
    v.stats.propagation_faults = t.propagation_faults;
    v.stats.max_rank = t.max_rank;
    v.stats.inserts = t.inserts;
    v.stats.delete_mins = t.delete_mins;
    v.stats.decrease_keys = t.decrease_keys;
    v.stats.melds = t.melds;
    v.stats.audits = audits_;
    v.stats.multiplicity_audits = multiplicity_audits_;
    if (monitor_) {
      v.stats.joins_checked = monitor_->joins_checked();
      v.stats.neutrality_failures = monitor_->failures();
      if (v.pass && monitor_->failures() != 0) {
        v.pass = false;
        v.fail_at = script_.ops.size();
        v.reason = "join changed the violation sum";
      }
    }
    if (v.pass && t.propagation_faults != 0) {
      v.pass = false;
      v.fail_at = script_.ops.size();
      v.reason = "propagation lowered a rank by more than one";
    }
    return v;
  }

private:
  std::string step(const Op& op, std::size_t index) {
    auto s = driver_.apply(op);
    switch (op.kind) {
    case OpKind::insert:
      oracle_.insert(op.side ? oside_ : omain_, s.key, s.item);
      break;
    case OpKind::decrease_key:
      oracle_.decrease_key(oracle_.heap_of(s.item), s.item, s.key);
      break;
    case OpKind::meld:
      omain_ = oracle_.meld(omain_, oside_);
      oside_ = oracle_.heap_new();
      break;
    case OpKind::delete_min: {
      auto expect = oracle_.find_min(omain_);
      if (!expect)
        return "heap returned an element from an empty queue";
      if (*s.popped_key != expect->key)
        return "delete-min key " + std::to_string(*s.popped_key) + ", expected " + std::to_string(expect->key);
      std::uint64_t item = s.popped_item;
      if (oracle_.key_multiplicity(omain_, expect->key) == 1) {
        if (item != expect->item)
          return "delete-min item " + std::to_string(item) + ", expected " + std::to_string(expect->item);
      } else if (!oracle_.alive(item) || oracle_.heap_of(item) != omain_ || oracle_.key(item) != expect->key) {
        return "delete-min returned item " + std::to_string(item) + " that does not hold the minimum";
      }
      oracle_.erase(item);
      break;
    }
    }

    if (pool_.size(driver_.main_heap()) != oracle_.size(omain_) ||
        pool_.size(driver_.side_heap()) != oracle_.size(oside_))
      return "size mismatch";
    auto hm = pool_.find_min(driver_.main_heap());
    auto om = oracle_.find_min(omain_);
    if (hm.has_value() != om.has_value() || (hm && hm->key != om->key))
      return "find-min mismatch";

    if (audit_every_ != 0 && (index + 1) % audit_every_ == 0) {
      AuditOptions ao;
      ao.root_multiplicity = op.kind == OpKind::delete_min;
      multiplicity_audits_ += ao.root_multiplicity;
      ++audits_;
      for (auto h : {driver_.main_heap(), driver_.side_heap()}) {
        AuditReport r = full_audit(pool_, h, ao);
        if (!r.ok())
          return "audit: " + r.violations.front().rule + ": " + r.violations.front().detail;
        ao.root_multiplicity = false;
      }
    }
    return {};
  }

  const OpScript& script_;
  DiffOptions opts_;
  Pool pool_;
  ScriptDriver<Pool> driver_;
  NaivePool oracle_;
  NaivePool::heap_type omain_ = 0, oside_ = 0;
  std::optional<JoinNeutralityMonitor<Pool>> monitor_;
  std::size_t audit_every_ = 0;
  std::uint64_t audits_ = 0;
  std::uint64_t multiplicity_audits_ = 0;
};

} // namespace

Verdict run_differential(const OpScript& script, const DiffOptions& opts) {
  Differential d(script, opts);
  return d.run();
}

std::string verdict_to_json(const Verdict& v) {
  nlohmann::ordered_json j;
  j["seed"] = v.seed;
  j["ops"] = v.ops;
  j["verdict"] = v.pass ? "pass" : "fail";
  if (v.fail_at)
    j["fail_at"] = *v.fail_at;
  else
    j["fail_at"] = nullptr;
  if (!v.pass)
    j["reason"] = v.reason;
  return j.dump();
}

} // namespace vheap
