#include "cdnsim/cache.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <iterator>
#include <limits>
#include <list>
#include <map>
#include <set>
#include <tuple>
#include <unordered_map>

#include "cdnsim/error.hpp"

namespace cdnsim {
namespace {

void check_capacity(std::size_t capacity) {
  if (capacity == 0) throw_invalid("cache capacity must be at least 1");
}

class LruPolicy final : public ReplacementPolicy {
 public:
  explicit LruPolicy(std::size_t capacity) : capacity_(capacity) { check_capacity(capacity); }

  AccessResult access(ItemId item) override {
    if (auto it = where_.find(item); it != where_.end()) {
      order_.splice(order_.begin(), order_, it->second);
      return {true, std::nullopt};
    }
    AccessResult r;
    if (order_.size() == capacity_) {
      r.evicted = order_.back();
      where_.erase(order_.back());
      order_.pop_back();
    }
    order_.push_front(item);
    where_[item] = order_.begin();
    return r;
  }
  bool contains(ItemId item) const override { return where_.count(item) != 0; }
  std::size_t resident() const override { return order_.size(); }
  std::size_t capacity() const override { return capacity_; }

 private:
  std::size_t capacity_;
  std::list<ItemId> order_;  // most recent first
  std::unordered_map<ItemId, std::list<ItemId>::iterator> where_;
};

// Shared shape of LRU-2 and LFU: residents kept in a set ordered by an
// eviction key; the smallest key is the victim.
template <typename Key>
class KeyedPolicy : public ReplacementPolicy {
 public:
  explicit KeyedPolicy(std::size_t capacity) : capacity_(capacity) { check_capacity(capacity); }

  AccessResult access(ItemId item) override {
    ++clock_;
    if (auto it = keys_.find(item); it != keys_.end()) {
      order_.erase({it->second, item});
      touch(item);
      it->second = key(item);
      order_.insert({it->second, item});
      return {true, std::nullopt};
    }
    AccessResult r;
    if (keys_.size() == capacity_) {
      auto victim = order_.begin();
      r.evicted = victim->second;
      keys_.erase(victim->second);
      order_.erase(victim);
    }
    touch(item);
    const Key k = key(item);
    keys_[item] = k;
    order_.insert({k, item});
    return r;
  }
  bool contains(ItemId item) const override { return keys_.count(item) != 0; }
  std::size_t resident() const override { return keys_.size(); }
  std::size_t capacity() const override { return capacity_; }

 protected:
  virtual void touch(ItemId item) = 0;
  virtual Key key(ItemId item) const = 0;
  std::uint64_t clock_ = 0;

 private:
  std::size_t capacity_;
  std::unordered_map<ItemId, Key> keys_;
  std::set<std::pair<Key, ItemId>> order_;
};

class Lru2Policy final : public KeyedPolicy<std::pair<int, std::uint64_t>> {
 public:
  using KeyedPolicy::KeyedPolicy;

 protected:
  void touch(ItemId item) override {
    auto& h = history_[item];
    h.penultimate = h.last;
    h.last = clock_;
  }
  std::pair<int, std::uint64_t> key(ItemId item) const override {
    const auto& h = history_.at(item);
    // Single-reference items (penultimate == 0) sort first.
    if (h.penultimate == 0) return {0, h.last};
    return {1, h.penultimate};
  }

 private:
  struct History {
    std::uint64_t last = 0;  // clock starts at 1, so 0 means "never"
    std::uint64_t penultimate = 0;
  };
  std::unordered_map<ItemId, History> history_;
};

class LfuPolicy final : public KeyedPolicy<std::pair<std::uint64_t, std::uint64_t>> {
 public:
  using KeyedPolicy::KeyedPolicy;

 protected:
  void touch(ItemId item) override {
    auto& s = state_[item];
    ++s.count;
    s.last = clock_;
  }
  std::pair<std::uint64_t, std::uint64_t> key(ItemId item) const override {
    const auto& s = state_.at(item);
    return {s.count, s.last};
  }

 private:
  struct State {
    std::uint64_t count = 0;
    std::uint64_t last = 0;
  };
  std::unordered_map<ItemId, State> state_;
};

class LirsPolicy final : public ReplacementPolicy {
 public:
  LirsPolicy(std::size_t capacity, double hir_fraction) : capacity_(capacity) {
    check_capacity(capacity);
    if (!(hir_fraction > 0.0 && hir_fraction < 1.0)) {
      throw_invalid("lirs_hir_fraction must lie in (0, 1)");
    }
    std::size_t hir = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(hir_fraction * static_cast<double>(capacity))));
    if (capacity >= 2) hir = std::min(hir, capacity - 1);
    lir_limit_ = capacity - std::min(hir, capacity);
  }

  AccessResult access(ItemId item) override {
    auto found = entries_.find(item);
    if (found != entries_.end() && found->second.status == Status::kLir) {
      to_stack_top(item);
      prune();
      return {true, std::nullopt};
    }
    if (found != entries_.end() && found->second.status == Status::kHirResident) {
      if (found->second.in_stack && lir_limit_ > 0) {
        found->second.status = Status::kLir;
        ++lir_count_;
        queue_remove(item);
        to_stack_top(item);
        demote_bottom_lir();
        prune();
      } else {
        to_stack_top(item);
        queue_remove(item);
        queue_push(item);
      }
      return {true, std::nullopt};
    }

    AccessResult r;
    if (resident_ == capacity_) {
      const ItemId victim = queue_.front();
      queue_remove(victim);
      --resident_;
      r.evicted = victim;
      auto& v = entries_.at(victim);
      v.status = Status::kHirNonResident;
      if (!v.in_stack) entries_.erase(victim);
    }
    ++resident_;
    found = entries_.find(item);  // the eviction may have invalidated it
    const bool in_stack = found != entries_.end() && found->second.in_stack;
    Entry& e = entries_[item];
    if (lir_count_ < lir_limit_) {
      e.status = Status::kLir;
      ++lir_count_;
      to_stack_top(item);
    } else if (in_stack && lir_limit_ > 0) {
      e.status = Status::kLir;
      ++lir_count_;
      to_stack_top(item);
      demote_bottom_lir();
      prune();
    } else {
      e.status = Status::kHirResident;
      to_stack_top(item);
      queue_push(item);
    }
    return r;
  }

  bool contains(ItemId item) const override {
    auto it = entries_.find(item);
    return it != entries_.end() && it->second.status != Status::kHirNonResident;
  }
  std::size_t resident() const override { return resident_; }
  std::size_t capacity() const override { return capacity_; }

 private:
  enum class Status { kLir, kHirResident, kHirNonResident };
  struct Entry {
    Status status = Status::kHirNonResident;
    bool in_stack = false;
    std::list<ItemId>::iterator stack_pos;
    bool in_queue = false;
    std::list<ItemId>::iterator queue_pos;
  };

  void to_stack_top(ItemId item) {
    Entry& e = entries_[item];
    if (e.in_stack) {
      stack_.splice(stack_.begin(), stack_, e.stack_pos);
    } else {
      stack_.push_front(item);
      e.stack_pos = stack_.begin();
      e.in_stack = true;
    }
  }
  void queue_push(ItemId item) {
    Entry& e = entries_.at(item);
    queue_.push_back(item);
    e.queue_pos = std::prev(queue_.end());
    e.in_queue = true;
  }
  void queue_remove(ItemId item) {
    Entry& e = entries_.at(item);
    if (!e.in_queue) return;
    queue_.erase(e.queue_pos);
    e.in_queue = false;
  }
  // The LIR item at the stack bottom becomes a resident HIR item.
  void demote_bottom_lir() {
    const ItemId y = stack_.back();
    Entry& e = entries_.at(y);
    stack_.pop_back();
    e.in_stack = false;
    e.status = Status::kHirResident;
    --lir_count_;
    queue_push(y);
  }
  // Restores "stack bottom is LIR" by dropping HIR entries from the bottom.
  void prune() {
    while (!stack_.empty()) {
      const ItemId y = stack_.back();
      Entry& e = entries_.at(y);
      if (e.status == Status::kLir) break;
      stack_.pop_back();
      e.in_stack = false;
      if (e.status == Status::kHirNonResident) entries_.erase(y);
    }
  }

  std::size_t capacity_;
  std::size_t lir_limit_ = 0;
  std::size_t lir_count_ = 0;
  std::size_t resident_ = 0;
  std::list<ItemId> stack_;  // recency stack S, top first
  std::list<ItemId> queue_;  // resident HIR items, next victim first
  std::unordered_map<ItemId, Entry> entries_;
};

class BeladyPolicy final : public ReplacementPolicy {
 public:
  BeladyPolicy(std::size_t capacity, std::span<const ItemId> future)
      : capacity_(capacity), future_(future.begin(), future.end()), next_use_(future.size()) {
    check_capacity(capacity);
    std::unordered_map<ItemId, std::size_t> upcoming;
    for (std::size_t i = future_.size(); i-- > 0;) {
      auto it = upcoming.find(future_[i]);
      next_use_[i] = it == upcoming.end() ? kNever : it->second;
      upcoming[future_[i]] = i;
    }
  }

  AccessResult access(ItemId item) override {
    if (cursor_ >= future_.size() || future_[cursor_] != item) {
      throw_invalid("belady: access does not follow the declared trace");
    }
    const std::size_t next = next_use_[cursor_++];
    if (auto it = resident_.find(item); it != resident_.end()) {
      order_.erase({it->second, item});
      it->second = next;
      order_.insert({next, item});
      return {true, std::nullopt};
    }
    AccessResult r;
    if (resident_.size() == capacity_) {
      auto victim = order_.begin();
      r.evicted = victim->second;
      resident_.erase(victim->second);
      order_.erase(victim);
    }
    resident_[item] = next;
    order_.insert({next, item});
    return r;
  }
  bool contains(ItemId item) const override { return resident_.count(item) != 0; }
  std::size_t resident() const override { return resident_.size(); }
  std::size_t capacity() const override { return capacity_; }

 private:
  static constexpr std::size_t kNever = std::numeric_limits<std::size_t>::max();

  // Farthest next use first; smaller id first among equals.
  struct VictimOrder {
    bool operator()(const std::pair<std::size_t, ItemId>& a,
                    const std::pair<std::size_t, ItemId>& b) const {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    }
  };

  std::size_t capacity_;
  std::vector<ItemId> future_;
  std::vector<std::size_t> next_use_;
  std::size_t cursor_ = 0;
  std::unordered_map<ItemId, std::size_t> resident_;
  std::set<std::pair<std::size_t, ItemId>, VictimOrder> order_;
};

}  // namespace

std::string_view to_string(CachePolicyKind kind) {
  switch (kind) {
    case CachePolicyKind::kLru: return "LRU";
    case CachePolicyKind::kLru2: return "LRU2";
    case CachePolicyKind::kLfu: return "LFU";
    case CachePolicyKind::kLirs: return "LIRS";
    case CachePolicyKind::kBelady: return "BELADY";
  }
  return "?";
}

CachePolicyKind parse_policy(std::string_view name) {
  std::string up;
  for (char c : name) {
    if (c != '-' && c != '_') up.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  for (auto kind : kAllPolicies) {
    if (up == to_string(kind)) return kind;
  }
  if (up == "OPT" || up == "MIN") return CachePolicyKind::kBelady;
  throw_invalid("unknown cache policy '" + std::string(name) + "'");
}

std::unique_ptr<ReplacementPolicy> make_lru(std::size_t capacity) {
  return std::make_unique<LruPolicy>(capacity);
}
std::unique_ptr<ReplacementPolicy> make_lru2(std::size_t capacity) {
  return std::make_unique<Lru2Policy>(capacity);
}
std::unique_ptr<ReplacementPolicy> make_lfu(std::size_t capacity) {
  return std::make_unique<LfuPolicy>(capacity);
}
std::unique_ptr<ReplacementPolicy> make_lirs(std::size_t capacity, double hir_fraction) {
  return std::make_unique<LirsPolicy>(capacity, hir_fraction);
}
std::unique_ptr<ReplacementPolicy> make_belady(std::size_t capacity,
                                               std::span<const ItemId> future) {
  return std::make_unique<BeladyPolicy>(capacity, future);
}

std::unique_ptr<ReplacementPolicy> make_policy(const CacheConfig& config,
                                               std::span<const ItemId> future) {
  switch (config.policy) {
    case CachePolicyKind::kLru: return make_lru(config.capacity);
    case CachePolicyKind::kLru2: return make_lru2(config.capacity);
    case CachePolicyKind::kLfu: return make_lfu(config.capacity);
    case CachePolicyKind::kLirs: return make_lirs(config.capacity, config.lirs_hir_fraction);
    case CachePolicyKind::kBelady: return make_belady(config.capacity, future);
  }
  throw_invalid("unknown cache policy");
}

Cache::Cache(const CacheConfig& config, std::span<const ItemId> future)
    : policy_(make_policy(config, future)) {}

AccessResult Cache::access(ItemId item) {
  const AccessResult r = policy_->access(item);
  ++stats_.requests;
  if (r.hit) {
    ++stats_.hits;
  } else {
    ++stats_.misses;
    if (seen_.insert(item).second) ++stats_.cold_misses;
  }
  return r;
}

CacheStats replay(std::span<const ItemId> trace, const CacheConfig& config) {
  Cache cache(config, trace);
  for (ItemId item : trace) cache.access(item);
  return cache.stats();
}

CacheStats belady_misses(std::span<const ItemId> trace, std::size_t capacity) {
  return replay(trace, {capacity, CachePolicyKind::kBelady, 0.1});
}

InternedTrace intern_trace(std::span<const std::string> services) {
  InternedTrace out;
  out.names.assign(services.begin(), services.end());
  std::sort(out.names.begin(), out.names.end());
  out.names.erase(std::unique(out.names.begin(), out.names.end()), out.names.end());
  out.items.reserve(services.size());
  for (const auto& s : services) {
    auto it = std::lower_bound(out.names.begin(), out.names.end(), s);
    out.items.push_back(static_cast<ItemId>(it - out.names.begin()));
  }
  return out;
}

std::vector<std::string> parse_trace_lines(std::string_view text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.remove_suffix(1);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front()))) line.remove_prefix(1);
    if (!line.empty() && line.front() != '#') out.emplace_back(line);
    pos = end + 1;
  }
  return out;
}

}  // namespace cdnsim
