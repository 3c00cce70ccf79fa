#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace cdnsim {

/// Dense item id. Callers intern service ids in sorted order so that
/// comparing ItemIds matches comparing ServiceIds.
using ItemId = std::uint32_t;

enum class CachePolicyKind { kLru, kLru2, kLfu, kLirs, kBelady };

std::string_view to_string(CachePolicyKind kind);
/// Accepts LRU, LRU2 (or LRU-2), LFU, LIRS, BELADY in any case.
CachePolicyKind parse_policy(std::string_view name);

inline constexpr CachePolicyKind kAllPolicies[] = {CachePolicyKind::kLru, CachePolicyKind::kLru2,
                                                   CachePolicyKind::kLfu, CachePolicyKind::kLirs,
                                                   CachePolicyKind::kBelady};

struct CacheConfig {
  std::size_t capacity = 10;  // items; uniform item size
  CachePolicyKind policy = CachePolicyKind::kBelady;
  double lirs_hir_fraction = 0.1;
};

struct CacheStats {
  std::uint64_t requests = 0;
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::uint64_t cold_misses = 0;

  double miss_ratio() const {
    return requests == 0 ? 0.0 : static_cast<double>(misses) / static_cast<double>(requests);
  }
  CacheStats& operator+=(const CacheStats& o) {
    requests += o.requests;
    hits += o.hits;
    misses += o.misses;
    cold_misses += o.cold_misses;
    return *this;
  }
  friend bool operator==(const CacheStats&, const CacheStats&) = default;
};

struct AccessResult {
  bool hit = false;
  std::optional<ItemId> evicted;
};

/// Replacement policy state. On a miss the item is admitted and, when the
/// cache is full, exactly one resident item is evicted first.
class ReplacementPolicy {
 public:
  virtual ~ReplacementPolicy() = default;
  virtual AccessResult access(ItemId item) = 0;
  virtual bool contains(ItemId item) const = 0;
  virtual std::size_t resident() const = 0;
  virtual std::size_t capacity() const = 0;
};

std::unique_ptr<ReplacementPolicy> make_lru(std::size_t capacity);
/// LRU-K with K=2: evicts the resident item with the oldest second-to-last
/// reference; items referenced only once go first, oldest reference first.
/// Reference history outlives eviction.
std::unique_ptr<ReplacementPolicy> make_lru2(std::size_t capacity);
/// Perfect LFU: counts survive eviction; ties go to the least recently used.
std::unique_ptr<ReplacementPolicy> make_lfu(std::size_t capacity);
/// LIRS with max(1, round(hir_fraction * capacity)) resident HIR slots
/// (never more than capacity - 1 when capacity >= 2).
std::unique_ptr<ReplacementPolicy> make_lirs(std::size_t capacity, double hir_fraction);
/// Offline optimum over a known future. access() must be called with
/// future[0], future[1], ... in order. Among items never used again, the
/// smallest id is evicted first.
std::unique_ptr<ReplacementPolicy> make_belady(std::size_t capacity, std::span<const ItemId> future);

/// `future` is only consulted for BELADY.
std::unique_ptr<ReplacementPolicy> make_policy(const CacheConfig& config,
                                               std::span<const ItemId> future = {});

/// A policy plus hit/miss/cold-miss accounting.
class Cache {
 public:
  explicit Cache(const CacheConfig& config, std::span<const ItemId> future = {});

  AccessResult access(ItemId item);
  const CacheStats& stats() const { return stats_; }
  const ReplacementPolicy& policy() const { return *policy_; }

 private:
  std::unique_ptr<ReplacementPolicy> policy_;
  std::unordered_set<ItemId> seen_;
  CacheStats stats_;
};

CacheStats replay(std::span<const ItemId> trace, const CacheConfig& config);
CacheStats belady_misses(std::span<const ItemId> trace, std::size_t capacity);

/// Service-name trace mapped onto ItemIds (names sorted lexicographically).
struct InternedTrace {
  std::vector<std::string> names;
  std::vector<ItemId> items;
};

InternedTrace intern_trace(std::span<const std::string> services);

/// One service id per line; blank lines and '#' comments ignored.
std::vector<std::string> parse_trace_lines(std::string_view text);

}  // namespace cdnsim
