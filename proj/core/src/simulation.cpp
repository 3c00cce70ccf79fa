#include "cdnsim/simulation.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <numeric>

#include "cdnsim/error.hpp"
#include "cdnsim/rng.hpp"

namespace cdnsim {

void validate(const Scenario& s) {
  if (!s.topology || !s.distances) throw_invalid("scenario without topology");
  const std::size_t n = s.topology->node_count();
  if (s.distances->size() != n) throw_invalid("distance matrix does not match topology");
  if (s.users.empty()) throw_invalid("scenario has no users");
  if (s.placement.servers.empty()) throw_invalid("scenario has no servers");
  for (NodeIndex srv : s.placement.servers) {
    if (srv >= n) throw_invalid("placement references an unknown node");
  }
  if (s.assignment.server_of.size() != s.users.size()) {
    throw_invalid("assignment does not cover every user");
  }
  std::vector<bool> seen(n, false);
  for (std::size_t i = 0; i < s.users.size(); ++i) {
    const auto& u = s.users[i];
    if (u.node >= n) throw_invalid("user references an unknown node");
    if (seen[u.node]) throw_invalid("two user groups on node '" + s.topology->id(u.node) + "'");
    seen[u.node] = true;
    if (!std::binary_search(s.placement.servers.begin(), s.placement.servers.end(),
                            s.assignment.server_of[i])) {
      throw_invalid("user assigned to a node without a server");
    }
  }
  if (s.origin >= n) throw_invalid("origin references an unknown node");
  if (s.cache.capacity == 0) throw_invalid("cache capacity must be at least 1");
  if (s.requests_per_user == 0) throw_invalid("requests per user must be positive");
}

std::vector<ItemId> generate_requests(const UserGroup& user, const Topology& topology,
                                      std::uint64_t master_seed, std::size_t count) {
  const auto probs = user.profile.probabilities();
  std::vector<double> cumulative(probs.size());
  std::partial_sum(probs.begin(), probs.end(), cumulative.begin());
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] > 0.0) last_positive = i;
  }

  Rng rng(derive_seed(master_seed, "requests/" + topology.id(user.node)));
  const double total = cumulative.back();
  std::vector<ItemId> out;
  out.reserve(count);
  for (std::size_t r = 0; r < count; ++r) {
    const double target = rng.uniform01() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
    auto idx = static_cast<std::size_t>(it - cumulative.begin());
    if (idx > last_positive) idx = last_positive;
    out.push_back(static_cast<ItemId>(idx));
  }
  return out;
}

SimulationResult run(const Scenario& s) {
  validate(s);
  const Topology& topo = *s.topology;
  const DistanceMatrix& dm = *s.distances;

  std::vector<std::size_t> order(s.users.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return s.users[a].node < s.users[b].node; });

  std::vector<std::vector<ItemId>> requests(s.users.size());
  for (std::size_t i = 0; i < s.users.size(); ++i) {
    requests[i] = generate_requests(s.users[i], topo, s.master_seed, s.requests_per_user);
  }

  // Per-server streams of (item, user) in global round-robin order.
  struct Stream {
    std::vector<ItemId> items;
    std::vector<std::size_t> users;
  };
  std::map<NodeIndex, Stream> streams;
  for (NodeIndex srv : s.placement.servers) streams[srv];
  for (std::size_t round = 0; round < s.requests_per_user; ++round) {
    for (std::size_t i : order) {
      auto& st = streams[s.assignment.server_of[i]];
      st.items.push_back(requests[i][round]);
      st.users.push_back(i);
    }
  }

  SimulationResult result;
  for (auto& [srv, st] : streams) {
    Cache cache(s.cache, st.items);
    const double origin_dist = dm(srv, s.origin);
    for (std::size_t r = 0; r < st.items.size(); ++r) {
      const auto access = cache.access(st.items[r]);
      result.network_load += dm(s.users[st.users[r]].node, srv);
      if (!access.hit) result.network_load += origin_dist;
    }
    const std::size_t members = static_cast<std::size_t>(
        std::count(s.assignment.server_of.begin(), s.assignment.server_of.end(), srv));
    result.per_server.push_back({srv, members, cache.stats()});
    result.total += cache.stats();
  }
  result.miss_ratio = result.total.miss_ratio();
  const auto dist = evaluate_assignment(dm, s.users, s.assignment);
  result.max_user_distance = dist.max_dist;
  result.avg_user_distance = dist.avg_dist;
  return result;
}

NodeIndex default_origin(const DistanceMatrix& dm, std::span<const UserGroup> users) {
  return one_center(dm, users);
}

Optimizer parse_optimizer(std::string_view name) {
  if (name == "distance") return Optimizer::kDistance;
  if (name == "correlation") return Optimizer::kCorrelation;
  throw_invalid("unknown optimizer '" + std::string(name) + "' (expected distance|correlation)");
}

std::string_view to_string(Optimizer o) {
  return o == Optimizer::kDistance ? "distance" : "correlation";
}

Solution optimize(const DistanceMatrix& dm, const Topology& topo, std::span<const UserGroup> users,
                  std::size_t k, Optimizer optimizer, const SiteFilter& sites) {
  const auto placed = dragoon(dm, topo, users, k, sites);
  Solution sol{placed.placement, closest_assignment(dm, users, placed.placement)};
  if (optimizer == Optimizer::kCorrelation) {
    const auto greedy = greedy_correlation(dm, users, sol.placement, sol.assignment);
    auto moved = relocate_servers(dm, users, sol.placement, greedy.assignment, sites);
    sol.placement = std::move(moved.placement);
    sol.assignment = std::move(moved.assignment);
  }
  return sol;
}

SweepAxis parse_sweep_axis(std::string_view name) {
  if (name == "server_count") return SweepAxis::kServerCount;
  if (name == "cache_size") return SweepAxis::kCacheSize;
  if (name == "policy") return SweepAxis::kPolicy;
  throw_invalid("unknown sweep axis '" + std::string(name) +
                "' (expected server_count|cache_size|policy)");
}

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kServerCount: return "server_count";
    case SweepAxis::kCacheSize: return "cache_size";
    case SweepAxis::kPolicy: return "policy";
  }
  return "?";
}

namespace {

std::size_t parse_count(const std::string& text, const char* what) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || v == 0) {
    throw_invalid(std::string(what) + " '" + text + "' is not a positive integer");
  }
  return v;
}

}  // namespace

std::vector<SweepRow> experiment_sweep(const Scenario& base, SweepAxis axis,
                                       const std::vector<std::string>& values,
                                       Optimizer optimizer, const SiteFilter& sites) {
  if (values.empty()) throw_invalid("sweep needs at least one value");
  std::vector<SweepRow> rows;
  rows.reserve(values.size());
  for (const auto& v : values) {
    Scenario s = base;
    switch (axis) {
      case SweepAxis::kServerCount: {
        auto sol = optimize(*s.distances, *s.topology, s.users, parse_count(v, "server count"),
                            optimizer, sites);
        s.placement = std::move(sol.placement);
        s.assignment = std::move(sol.assignment);
        break;
      }
      case SweepAxis::kCacheSize:
        s.cache.capacity = parse_count(v, "cache size");
        break;
      case SweepAxis::kPolicy:
        s.cache.policy = parse_policy(v);
        break;
    }
    rows.push_back({v, run(s)});
  }
  return rows;
}

}  // namespace cdnsim
