#include "cdnsim/placement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cdnsim/error.hpp"

namespace cdnsim {
namespace {

constexpr double kEps = 1e-9;

bool less_by_noise(double a, double b) { return a < b - kEps * std::max(1.0, std::abs(b)); }

void check_k(std::size_t k, std::size_t site_count) {
  if (k == 0) throw_infeasible("server count k must be at least 1");
  if (k > site_count) {
    throw_infeasible("server count k=" + std::to_string(k) + " exceeds the " +
                     std::to_string(site_count) + " candidate sites");
  }
}

// Objective with servers given in any order.
PlacementObjective evaluate_servers(const DistanceMatrix& dm, std::span<const UserGroup> users,
                                    std::span<const NodeIndex> servers) {
  PlacementObjective obj;
  if (users.empty()) return obj;
  double sum = 0.0;
  for (const auto& u : users) {
    double best = std::numeric_limits<double>::infinity();
    for (NodeIndex s : servers) best = std::min(best, dm(u.node, s));
    const double w = u.priority * best;
    obj.max_dist = std::max(obj.max_dist, w);
    sum += w;
  }
  obj.avg_dist = sum / static_cast<double>(users.size());
  return obj;
}

}  // namespace

Placement make_placement(std::vector<NodeIndex> servers, std::size_t node_count) {
  if (servers.empty()) throw_invalid("placement needs at least one server");
  std::sort(servers.begin(), servers.end());
  if (std::adjacent_find(servers.begin(), servers.end()) != servers.end()) {
    throw_invalid("placement lists a node twice");
  }
  if (servers.back() >= node_count) throw_invalid("placement references an unknown node");
  return Placement{std::move(servers)};
}

bool objective_better(const PlacementObjective& a, const PlacementObjective& b) {
  if (less_by_noise(a.max_dist, b.max_dist)) return true;
  if (less_by_noise(b.max_dist, a.max_dist)) return false;
  return less_by_noise(a.avg_dist, b.avg_dist);
}

bool SiteFilter::permits(NodeIndex n) const {
  return allowed.empty() || std::binary_search(allowed.begin(), allowed.end(), n);
}

std::vector<NodeIndex> SiteFilter::sites(std::size_t node_count) const {
  std::vector<NodeIndex> out;
  for (NodeIndex i = 0; i < node_count; ++i) {
    if (permits(i)) out.push_back(i);
  }
  return out;
}

Assignment closest_assignment(const DistanceMatrix& dm, std::span<const UserGroup> users,
                              const Placement& p) {
  if (p.servers.empty()) throw_invalid("closest_assignment: empty placement");
  Assignment a;
  a.server_of.reserve(users.size());
  for (const auto& u : users) {
    // Servers are sorted, so the first strict minimum is the lowest id.
    NodeIndex best = p.servers.front();
    double best_d = dm(u.node, best);
    for (NodeIndex s : p.servers) {
      const double d = dm(u.node, s);
      if (d < best_d) {
        best_d = d;
        best = s;
      }
    }
    a.server_of.push_back(best);
  }
  return a;
}

PlacementObjective evaluate_assignment(const DistanceMatrix& dm, std::span<const UserGroup> users,
                                       const Assignment& a) {
  if (a.server_of.size() != users.size()) throw_invalid("assignment does not cover every user");
  PlacementObjective obj;
  if (users.empty()) return obj;
  double sum = 0.0;
  for (std::size_t i = 0; i < users.size(); ++i) {
    const double w = users[i].priority * dm(users[i].node, a.server_of[i]);
    obj.max_dist = std::max(obj.max_dist, w);
    sum += w;
  }
  obj.avg_dist = sum / static_cast<double>(users.size());
  return obj;
}

PlacementObjective evaluate_placement(const DistanceMatrix& dm, std::span<const UserGroup> users,
                                      const Placement& p) {
  return evaluate_servers(dm, users, p.servers);
}

NodeIndex one_center(const DistanceMatrix& dm, std::span<const UserGroup> users,
                     const SiteFilter& sites) {
  const auto candidates = sites.sites(dm.size());
  if (candidates.empty()) throw_infeasible("no candidate site for a server");
  NodeIndex best = candidates.front();
  PlacementObjective best_obj = evaluate_servers(dm, users, std::span(&best, 1));
  for (NodeIndex c : candidates) {
    const auto obj = evaluate_servers(dm, users, std::span(&c, 1));
    if (objective_better(obj, best_obj)) {
      best = c;
      best_obj = obj;
    }
  }
  return best;
}

Placement farthest_first_init(const DistanceMatrix& dm, std::span<const UserGroup> users,
                              std::size_t k, const SiteFilter& sites) {
  const auto all_sites = sites.sites(dm.size());
  check_k(k, all_sites.size());

  std::vector<double> weight(dm.size(), 0.0);
  for (const auto& u : users) weight[u.node] = std::max(weight[u.node], u.priority);
  std::vector<NodeIndex> pool;
  for (NodeIndex s : all_sites) {
    if (weight[s] > 0.0) pool.push_back(s);
  }
  if (pool.size() < k) {
    pool = all_sites;
    for (NodeIndex s : pool) {
      if (weight[s] == 0.0) weight[s] = 1.0;
    }
  }

  const NodeIndex mark = one_center(dm, users, sites);

  // reach[x]: distance from x to the closest reference point (the mark for
  // the first pick, the placed servers afterwards).
  std::vector<double> reach(dm.size());
  for (NodeIndex x : pool) reach[x] = dm(x, mark);

  std::vector<NodeIndex> placed;
  std::vector<bool> used(dm.size(), false);
  while (placed.size() < k) {
    NodeIndex pick = dm.size();
    double pick_score = -1.0;
    for (NodeIndex x : pool) {
      if (used[x]) continue;
      const double score = weight[x] * reach[x];
      if (score > pick_score) {
        pick_score = score;
        pick = x;
      }
    }
    used[pick] = true;
    placed.push_back(pick);
    const bool first = placed.size() == 1;
    for (NodeIndex x : pool) {
      reach[x] = first ? dm(x, pick) : std::min(reach[x], dm(x, pick));
    }
  }
  return make_placement(std::move(placed), dm.size());
}

DragoonResult dragoon(const DistanceMatrix& dm, const Topology& topo,
                      std::span<const UserGroup> users, std::size_t k, const SiteFilter& sites) {
  if (dm.size() != topo.node_count()) throw_invalid("distance matrix does not match topology");
  DragoonResult result;
  std::vector<NodeIndex> slots = farthest_first_init(dm, users, k, sites).servers;
  std::vector<bool> occupied(dm.size(), false);
  for (NodeIndex s : slots) occupied[s] = true;

  PlacementObjective current = evaluate_servers(dm, users, slots);
  result.initial_objective = current;

  // Each accepted move strictly lowers the objective, so this cap is never
  // the binding stop on sane inputs; it bounds float-noise pathologies.
  const std::size_t max_iterations = 100 * dm.size() * k + 100;
  std::vector<NodeIndex> trial;
  for (std::size_t iter = 1; iter <= max_iterations; ++iter) {
    result.iterations = iter;
    std::vector<std::size_t> order(slots.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return slots[a] < slots[b]; });

    bool moved = false;
    for (std::size_t slot : order) {
      const NodeIndex from = slots[slot];
      NodeIndex best_to = from;
      PlacementObjective best_obj = current;
      for (const auto& nb : topo.adjacency(from)) {
        if (occupied[nb.node] || !sites.permits(nb.node)) continue;
        trial = slots;
        trial[slot] = nb.node;
        const auto obj = evaluate_servers(dm, users, trial);
        if (objective_better(obj, best_obj)) {
          best_obj = obj;
          best_to = nb.node;
        }
      }
      if (best_to != from) {
        occupied[from] = false;
        occupied[best_to] = true;
        slots[slot] = best_to;
        current = best_obj;
        moved = true;
        result.log.push_back({iter, slot, from, best_to, current});
      }
    }
    if (!moved) break;
  }

  result.placement = make_placement(slots, dm.size());
  result.objective = current;
  return result;
}

BruteForceResult brute_force_placement(const DistanceMatrix& dm, std::span<const UserGroup> users,
                                       std::size_t k, const SiteFilter& sites) {
  const auto candidates = sites.sites(dm.size());
  check_k(k, candidates.size());
  const std::size_t n = candidates.size();

  double combos = 1.0;
  for (std::size_t i = 0; i < k; ++i) {
    combos = combos * static_cast<double>(n - i) / static_cast<double>(i + 1);
  }
  if (combos > kBruteForceLimit) {
    throw_infeasible("brute force over " + std::to_string(static_cast<long long>(combos)) +
                     " placements exceeds the limit");
  }

  // Lexicographic k-subset enumeration keeps the first optimum in id order.
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  std::vector<NodeIndex> servers(k);
  BruteForceResult best;
  bool have_best = false;
  while (true) {
    for (std::size_t i = 0; i < k; ++i) servers[i] = candidates[idx[i]];
    const auto obj = evaluate_servers(dm, users, servers);
    if (!have_best || objective_better(obj, best.objective)) {
      best.objective = obj;
      best.placement.servers = servers;
      have_best = true;
    }
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return best;
}

}  // namespace cdnsim
