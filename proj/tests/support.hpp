#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "cdnsim/placement.hpp"
#include "cdnsim/profiles.hpp"
#include "cdnsim/rng.hpp"
#include "cdnsim/topology.hpp"

namespace testing_support {

using namespace cdnsim;

inline std::string node_name(std::size_t i) {
  std::string s = std::to_string(i);
  return "n" + std::string(s.size() < 2 ? 2 - s.size() : 0, '0') + s;
}

inline Topology path_topology(std::size_t n) {
  std::vector<NodeSpec> nodes;
  std::vector<EdgeSpec> edges;
  for (std::size_t i = 0; i < n; ++i) nodes.push_back({std::string(1, char('A' + i)), "", 1.0});
  for (std::size_t i = 0; i + 1 < n; ++i) {
    edges.push_back({nodes[i].id, nodes[i + 1].id, 1.0});
  }
  return Topology(nodes, edges);
}

// Random spanning tree plus extra edges; weights in {1..5} or all 1.
inline Topology random_topology(std::uint64_t seed, std::size_t n, std::size_t extra,
                                bool unit_weights = false) {
  Rng rng(seed);
  std::vector<NodeSpec> nodes;
  for (std::size_t i = 0; i < n; ++i) nodes.push_back({node_name(i), "", 1.0});
  std::vector<EdgeSpec> edges;
  std::vector<std::vector<bool>> has(n, std::vector<bool>(n, false));
  auto weight = [&] { return unit_weights ? 1.0 : double(1 + rng.below(5)); };
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t j = rng.below(i);
    edges.push_back({nodes[i].id, nodes[j].id, weight()});
    has[i][j] = has[j][i] = true;
  }
  for (std::size_t e = 0; e < extra && n > 2; ++e) {
    const std::size_t a = rng.below(n), b = rng.below(n);
    if (a == b || has[a][b]) continue;
    has[a][b] = has[b][a] = true;
    edges.push_back({nodes[a].id, nodes[b].id, weight()});
  }
  return Topology(nodes, edges);
}

inline Profile flat_profile() {
  static const Universe u = make_universe({"x", "y"});
  return Profile(u, {0.5, 0.5});
}

// One user per node, profile irrelevant.
inline std::vector<UserGroup> users_everywhere(const Topology& t) {
  std::vector<UserGroup> users;
  for (NodeIndex i = 0; i < t.node_count(); ++i) users.push_back({i, 1.0, flat_profile()});
  return users;
}

// Textbook Floyd-Warshall over the edge list.
inline std::vector<std::vector<double>> floyd_warshall(const Topology& t) {
  const std::size_t n = t.node_count();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (const auto& e : t.edges()) {
    d[e.a][e.b] = std::min(d[e.a][e.b], e.weight);
    d[e.b][e.a] = std::min(d[e.b][e.a], e.weight);
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
  return d;
}

// Max and mean of priority * distance to the given site.
struct Pair {
  double max = 0, avg = 0;
};
inline Pair group_cost(const DistanceMatrix& dm, const std::vector<UserGroup>& users,
                       const std::vector<std::size_t>& members, NodeIndex site) {
  Pair p;
  for (auto m : members) {
    const double d = users[m].priority * dm(users[m].node, site);
    p.max = std::max(p.max, d);
    p.avg += d;
  }
  if (!members.empty()) p.avg /= double(members.size());
  return p;
}

// Plain scan: lexicographically smallest (max, avg), first site wins ties.
inline NodeIndex scan_one_center(const DistanceMatrix& dm, const std::vector<UserGroup>& users,
                                 const std::vector<std::size_t>& members) {
  NodeIndex best = 0;
  Pair best_cost = group_cost(dm, users, members, 0);
  for (NodeIndex s = 1; s < dm.size(); ++s) {
    const Pair c = group_cost(dm, users, members, s);
    const double tol = 1e-9 * std::max(1.0, std::abs(best_cost.max));
    if (c.max < best_cost.max - tol ||
        (std::abs(c.max - best_cost.max) <= tol && c.avg < best_cost.avg - 1e-9 * std::max(1.0, best_cost.avg))) {
      best = s;
      best_cost = c;
    }
  }
  return best;
}

inline std::vector<std::size_t> all_members(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

}  // namespace testing_support
