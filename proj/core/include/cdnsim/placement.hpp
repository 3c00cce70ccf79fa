#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cdnsim/profiles.hpp"
#include "cdnsim/topology.hpp"

namespace cdnsim {

/// Server sites, sorted ascending and duplicate-free.
struct Placement {
  std::vector<NodeIndex> servers;

  friend bool operator==(const Placement&, const Placement&) = default;
};

/// Sorts, validates (non-empty, unique, in range) and wraps.
Placement make_placement(std::vector<NodeIndex> servers, std::size_t node_count);

/// server_of[i] is the node hosting the server that user i talks to.
struct Assignment {
  std::vector<NodeIndex> server_of;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// Priority-weighted distance statistics. Ordered lexicographically:
/// max_dist first, avg_dist breaks ties.
struct PlacementObjective {
  double max_dist = 0.0;
  double avg_dist = 0.0;
};

/// True when `a` beats `b` lexicographically by more than float noise.
bool objective_better(const PlacementObjective& a, const PlacementObjective& b);

/// Candidate server sites. Empty means every topology node.
struct SiteFilter {
  std::vector<NodeIndex> allowed;

  bool permits(NodeIndex n) const;
  std::vector<NodeIndex> sites(std::size_t node_count) const;
};

Assignment closest_assignment(const DistanceMatrix& dm, std::span<const UserGroup> users,
                              const Placement& p);

/// Objective of an arbitrary assignment (user i contributes
/// priority_i * dist(user_i, server_of[i])).
PlacementObjective evaluate_assignment(const DistanceMatrix& dm, std::span<const UserGroup> users,
                                       const Assignment& a);

PlacementObjective evaluate_placement(const DistanceMatrix& dm, std::span<const UserGroup> users,
                                      const Placement& p);

/// Site minimising the single-server objective; lowest id wins ties.
NodeIndex one_center(const DistanceMatrix& dm, std::span<const UserGroup> users,
                     const SiteFilter& sites = {});

/// Deterministic 2-approximation seed for k-center: the first server goes to
/// the site farthest from the 1-center "orientation mark", every further one
/// to the site farthest from its closest placed server. Distances from a
/// user-hosting node are scaled by that user's priority. Sites hosting users
/// are preferred whenever there are at least k of them.
Placement farthest_first_init(const DistanceMatrix& dm, std::span<const UserGroup> users,
                              std::size_t k, const SiteFilter& sites = {});

struct DragoonMove {
  std::size_t iteration;  // 1-based
  std::size_t server;     // slot index in the initial (sorted) placement
  NodeIndex from;
  NodeIndex to;
  PlacementObjective objective;  // after the move
};

struct DragoonResult {
  Placement placement;
  PlacementObjective objective;
  PlacementObjective initial_objective;
  std::size_t iterations = 0;
  std::vector<DragoonMove> log;
};

/// Farthest-first initialisation followed by neighbour-move local search.
/// Each iteration visits servers in id order; a server shifts to its best
/// free adjacent site if that strictly improves the objective. At most one
/// shift per server per iteration; stops after an iteration without shifts.
DragoonResult dragoon(const DistanceMatrix& dm, const Topology& topo,
                      std::span<const UserGroup> users, std::size_t k,
                      const SiteFilter& sites = {});

struct BruteForceResult {
  Placement placement;
  PlacementObjective objective;
};

inline constexpr double kBruteForceLimit = 1e7;

/// Exact optimum over all k-subsets of sites. Throws Error(kInfeasible) when
/// C(sites, k) exceeds kBruteForceLimit.
BruteForceResult brute_force_placement(const DistanceMatrix& dm, std::span<const UserGroup> users,
                                       std::size_t k, const SiteFilter& sites = {});

}  // namespace cdnsim
