#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "cdnsim/assignment.hpp"
#include "cdnsim/cache.hpp"
#include "cdnsim/placement.hpp"
#include "cdnsim/profiles.hpp"
#include "cdnsim/topology.hpp"

namespace cdnsim {

/// Everything one simulation run needs. Users must sit on distinct nodes.
struct Scenario {
  std::shared_ptr<const Topology> topology;
  std::shared_ptr<const DistanceMatrix> distances;
  std::vector<UserGroup> users;
  Placement placement;
  Assignment assignment;
  CacheConfig cache;
  NodeIndex origin = 0;
  std::uint64_t master_seed = 1;
  std::size_t requests_per_user = 100;
};

/// Throws Error(kInvalidInput) on dangling references or bad parameters.
void validate(const Scenario& s);

struct ServerStats {
  NodeIndex server;
  std::size_t users;
  CacheStats stats;
  friend bool operator==(const ServerStats&, const ServerStats&) = default;
};

struct SimulationResult {
  std::vector<ServerStats> per_server;  // ascending server id
  CacheStats total;
  double miss_ratio = 0.0;
  double max_user_distance = 0.0;  // priority weighted, as in PlacementObjective
  double avg_user_distance = 0.0;
  double network_load = 0.0;  // sum of user->server path weights, plus server->origin per miss

  friend bool operator==(const SimulationResult&, const SimulationResult&) = default;
};

/// `count` i.i.d. draws from the user's profile, as universe indices. The
/// stream is seeded with derive_seed(master_seed, "requests/" + node id).
std::vector<ItemId> generate_requests(const UserGroup& user, const Topology& topology,
                                      std::uint64_t master_seed, std::size_t count);

/// Requests are interleaved round-robin over users in node-id order (one
/// request per user per round), split per server, then each server's stream
/// is replayed through its own cache.
SimulationResult run(const Scenario& s);

/// The 1-center of the user population, used when no origin is configured.
NodeIndex default_origin(const DistanceMatrix& dm, std::span<const UserGroup> users);

enum class Optimizer {
  kDistance,     // Dragoon placement, closest-server assignment
  kCorrelation,  // the above, then correlation greedy and server relocation
};

Optimizer parse_optimizer(std::string_view name);
std::string_view to_string(Optimizer o);

struct Solution {
  Placement placement;
  Assignment assignment;
};

Solution optimize(const DistanceMatrix& dm, const Topology& topo, std::span<const UserGroup> users,
                  std::size_t k, Optimizer optimizer, const SiteFilter& sites = {});

enum class SweepAxis { kServerCount, kCacheSize, kPolicy };

SweepAxis parse_sweep_axis(std::string_view name);
std::string_view to_string(SweepAxis axis);

struct SweepRow {
  std::string axis_value;
  SimulationResult result;
};

/// One run per value, all with the base scenario's seed. Server-count points
/// re-optimise placement and assignment with `optimizer`.
std::vector<SweepRow> experiment_sweep(const Scenario& base, SweepAxis axis,
                                       const std::vector<std::string>& values,
                                       Optimizer optimizer = Optimizer::kDistance,
                                       const SiteFilter& sites = {});

}  // namespace cdnsim
