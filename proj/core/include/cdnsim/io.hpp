#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cdnsim/assignment.hpp"
#include "cdnsim/cache.hpp"
#include "cdnsim/pareto.hpp"
#include "cdnsim/placement.hpp"
#include "cdnsim/profiles.hpp"
#include "cdnsim/simulation.hpp"
#include "cdnsim/topology.hpp"

namespace cdnsim {

/// Whole-file read/write; failures throw Error(kIo).
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

// Canonical JSON forms. Keys and node/service lists are sorted, so the same
// value always serialises to the same bytes.

/// {"nodes":[{"id","label","priority"}...],"edges":[{"a","b","weight"}...]}
std::string topology_to_json(const Topology& t);
Topology topology_from_json(std::string_view text);

/// {"users":[{"node","priority","profile":{service: p, ...}}...]}; only
/// non-zero probabilities are listed.
std::string users_to_json(const Topology& t, std::span<const UserGroup> users);

/// Sorted JSON array of node ids.
std::string placement_to_json(const Topology& t, const Placement& p);
/// Throws Error(kInvalidInput) on unknown ids or malformed JSON.
Placement placement_from_json(const Topology& t, std::string_view text);

// CSV outputs. Each starts with a header row; column order is fixed.

/// iteration,server,from,to,max_dist,avg_dist
std::string dragoon_log_csv(const Topology& t, const DragoonResult& r);
/// user_node,server_node,rho,distance
std::string assignment_csv(const Topology& t, const DistanceMatrix& dm,
                           std::span<const UserGroup> users, const Assignment& a);
/// iteration,moves_proposed,total_corr_before,total_corr_after,accepted
std::string greedy_log_csv(const GreedyResult& r);

struct StatsRow {
  CachePolicyKind policy;
  std::size_t capacity;
  CacheStats stats;
};
/// policy,capacity,requests,hits,misses,cold_misses,miss_ratio
std::string stats_csv(std::span<const StatsRow> rows);
/// server,users,policy,capacity,requests,hits,misses,cold_misses,miss_ratio
std::string server_stats_csv(const Topology& t, const CacheConfig& cache,
                             const SimulationResult& r);
/// axis_value,miss_ratio,max_dist,avg_dist,network_load,cold_misses
std::string sweep_csv(std::span<const SweepRow> rows);
/// avg_dist,total_corr,max_dist,miss_ratio,placement,seed,step
/// (miss_ratio empty when not simulated; placement is ';'-joined ids)
std::string front_csv(const Topology& t, const ParetoFront& front);

}  // namespace cdnsim
