#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "cdnsim/assignment.hpp"
#include "cdnsim/placement.hpp"
#include "cdnsim/simulation.hpp"

namespace cdnsim {

/// One candidate CDN configuration. avg_dist is minimised, total_corr
/// maximised.
struct SolutionPoint {
  Placement placement;
  Assignment assignment;
  double avg_dist = 0.0;
  double total_corr = 0.0;
  double max_dist = 0.0;
  std::optional<SimulationResult> sim;
  std::uint64_t seed = 0;
  std::size_t step = 0;
};

/// Sorted by ascending avg_dist with strictly increasing total_corr.
using ParetoFront = std::vector<SolutionPoint>;

bool dominates(const SolutionPoint& a, const SolutionPoint& b);

/// Maximal non-dominated subset. Points with identical objectives collapse
/// to the one with the lowest step.
ParetoFront non_dominated(std::vector<SolutionPoint> points);

struct FrontOptions {
  std::size_t steps = 50;
  std::uint64_t seed = 1;
  /// Attach a simulation run (using the scenario's cache and origin) to every
  /// point of the final front.
  bool simulate = false;
  SiteFilter sites;
};

/// Distance/correlation front for k servers. Step 0 is the Dragoon placement
/// with closest-server assignment; steps 1..steps-2 are a seeded random walk
/// that applies one randomly picked correlation proposal per step; step
/// steps-1 is the correlation greedy fixpoint after server relocation. All
/// recorded states are filtered through non_dominated().
ParetoFront front_sweep(const Scenario& scenario, std::size_t k, const FrontOptions& options);

/// Every state front_sweep records, before filtering.
std::vector<SolutionPoint> front_states(const Scenario& scenario, std::size_t k,
                                        const FrontOptions& options);

}  // namespace cdnsim
