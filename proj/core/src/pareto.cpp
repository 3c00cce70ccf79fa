#include "cdnsim/pareto.hpp"

#include <algorithm>

#include "cdnsim/error.hpp"
#include "cdnsim/rng.hpp"

namespace cdnsim {

bool dominates(const SolutionPoint& a, const SolutionPoint& b) {
  return a.avg_dist <= b.avg_dist && a.total_corr >= b.total_corr &&
         (a.avg_dist < b.avg_dist || a.total_corr > b.total_corr);
}

ParetoFront non_dominated(std::vector<SolutionPoint> points) {
  std::stable_sort(points.begin(), points.end(), [](const SolutionPoint& a, const SolutionPoint& b) {
    if (a.avg_dist != b.avg_dist) return a.avg_dist < b.avg_dist;
    if (a.total_corr != b.total_corr) return a.total_corr > b.total_corr;
    return a.step < b.step;
  });
  ParetoFront front;
  for (auto& p : points) {
    // Everything before p has avg_dist <= p's, so p survives only if it beats
    // the best correlation seen so far.
    if (front.empty() || p.total_corr > front.back().total_corr) front.push_back(std::move(p));
  }
  return front;
}

namespace {

SolutionPoint make_point(const Scenario& s, Placement placement, Assignment assignment,
                         std::uint64_t seed, std::size_t step) {
  const auto obj = evaluate_correlation(*s.distances, s.users, assignment);
  SolutionPoint p;
  p.placement = std::move(placement);
  p.assignment = std::move(assignment);
  p.avg_dist = obj.avg_dist;
  p.total_corr = obj.total_corr;
  p.max_dist = obj.max_dist;
  p.seed = seed;
  p.step = step;
  return p;
}

}  // namespace

std::vector<SolutionPoint> front_states(const Scenario& scenario, std::size_t k,
                                        const FrontOptions& options) {
  if (!scenario.topology || !scenario.distances) throw_invalid("scenario without topology");
  if (options.steps < 2) throw_invalid("front sweep needs at least 2 steps");
  const auto& dm = *scenario.distances;
  const auto& users = scenario.users;

  const auto placed = dragoon(dm, *scenario.topology, users, k, options.sites);
  const Assignment start = closest_assignment(dm, users, placed.placement);

  std::vector<SolutionPoint> states;
  states.push_back(make_point(scenario, placed.placement, start, options.seed, 0));

  Rng rng(derive_seed(options.seed, "pareto-walk"));
  Assignment walk = start;
  for (std::size_t step = 1; step + 1 < options.steps; ++step) {
    const auto proposals = correlation_proposals(users, placed.placement, walk);
    if (proposals.empty()) break;
    const auto& pick = proposals[rng.below(proposals.size())];
    walk.server_of[pick.user] = pick.to;
    states.push_back(make_point(scenario, placed.placement, walk, options.seed, step));
  }

  const auto greedy = greedy_correlation(dm, users, placed.placement, start);
  auto moved = relocate_servers(dm, users, placed.placement, greedy.assignment, options.sites);
  states.push_back(make_point(scenario, std::move(moved.placement), std::move(moved.assignment),
                              options.seed, options.steps - 1));
  return states;
}

ParetoFront front_sweep(const Scenario& scenario, std::size_t k, const FrontOptions& options) {
  ParetoFront front = non_dominated(front_states(scenario, k, options));
  if (options.simulate) {
    for (auto& p : front) {
      Scenario s = scenario;
      s.placement = p.placement;
      s.assignment = p.assignment;
      p.sim = run(s);
    }
  }
  return front;
}

}  // namespace cdnsim
