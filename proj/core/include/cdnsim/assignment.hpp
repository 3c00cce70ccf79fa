#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cdnsim/placement.hpp"
#include "cdnsim/profiles.hpp"

namespace cdnsim {

struct AssignmentObjective {
  double total_corr = 0.0;  // sum over users of rho(user, its server's profile)
  double max_dist = 0.0;
  double avg_dist = 0.0;
};

/// Mean profile of the users assigned to server `s`. Throws when none is.
Profile server_profile(std::span<const UserGroup> users, const Assignment& a, NodeIndex s);

/// Rho between user `u` and the profile server `s` would have with `u` in
/// its group. A server with no members yields the user's self-correlation.
double candidate_corr(std::span<const UserGroup> users, const Assignment& a, std::size_t u,
                      NodeIndex s);

/// Sum over users of candidate_corr(users, a, i, a.server_of[i]).
double total_correlation(std::span<const UserGroup> users, const Assignment& a);

AssignmentObjective evaluate_correlation(const DistanceMatrix& dm,
                                         std::span<const UserGroup> users, const Assignment& a);

/// A user's wish to move: the best server whose candidate rho is positive
/// and strictly above the user's current rho.
struct Proposal {
  std::size_t user;
  NodeIndex to;
  double rho;
  double current;
};

/// Proposals of every user against one snapshot of the assignment, in user
/// order. Equally good servers resolve to the lowest id.
std::vector<Proposal> correlation_proposals(std::span<const UserGroup> users,
                                            const Placement& placement, const Assignment& a);

struct GreedyIteration {
  std::size_t iteration;
  std::size_t moves_proposed;
  double total_corr_before;
  double total_corr_after;
  bool accepted;
};

struct GreedyResult {
  Assignment assignment;
  AssignmentObjective objective;
  std::vector<GreedyIteration> log;
};

/// Simultaneous-reassignment greedy for the correlation objective. Every
/// iteration applies all proposals at once; the batch is kept only if the
/// total correlation strictly rises, otherwise it is rolled back and the
/// search stops. Also stops when nobody proposes a move.
GreedyResult greedy_correlation(const DistanceMatrix& dm, std::span<const UserGroup> users,
                                const Placement& placement, const Assignment& initial,
                                std::size_t max_iterations = 1000);

struct Relocation {
  Placement placement;
  Assignment assignment;  // same groups, pointing at the new sites
};

/// Moves every server to the 1-center of its user group. Servers are handled
/// in id order; a site is only available if no earlier server took it and it
/// is not the current site of a server still waiting its turn, so every
/// server can at worst stay where it is. Servers with no users stay put.
Relocation relocate_servers(const DistanceMatrix& dm, std::span<const UserGroup> users,
                            const Placement& placement, const Assignment& a,
                            const SiteFilter& sites = {});

}  // namespace cdnsim
