#include "cdnsim/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "cdnsim/error.hpp"

namespace cdnsim {
namespace {

constexpr double kEps = 1e-9;

// Running per-server sums of member profiles.
class GroupSums {
 public:
  GroupSums(std::span<const UserGroup> users, const Assignment& a) : users_(users) {
    if (a.server_of.size() != users.size()) throw_invalid("assignment does not cover every user");
    if (users.empty()) return;
    width_ = users.front().profile.size();
    for (std::size_t i = 0; i < users.size(); ++i) {
      if (!same_universe(users[i].profile.universe(), users.front().profile.universe())) {
        throw_invalid("user profiles do not share a universe");
      }
      auto& g = groups_[a.server_of[i]];
      if (g.sum.empty()) g.sum.assign(width_, 0.0);
      const auto p = users[i].profile.probabilities();
      for (std::size_t j = 0; j < width_; ++j) g.sum[j] += p[j];
      ++g.count;
    }
  }

  std::size_t count(NodeIndex s) const {
    auto it = groups_.find(s);
    return it == groups_.end() ? 0 : it->second.count;
  }

  // Mean of the group at s, with user u added unless already a member.
  std::vector<double> mean_with(NodeIndex s, std::size_t u, bool member) const {
    std::vector<double> mean(width_, 0.0);
    std::size_t n = 0;
    if (auto it = groups_.find(s); it != groups_.end()) {
      mean = it->second.sum;
      n = it->second.count;
    }
    if (!member) {
      const auto p = users_[u].profile.probabilities();
      for (std::size_t j = 0; j < width_; ++j) mean[j] += p[j];
      ++n;
    }
    for (double& m : mean) m /= static_cast<double>(n);
    return mean;
  }

  double rho(NodeIndex s, std::size_t u, bool member) const {
    return spearman(users_[u].profile.probabilities(), mean_with(s, u, member));
  }

 private:
  struct Group {
    std::vector<double> sum;
    std::size_t count = 0;
  };
  std::span<const UserGroup> users_;
  std::size_t width_ = 0;
  std::map<NodeIndex, Group> groups_;
};

}  // namespace

Profile server_profile(std::span<const UserGroup> users, const Assignment& a, NodeIndex s) {
  if (a.server_of.size() != users.size()) throw_invalid("assignment does not cover every user");
  std::vector<Profile> members;
  for (std::size_t i = 0; i < users.size(); ++i) {
    if (a.server_of[i] == s) members.push_back(users[i].profile);
  }
  if (members.empty()) throw_invalid("server has no assigned users");
  return aggregate(members);
}

double candidate_corr(std::span<const UserGroup> users, const Assignment& a, std::size_t u,
                      NodeIndex s) {
  if (u >= users.size()) throw_invalid("candidate_corr: user out of range");
  const GroupSums sums(users, a);
  return sums.rho(s, u, a.server_of[u] == s);
}

double total_correlation(std::span<const UserGroup> users, const Assignment& a) {
  const GroupSums sums(users, a);
  double total = 0.0;
  for (std::size_t i = 0; i < users.size(); ++i) total += sums.rho(a.server_of[i], i, true);
  return total;
}

AssignmentObjective evaluate_correlation(const DistanceMatrix& dm,
                                         std::span<const UserGroup> users, const Assignment& a) {
  const auto dist = evaluate_assignment(dm, users, a);
  return {total_correlation(users, a), dist.max_dist, dist.avg_dist};
}

std::vector<Proposal> correlation_proposals(std::span<const UserGroup> users,
                                            const Placement& placement, const Assignment& a) {
  const GroupSums sums(users, a);
  std::vector<Proposal> out;
  for (std::size_t u = 0; u < users.size(); ++u) {
    const NodeIndex cur = a.server_of[u];
    const double current = sums.rho(cur, u, true);
    Proposal best{u, cur, current, current};
    for (NodeIndex s : placement.servers) {
      if (s == cur) continue;
      const double r = sums.rho(s, u, false);
      if (r > 0.0 && r > best.rho + kEps) best = {u, s, r, current};
    }
    if (best.to != cur) out.push_back(best);
  }
  return out;
}

GreedyResult greedy_correlation(const DistanceMatrix& dm, std::span<const UserGroup> users,
                                const Placement& placement, const Assignment& initial,
                                std::size_t max_iterations) {
  if (initial.server_of.size() != users.size()) {
    throw_invalid("initial assignment does not cover every user");
  }
  for (NodeIndex s : initial.server_of) {
    if (!std::binary_search(placement.servers.begin(), placement.servers.end(), s)) {
      throw_invalid("initial assignment references a node without a server");
    }
  }

  GreedyResult result;
  result.assignment = initial;
  double total = total_correlation(users, result.assignment);
  for (std::size_t iter = 1; iter <= max_iterations; ++iter) {
    const auto proposals = correlation_proposals(users, placement, result.assignment);
    if (proposals.empty()) {
      result.log.push_back({iter, 0, total, total, false});
      break;
    }
    Assignment next = result.assignment;
    for (const auto& p : proposals) next.server_of[p.user] = p.to;
    const double next_total = total_correlation(users, next);
    const bool accepted = next_total > total + kEps;
    result.log.push_back({iter, proposals.size(), total, next_total, accepted});
    if (!accepted) break;
    result.assignment = std::move(next);
    total = next_total;
  }
  const auto dist = evaluate_assignment(dm, users, result.assignment);
  result.objective = {total, dist.max_dist, dist.avg_dist};
  return result;
}

Relocation relocate_servers(const DistanceMatrix& dm, std::span<const UserGroup> users,
                            const Placement& placement, const Assignment& a,
                            const SiteFilter& sites) {
  if (a.server_of.size() != users.size()) throw_invalid("assignment does not cover every user");

  std::map<NodeIndex, std::vector<UserGroup>> groups;
  for (std::size_t i = 0; i < users.size(); ++i) {
    if (!std::binary_search(placement.servers.begin(), placement.servers.end(), a.server_of[i])) {
      throw_invalid("assignment references a node without a server");
    }
    groups[a.server_of[i]].push_back(users[i]);
  }

  // Sites held by servers that have not been relocated yet, or already
  // claimed by relocated ones.
  std::vector<bool> blocked(dm.size(), false);
  for (NodeIndex s : placement.servers) blocked[s] = true;

  std::map<NodeIndex, NodeIndex> moved;
  for (NodeIndex s : placement.servers) {
    auto it = groups.find(s);
    if (it == groups.end()) {
      moved[s] = s;
      continue;
    }
    blocked[s] = false;
    SiteFilter free;
    for (NodeIndex x : sites.sites(dm.size())) {
      if (!blocked[x]) free.allowed.push_back(x);
    }
    if (!std::binary_search(free.allowed.begin(), free.allowed.end(), s)) {
      free.allowed.insert(std::lower_bound(free.allowed.begin(), free.allowed.end(), s), s);
    }
    const NodeIndex target = one_center(dm, it->second, free);
    blocked[target] = true;
    moved[s] = target;
  }

  Relocation out;
  std::vector<NodeIndex> servers;
  for (const auto& [from, to] : moved) servers.push_back(to);
  out.placement = make_placement(std::move(servers), dm.size());
  out.assignment.server_of.reserve(users.size());
  for (NodeIndex s : a.server_of) out.assignment.server_of.push_back(moved.at(s));
  return out;
}

}  // namespace cdnsim
