#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cdnsim/topology.hpp"

namespace cdnsim {

/// Sorted, duplicate-free list of service ids shared by a set of profiles.
using Universe = std::shared_ptr<const std::vector<std::string>>;

/// Sorts, deduplicates and freezes a list of service ids.
Universe make_universe(std::vector<std::string> services);

/// Universe of `n` synthetic services "s0".."s{n-1}", zero padded so that
/// lexicographic order equals popularity rank order.
Universe zipf_universe(std::size_t n);

bool same_universe(const Universe& a, const Universe& b);

/// Request distribution over a universe: probabilities[i] belongs to
/// (*universe)[i]. Absent services carry probability 0.
class Profile {
 public:
  /// Throws Error(kInvalidInput) unless the probabilities are non-negative and
  /// sum to 1 within 1e-9.
  Profile(Universe universe, std::vector<double> probabilities);

  static Profile from_map(Universe universe, const std::map<std::string, double>& entries);

  const Universe& universe() const { return universe_; }
  std::span<const double> probabilities() const { return probabilities_; }
  std::size_t size() const { return probabilities_.size(); }
  double probability(std::string_view service) const;
  /// Number of services with non-zero probability.
  std::size_t support_size() const;

  friend bool operator==(const Profile& a, const Profile& b) {
    return same_universe(a.universe_, b.universe_) && a.probabilities_ == b.probabilities_;
  }

 private:
  Universe universe_;
  std::vector<double> probabilities_;
};

struct ZipfModel {
  double alpha = 0.3;
  std::size_t universe_size = 100;
  std::size_t profile_size = 15;
};

/// pmf(r) = r^-alpha / sum_{j=1..n} j^-alpha for ranks r = 1..n.
std::vector<double> zipf_pmf(double alpha, std::size_t n);

/// Synthetic user profile. The `profile_size` liked services are drawn
/// without replacement from `universe` weighted by global Zipf popularity;
/// they are then shuffled and given zipf_pmf(alpha, profile_size) in the
/// shuffled order. `universe` must have model.universe_size entries.
Profile generate_profile(const ZipfModel& model, const Universe& universe, std::uint64_t seed);

struct UserGroup {
  NodeIndex node = 0;
  double priority = 1.0;
  Profile profile;
};

/// One user group per topology node, seeded with derive_seed(master_seed, id).
std::vector<UserGroup> make_zipf_users(const Topology& topology, const ZipfModel& model,
                                       std::uint64_t master_seed);

struct TraceProfile {
  std::string node_id;
  Profile profile;
};

/// Parses a `node_id,service_id,count` CSV (header row required, any column
/// order). One profile per node, counts normalised per node; all profiles
/// share the universe of every service mentioned in the file. Output is
/// sorted by node id.
std::vector<TraceProfile> load_trace(std::string_view csv);

/// Binds trace profiles to topology nodes, taking priority from the node.
std::vector<UserGroup> bind_trace_users(const Topology& topology,
                                        const std::vector<TraceProfile>& traces);

/// Unweighted arithmetic mean of profiles over a shared universe.
Profile aggregate(std::span<const Profile> profiles);

/// Values whose gap is at most this are treated as tied when ranking.
inline constexpr double kTieTolerance = 1e-12;

/// 1-based ranks, largest value first, tied values share their mean rank.
std::vector<double> descending_midranks(std::span<const double> values);

/// Spearman's rho in the d-squared form on midranks, without tie correction:
/// rho = 1 - 6 * sum(d^2) / (n (n^2 - 1)), n = universe size.
double spearman(std::span<const double> p, std::span<const double> q);
double spearman(const Profile& p, const Profile& q);

}  // namespace cdnsim
