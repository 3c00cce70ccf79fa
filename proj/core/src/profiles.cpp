#include "cdnsim/profiles.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <utility>

#include "cdnsim/csv.hpp"
#include "cdnsim/error.hpp"
#include "cdnsim/rng.hpp"

namespace cdnsim {

Universe make_universe(std::vector<std::string> services) {
  std::sort(services.begin(), services.end());
  services.erase(std::unique(services.begin(), services.end()), services.end());
  if (services.empty()) throw_invalid("empty service universe");
  if (services.front().empty()) throw_invalid("empty service id");
  return std::make_shared<const std::vector<std::string>>(std::move(services));
}

Universe zipf_universe(std::size_t n) {
  if (n == 0) throw_invalid("universe size must be positive");
  const std::size_t width = std::to_string(n - 1).size();
  std::vector<std::string> ids;
  ids.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::string digits = std::to_string(i);
    ids.push_back("s" + std::string(width - digits.size(), '0') + digits);
  }
  return make_universe(std::move(ids));
}

bool same_universe(const Universe& a, const Universe& b) {
  return a == b || (a && b && *a == *b);
}

Profile::Profile(Universe universe, std::vector<double> probabilities)
    : universe_(std::move(universe)), probabilities_(std::move(probabilities)) {
  if (!universe_) throw_invalid("profile without universe");
  if (probabilities_.size() != universe_->size()) {
    throw_invalid("profile size does not match universe size");
  }
  double sum = 0.0;
  for (double p : probabilities_) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw_invalid("negative or non-finite probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw_invalid("profile probabilities sum to " + std::to_string(sum) + ", expected 1");
  }
}

Profile Profile::from_map(Universe universe, const std::map<std::string, double>& entries) {
  if (!universe) throw_invalid("profile without universe");
  std::vector<double> probs(universe->size(), 0.0);
  for (const auto& [service, p] : entries) {
    auto it = std::lower_bound(universe->begin(), universe->end(), service);
    if (it == universe->end() || *it != service) {
      throw_invalid("service '" + service + "' is not in the universe");
    }
    probs[static_cast<std::size_t>(it - universe->begin())] = p;
  }
  return Profile(std::move(universe), std::move(probs));
}

double Profile::probability(std::string_view service) const {
  auto it = std::lower_bound(universe_->begin(), universe_->end(), service);
  if (it == universe_->end() || *it != service) return 0.0;
  return probabilities_[static_cast<std::size_t>(it - universe_->begin())];
}

std::size_t Profile::support_size() const {
  return static_cast<std::size_t>(
      std::count_if(probabilities_.begin(), probabilities_.end(), [](double p) { return p > 0.0; }));
}

std::vector<double> zipf_pmf(double alpha, std::size_t n) {
  if (n == 0) throw_invalid("zipf_pmf needs at least one rank");
  if (!(alpha >= 0.0)) throw_invalid("zipf alpha must be non-negative");
  std::vector<double> pmf(n);
  for (std::size_t r = 0; r < n; ++r) pmf[r] = std::pow(static_cast<double>(r + 1), -alpha);
  // Sum smallest terms first.
  double norm = 0.0;
  for (std::size_t r = n; r-- > 0;) norm += pmf[r];
  for (double& p : pmf) p /= norm;
  return pmf;
}

Profile generate_profile(const ZipfModel& model, const Universe& universe, std::uint64_t seed) {
  if (model.universe_size == 0) throw_invalid("universe size must be positive");
  if (model.profile_size == 0) throw_invalid("profile size must be positive");
  if (model.profile_size > model.universe_size) {
    throw_invalid("profile size " + std::to_string(model.profile_size) + " exceeds universe size " +
                  std::to_string(model.universe_size));
  }
  if (!universe || universe->size() != model.universe_size) {
    throw_invalid("universe does not match the zipf model");
  }

  Rng rng(seed);
  std::vector<double> weight = zipf_pmf(model.alpha, model.universe_size);

  // Popularity-weighted draws without replacement.
  std::vector<std::size_t> support;
  support.reserve(model.profile_size);
  std::vector<bool> taken(model.universe_size, false);
  for (std::size_t draw = 0; draw < model.profile_size; ++draw) {
    double remaining = 0.0;
    for (std::size_t i = 0; i < weight.size(); ++i) {
      if (!taken[i]) remaining += weight[i];
    }
    const double target = rng.uniform01() * remaining;
    double acc = 0.0;
    std::size_t pick = weight.size();
    std::size_t last_free = weight.size();
    for (std::size_t i = 0; i < weight.size(); ++i) {
      if (taken[i]) continue;
      last_free = i;
      acc += weight[i];
      if (target < acc) {
        pick = i;
        break;
      }
    }
    if (pick == weight.size()) pick = last_free;  // rounding at the top end
    taken[pick] = true;
    support.push_back(pick);
  }

  // Fisher-Yates, then rank j of the shuffled support gets pmf[j].
  for (std::size_t i = support.size(); i > 1; --i) {
    std::swap(support[i - 1], support[rng.below(i)]);
  }
  const std::vector<double> local = zipf_pmf(model.alpha, model.profile_size);
  std::vector<double> probs(model.universe_size, 0.0);
  for (std::size_t j = 0; j < support.size(); ++j) probs[support[j]] = local[j];
  return Profile(universe, std::move(probs));
}

std::vector<UserGroup> make_zipf_users(const Topology& topology, const ZipfModel& model,
                                       std::uint64_t master_seed) {
  const Universe universe = zipf_universe(model.universe_size);
  std::vector<UserGroup> users;
  users.reserve(topology.node_count());
  for (NodeIndex i = 0; i < topology.node_count(); ++i) {
    const auto& node = topology.node(i);
    users.push_back({i, node.priority,
                     generate_profile(model, universe, derive_seed(master_seed, node.id))});
  }
  return users;
}

std::vector<TraceProfile> load_trace(std::string_view csv) {
  const CsvTable table = parse_csv(csv);
  if (table.header.empty()) throw_invalid("trace CSV is empty");

  int col_node = -1, col_service = -1, col_count = -1;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    const auto& name = table.header[c];
    int* slot = name == "node_id"      ? &col_node
                : name == "service_id" ? &col_service
                : name == "count"      ? &col_count
                                       : nullptr;
    if (slot == nullptr) throw_invalid("unknown trace column '" + name + "'");
    if (*slot != -1) throw_invalid("duplicate trace column '" + name + "'");
    *slot = static_cast<int>(c);
  }
  if (col_node < 0 || col_service < 0 || col_count < 0) {
    throw_invalid("trace CSV needs columns node_id, service_id, count");
  }

  std::map<std::string, std::map<std::string, std::uint64_t>> counts;
  std::vector<std::string> services;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string line = "trace row " + std::to_string(r + 2);
    if (row.size() != table.header.size()) throw_invalid(line + ": wrong number of fields");
    const auto& node = row[static_cast<std::size_t>(col_node)];
    const auto& service = row[static_cast<std::size_t>(col_service)];
    const auto& count_text = row[static_cast<std::size_t>(col_count)];
    if (node.empty()) throw_invalid(line + ": empty node_id");
    if (service.empty()) throw_invalid(line + ": empty service_id");
    long long count = 0;
    auto [ptr, ec] = std::from_chars(count_text.data(), count_text.data() + count_text.size(), count);
    if (ec != std::errc() || ptr != count_text.data() + count_text.size()) {
      throw_invalid(line + ": count '" + count_text + "' is not an integer");
    }
    if (count <= 0) throw_invalid(line + ": count must be positive");
    counts[node][service] += static_cast<std::uint64_t>(count);
    services.push_back(service);
  }
  if (counts.empty()) throw_invalid("trace CSV has no rows");

  const Universe universe = make_universe(std::move(services));
  std::vector<TraceProfile> out;
  for (const auto& [node, per_service] : counts) {
    std::uint64_t total = 0;
    for (const auto& [s, c] : per_service) total += c;
    std::map<std::string, double> probs;
    for (const auto& [s, c] : per_service) {
      probs[s] = static_cast<double>(c) / static_cast<double>(total);
    }
    out.push_back({node, Profile::from_map(universe, probs)});
  }
  return out;
}

std::vector<UserGroup> bind_trace_users(const Topology& topology,
                                        const std::vector<TraceProfile>& traces) {
  std::vector<UserGroup> users;
  users.reserve(traces.size());
  for (const auto& t : traces) {
    const NodeIndex node = topology.index_of(t.node_id);
    users.push_back({node, topology.node(node).priority, t.profile});
  }
  std::sort(users.begin(), users.end(),
            [](const UserGroup& a, const UserGroup& b) { return a.node < b.node; });
  return users;
}

Profile aggregate(std::span<const Profile> profiles) {
  if (profiles.empty()) throw_invalid("cannot aggregate an empty list of profiles");
  const Universe& universe = profiles.front().universe();
  std::vector<double> mean(universe->size(), 0.0);
  for (const auto& p : profiles) {
    if (!same_universe(p.universe(), universe)) throw_invalid("aggregate: universe mismatch");
    const auto probs = p.probabilities();
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += probs[i];
  }
  const double k = static_cast<double>(profiles.size());
  for (double& m : mean) m /= k;
  return Profile(universe, std::move(mean));
}

std::vector<double> descending_midranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  std::vector<double> ranks(n);
  std::size_t start = 0;
  while (start < n) {
    std::size_t end = start + 1;
    while (end < n && values[order[end - 1]] - values[order[end]] <= kTieTolerance) ++end;
    // Positions start..end-1 hold ranks start+1..end.
    const double mid = 0.5 * static_cast<double>(start + 1 + end);
    for (std::size_t i = start; i < end; ++i) ranks[order[i]] = mid;
    start = end;
  }
  return ranks;
}

double spearman(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw_invalid("spearman: universe mismatch");
  const std::size_t n = p.size();
  if (n < 2) throw_invalid("spearman needs at least two services");
  const auto rp = descending_midranks(p);
  const auto rq = descending_midranks(q);
  double d2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = rp[i] - rq[i];
    d2 += d * d;
  }
  const double nn = static_cast<double>(n);
  return 1.0 - 6.0 * d2 / (nn * (nn * nn - 1.0));
}

double spearman(const Profile& p, const Profile& q) {
  if (!same_universe(p.universe(), q.universe())) throw_invalid("spearman: universe mismatch");
  return spearman(p.probabilities(), q.probabilities());
}

}  // namespace cdnsim
