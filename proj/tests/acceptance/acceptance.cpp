// Acceptance suite: one PASS/FAIL line per criterion.
//   cdnsim_acceptance            run all
//   cdnsim_acceptance --only 5   run one
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>

#include "cdnsim/assignment.hpp"
#include "cdnsim/cache.hpp"
#include "cdnsim/graphml.hpp"
#include "cdnsim/io.hpp"
#include "cdnsim/pareto.hpp"
#include "cdnsim/placement.hpp"
#include "cdnsim/profiles.hpp"
#include "cdnsim/rng.hpp"
#include "cdnsim/simulation.hpp"
#include "cli.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace cdnsim;
using namespace testing_support;

namespace {

const std::string kData = CDNSIM_TEST_DATA;

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(double v, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

// Independent Spearman: midranks by counting, d-squared form.
double spearman_oracle(const std::vector<double>& p, const std::vector<double>& q) {
  auto ranks = [](const std::vector<double>& v) {
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      double greater = 0, equal = 0;
      for (double x : v) {
        if (x > v[i] + 1e-12) greater += 1;
        else if (std::abs(x - v[i]) <= 1e-12) equal += 1;
      }
      r[i] = greater + (equal + 1) / 2;
    }
    return r;
  };
  const auto a = ranks(p), b = ranks(q);
  const double n = double(p.size());
  double d2 = 0;
  for (std::size_t i = 0; i < p.size(); ++i) d2 += (a[i] - b[i]) * (a[i] - b[i]);
  return 1 - 6 * d2 / (n * (n * n - 1));
}

std::shared_ptr<const Topology> load_backbone() {
  return std::make_shared<const Topology>(
      parse_graphml(read_file(kData + "/backbone_124.graphml"), {"LinkWeight", ""}).topology);
}

// 1 -------------------------------------------------------------------------
Verdict spearman_anchor() {
  const Universe u = make_universe({"A", "B", "C"});
  const Profile server(u, {0.4, 0.25, 0.35});
  const Profile u1(u, {0.5, 0.5, 0.0});
  const Profile u2(u, {0.3, 0.0, 0.7});
  const auto t0 = Clock::now();
  const double r1 = spearman(u1, server);
  const double r2 = spearman(u2, server);
  const double ms = seconds_since(t0) * 1e3;
  const bool ok = std::abs(r1 - 0.125) <= 1e-9 && std::abs(r2 - 0.5) <= 1e-9 && ms < 1.0;
  return {ok, "rho1=" + fmt(r1, 12) + " rho2=" + fmt(r2, 12) + " time_ms=" + fmt(ms, 3)};
}

// 2 -------------------------------------------------------------------------
Verdict placement_ratio() {
  const auto t0 = Clock::now();
  std::size_t cases = 0, within = 0, optimal = 0;
  double worst = 0;
  for (std::uint64_t seed = 1; seed <= 250; ++seed) {
    Rng rng(derive_seed(seed, "acceptance/placement"));
    const std::size_t n = 4 + rng.below(9);
    const std::size_t k = 1 + rng.below(3);
    const auto topo = random_topology(seed, n, rng.below(n), seed % 2 == 0);
    const auto dm = all_pairs_shortest_paths(topo);
    const auto users = users_everywhere(topo);
    const auto heuristic = dragoon(dm, topo, users, k);
    const auto exact = brute_force_placement(dm, users, k);
    ++cases;
    const double ratio = exact.objective.max_dist > 0 ? heuristic.objective.max_dist / exact.objective.max_dist : 1.0;
    worst = std::max(worst, ratio);
    within += heuristic.objective.max_dist <= 2 * exact.objective.max_dist + 1e-9;
    optimal += std::abs(heuristic.objective.max_dist - exact.objective.max_dist) <= 1e-9;
  }
  const double secs = seconds_since(t0);
  return {within == cases && secs < 60,
          "graphs=" + std::to_string(cases) + " within_2x=" + std::to_string(within) +
              " optimal=" + fmt(100.0 * optimal / cases, 3) + "% worst_ratio=" + fmt(worst) +
              " time_s=" + fmt(secs, 3)};
}

// 3 and 4 share these traces ------------------------------------------------
std::vector<std::vector<ItemId>> zipf_traces() {
  std::vector<std::vector<ItemId>> traces;
  const double alphas[] = {0.3, 0.8, 1.2};
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto pmf = zipf_pmf(alphas[seed % 3], 30);
    std::vector<double> cdf(pmf.size());
    std::partial_sum(pmf.begin(), pmf.end(), cdf.begin());
    Rng rng(derive_seed(seed, "acceptance/trace"));
    std::vector<ItemId> t;
    for (int i = 0; i < 1000; ++i) {
      const auto r = std::size_t(std::lower_bound(cdf.begin(), cdf.end(), rng.uniform01()) - cdf.begin());
      t.push_back(ItemId(std::min<std::size_t>(r, 29)));
    }
    traces.push_back(std::move(t));
  }
  return traces;
}

Verdict belady_dominance() {
  const auto t0 = Clock::now();
  std::size_t checks = 0, violations = 0;
  for (const auto& t : zipf_traces()) {
    for (std::size_t c : {2u, 5u, 10u}) {
      const auto opt = replay(t, {c, CachePolicyKind::kBelady}).misses;
      for (auto p : {CachePolicyKind::kLru, CachePolicyKind::kLru2, CachePolicyKind::kLfu, CachePolicyKind::kLirs}) {
        ++checks;
        violations += opt > replay(t, {c, p}).misses;
      }
    }
  }
  const double secs = seconds_since(t0);
  return {violations == 0 && secs < 30,
          "comparisons=" + std::to_string(checks) + " violations=" + std::to_string(violations) +
              " time_s=" + fmt(secs, 3)};
}

Verdict stack_monotonicity() {
  std::size_t traces = 0, violations = 0;
  auto check = [&](const std::vector<ItemId>& t) {
    ++traces;
    for (auto p : {CachePolicyKind::kLru, CachePolicyKind::kBelady}) {
      std::uint64_t prev = ~0ull;
      for (std::size_t c = 1; c <= 20; ++c) {
        const auto m = replay(t, {c, p}).misses;
        violations += m > prev;
        prev = m;
      }
    }
  };
  for (const auto& t : zipf_traces()) check(t);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed);
    std::vector<ItemId> t;
    for (int i = 0; i < 500; ++i) t.push_back(ItemId(rng.below(40)));
    check(t);
  }
  return {violations == 0, "traces=" + std::to_string(traces) + " capacities=1..20 violations=" +
                               std::to_string(violations)};
}

// 5 -------------------------------------------------------------------------
// Five user groups, each with its own server, so every cache sees exactly one
// 15-service profile. This is the most favourable layout for a flat curve.
Verdict cache_curve_shape() {
  std::vector<NodeSpec> nodes;
  std::vector<EdgeSpec> edges;
  for (int i = 0; i < 5; ++i) nodes.push_back({"g" + std::to_string(i), "", 1.0});
  for (int i = 1; i < 5; ++i) edges.push_back({"g0", "g" + std::to_string(i), 1.0});
  auto topo = std::make_shared<const Topology>(nodes, edges);
  Scenario s;
  s.topology = topo;
  s.distances = std::make_shared<const DistanceMatrix>(all_pairs_shortest_paths(*topo));
  s.users = make_zipf_users(*topo, {0.3, 100, 15}, 1);
  s.placement = make_placement({0, 1, 2, 3, 4}, 5);
  s.assignment.server_of = {0, 1, 2, 3, 4};
  s.cache.policy = CachePolicyKind::kBelady;
  s.requests_per_user = 100;
  const auto rows = experiment_sweep(s, SweepAxis::kCacheSize, {"2", "12", "20"});
  const double m2 = 100 * rows[0].result.miss_ratio;
  const double m12 = 100 * rows[1].result.miss_ratio;
  const double m20 = 100 * rows[2].result.miss_ratio;
  // Stagnation: going from 12 to 20 slots changes the miss ratio by < 1pp.
  const bool flat = std::abs(m12 - m20) < 1.0;
  const bool steep = m2 - m12 > 10.0;
  return {flat && steep, "miss%: C2=" + fmt(m2) + " C12=" + fmt(m12) + " C20=" + fmt(m20) +
                             " |C12-C20|=" + fmt(std::abs(m12 - m20)) + "pp (<1) C2-C12=" +
                             fmt(m2 - m12) + "pp (>10)"};
}

// 6 -------------------------------------------------------------------------
Verdict correlation_miss_ratio() {
  auto topo = std::make_shared<const Topology>(
      parse_graphml(read_file(kData + "/two_clusters.graphml"), {"LinkWeight", ""}).topology);
  auto dm = std::make_shared<const DistanceMatrix>(all_pairs_shortest_paths(*topo));
  const auto users = bind_trace_users(*topo, load_trace(read_file(kData + "/two_clusters_trace.csv")));
  const auto by_distance = optimize(*dm, *topo, users, 2, Optimizer::kDistance);
  const auto by_corr = optimize(*dm, *topo, users, 2, Optimizer::kCorrelation);
  double dist_sum = 0, corr_sum = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Scenario s;
    s.topology = topo;
    s.distances = dm;
    s.users = users;
    s.cache = {6, CachePolicyKind::kBelady};  // each profile holds 10 services
    s.origin = default_origin(*dm, users);
    s.master_seed = seed;
    s.placement = by_distance.placement;
    s.assignment = by_distance.assignment;
    dist_sum += run(s).miss_ratio;
    s.placement = by_corr.placement;
    s.assignment = by_corr.assignment;
    corr_sum += run(s).miss_ratio;
  }
  const double ratio = corr_sum / dist_sum;
  return {ratio <= 0.6, "mean miss: distance=" + fmt(dist_sum / 10) + " correlation=" + fmt(corr_sum / 10) +
                            " ratio=" + fmt(ratio) + " (<=0.6)"};
}

// 7 -------------------------------------------------------------------------
double exhaustive_two_server_optimum(const std::vector<UserGroup>& users) {
  const std::size_t n = users.size();
  double best = -1e300;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    double total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const unsigned side = mask >> i & 1;
      std::vector<double> mean(users[i].profile.size(), 0.0);
      int members = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if ((mask >> j & 1) != side) continue;
        ++members;
        for (std::size_t s = 0; s < mean.size(); ++s) mean[s] += users[j].profile.probabilities()[s];
      }
      for (auto& m : mean) m /= members;
      const auto p = users[i].profile.probabilities();
      total += spearman_oracle({p.begin(), p.end()}, mean);
    }
    best = std::max(best, total);
  }
  return best;
}

Verdict greedy_behaviour() {
  std::size_t instances = 0, bounded = 0, monotone = 0, small = 0, small_optimal = 0, max_iters = 0;
  for (std::uint64_t seed = 1; seed <= 500; ++seed) {
    Rng rng(derive_seed(seed, "acceptance/greedy"));
    const bool tiny = seed % 2 == 0;
    const std::size_t n_users = tiny ? 3 + rng.below(6) : 6 + rng.below(20);
    const std::size_t k = tiny ? 2 : 2 + rng.below(4);
    const std::size_t universe = 6 + rng.below(10);
    const std::size_t support = 2 + rng.below(universe - 2);
    const auto topo = random_topology(seed, n_users, n_users / 3);
    const auto dm = all_pairs_shortest_paths(topo);
    const auto u = zipf_universe(universe);
    std::vector<UserGroup> users;
    for (NodeIndex i = 0; i < n_users; ++i) {
      users.push_back({i, 1.0, generate_profile({0.3 + 0.2 * double(rng.below(5)), universe, support}, u,
                                                derive_seed(seed, topo.id(i)))});
    }
    std::vector<NodeIndex> sites;
    while (sites.size() < k) {
      const NodeIndex c = rng.below(n_users);
      if (std::find(sites.begin(), sites.end(), c) == sites.end()) sites.push_back(c);
    }
    const auto placement = make_placement(sites, n_users);
    Assignment a0;
    for (std::size_t i = 0; i < n_users; ++i) a0.server_of.push_back(placement.servers[rng.below(k)]);

    const auto r = greedy_correlation(dm, users, placement, a0);
    ++instances;
    max_iters = std::max(max_iters, r.log.size());
    bounded += r.log.size() <= 100;
    bool inc = true;
    for (const auto& it : r.log)
      if (it.accepted && !(it.total_corr_after > it.total_corr_before)) inc = false;
    monotone += inc;
    if (tiny) {
      ++small;
      small_optimal += std::abs(r.objective.total_corr - exhaustive_two_server_optimum(users)) <= 1e-9;
    }
  }
  const double share = 100.0 * small_optimal / small;
  return {bounded == instances && monotone == instances && share >= 80.0,
          "instances=" + std::to_string(instances) + " within_100_iters=" + std::to_string(bounded) +
              " max_iters=" + std::to_string(max_iters) + " monotone=" + std::to_string(monotone) +
              " small_optimal=" + std::to_string(small_optimal) + "/" + std::to_string(small) + " (" +
              fmt(share, 3) + "%, >=80%)"};
}

// 8 -------------------------------------------------------------------------
Verdict pareto_correctness() {
  std::size_t mismatches = 0;
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    Rng rng(derive_seed(seed, "acceptance/points"));
    const std::size_t n = rng.below(150);
    const bool grid = seed % 2 == 0;
    std::vector<SolutionPoint> pts(n);
    for (std::size_t i = 0; i < n; ++i) {
      pts[i].avg_dist = grid ? double(rng.below(20)) : rng.uniform01();
      pts[i].total_corr = grid ? double(rng.below(20)) : rng.uniform01();
      pts[i].step = i;
    }
    std::set<std::pair<double, double>> expect;
    for (const auto& a : pts) {
      bool dominated = false;
      for (const auto& b : pts)
        dominated |= b.avg_dist <= a.avg_dist && b.total_corr >= a.total_corr &&
                     (b.avg_dist < a.avg_dist || b.total_corr > a.total_corr);
      if (!dominated) expect.insert({a.avg_dist, a.total_corr});
    }
    const auto front = non_dominated(pts);
    std::set<std::pair<double, double>> got;
    for (const auto& p : front) got.insert({p.avg_dist, p.total_corr});
    mismatches += got != expect || got.size() != front.size();
  }

  std::size_t dominated_pairs = 0, points = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto topo = std::make_shared<const Topology>(random_topology(seed, 30, 10));
    Scenario s;
    s.topology = topo;
    s.distances = std::make_shared<const DistanceMatrix>(all_pairs_shortest_paths(*topo));
    s.users = make_zipf_users(*topo, {0.3, 100, 15}, seed);
    s.origin = default_origin(*s.distances, s.users);
    FrontOptions opts;
    opts.seed = seed;
    const auto front = front_sweep(s, 3, opts);
    points += front.size();
    for (const auto& a : front)
      for (const auto& b : front) dominated_pairs += dominates(a, b);
  }
  return {mismatches == 0 && dominated_pairs == 0,
          "point_sets=1000 mismatches=" + std::to_string(mismatches) +
              " fronts=20 front_points=" + std::to_string(points) +
              " dominated_pairs=" + std::to_string(dominated_pairs)};
}

// 9 -------------------------------------------------------------------------
std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = read_file(e.path().string());
  return files;
}

Verdict cli_determinism() {
  const fs::path root = fs::temp_directory_path() / "cdnsim_acceptance_determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  const std::string backbone = kData + "/backbone_124.graphml";
  {
    std::string trace;
    Rng rng(3);
    for (int i = 0; i < 2000; ++i) trace += "svc" + std::to_string(rng.below(50)) + "\n";
    write_file((root / "trace.txt").string(), trace);
  }
  const std::vector<std::vector<std::string>> commands = {
      {"validate", "--topology", backbone, "--weight-key", "LinkWeight", "--dump"},
      {"place", "--topology", backbone, "--weight-key", "LinkWeight", "--k", "6", "--seed", "7"},
      {"assign", "--topology", backbone, "--weight-key", "LinkWeight", "--k", "6", "--seed", "7"},
      {"simulate", "--topology", backbone, "--weight-key", "LinkWeight", "--k", "6", "--seed", "7",
       "--policy", "LIRS", "--capacity", "8"},
      {"simulate", "--topology", backbone, "--weight-key", "LinkWeight", "--seed", "7", "--sweep-axis",
       "server_count", "--sweep-values", "1,3,5", "--optimizer", "correlation"},
      {"pareto", "--topology", kData + "/two_clusters.graphml", "--users", kData + "/two_clusters_trace.csv",
       "--k", "2", "--steps", "50", "--seed", "7", "--simulate"},
      {"replay", "--trace", (root / "trace.txt").string(), "--policy", "all", "--capacities", "1,5,10"},
  };
  std::size_t identical = 0, files = 0;
  std::string failures;
  for (std::size_t c = 0; c < commands.size(); ++c) {
    std::string stdout_text[2];
    std::map<std::string, std::string> outputs[2];
    int codes[2];
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path out = root / ("cmd" + std::to_string(c) + "_" + std::to_string(rep));
      auto args = commands[c];
      args.insert(args.end(), {"--out", out.string()});
      std::ostringstream o, e;
      codes[rep] = cli::run(args, o, e);
      stdout_text[rep] = o.str();
      outputs[rep] = snapshot(out);
    }
    files += outputs[0].size();
    const bool same = codes[0] == 0 && codes[1] == 0 && !outputs[0].empty() && outputs[0] == outputs[1] &&
                      stdout_text[0] == stdout_text[1];
    identical += same;
    if (!same) failures += " " + commands[c][0];
  }
  fs::remove_all(root);
  return {identical == commands.size(),
          "commands=" + std::to_string(commands.size()) + " identical=" + std::to_string(identical) +
              " files_compared=" + std::to_string(files) + (failures.empty() ? "" : " differing:" + failures)};
}

// 10 ------------------------------------------------------------------------
Verdict desk_scale_pipeline() {
  const auto t0 = Clock::now();
  const auto topo = load_backbone();
  auto dm = std::make_shared<const DistanceMatrix>(all_pairs_shortest_paths(*topo));
  const auto users = make_zipf_users(*topo, {0.3, 100, 15}, 1);
  const auto placed = dragoon(*dm, *topo, users, 10);
  const auto closest = closest_assignment(*dm, users, placed.placement);
  const auto greedy = greedy_correlation(*dm, users, placed.placement, closest);
  const auto moved = relocate_servers(*dm, users, placed.placement, greedy.assignment);
  Scenario s;
  s.topology = topo;
  s.distances = dm;
  s.users = users;
  s.placement = moved.placement;
  s.assignment = moved.assignment;
  s.origin = default_origin(*dm, users);
  s.requests_per_user = 100;
  const auto sim = run(s);
  FrontOptions opts;
  opts.steps = 50;
  opts.simulate = true;
  const auto front = front_sweep(s, 10, opts);
  const double secs = seconds_since(t0);
  return {secs < 60 && topo->node_count() == 124,
          "nodes=" + std::to_string(topo->node_count()) + " edges=" + std::to_string(topo->edge_count()) +
              " servers=10 requests=" + std::to_string(sim.total.requests) + " miss_ratio=" +
              fmt(sim.miss_ratio) + " front_points=" + std::to_string(front.size()) +
              " time_s=" + fmt(secs, 3) + " (<60)"};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Verdict()> check;
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--only") only = std::stoi(argv[i + 1]);

  const Criterion criteria[] = {
      {1, "spearman anchor", spearman_anchor},
      {2, "placement optimality ratio", placement_ratio},
      {3, "belady dominance", belady_dominance},
      {4, "stack monotonicity", stack_monotonicity},
      {5, "cache-size curve shape", cache_curve_shape},
      {6, "correlation assignment halves misses", correlation_miss_ratio},
      {7, "greedy termination and monotonicity", greedy_behaviour},
      {8, "pareto correctness", pareto_correctness},
      {9, "cli determinism", cli_determinism},
      {10, "desk-scale performance", desk_scale_pipeline},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    Verdict v{false, ""};
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %2d %s: %s\n", v.pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str());
    std::fflush(stdout);
    failed += !v.pass;
  }
  return failed == 0 ? 0 : 1;
}
