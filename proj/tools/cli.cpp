#include "cli.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "cdnsim/assignment.hpp"
#include "cdnsim/cache.hpp"
#include "cdnsim/csv.hpp"
#include "cdnsim/error.hpp"
#include "cdnsim/graphml.hpp"
#include "cdnsim/io.hpp"
#include "cdnsim/pareto.hpp"
#include "cdnsim/placement.hpp"
#include "cdnsim/profiles.hpp"
#include "cdnsim/simulation.hpp"
#include "json.hpp"

namespace cdnsim::cli {
namespace {

using nlohmann::json;

// Every field has a default; a JSON config file may override defaults and
// command-line flags override both.
struct RunConfig {
  std::string topology;
  std::string weight_key;
  std::string priority_key;
  std::string users;  // trace CSV; empty means synthetic Zipf users
  std::size_t k = 5;
  std::string policy = "BELADY";
  std::size_t capacity = 10;
  double lirs_hir_fraction = 0.1;
  double alpha = 0.3;
  std::size_t universe = 100;
  std::size_t profile_size = 15;
  std::size_t requests = 100;
  std::uint64_t seed = 1;
  std::string origin;  // empty means the 1-center of the users
  std::size_t steps = 50;
  std::string out = ".";
  std::string optimizer = "distance";
  std::string sweep_axis;
  std::vector<std::string> sweep_values;
  std::string placement;  // JSON file with a fixed placement
  std::vector<std::string> sites;
  std::string trace;  // replay: one service id per line
  std::vector<std::string> capacities;
  bool simulate = false;
};

// Binds one flag to a RunConfig field and knows how to read the same field
// from a config file.
struct Binding {
  std::string key;
  CLI::Option* option;
  std::function<void(const json&)> from_json;
};

template <typename T>
std::function<void(const json&)> json_setter(T& field) {
  return [&field](const json& v) { field = v.get<T>(); };
}

std::function<void(const json&)> json_list_setter(std::vector<std::string>& field) {
  return [&field](const json& v) {
    field.clear();
    if (v.is_array()) {
      for (const auto& x : v) field.push_back(x.is_string() ? x.get<std::string>() : x.dump());
    } else if (v.is_string()) {
      std::stringstream ss(v.get<std::string>());
      std::string item;
      while (std::getline(ss, item, ',')) field.push_back(item);
    } else {
      field.push_back(v.dump());
    }
  };
}

class CommandLine {
 public:
  explicit CommandLine(RunConfig& cfg) : cfg_(cfg) {}

  void add_common(CLI::App* sub) {
    add(sub, "topology", "--topology", cfg_.topology, "GraphML (or canonical JSON) topology file");
    add(sub, "weight_key", "--weight-key", cfg_.weight_key, "edge data key holding link weights");
    add(sub, "priority_key", "--priority-key", cfg_.priority_key, "node data key holding priorities");
    add(sub, "users", "--users", cfg_.users, "trace CSV (node_id,service_id,count) for user profiles");
    add(sub, "alpha", "--alpha", cfg_.alpha, "Zipf exponent for synthetic profiles");
    add(sub, "universe", "--universe", cfg_.universe, "number of services");
    add(sub, "profile_size", "--profile-size", cfg_.profile_size, "services per synthetic profile");
    add(sub, "seed", "--seed", cfg_.seed, "master seed");
    add(sub, "out", "--out", cfg_.out, "output directory");
    add_list(sub, "sites", "--sites", cfg_.sites, "comma-separated whitelist of server sites");
  }
  void add_placement(CLI::App* sub) {
    add(sub, "k", "--k", cfg_.k, "number of servers");
    add(sub, "placement", "--placement", cfg_.placement, "JSON list of server node ids");
  }
  void add_cache(CLI::App* sub) {
    add(sub, "policy", "--policy", cfg_.policy, "LRU, LRU2, LFU, LIRS or BELADY");
    add(sub, "capacity", "--capacity", cfg_.capacity, "cache capacity in items");
    add(sub, "lirs_hir_fraction", "--hir-fraction", cfg_.lirs_hir_fraction, "LIRS HIR share");
    add(sub, "requests", "--requests", cfg_.requests, "requests per user group");
    add(sub, "origin", "--origin", cfg_.origin, "origin node id (default: 1-center)");
  }

  template <typename T>
  void add(CLI::App* sub, const std::string& key, const std::string& flag, T& field,
           const std::string& help) {
    bindings_[sub].push_back({key, sub->add_option(flag, field, help), json_setter(field)});
  }
  void add_list(CLI::App* sub, const std::string& key, const std::string& flag,
                std::vector<std::string>& field, const std::string& help) {
    auto* opt = sub->add_option(flag, field, help)->delimiter(',')->allow_extra_args(false);
    bindings_[sub].push_back({key, opt, json_list_setter(field)});
  }
  void add_flag(CLI::App* sub, const std::string& key, const std::string& flag, bool& field,
                const std::string& help) {
    bindings_[sub].push_back({key, sub->add_flag(flag, field, help), json_setter(field)});
  }

  // Fills fields the command line left unset from the config file.
  void apply_config(CLI::App* sub, const std::string& path) {
    if (path.empty()) return;
    json j;
    try {
      j = json::parse(read_file(path));
    } catch (const json::exception& e) {
      throw_invalid("malformed config file: " + std::string(e.what()));
    }
    if (!j.is_object()) throw_invalid("config file must hold a JSON object");
    const auto& binds = bindings_[sub];
    for (const auto& [key, value] : j.items()) {
      auto it = std::find_if(binds.begin(), binds.end(), [&](const Binding& b) { return b.key == key; });
      if (it == binds.end()) throw_invalid("unknown config key '" + key + "' for this command");
      if (it->option->count() > 0) continue;
      try {
        it->from_json(value);
      } catch (const json::exception& e) {
        throw_invalid("config key '" + key + "': " + e.what());
      }
    }
  }

 private:
  RunConfig& cfg_;
  std::map<CLI::App*, std::vector<Binding>> bindings_;
};

struct Inputs {
  std::shared_ptr<const Topology> topology;
  std::shared_ptr<const DistanceMatrix> distances;
  std::vector<UserGroup> users;
  SiteFilter sites;
  std::vector<std::string> warnings;
};

void validate_config(const RunConfig& c) {
  if (c.topology.empty()) throw_invalid("--topology is required");
  if (c.k == 0) throw_invalid("--k must be at least 1");
  if (c.capacity == 0) throw_invalid("--capacity must be at least 1");
  if (!(c.lirs_hir_fraction > 0.0 && c.lirs_hir_fraction < 1.0)) {
    throw_invalid("--hir-fraction must lie in (0, 1)");
  }
  if (!(c.alpha >= 0.0)) throw_invalid("--alpha must be non-negative");
  if (c.universe == 0) throw_invalid("--universe must be positive");
  if (c.profile_size == 0 || c.profile_size > c.universe) {
    throw_invalid("--profile-size must lie in [1, universe]");
  }
  if (c.requests == 0) throw_invalid("--requests must be positive");
  if (c.steps < 2) throw_invalid("--steps must be at least 2");
  parse_policy(c.policy);
  parse_optimizer(c.optimizer);
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

Inputs load_inputs(const RunConfig& c) {
  Inputs in;
  const std::string text = read_file(c.topology);
  if (ends_with(c.topology, ".json")) {
    in.topology = std::make_shared<const Topology>(topology_from_json(text));
  } else {
    auto parsed = parse_graphml(text, {c.weight_key, c.priority_key, "label"});
    in.topology = std::make_shared<const Topology>(std::move(parsed.topology));
    in.warnings = std::move(parsed.warnings);
  }
  in.distances = std::make_shared<const DistanceMatrix>(all_pairs_shortest_paths(*in.topology));
  if (c.users.empty()) {
    in.users = make_zipf_users(*in.topology, {c.alpha, c.universe, c.profile_size}, c.seed);
  } else {
    in.users = bind_trace_users(*in.topology, load_trace(read_file(c.users)));
    if (in.users.empty()) throw_invalid("trace defines no users");
  }
  for (const auto& id : c.sites) {
    if (!id.empty()) in.sites.allowed.push_back(in.topology->index_of(id));
  }
  std::sort(in.sites.allowed.begin(), in.sites.allowed.end());
  in.sites.allowed.erase(std::unique(in.sites.allowed.begin(), in.sites.allowed.end()),
                         in.sites.allowed.end());
  return in;
}

std::string out_path(const RunConfig& c, const std::string& name) {
  std::error_code ec;
  std::filesystem::create_directories(c.out, ec);
  if (ec) throw_io("cannot create output directory '" + c.out + "': " + ec.message());
  return (std::filesystem::path(c.out) / name).string();
}

Scenario make_scenario(const RunConfig& c, const Inputs& in) {
  Scenario s;
  s.topology = in.topology;
  s.distances = in.distances;
  s.users = in.users;
  s.cache = {c.capacity, parse_policy(c.policy), c.lirs_hir_fraction};
  s.origin = c.origin.empty() ? default_origin(*in.distances, in.users) : in.topology->index_of(c.origin);
  s.master_seed = c.seed;
  s.requests_per_user = c.requests;
  return s;
}

Placement load_placement(const RunConfig& c, const Inputs& in) {
  return placement_from_json(*in.topology, read_file(c.placement));
}

int cmd_validate(const RunConfig& c, bool dump, std::ostream& out) {
  const Inputs in = load_inputs(c);
  for (const auto& w : in.warnings) out << "warning: " << w << "\n";
  out << "nodes=" << in.topology->node_count() << " edges=" << in.topology->edge_count()
      << " users=" << in.users.size()
      << " universe=" << in.users.front().profile.size() << "\n";
  if (dump) {
    write_file(out_path(c, "topology.json"), topology_to_json(*in.topology));
    write_file(out_path(c, "users.json"), users_to_json(*in.topology, in.users));
  }
  return kOk;
}

int cmd_place(const RunConfig& c, std::ostream& out) {
  const Inputs in = load_inputs(c);
  const auto r = dragoon(*in.distances, *in.topology, in.users, c.k, in.sites);
  write_file(out_path(c, "placement.json"), placement_to_json(*in.topology, r.placement));
  write_file(out_path(c, "place_log.csv"), dragoon_log_csv(*in.topology, r));
  out << "servers=" << placement_to_json(*in.topology, r.placement);
  out << "max_dist=" << format_double(r.objective.max_dist)
      << " avg_dist=" << format_double(r.objective.avg_dist) << " iterations=" << r.iterations
      << " moves=" << r.log.size() << "\n";
  return kOk;
}

int cmd_assign(const RunConfig& c, std::ostream& out) {
  const Inputs in = load_inputs(c);
  const Placement start = c.placement.empty()
                              ? dragoon(*in.distances, *in.topology, in.users, c.k, in.sites).placement
                              : load_placement(c, in);
  const Assignment initial = closest_assignment(*in.distances, in.users, start);
  const auto greedy = greedy_correlation(*in.distances, in.users, start, initial);
  const auto moved = relocate_servers(*in.distances, in.users, start, greedy.assignment, in.sites);
  const auto obj = evaluate_correlation(*in.distances, in.users, moved.assignment);

  write_file(out_path(c, "placement.json"), placement_to_json(*in.topology, moved.placement));
  write_file(out_path(c, "assignment.csv"),
             assignment_csv(*in.topology, *in.distances, in.users, moved.assignment));
  write_file(out_path(c, "assign_log.csv"), greedy_log_csv(greedy));

  std::size_t moves = 0;
  for (std::size_t i = 0; i < initial.server_of.size(); ++i) {
    moves += greedy.assignment.server_of[i] != initial.server_of[i];
  }
  out << "servers=" << placement_to_json(*in.topology, moved.placement);
  out << "total_corr=" << format_double(obj.total_corr) << " max_dist=" << format_double(obj.max_dist)
      << " avg_dist=" << format_double(obj.avg_dist) << " iterations=" << greedy.log.size()
      << " reassigned_users=" << moves << "\n";
  return kOk;
}

int cmd_simulate(const RunConfig& c, std::ostream& out) {
  std::vector<std::string> values;
  for (const auto& v : c.sweep_values) {
    if (!v.empty()) values.push_back(v);
  }
  if (!c.sweep_axis.empty() && values.empty()) throw_invalid("sweep needs at least one value");
  if (c.sweep_axis.empty() && !c.sweep_values.empty()) {
    throw_invalid("--sweep-values given without --sweep-axis");
  }
  const bool sweeping = !c.sweep_axis.empty();
  const SweepAxis axis = sweeping ? parse_sweep_axis(c.sweep_axis) : SweepAxis::kCacheSize;

  const Inputs in = load_inputs(c);
  Scenario s = make_scenario(c, in);
  const Optimizer optimizer = parse_optimizer(c.optimizer);
  if (!sweeping || axis != SweepAxis::kServerCount) {
    Solution sol;
    if (c.placement.empty()) {
      sol = optimize(*in.distances, *in.topology, in.users, c.k, optimizer, in.sites);
    } else {
      sol.placement = load_placement(c, in);
      sol.assignment = closest_assignment(*in.distances, in.users, sol.placement);
    }
    s.placement = std::move(sol.placement);
    s.assignment = std::move(sol.assignment);
  } else {
    s.placement = Placement{{0}};
    s.assignment.server_of.assign(s.users.size(), 0);
  }

  std::vector<SweepRow> rows;
  if (sweeping) {
    rows = experiment_sweep(s, axis, values, optimizer, in.sites);
  } else {
    rows.push_back({"base", run(s)});
    write_file(out_path(c, "servers.csv"), server_stats_csv(*in.topology, s.cache, rows.back().result));
  }
  write_file(out_path(c, "results.csv"), sweep_csv(rows));
  for (const auto& r : rows) {
    out << (sweeping ? std::string(to_string(axis)) : std::string("run")) << "=" << r.axis_value
        << " miss_ratio=" << format_double(r.result.miss_ratio)
        << " network_load=" << format_double(r.result.network_load) << "\n";
  }
  return kOk;
}

int cmd_pareto(const RunConfig& c, std::ostream& out) {
  const Inputs in = load_inputs(c);
  Scenario s = make_scenario(c, in);
  FrontOptions opts;
  opts.steps = c.steps;
  opts.seed = c.seed;
  opts.simulate = c.simulate;
  opts.sites = in.sites;
  const auto front = front_sweep(s, c.k, opts);
  write_file(out_path(c, "front.csv"), front_csv(*in.topology, front));
  out << "front_points=" << front.size() << "\n";
  return kOk;
}

int cmd_replay(const RunConfig& c, std::ostream& out) {
  if (c.trace.empty()) throw_invalid("--trace is required");
  const auto names = parse_trace_lines(read_file(c.trace));
  const auto trace = intern_trace(names);

  std::vector<CachePolicyKind> policies;
  std::stringstream ss(c.policy);
  std::string name;
  while (std::getline(ss, name, ',')) {
    if (name == "all" || name == "ALL") {
      policies.assign(std::begin(kAllPolicies), std::end(kAllPolicies));
    } else {
      policies.push_back(parse_policy(name));
    }
  }
  std::vector<std::size_t> capacities;
  for (const auto& v : c.capacities) {
    if (v.empty()) continue;
    std::size_t cap = 0;
    try {
      cap = static_cast<std::size_t>(std::stoull(v));
    } catch (const std::exception&) {
      throw_invalid("capacity '" + v + "' is not an integer");
    }
    capacities.push_back(cap);
  }
  if (capacities.empty()) capacities.push_back(c.capacity);

  std::vector<StatsRow> rows;
  for (auto policy : policies) {
    for (auto cap : capacities) {
      if (cap == 0) throw_invalid("capacity must be at least 1");
      rows.push_back({policy, cap, replay(trace.items, {cap, policy, c.lirs_hir_fraction})});
    }
  }
  write_file(out_path(c, "stats.csv"), stats_csv(rows));
  for (const auto& r : rows) {
    out << to_string(r.policy) << " capacity=" << r.capacity << " misses=" << r.stats.misses
        << " miss_ratio=" << format_double(r.stats.miss_ratio()) << "\n";
  }
  return kOk;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidInput: return kConfigError;
    case ErrorKind::kInfeasible: return kInfeasible;
    case ErrorKind::kIo: return kIoError;
  }
  return kConfigError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  std::string config_path;
  bool dump = false;
  CLI::App app{"CDN mirror placement, assignment and cache simulation"};
  app.require_subcommand(1);
  CommandLine cl(cfg);

  auto* validate_cmd = app.add_subcommand("validate", "check a topology and user set");
  auto* place = app.add_subcommand("place", "distance-optimal server placement");
  auto* assign = app.add_subcommand("assign", "correlation-optimised user assignment");
  auto* simulate = app.add_subcommand("simulate", "cache simulation, single run or sweep");
  auto* pareto = app.add_subcommand("pareto", "distance/correlation Pareto front");
  auto* replay_cmd = app.add_subcommand("replay", "replay a service trace through cache policies");

  for (auto* sub : {validate_cmd, place, assign, simulate, pareto}) {
    sub->add_option("--config", config_path, "JSON config file (flags take precedence)");
    cl.add_common(sub);
  }
  validate_cmd->add_flag("--dump", dump, "write topology.json and users.json to --out");
  for (auto* sub : {place, assign, simulate, pareto}) cl.add_placement(sub);
  for (auto* sub : {simulate, pareto}) cl.add_cache(sub);
  cl.add(simulate, "optimizer", "--optimizer", cfg.optimizer, "distance or correlation");
  cl.add(simulate, "sweep_axis", "--sweep-axis", cfg.sweep_axis, "server_count, cache_size or policy");
  cl.add_list(simulate, "sweep_values", "--sweep-values", cfg.sweep_values, "comma-separated values");
  cl.add(pareto, "steps", "--steps", cfg.steps, "recorded states including both endpoints");
  cl.add_flag(pareto, "simulate", "--simulate", cfg.simulate, "attach simulated miss ratios");

  replay_cmd->add_option("--trace", cfg.trace, "trace file, one service id per line")->required();
  replay_cmd->add_option("--policy", cfg.policy, "policy list or 'all'");
  replay_cmd->add_option("--capacity", cfg.capacity, "cache capacity");
  replay_cmd->add_option("--capacities", cfg.capacities, "comma-separated capacity sweep")
      ->delimiter(',');
  replay_cmd->add_option("--hir-fraction", cfg.lirs_hir_fraction, "LIRS HIR share");
  replay_cmd->add_option("--out", cfg.out, "output directory");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      for (auto* sub : app.get_subcommands()) out << sub->help();
      return kOk;
    }
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    if (replay_cmd->parsed()) return cmd_replay(cfg, out);
    CLI::App* sub = app.get_subcommands().front();
    cl.apply_config(sub, config_path);
    if (sub == validate_cmd) {
      if (cfg.topology.empty()) throw_invalid("--topology is required");
      return cmd_validate(cfg, dump, out);
    }
    validate_config(cfg);
    if (sub == place) return cmd_place(cfg, out);
    if (sub == assign) return cmd_assign(cfg, out);
    if (sub == simulate) return cmd_simulate(cfg, out);
    return cmd_pareto(cfg, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  }
}

}  // namespace cdnsim::cli
