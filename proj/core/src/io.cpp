#include "cdnsim/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cdnsim/csv.hpp"
#include "cdnsim/error.hpp"
#include "json.hpp"

namespace cdnsim {

using nlohmann::ordered_json;

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  bool have_header = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    if (line.front() == '#') continue;

    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      std::string_view f = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
      while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.remove_prefix(1);
      while (!f.empty() && (f.back() == ' ' || f.back() == '\t')) f.remove_suffix(1);
      fields.emplace_back(f);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (!have_header) {
      table.header = std::move(fields);
      have_header = true;
    } else {
      table.rows.push_back(std::move(fields));
    }
  }
  return table;
}

std::string format_double(double v) {
  if (v == 0.0) return "0";  // folds -0
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) return "nan";
  return std::string(buf.data(), ptr);
}

std::string csv_line(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out += ',';
    out += fields[i];
  }
  out += '\n';
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_io("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw_io("error while reading '" + path + "'");
  return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_io("cannot open '" + path + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw_io("error while writing '" + path + "'");
}

std::string topology_to_json(const Topology& t) {
  ordered_json j;
  j["nodes"] = ordered_json::array();
  for (const auto& n : t.nodes()) {
    j["nodes"].push_back({{"id", n.id}, {"label", n.label}, {"priority", n.priority}});
  }
  j["edges"] = ordered_json::array();
  for (const auto& e : t.edges()) {
    j["edges"].push_back({{"a", t.id(e.a)}, {"b", t.id(e.b)}, {"weight", e.weight}});
  }
  return j.dump(2) + "\n";
}

Topology topology_from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    std::vector<NodeSpec> nodes;
    for (const auto& n : j.at("nodes")) {
      nodes.push_back({n.at("id").get<std::string>(), n.value("label", std::string()),
                       n.value("priority", 1.0)});
    }
    std::vector<EdgeSpec> edges;
    for (const auto& e : j.at("edges")) {
      edges.push_back({e.at("a").get<std::string>(), e.at("b").get<std::string>(),
                       e.value("weight", 1.0)});
    }
    return Topology(std::move(nodes), std::move(edges));
  } catch (const nlohmann::json::exception& e) {
    throw_invalid(std::string("malformed topology JSON: ") + e.what());
  }
}

std::string users_to_json(const Topology& t, std::span<const UserGroup> users) {
  ordered_json j;
  j["users"] = ordered_json::array();
  for (const auto& u : users) {
    ordered_json profile = ordered_json::object();
    const auto& names = *u.profile.universe();
    const auto probs = u.profile.probabilities();
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (probs[i] > 0.0) profile[names[i]] = probs[i];
    }
    j["users"].push_back({{"node", t.id(u.node)}, {"priority", u.priority}, {"profile", profile}});
  }
  return j.dump(2) + "\n";
}

std::string placement_to_json(const Topology& t, const Placement& p) {
  ordered_json j = ordered_json::array();
  for (NodeIndex s : p.servers) j.push_back(t.id(s));
  return j.dump() + "\n";
}

Placement placement_from_json(const Topology& t, std::string_view text) {
  std::vector<NodeIndex> servers;
  try {
    const auto j = nlohmann::json::parse(text);
    if (!j.is_array()) throw_invalid("placement JSON must be an array of node ids");
    for (const auto& id : j) servers.push_back(t.index_of(id.get<std::string>()));
  } catch (const nlohmann::json::exception& e) {
    throw_invalid(std::string("malformed placement JSON: ") + e.what());
  }
  return make_placement(std::move(servers), t.node_count());
}

std::string dragoon_log_csv(const Topology& t, const DragoonResult& r) {
  std::string out = "iteration,server,from,to,max_dist,avg_dist\n";
  for (const auto& m : r.log) {
    out += csv_line({std::to_string(m.iteration), std::to_string(m.server), t.id(m.from), t.id(m.to),
                     format_double(m.objective.max_dist), format_double(m.objective.avg_dist)});
  }
  return out;
}

std::string assignment_csv(const Topology& t, const DistanceMatrix& dm,
                           std::span<const UserGroup> users, const Assignment& a) {
  std::string out = "user_node,server_node,rho,distance\n";
  for (std::size_t i = 0; i < users.size(); ++i) {
    const NodeIndex s = a.server_of.at(i);
    out += csv_line({t.id(users[i].node), t.id(s), format_double(candidate_corr(users, a, i, s)),
                     format_double(dm(users[i].node, s))});
  }
  return out;
}

std::string greedy_log_csv(const GreedyResult& r) {
  std::string out = "iteration,moves_proposed,total_corr_before,total_corr_after,accepted\n";
  for (const auto& it : r.log) {
    out += csv_line({std::to_string(it.iteration), std::to_string(it.moves_proposed),
                     format_double(it.total_corr_before), format_double(it.total_corr_after),
                     it.accepted ? "true" : "false"});
  }
  return out;
}

namespace {

std::vector<std::string> stats_fields(const CacheStats& s) {
  return {std::to_string(s.requests), std::to_string(s.hits), std::to_string(s.misses),
          std::to_string(s.cold_misses), format_double(s.miss_ratio())};
}

}  // namespace

std::string stats_csv(std::span<const StatsRow> rows) {
  std::string out = "policy,capacity,requests,hits,misses,cold_misses,miss_ratio\n";
  for (const auto& r : rows) {
    std::vector<std::string> f{std::string(to_string(r.policy)), std::to_string(r.capacity)};
    for (auto& x : stats_fields(r.stats)) f.push_back(std::move(x));
    out += csv_line(f);
  }
  return out;
}

std::string server_stats_csv(const Topology& t, const CacheConfig& cache,
                             const SimulationResult& r) {
  std::string out = "server,users,policy,capacity,requests,hits,misses,cold_misses,miss_ratio\n";
  for (const auto& s : r.per_server) {
    std::vector<std::string> f{t.id(s.server), std::to_string(s.users),
                               std::string(to_string(cache.policy)), std::to_string(cache.capacity)};
    for (auto& x : stats_fields(s.stats)) f.push_back(std::move(x));
    out += csv_line(f);
  }
  return out;
}

std::string sweep_csv(std::span<const SweepRow> rows) {
  std::string out = "axis_value,miss_ratio,max_dist,avg_dist,network_load,cold_misses\n";
  for (const auto& row : rows) {
    const auto& r = row.result;
    out += csv_line({row.axis_value, format_double(r.miss_ratio), format_double(r.max_user_distance),
                     format_double(r.avg_user_distance), format_double(r.network_load),
                     std::to_string(r.total.cold_misses)});
  }
  return out;
}

std::string front_csv(const Topology& t, const ParetoFront& front) {
  std::string out = "avg_dist,total_corr,max_dist,miss_ratio,placement,seed,step\n";
  for (const auto& p : front) {
    std::string servers;
    for (NodeIndex s : p.placement.servers) {
      if (!servers.empty()) servers += ';';
      servers += t.id(s);
    }
    out += csv_line({format_double(p.avg_dist), format_double(p.total_corr),
                     format_double(p.max_dist), p.sim ? format_double(p.sim->miss_ratio) : "",
                     servers, std::to_string(p.seed), std::to_string(p.step)});
  }
  return out;
}

}  // namespace cdnsim
