#include "cdnsim/graphml.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <utility>

#include "cdnsim/error.hpp"

namespace cdnsim {
namespace {

namespace pt = boost::property_tree;

struct KeyInfo {
  std::string domain;  // "node", "edge", "graph", "all"
  std::string name;
  std::optional<std::string> default_value;
};

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto* first = t.data();
  const auto* last = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw_invalid("non-numeric " + what + " '" + t + "'");
  }
  return v;
}

// Ids of <key> elements that match `wanted` for the given domain.
std::vector<std::string> resolve_key(const std::map<std::string, KeyInfo>& keys,
                                     const std::string& wanted, const std::string& domain) {
  std::vector<std::string> ids;
  if (wanted.empty()) return ids;
  for (const auto& [id, info] : keys) {
    if ((info.domain == domain || info.domain == "all" || info.domain.empty()) &&
        (id == wanted || info.name == wanted)) {
      ids.push_back(id);
    }
  }
  // A bare data key that was never declared is still honoured.
  if (ids.empty()) ids.push_back(wanted);
  return ids;
}

std::optional<std::string> find_data(const pt::ptree& element, const std::vector<std::string>& ids,
                                     const std::map<std::string, KeyInfo>& keys) {
  if (ids.empty()) return std::nullopt;
  for (const auto& [tag, child] : element) {
    if (tag != "data") continue;
    const auto key = child.get<std::string>("<xmlattr>.key", "");
    for (const auto& id : ids) {
      if (key == id) return child.get_value<std::string>();
    }
  }
  for (const auto& id : ids) {
    auto it = keys.find(id);
    if (it != keys.end() && it->second.default_value) return it->second.default_value;
  }
  return std::nullopt;
}

}  // namespace

GraphmlResult parse_graphml(std::string_view document, const GraphmlOptions& options) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(document)};
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    throw_invalid(std::string("malformed GraphML: ") + e.what());
  }

  const auto root_opt = tree.get_child_optional("graphml");
  if (!root_opt) throw_invalid("malformed GraphML: missing <graphml> root element");
  const pt::ptree& root = *root_opt;

  std::map<std::string, KeyInfo> keys;
  const pt::ptree* graph = nullptr;
  for (const auto& [tag, child] : root) {
    if (tag == "key") {
      KeyInfo info;
      info.domain = child.get<std::string>("<xmlattr>.for", "");
      // "attr.name" contains the default path separator.
      info.name = child.get<std::string>(pt::ptree::path_type("<xmlattr>/attr.name", '/'), "");
      if (auto d = child.get_optional<std::string>("default")) info.default_value = *d;
      keys[child.get<std::string>("<xmlattr>.id", "")] = std::move(info);
    } else if (tag == "graph" && graph == nullptr) {
      graph = &child;
    }
  }
  if (graph == nullptr) throw_invalid("malformed GraphML: missing <graph> element");

  const bool directed = graph->get<std::string>("<xmlattr>.edgedefault", "undirected") == "directed";
  const auto weight_ids = resolve_key(keys, options.weight_key, "edge");
  const auto priority_ids = resolve_key(keys, options.priority_key, "node");
  const auto label_ids = resolve_key(keys, options.label_key, "node");

  std::vector<std::string> warnings;
  std::vector<NodeSpec> nodes;
  // Undirected edges keyed by ordered endpoint pair.
  std::map<std::pair<std::string, std::string>, double> edges;

  for (const auto& [tag, child] : *graph) {
    if (tag == "node") {
      NodeSpec n;
      n.id = child.get<std::string>("<xmlattr>.id", "");
      if (n.id.empty()) throw_invalid("malformed GraphML: <node> without id");
      if (auto label = find_data(child, label_ids, keys)) n.label = trim(*label);
      if (auto prio = find_data(child, priority_ids, keys)) {
        n.priority = parse_number(*prio, "priority");
      }
      nodes.push_back(std::move(n));
    } else if (tag == "edge") {
      auto src = child.get<std::string>("<xmlattr>.source", "");
      auto dst = child.get<std::string>("<xmlattr>.target", "");
      if (src.empty() || dst.empty()) {
        throw_invalid("malformed GraphML: <edge> without source/target");
      }
      double w = 1.0;
      if (auto text = find_data(child, weight_ids, keys)) w = parse_number(*text, "weight");
      if (!(w > 0.0)) throw_invalid("non-positive weight on edge " + src + "-" + dst);
      if (src == dst) {
        warnings.push_back("dropped self-loop at '" + src + "'");
        continue;
      }
      if (dst < src) std::swap(src, dst);
      auto [it, inserted] = edges.try_emplace({src, dst}, w);
      if (!inserted) {
        warnings.push_back(std::string(directed ? "symmetrized" : "merged parallel") + " edge " +
                           src + "-" + dst);
        it->second = std::max(it->second, w);
      }
    }
  }

  std::vector<EdgeSpec> edge_specs;
  edge_specs.reserve(edges.size());
  for (auto& [ends, w] : edges) edge_specs.push_back({ends.first, ends.second, w});

  return {Topology(std::move(nodes), std::move(edge_specs)), std::move(warnings)};
}

}  // namespace cdnsim
