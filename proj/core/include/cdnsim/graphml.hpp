#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cdnsim/topology.hpp"

namespace cdnsim {

struct GraphmlOptions {
  /// Edge data key holding the link weight; matched against both the <key>
  /// element's id and its attr.name. Empty means every edge weighs 1.0.
  std::string weight_key;
  /// Node data key holding the user-group priority (default 1.0).
  std::string priority_key;
  std::string label_key = "label";
};

struct GraphmlResult {
  Topology topology;
  /// Non-fatal repairs: merged parallel/directed edges, dropped self-loops.
  std::vector<std::string> warnings;
};

/// Parses the GraphML subset used by the Internet Topology Zoo.
/// Parallel and reverse-direction edges are merged into one undirected edge
/// carrying the largest weight.
GraphmlResult parse_graphml(std::string_view document, const GraphmlOptions& options = {});

}  // namespace cdnsim
