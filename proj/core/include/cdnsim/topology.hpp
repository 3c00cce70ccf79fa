#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cdnsim {

/// Dense index of a node inside a Topology. Nodes are stored sorted by id, so
/// comparing indices is the same as comparing ids lexicographically; every
/// tie-break in the library relies on this.
using NodeIndex = std::size_t;

struct NodeSpec {
  std::string id;
  std::string label;
  double priority = 1.0;
};

struct EdgeSpec {
  std::string a;
  std::string b;
  double weight = 1.0;
};

/// Immutable, connected, undirected, positively weighted graph.
class Topology {
 public:
  struct Node {
    std::string id;
    std::string label;
    double priority;
  };
  struct Edge {
    NodeIndex a;  // a < b
    NodeIndex b;
    double weight;
  };
  struct Neighbor {
    NodeIndex node;
    double weight;
  };

  /// Validates and builds. Throws Error(kInvalidInput) on duplicate ids,
  /// unknown endpoints, self-loops, duplicate edges, non-positive weights or
  /// priorities, an empty node list or a disconnected graph.
  Topology(std::vector<NodeSpec> nodes, std::vector<EdgeSpec> edges);

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Node& node(NodeIndex i) const { return nodes_.at(i); }
  const std::string& id(NodeIndex i) const { return nodes_.at(i).id; }

  std::optional<NodeIndex> find(std::string_view id) const;
  /// Like find(), but throws Error(kInvalidInput) for unknown ids.
  NodeIndex index_of(std::string_view id) const;

  /// Adjacent nodes in id order.
  std::span<const Neighbor> adjacency(NodeIndex i) const { return adjacency_.at(i); }
  std::vector<std::string> neighbors(std::string_view id) const;

 private:
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Neighbor>> adjacency_;
};

/// Symmetric all-pairs shortest path table, indexed by NodeIndex.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  DistanceMatrix(std::size_t n, std::vector<double> dist);

  std::size_t size() const { return n_; }
  double operator()(NodeIndex a, NodeIndex b) const { return dist_[a * n_ + b]; }
  std::span<const double> row(NodeIndex a) const { return {dist_.data() + a * n_, n_}; }

 private:
  std::size_t n_ = 0;
  std::vector<double> dist_;
};

/// Dijkstra from every node.
DistanceMatrix all_pairs_shortest_paths(const Topology& t);

}  // namespace cdnsim
