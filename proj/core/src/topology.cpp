#include "cdnsim/topology.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <utility>

#include "cdnsim/error.hpp"

namespace cdnsim {

Topology::Topology(std::vector<NodeSpec> nodes, std::vector<EdgeSpec> edges) {
  if (nodes.empty()) throw_invalid("topology has no nodes");

  std::sort(nodes.begin(), nodes.end(),
            [](const NodeSpec& x, const NodeSpec& y) { return x.id < y.id; });
  nodes_.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    auto& n = nodes[i];
    if (n.id.empty()) throw_invalid("node with empty id");
    if (i > 0 && nodes[i - 1].id == n.id) throw_invalid("duplicate node id '" + n.id + "'");
    if (!(n.priority > 0.0) || !std::isfinite(n.priority)) {
      throw_invalid("node '" + n.id + "' has non-positive priority");
    }
    nodes_.push_back({std::move(n.id), std::move(n.label), n.priority});
  }

  edges_.reserve(edges.size());
  for (const auto& e : edges) {
    NodeIndex a = index_of(e.a);
    NodeIndex b = index_of(e.b);
    if (a == b) throw_invalid("self-loop at node '" + e.a + "'");
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw_invalid("edge " + e.a + "-" + e.b + " has non-positive weight");
    }
    if (a > b) std::swap(a, b);
    edges_.push_back({a, b, e.weight});
  }
  std::sort(edges_.begin(), edges_.end(), [](const Edge& x, const Edge& y) {
    return std::pair(x.a, x.b) < std::pair(y.a, y.b);
  });
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    if (edges_[i].a == edges_[i - 1].a && edges_[i].b == edges_[i - 1].b) {
      throw_invalid("duplicate edge " + nodes_[edges_[i].a].id + "-" + nodes_[edges_[i].b].id);
    }
  }

  adjacency_.resize(nodes_.size());
  for (const auto& e : edges_) {
    adjacency_[e.a].push_back({e.b, e.weight});
    adjacency_[e.b].push_back({e.a, e.weight});
  }
  for (auto& adj : adjacency_) {
    std::sort(adj.begin(), adj.end(),
              [](const Neighbor& x, const Neighbor& y) { return x.node < y.node; });
  }

  // Connectivity via BFS from node 0.
  std::vector<bool> seen(nodes_.size(), false);
  std::vector<NodeIndex> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    NodeIndex v = stack.back();
    stack.pop_back();
    for (const auto& nb : adjacency_[v]) {
      if (!seen[nb.node]) {
        seen[nb.node] = true;
        ++reached;
        stack.push_back(nb.node);
      }
    }
  }
  if (reached != nodes_.size()) {
    for (NodeIndex i = 0; i < nodes_.size(); ++i) {
      if (!seen[i]) {
        throw_invalid("topology is disconnected: node '" + nodes_[i].id +
                      "' is unreachable from '" + nodes_[0].id + "'");
      }
    }
  }
}

std::optional<NodeIndex> Topology::find(std::string_view id) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                             [](const Node& n, std::string_view key) { return n.id < key; });
  if (it == nodes_.end() || it->id != id) return std::nullopt;
  return static_cast<NodeIndex>(it - nodes_.begin());
}

NodeIndex Topology::index_of(std::string_view id) const {
  auto i = find(id);
  if (!i) throw_invalid("unknown node '" + std::string(id) + "'");
  return *i;
}

std::vector<std::string> Topology::neighbors(std::string_view id) const {
  std::vector<std::string> out;
  for (const auto& nb : adjacency(index_of(id))) out.push_back(nodes_[nb.node].id);
  return out;
}

DistanceMatrix::DistanceMatrix(std::size_t n, std::vector<double> dist)
    : n_(n), dist_(std::move(dist)) {
  if (dist_.size() != n * n) throw_invalid("distance matrix has wrong size");
}

DistanceMatrix all_pairs_shortest_paths(const Topology& t) {
  const std::size_t n = t.node_count();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n * n, kInf);

  using Item = std::pair<double, NodeIndex>;
  for (NodeIndex src = 0; src < n; ++src) {
    double* d = dist.data() + src * n;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    d[src] = 0.0;
    pq.push({0.0, src});
    while (!pq.empty()) {
      auto [du, u] = pq.top();
      pq.pop();
      if (du > d[u]) continue;
      for (const auto& nb : t.adjacency(u)) {
        const double alt = du + nb.weight;
        if (alt < d[nb.node]) {
          d[nb.node] = alt;
          pq.push({alt, nb.node});
        }
      }
    }
  }
  // Float sums along different paths may differ in the last bit; pin exact
  // symmetry by taking the smaller of the two directions.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double m = std::min(dist[i * n + j], dist[j * n + i]);
      dist[i * n + j] = m;
      dist[j * n + i] = m;
    }
  }
  return DistanceMatrix(n, std::move(dist));
}

}  // namespace cdnsim
