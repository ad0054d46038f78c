#pragma once

#include <algorithm>
#include <cstdint>
#include <queue>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "genus/common.hpp"

namespace genus {

using VId = int;  // vertex id
using EId = int;  // edge id

struct Edge {
  EId id;
  VId u, v;
  double len;
  int sign = +1;  // orientation flag; +1 everywhere for orientable data
};

// Symmetric distance table over a fixed vertex-id list.
class DistTable {
 public:
  DistTable() = default;
  DistTable(std::vector<VId> ids, std::vector<std::vector<double>> d)
      : ids_(std::move(ids)), d_(std::move(d)) {
    for (std::size_t i = 0; i < ids_.size(); ++i) index_[ids_[i]] = static_cast<int>(i);
  }

  const std::vector<VId>& ids() const { return ids_; }
  std::size_t size() const { return ids_.size(); }

  int index(VId v) const {
    auto it = index_.find(v);
    if (it == index_.end())
      throw StructuralError("DistTable: unknown vertex id " + std::to_string(v));
    return it->second;
  }
  bool contains(VId v) const { return index_.count(v) != 0; }

  double at(VId u, VId v) const { return d_[index(u)][index(v)]; }
  double at_index(int i, int j) const { return d_[i][j]; }

  // Largest finite pairwise distance (0 for a single point).
  double finite_diameter() const {
    double m = 0;
    for (const auto& row : d_)
      for (double x : row)
        if (x != kInf && x > m) m = x;
    return m;
  }

 private:
  std::vector<VId> ids_;
  std::vector<std::vector<double>> d_;
  std::unordered_map<VId, int> index_;
};

// Finite connected-or-not multigraph with strictly positive edge lengths.
// Parallel edges and self-loops are allowed; rotation systems on small
// genus instances need both. Immutable after construction.
class MetricGraph {
 public:
  MetricGraph() = default;

  MetricGraph(std::vector<VId> vertices, std::vector<Edge> edges)
      : vertices_(std::move(vertices)), edges_(std::move(edges)) {
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      if (!vindex_.emplace(vertices_[i], static_cast<int>(i)).second)
        throw StructuralError("duplicate vertex id " + std::to_string(vertices_[i]));
    }
    adj_.resize(vertices_.size());
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      const Edge& e = edges_[i];
      if (!eindex_.emplace(e.id, static_cast<int>(i)).second)
        throw StructuralError("duplicate edge id " + std::to_string(e.id));
      if (!(e.len > 0))
        throw StructuralError("edge " + std::to_string(e.id) +
                              ": length must be strictly positive");
      if (e.sign != 1 && e.sign != -1)
        throw StructuralError("edge " + std::to_string(e.id) + ": sign must be +1 or -1");
      auto iu = vindex_.find(e.u), iv = vindex_.find(e.v);
      if (iu == vindex_.end() || iv == vindex_.end())
        throw StructuralError("edge " + std::to_string(e.id) + ": unknown endpoint");
      adj_[iu->second].push_back({static_cast<int>(i), iv->second});
      if (iu->second != iv->second)
        adj_[iv->second].push_back({static_cast<int>(i), iu->second});
    }
  }

  const std::vector<VId>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  bool has_vertex(VId v) const { return vindex_.count(v) != 0; }
  bool has_edge(EId e) const { return eindex_.count(e) != 0; }

  int vertex_index(VId v) const {
    auto it = vindex_.find(v);
    if (it == vindex_.end())
      throw StructuralError("unknown vertex id " + std::to_string(v));
    return it->second;
  }
  int edge_index(EId e) const {
    auto it = eindex_.find(e);
    if (it == eindex_.end())
      throw StructuralError("unknown edge id " + std::to_string(e));
    return it->second;
  }
  const Edge& edge(EId e) const { return edges_[edge_index(e)]; }

  // (edge index, neighbor vertex index) pairs; self-loops appear once.
  const std::vector<std::pair<int, int>>& adjacent(int vidx) const { return adj_[vidx]; }

  bool connected() const {
    if (vertices_.empty()) return true;
    std::vector<char> seen(vertices_.size(), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    std::size_t cnt = 1;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (auto [ei, y] : adj_[x])
        if (!seen[y]) {
          seen[y] = 1;
          ++cnt;
          stack.push_back(y);
        }
    }
    return cnt == vertices_.size();
  }

  // Single-source shortest-path distances (by vertex index).
  std::vector<double> dijkstra_from_index(int src) const {
    std::vector<double> dist(vertices_.size(), kInf);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    dist[src] = 0;
    pq.push({0, src});
    while (!pq.empty()) {
      auto [d, x] = pq.top();
      pq.pop();
      if (d > dist[x]) continue;
      for (auto [ei, y] : adj_[x]) {
        double nd = d + edges_[ei].len;
        if (nd < dist[y]) {
          dist[y] = nd;
          pq.push({nd, y});
        }
      }
    }
    return dist;
  }

  std::vector<double> dijkstra(VId src) const {
    return dijkstra_from_index(vertex_index(src));
  }

  double shortest_dist(VId u, VId v) const {
    return dijkstra(u)[vertex_index(v)];
  }

  DistTable all_pairs() const {
    std::vector<std::vector<double>> d(vertices_.size());
    for (std::size_t i = 0; i < vertices_.size(); ++i)
      d[i] = dijkstra_from_index(static_cast<int>(i));
    // Symmetrize: per-source runs can disagree in the last ulp.
    for (std::size_t i = 0; i < vertices_.size(); ++i)
      for (std::size_t j = i + 1; j < vertices_.size(); ++j)
        d[i][j] = d[j][i] = std::min(d[i][j], d[j][i]);
    return DistTable(vertices_, std::move(d));
  }

 private:
  std::vector<VId> vertices_;
  std::vector<Edge> edges_;
  std::unordered_map<VId, int> vindex_;
  std::unordered_map<EId, int> eindex_;
  std::vector<std::vector<std::pair<int, int>>> adj_;
};

// Edge subset of a parent graph together with its induced vertex set.
struct Subgraph {
  const MetricGraph* parent = nullptr;
  std::vector<EId> edge_ids;
  std::vector<VId> vertex_ids;

  static Subgraph from_edges(const MetricGraph& g, std::vector<EId> eids) {
    Subgraph s;
    s.parent = &g;
    std::sort(eids.begin(), eids.end());
    eids.erase(std::unique(eids.begin(), eids.end()), eids.end());
    std::unordered_set<VId> vs;
    for (EId id : eids) {
      const Edge& e = g.edge(id);
      vs.insert(e.u);
      vs.insert(e.v);
    }
    s.edge_ids = std::move(eids);
    s.vertex_ids.assign(vs.begin(), vs.end());
    std::sort(s.vertex_ids.begin(), s.vertex_ids.end());
    return s;
  }

  // The subset as a standalone metric graph (fresh adjacency, same ids).
  MetricGraph materialize() const {
    std::vector<Edge> es;
    for (EId id : edge_ids) es.push_back(parent->edge(id));
    return MetricGraph(vertex_ids, std::move(es));
  }

  double total_length() const {
    double s = 0;
    for (EId id : edge_ids) s += parent->edge(id).len;
    return s;
  }
};

// Subgraph of g induced by vertex set `vs` (all edges with both ends inside).
inline MetricGraph induced_subgraph(const MetricGraph& g, const std::vector<VId>& vs) {
  std::unordered_set<VId> in(vs.begin(), vs.end());
  std::vector<Edge> es;
  for (const Edge& e : g.edges())
    if (in.count(e.u) && in.count(e.v)) es.push_back(e);
  std::vector<VId> sorted(vs.begin(), vs.end());
  std::sort(sorted.begin(), sorted.end());
  return MetricGraph(sorted, std::move(es));
}

// Rescale so the minimum pairwise shortest-path distance is exactly 1.
// Positive lengths mean the closest pair is adjacent, so the scale is
// 1 / min over edges {u,v} of d_G(u,v).
inline std::pair<MetricGraph, double> rescale_min_distance(const MetricGraph& g) {
  if (g.num_edges() == 0)
    throw StructuralError("rescale: graph has no edges");
  if (!g.connected())
    throw StructuralError("rescale: graph must be connected");
  double mind = kInf;
  DistTable d = g.all_pairs();
  for (const Edge& e : g.edges()) {
    if (e.u == e.v) continue;
    mind = std::min(mind, d.at(e.u, e.v));
  }
  if (mind == kInf) {
    // Only self-loops: the shortest loop is the closest "pair" scale.
    for (const Edge& e : g.edges()) mind = std::min(mind, e.len);
  }
  double factor = 1.0 / mind;
  std::vector<Edge> es = g.edges();
  for (Edge& e : es) e.len *= factor;
  return {MetricGraph(g.vertices(), std::move(es)), factor};
}

}  // namespace genus
