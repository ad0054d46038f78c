#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "genus/io.hpp"
#include "genus/surface.hpp"

namespace genus {

namespace detail {

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n), count_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[a] = b;
    --count_;
    return true;
  }
  int count() const { return count_; }

 private:
  std::vector<int> parent_;
  int count_;
};

// Degree of each vertex in the standalone subgraph; loops count twice.
inline std::map<VId, int> subgraph_degrees(const Subgraph& h) {
  std::map<VId, int> deg;
  for (VId v : h.vertex_ids) deg[v] = 0;
  for (EId id : h.edge_ids) {
    const Edge& e = h.parent->edge(id);
    deg[e.u] += 1;
    deg[e.v] += 1;  // loop: u == v, counted twice
  }
  return deg;
}

inline bool subgraph_connected(const Subgraph& h) {
  if (h.vertex_ids.empty()) return false;
  std::unordered_map<VId, int> idx;
  for (std::size_t i = 0; i < h.vertex_ids.size(); ++i)
    idx[h.vertex_ids[i]] = static_cast<int>(i);
  UnionFind uf(static_cast<int>(h.vertex_ids.size()));
  for (EId id : h.edge_ids) {
    const Edge& e = h.parent->edge(id);
    uf.unite(idx[e.u], idx[e.v]);
  }
  return uf.count() == 1;
}

// With precomputed faces and genus; shared by the certifier and the
// exact search inner loop.
inline bool certify_cut_graph(const FaceStructure& fs, int eg, const Subgraph& h) {
  if (h.edge_ids.empty()) return false;
  if (!subgraph_connected(h)) return false;
  std::unordered_set<EId> in_h(h.edge_ids.begin(), h.edge_ids.end());
  UnionFind uf(static_cast<int>(fs.walks.size()));
  for (const auto& [eid, pair] : fs.edge_faces)
    if (!in_h.count(eid)) uf.unite(pair.first, pair.second);
  if (uf.count() != 1) return false;
  int chi = static_cast<int>(h.edge_ids.size()) -
            static_cast<int>(h.vertex_ids.size()) + 1;
  return chi == eg;
}

}  // namespace detail

// Certificate: H cuts the surface into a single disk iff
//   (a) H is connected and nonempty,
//   (b) merging faces across every non-H edge leaves one region,
//   (c) |E(H)| - |V(H)| + 1 equals the Euler genus.
// The cut-open surface is connected with boundary and Euler
// characteristic (2 - eg) - (|V(H)| - |E(H)|) = 1, hence a disk.
inline bool is_cut_graph(const SurfaceEmbedding& emb, const Subgraph& h) {
  if (h.parent == nullptr) throw StructuralError("is_cut_graph: empty subgraph handle");
  for (EId id : h.edge_ids)
    if (!emb.base().has_edge(id))
      throw StructuralError("is_cut_graph: subgraph edge " + std::to_string(id) +
                            " not in the embedded graph");
  return detail::certify_cut_graph(emb.faces(), emb.euler_genus().euler_genus, h);
}

struct CutGraphResult {
  Subgraph h;
  double total_length = 0;
  int high_degree_count = 0;  // vertices of degree >= 3 in H
  int euler_number = 0;       // |E(H)| - |V(H)| + 1
  bool certified = false;
  std::string solver;  // "exact" | "treecotree"
  long long nodes_explored = 0;

  json to_json() const {
    json j;
    j["edges"] = h.edge_ids;
    j["length"] = fmt_len(total_length);
    j["high_degree_count"] = high_degree_count;
    j["euler_number"] = euler_number;
    j["certified"] = certified;
    j["solver"] = solver;
    j["nodes_explored"] = nodes_explored;
    return j;
  }
};

namespace detail {

inline CutGraphResult finish_result(const SurfaceEmbedding& emb, Subgraph h,
                                    const std::string& solver) {
  CutGraphResult r;
  r.total_length = h.total_length();
  r.euler_number = static_cast<int>(h.edge_ids.size()) -
                   static_cast<int>(h.vertex_ids.size()) + 1;
  auto deg = subgraph_degrees(h);
  for (const auto& [v, d] : deg)
    if (d >= 3) ++r.high_degree_count;
  r.certified = is_cut_graph(emb, h);
  r.solver = solver;
  r.h = std::move(h);
  return r;
}

}  // namespace detail

// Tree-cotree construction: shortest-path tree T from the root, dual
// spanning tree over the faces through non-T edges, the eg leftover
// edges X close the cut graph; pendant T-paths are then pruned.
inline CutGraphResult cut_graph_treecotree(const SurfaceEmbedding& emb, VId root) {
  const MetricGraph& g = emb.base();
  int eg = emb.euler_genus().euler_genus;
  if (eg < 1)
    throw StructuralError("cut_graph_treecotree: genus-0 input, no cut graph needed");

  // Shortest-path tree. Parent edge of v: the edge realizing
  // dist[u] + len == dist[v], smallest id on ties.
  std::vector<double> dist = g.dijkstra(root);
  std::unordered_set<EId> tree;
  for (std::size_t vi = 0; vi < g.num_vertices(); ++vi) {
    if (static_cast<int>(vi) == g.vertex_index(root)) continue;
    EId best = -1;
    for (auto [ei, ui] : g.adjacent(static_cast<int>(vi))) {
      const Edge& e = g.edges()[ei];
      if (static_cast<int>(vi) == ui) continue;
      if (approx_eq(dist[ui] + e.len, dist[vi]) && (best == -1 || e.id < best))
        best = e.id;
    }
    if (best == -1) throw InternalError("cut_graph_treecotree: no tree parent");
    tree.insert(best);
  }

  // Dual spanning tree through the non-tree edges, ascending id.
  FaceStructure fs = emb.faces();
  detail::UnionFind uf(static_cast<int>(fs.walks.size()));
  std::vector<EId> candidates;
  for (const Edge& e : g.edges())
    if (!tree.count(e.id)) candidates.push_back(e.id);
  std::sort(candidates.begin(), candidates.end());
  std::vector<EId> leftover;
  for (EId id : candidates) {
    auto [f1, f2] = fs.edge_faces.at(id);
    if (!uf.unite(f1, f2)) leftover.push_back(id);
  }
  if (static_cast<int>(leftover.size()) != eg)
    throw InternalError("cut_graph_treecotree: leftover edge count " +
                        std::to_string(leftover.size()) + " != Euler genus " +
                        std::to_string(eg));

  // T plus X, with pendant vertices not touching X peeled away.
  std::vector<EId> h_edges(tree.begin(), tree.end());
  h_edges.insert(h_edges.end(), leftover.begin(), leftover.end());
  Subgraph h = Subgraph::from_edges(g, h_edges);
  std::unordered_set<EId> in_x(leftover.begin(), leftover.end());
  std::unordered_set<EId> alive(h.edge_ids.begin(), h.edge_ids.end());
  auto deg = detail::subgraph_degrees(h);
  std::unordered_set<VId> touches_x;
  for (EId id : leftover) {
    touches_x.insert(g.edge(id).u);
    touches_x.insert(g.edge(id).v);
  }
  std::map<VId, std::vector<EId>> inc;
  for (EId id : h.edge_ids) {
    inc[g.edge(id).u].push_back(id);
    if (g.edge(id).u != g.edge(id).v) inc[g.edge(id).v].push_back(id);
  }
  std::vector<VId> stack;
  for (const auto& [v, d] : deg)
    if (d == 1 && !touches_x.count(v)) stack.push_back(v);
  while (!stack.empty()) {
    VId v = stack.back();
    stack.pop_back();
    if (deg[v] != 1 || touches_x.count(v)) continue;
    for (EId id : inc[v]) {
      if (!alive.count(id)) continue;
      alive.erase(id);
      const Edge& e = g.edge(id);
      VId w = e.u == v ? e.v : e.u;
      deg[v] -= 1;
      deg[w] -= 1;
      if (deg[w] == 1 && !touches_x.count(w)) stack.push_back(w);
    }
  }
  Subgraph pruned = Subgraph::from_edges(g, {alive.begin(), alive.end()});
  CutGraphResult r = detail::finish_result(emb, std::move(pruned), "treecotree");
  if (!r.certified)
    throw InternalError("cut_graph_treecotree: result failed certification");
  return r;
}

// Exact minimum-length cut graph by branch and bound over edge subsets.
// Deterministic: edges scanned in ascending id, ties resolved toward the
// lexicographically smallest sorted edge-id list.
inline CutGraphResult min_cut_graph_exact(const SurfaceEmbedding& emb) {
  const MetricGraph& g = emb.base();
  int eg = emb.euler_genus().euler_genus;
  if (eg < 1)
    throw StructuralError("min_cut_graph_exact: genus-0 input, no cut graph needed");

  std::vector<EId> order;
  for (const Edge& e : g.edges()) order.push_back(e.id);
  std::sort(order.begin(), order.end());

  // Incumbent from the heuristic; any certified solution is an upper bound.
  double best_len = kInf;
  std::vector<EId> best_edges;
  {
    CutGraphResult seed = cut_graph_treecotree(emb, g.vertices().front());
    best_len = seed.total_length;
    best_edges = seed.h.edge_ids;
  }

  const long long kNodeBudget = 200000000;
  long long nodes = 0;
  std::vector<EId> chosen;
  FaceStructure fs = emb.faces();

  auto consider_leaf = [&]() {
    Subgraph h = Subgraph::from_edges(g, chosen);
    if (!detail::certify_cut_graph(fs, eg, h)) return;
    double len = h.total_length();
    if (len < best_len - kRelTol * std::max(1.0, best_len) ||
        (approx_eq(len, best_len) && h.edge_ids < best_edges)) {
      best_len = len;
      best_edges = h.edge_ids;
    }
  };

  double chosen_len = 0;
  auto dfs = [&](auto&& self, std::size_t i) -> void {
    if (++nodes > kNodeBudget)
      throw BudgetError("min_cut_graph_exact: node budget exceeded");
    if (chosen_len > best_len * (1 + kRelTol)) return;  // admissible length bound
    if (i == order.size()) {
      consider_leaf();
      return;
    }
    const Edge& e = g.edge(order[i]);
    chosen.push_back(e.id);
    chosen_len += e.len;
    self(self, i + 1);
    chosen.pop_back();
    chosen_len -= e.len;
    self(self, i + 1);
  };
  dfs(dfs, 0);

  CutGraphResult r =
      detail::finish_result(emb, Subgraph::from_edges(g, best_edges), "exact");
  r.nodes_explored = nodes;
  if (!r.certified) throw InternalError("min_cut_graph_exact: uncertified optimum");
  return r;
}

// Dilation of a vertex set A: worst ratio of induced-subgraph distance to
// ambient distance over pairs of A. Infinite if G[A] is disconnected.
inline double dilation(const MetricGraph& g, const std::vector<VId>& a) {
  if (a.size() > 2000)
    throw BudgetError("dilation: vertex set exceeds exact all-pairs budget (2000)");
  if (a.size() < 2) return 1.0;  // convention: no pair to stretch
  MetricGraph sub = induced_subgraph(g, a);
  DistTable din = sub.all_pairs();
  double worst = 1.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::vector<double> dout = g.dijkstra(a[i]);
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (i == j) continue;
      double inner = din.at(a[i], a[j]);
      if (inner == kInf) return kInf;
      double outer = dout[g.vertex_index(a[j])];
      if (outer <= 0) throw InternalError("dilation: nonpositive ambient distance");
      worst = std::max(worst, inner / outer);
    }
  }
  return worst;
}

}  // namespace genus
