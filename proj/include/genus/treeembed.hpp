#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "genus/io.hpp"
#include "genus/metric_graph.hpp"
#include "genus/rng.hpp"

namespace genus {

// J: the graph with every boundary edge of C split through a new vertex
// z at distance exactly 1/2 from the outside endpoint. Isometric to the
// input. K: the cut graph plus the inner halves of the split edges.
struct SplitComplex {
  MetricGraph j;
  std::vector<VId> z;           // split vertices, sorted
  std::vector<VId> c_vertices;  // V(C), sorted
  Subgraph k;                   // subgraph of j on V(C) u Z
  // Original boundary edge id -> (inner edge u-z, outer edge z-v).
  std::map<EId, std::pair<EId, EId>> split_edges;
  std::map<VId, VId> z_inner;  // z -> its unique neighbor in V(C)
  std::map<VId, VId> z_outer;  // z -> its neighbor outside
};

inline SplitComplex build_split_complex(const MetricGraph& g, const Subgraph& c) {
  if (c.parent == nullptr || c.edge_ids.empty())
    throw StructuralError("build_split_complex: empty cut graph");
  for (EId id : c.edge_ids)
    if (!g.has_edge(id))
      throw StructuralError("build_split_complex: cut graph edge not in graph");

  DistTable dg = g.all_pairs();
  double mind = kInf;
  for (const Edge& e : g.edges())
    if (e.u != e.v) mind = std::min(mind, dg.at(e.u, e.v));
  if (mind == kInf) {
    // Loop-only graphs: the shortest loop sets the scale, as in rescale.
    for (const Edge& e : g.edges()) mind = std::min(mind, e.len);
  }
  if (!(std::abs(mind - 1.0) <= 1e-9))
    throw StructuralError(
        "build_split_complex: minimum pairwise distance is not 1; rescale first");

  std::unordered_set<VId> in_c(c.vertex_ids.begin(), c.vertex_ids.end());
  std::unordered_set<EId> c_edges(c.edge_ids.begin(), c.edge_ids.end());

  VId vbase = 0;
  for (VId v : g.vertices()) vbase = std::max(vbase, v);
  ++vbase;
  EId ebase = 0;
  for (const Edge& e : g.edges()) ebase = std::max(ebase, e.id);
  ++ebase;

  // Boundary edges: exactly one endpoint in V(C), ascending id.
  std::vector<EId> boundary;
  for (const Edge& e : g.edges())
    if (in_c.count(e.u) != in_c.count(e.v)) boundary.push_back(e.id);
  std::sort(boundary.begin(), boundary.end());

  SplitComplex sc;
  sc.c_vertices = c.vertex_ids;
  std::vector<VId> vs = g.vertices();
  std::vector<Edge> es;
  for (const Edge& e : g.edges())
    if (std::find(boundary.begin(), boundary.end(), e.id) == boundary.end())
      es.push_back(e);
  std::vector<EId> k_edges = c.edge_ids;
  for (std::size_t i = 0; i < boundary.size(); ++i) {
    const Edge& e = g.edge(boundary[i]);
    VId u = in_c.count(e.u) ? e.u : e.v;  // inside endpoint
    VId v = in_c.count(e.u) ? e.v : e.u;
    VId zv = vbase + static_cast<VId>(i);
    EId inner = ebase + static_cast<EId>(2 * i);
    EId outer = inner + 1;
    double duv = dg.at(u, v);  // shortest distance, not the edge length
    es.push_back({inner, u, zv, duv - 0.5, +1});
    es.push_back({outer, zv, v, 0.5, +1});
    vs.push_back(zv);
    sc.z.push_back(zv);
    sc.split_edges[boundary[i]] = {inner, outer};
    sc.z_inner[zv] = u;
    sc.z_outer[zv] = v;
    k_edges.push_back(inner);
  }
  sc.j = MetricGraph(std::move(vs), std::move(es));
  sc.k = Subgraph::from_edges(sc.j, k_edges);
  return sc;
}

// Random hierarchical tree over an explicit metric. Exact domination:
// any two points joined at a level-m node sit in a cluster of diameter
// at most 2*beta*2^m, which is precisely their tree distance.
struct DominatingTree {
  MetricGraph tree;
  VId root = 0;
  std::map<VId, VId> point_node;  // source point -> tree node
  std::uint64_t seed = 0;
  double beta = 0;

  double dist(VId px, VId py) const {
    auto d = tree.dijkstra(point_node.at(px));
    return d[tree.vertex_index(point_node.at(py))];
  }

  json to_json() const {
    json j;
    j["root"] = root;
    j["seed"] = seed;
    j["beta"] = fmt_len(beta);
    json nodes = json::array();
    for (VId v : tree.vertices()) nodes.push_back(v);
    j["nodes"] = nodes;
    json edges = json::array();
    for (const Edge& e : tree.edges())
      edges.push_back({{"id", e.id}, {"u", e.u}, {"v", e.v}, {"len", fmt_len(e.len)}});
    j["edges"] = edges;
    json pm = json::object();
    for (auto [p, n] : point_node) pm[std::to_string(p)] = n;
    j["points"] = pm;
    return j;
  }
};

namespace detail {

struct TreeBuilder {
  std::vector<VId> nodes;
  std::vector<Edge> edges;
  VId next_node = 0;
  EId next_edge = 0;

  VId fresh() {
    nodes.push_back(next_node);
    return next_node++;
  }
  void link(VId parent, VId child, double len) {
    edges.push_back({next_edge++, parent, child, len, +1});
  }
};

// Recursive cluster refinement. Returns the node representing the
// cluster; a singleton (or zero-diameter) cluster becomes the leaf of
// all its points. dist(level-i node -> any leaf below) == beta * 2^i.
inline VId frt_cluster(TreeBuilder& tb, const DistTable& metric,
                       const std::vector<VId>& perm, double beta, int level,
                       const std::vector<VId>& cluster,
                       std::map<VId, VId>& point_node) {
  double diam = 0;
  for (std::size_t a = 0; a < cluster.size(); ++a)
    for (std::size_t b = a + 1; b < cluster.size(); ++b)
      diam = std::max(diam, metric.at(cluster[a], cluster[b]));
  if (cluster.size() == 1 || diam == 0) {
    VId leaf = tb.fresh();
    for (VId p : cluster) point_node[p] = leaf;
    return leaf;
  }
  VId node = tb.fresh();
  double radius = beta * std::pow(2.0, level - 1);
  // First permutation point within the child radius claims each point.
  std::map<std::size_t, std::vector<VId>> groups;  // perm position -> members
  std::unordered_map<VId, std::size_t> pos;
  for (std::size_t i = 0; i < perm.size(); ++i) pos[perm[i]] = i;
  for (VId p : cluster) {
    std::size_t claim = 0;
    for (std::size_t i = 0; i < perm.size(); ++i)
      if (metric.at(perm[i], p) <= radius) {
        claim = i;
        break;
      }
    groups[claim].push_back(p);
  }
  for (auto& [ci, members] : groups) {
    VId child = frt_cluster(tb, metric, perm, beta, level - 1, members, point_node);
    bool leaf_child = members.size() == 1;
    if (!leaf_child) {
      double cd = 0;
      for (std::size_t a = 0; a < members.size(); ++a)
        for (std::size_t b = a + 1; b < members.size(); ++b)
          cd = std::max(cd, metric.at(members[a], members[b]));
      leaf_child = cd == 0;
    }
    double up = beta * std::pow(2.0, level);
    tb.link(node, child, leaf_child ? up : up - radius);
  }
  return node;
}

}  // namespace detail

inline DominatingTree frt_tree(const DistTable& metric, std::uint64_t seed) {
  if (metric.size() == 0) throw StructuralError("frt_tree: empty point set");
  Rng rng(seed);
  double beta = 1.0 + rng.next_double();  // [1, 2)
  std::vector<VId> perm = metric.ids();
  std::sort(perm.begin(), perm.end());
  rng.shuffle(perm);

  double diam = metric.finite_diameter();
  int top = 0;
  while (std::pow(2.0, top) < diam) ++top;

  detail::TreeBuilder tb;
  DominatingTree t;
  std::vector<VId> all = metric.ids();
  std::sort(all.begin(), all.end());
  t.root = detail::frt_cluster(tb, metric, perm, beta, top, all, t.point_node);
  t.tree = MetricGraph(tb.nodes, tb.edges);
  t.seed = seed;
  t.beta = beta;
  return t;
}

enum class TreeEmbedMode { kCore, kDirect };

// Dominating tree for (V(K), d_K): FRT over the cut graph's intrinsic
// metric, then each split vertex z hangs off its unique inner neighbor
// as a pendant with the exact connecting length. Core mode runs FRT on
// the degree->=3 skeleton only and reattaches each suppressed chain
// vertex as a pendant at its nearer kept endpoint (chain distance), so
// domination survives without the full point set in the hierarchy.
inline DominatingTree embed_cutgraph_tree(const SplitComplex& sc,
                                          TreeEmbedMode mode, std::uint64_t seed) {
  // Cut graph standalone: K edges internal to V(C).
  std::unordered_set<VId> in_c(sc.c_vertices.begin(), sc.c_vertices.end());
  std::vector<EId> c_edge_ids;
  for (EId id : sc.k.edge_ids) {
    const Edge& e = sc.j.edge(id);
    if (in_c.count(e.u) && in_c.count(e.v)) c_edge_ids.push_back(id);
  }
  for (const auto& [zv, u] : sc.z_inner)
    if (!in_c.count(u))
      throw StructuralError("embed_cutgraph_tree: split vertex without inner neighbor");
  MetricGraph c = Subgraph::from_edges(sc.j, c_edge_ids).materialize();
  if (!c.connected())
    throw StructuralError("embed_cutgraph_tree: cut graph must be connected");
  DistTable dc = c.all_pairs();

  DominatingTree t;
  // point -> (already mapped tree anchor point, pendant length); applied
  // after the FRT skeleton exists.
  std::vector<std::tuple<VId, VId, double>> pendants;

  if (mode == TreeEmbedMode::kDirect || c.num_vertices() <= 2) {
    t = frt_tree(dc, seed);
  } else {
    // Kept vertices: degree != 2 in C (loops count twice); a cycle
    // component keeps its smallest vertex so chains have endpoints.
    std::map<VId, int> deg;
    for (VId v : c.vertices()) deg[v] = 0;
    for (const Edge& e : c.edges()) {
      deg[e.u] += 1;
      deg[e.v] += 1;
    }
    std::vector<VId> kept;
    for (auto [v, d] : deg)
      if (d != 2) kept.push_back(v);
    if (kept.empty()) kept.push_back(c.vertices().front());
    std::sort(kept.begin(), kept.end());
    std::unordered_set<VId> is_kept(kept.begin(), kept.end());

    // Walk chains of degree-2 vertices between kept endpoints and record
    // the along-chain distance of every interior vertex to both ends.
    std::map<VId, std::pair<VId, double>> attach;  // suppressed -> (endpoint, len)
    std::unordered_set<EId> used;
    for (VId s : kept) {
      int si = c.vertex_index(s);
      for (auto [ei0, ni] : c.adjacent(si)) {
        EId first = c.edges()[ei0].id;
        if (used.count(first)) continue;
        // Trace the chain leaving s through this edge.
        std::vector<std::pair<VId, double>> interior;  // vertex, dist from s
        double walked = c.edges()[ei0].len;
        used.insert(first);
        VId prev = s;
        VId cur = c.vertices()[ni];
        EId in_edge = first;
        while (!is_kept.count(cur)) {
          interior.push_back({cur, walked});
          int ci = c.vertex_index(cur);
          EId out_edge = -1;
          int next_vi = -1;
          for (auto [ei, yi] : c.adjacent(ci)) {
            const Edge& e = c.edges()[ei];
            if (e.id == in_edge) continue;
            out_edge = e.id;
            next_vi = yi;
          }
          if (out_edge == -1)
            throw InternalError("embed_cutgraph_tree: chain ended off a kept vertex");
          used.insert(out_edge);
          walked += c.edge(out_edge).len;
          prev = cur;
          (void)prev;
          cur = c.vertices()[next_vi];
          in_edge = out_edge;
        }
        VId other = cur;
        double total = walked;
        for (auto [w, ds] : interior) {
          double de = total - ds;
          VId end = s;
          double len = ds;
          if (de < ds - 1e-12 || (std::abs(de - ds) <= 1e-12 && other < s)) {
            end = other;
            len = de;
          }
          auto it = attach.find(w);
          if (it == attach.end() || len < it->second.second - 1e-12 ||
              (std::abs(len - it->second.second) <= 1e-12 && end < it->second.first))
            attach[w] = {end, len};
        }
      }
    }

    // FRT over the kept skeleton with the C-intrinsic metric.
    std::vector<std::vector<double>> dk(kept.size(), std::vector<double>(kept.size()));
    for (std::size_t i = 0; i < kept.size(); ++i)
      for (std::size_t j2 = 0; j2 < kept.size(); ++j2)
        dk[i][j2] = dc.at(kept[i], kept[j2]);
    t = frt_tree(DistTable(kept, dk), seed);
    for (auto& [w, a] : attach) pendants.push_back({w, a.first, a.second});
  }

  // Split vertices hang off their inner neighbors.
  for (const auto& [zv, u] : sc.z_inner) {
    double len = 0;
    bool found = false;
    for (EId id : sc.k.edge_ids) {
      const Edge& e = sc.j.edge(id);
      if ((e.u == zv && e.v == u) || (e.v == zv && e.u == u)) {
        len = e.len;
        found = true;
        break;
      }
    }
    if (!found) throw InternalError("embed_cutgraph_tree: missing z inner edge");
    pendants.push_back({zv, u, len});
  }

  // Materialize pendants; anchors may themselves be pendants (z attaches
  // to a suppressed chain vertex), so resolve in dependency order.
  std::vector<VId> nodes = t.tree.vertices();
  std::vector<Edge> edges = t.tree.edges();
  VId next_node = 0;
  for (VId v : nodes) next_node = std::max(next_node, v);
  ++next_node;
  EId next_edge = 0;
  for (const Edge& e : edges) next_edge = std::max(next_edge, e.id);
  ++next_edge;
  bool progress = true;
  while (!pendants.empty() && progress) {
    progress = false;
    std::vector<std::tuple<VId, VId, double>> rest;
    for (auto& [p, anchor, len] : pendants) {
      auto it = t.point_node.find(anchor);
      if (it == t.point_node.end()) {
        rest.push_back({p, anchor, len});
        continue;
      }
      VId leaf = next_node++;
      nodes.push_back(leaf);
      edges.push_back({next_edge++, it->second, leaf, len, +1});
      t.point_node[p] = leaf;
      progress = true;
    }
    pendants = std::move(rest);
  }
  if (!pendants.empty())
    throw InternalError("embed_cutgraph_tree: unresolved pendant anchors");
  t.tree = MetricGraph(std::move(nodes), std::move(edges));
  t.seed = seed;
  return t;
}

}  // namespace genus
