#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "genus/partition.hpp"

namespace genus {

// peel(G, A): an isometric copy of G[A] plus, for each anchor a, a
// disjoint isometric copy of G[(V \ A) u {a}] glued to the core at a.
struct PeeledGraph {
  MetricGraph graph;
  std::vector<VId> anchors;  // sorted original anchor ids

  // Peeled id of the core vertex for anchor a.
  VId core_of(VId a) const {
    auto it = anchor_rank_.find(a);
    if (it == anchor_rank_.end())
      throw StructuralError("PeeledGraph: not an anchor: " + std::to_string(a));
    return it->second;
  }
  // Peeled id of original vertex v inside the copy attached at anchor a.
  // v == a resolves to the core vertex (the gluing point).
  VId copy_of(VId a, VId v) const {
    if (v == a) return core_of(a);
    auto it = outside_rank_.find(v);
    if (it == outside_rank_.end())
      throw StructuralError("PeeledGraph: vertex " + std::to_string(v) +
                            " is not outside the anchor set");
    return static_cast<VId>(anchors.size()) +
           core_of(a) * static_cast<VId>(outside_rank_.size()) + it->second;
  }
  VId original_of(VId peeled) const { return original_.at(peeled); }
  // Anchor whose copy a peeled vertex lives in (core vertices map to
  // their own anchor).
  VId copy_anchor_of(VId peeled) const { return home_.at(peeled); }

  // Filled by build_peel.
  std::unordered_map<VId, VId> anchor_rank_;
  std::unordered_map<VId, VId> outside_rank_;
  std::unordered_map<VId, VId> original_;
  std::unordered_map<VId, VId> home_;
  // Peeled edge id -> (copy anchor or -1 for the core, original edge id).
  std::map<EId, std::pair<VId, EId>> edge_origin;
};

inline PeeledGraph build_peel(const MetricGraph& g, std::vector<VId> a_set) {
  if (a_set.empty()) throw StructuralError("build_peel: anchor set is empty");
  std::sort(a_set.begin(), a_set.end());
  a_set.erase(std::unique(a_set.begin(), a_set.end()), a_set.end());
  for (VId a : a_set)
    if (!g.has_vertex(a))
      throw StructuralError("build_peel: unknown anchor " + std::to_string(a));

  PeeledGraph p;
  p.anchors = a_set;
  std::unordered_set<VId> in_a(a_set.begin(), a_set.end());
  std::vector<VId> outside;
  for (VId v : g.vertices())
    if (!in_a.count(v)) outside.push_back(v);
  std::sort(outside.begin(), outside.end());

  for (std::size_t i = 0; i < a_set.size(); ++i)
    p.anchor_rank_[a_set[i]] = static_cast<VId>(i);
  for (std::size_t i = 0; i < outside.size(); ++i)
    p.outside_rank_[outside[i]] = static_cast<VId>(i);

  std::vector<VId> vs;
  for (std::size_t i = 0; i < a_set.size(); ++i) {
    VId id = static_cast<VId>(i);
    vs.push_back(id);
    p.original_[id] = a_set[i];
    p.home_[id] = a_set[i];
  }
  for (VId a : a_set)
    for (VId v : outside) {
      VId id = p.copy_of(a, v);
      vs.push_back(id);
      p.original_[id] = v;
      p.home_[id] = a;
    }

  std::vector<Edge> es;
  EId next = 0;
  std::vector<EId> order;
  for (const Edge& e : g.edges()) order.push_back(e.id);
  std::sort(order.begin(), order.end());
  // Core: edges inside A, lengths copied exactly.
  for (EId id : order) {
    const Edge& e = g.edge(id);
    if (in_a.count(e.u) && in_a.count(e.v)) {
      es.push_back({next, p.core_of(e.u), p.core_of(e.v), e.len, e.sign});
      p.edge_origin[next] = {-1, id};
      ++next;
    }
  }
  // One copy of G[(V \ A) u {a}] per anchor.
  for (VId a : a_set) {
    for (EId id : order) {
      const Edge& e = g.edge(id);
      bool ue = e.u == a || !in_a.count(e.u);
      bool ve = e.v == a || !in_a.count(e.v);
      if (!ue || !ve) continue;
      if (in_a.count(e.u) && in_a.count(e.v)) continue;  // loop at a stays in the core
      es.push_back({next, p.copy_of(a, e.u), p.copy_of(a, e.v), e.len, e.sign});
      p.edge_origin[next] = {a, id};
      ++next;
    }
  }
  p.graph = MetricGraph(std::move(vs), std::move(es));

  std::size_t n = g.num_vertices(), k = a_set.size();
  if (p.graph.num_vertices() != k + k * (n - k))
    throw InternalError("build_peel: vertex count violates |A| + |A|(|V|-|A|)");
  return p;
}

// Randomized anchor assignment realizing the peeling map.
struct PeelAssignment {
  std::unordered_map<VId, VId> f;  // total, identity on A
  std::uint64_t seed = 0;
  std::vector<double> scales;  // partition diameters actually sampled
  int fallback_count = 0;      // vertices assigned by ambient nearest-anchor

  VId at(VId v) const { return f.at(v); }

  json to_json() const {
    json j;
    json m = json::object();
    std::map<VId, VId> sorted(f.begin(), f.end());
    for (auto [v, a] : sorted) m[std::to_string(v)] = a;
    j["assignment"] = m;
    j["seed"] = seed;
    j["fallback_count"] = fallback_count;
    json sc = json::array();
    for (double s : scales) sc.push_back(fmt_len(s));
    j["scales"] = sc;
    return j;
  }
};

namespace detail {

// kpr over a possibly disconnected graph: each connected component is
// partitioned independently with a component-derived seed.
inline Partition kpr_components(const MetricGraph& g, int genus, double delta,
                                std::uint64_t seed) {
  std::vector<char> seen(g.num_vertices(), 0);
  std::vector<std::vector<VId>> comps;
  for (std::size_t s = 0; s < g.num_vertices(); ++s) {
    if (seen[s]) continue;
    std::vector<int> stack{static_cast<int>(s)};
    seen[s] = 1;
    std::vector<VId> comp;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      comp.push_back(g.vertices()[x]);
      for (auto [ei, y] : g.adjacent(x))
        if (!seen[y]) {
          seen[y] = 1;
          stack.push_back(y);
        }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  std::sort(comps.begin(), comps.end());
  Partition p;
  p.delta = delta;
  p.scheme = "kpr";
  p.seed = seed;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    MetricGraph sub = induced_subgraph(g, comps[c]);
    Partition q = kpr_partition(sub, genus, delta, derive_seed(seed, c));
    for (auto& b : q.blocks) p.blocks.push_back(std::move(b));
    p.fallback_splits += q.fallback_splits;
  }
  p.finalize();
  return p;
}

}  // namespace detail

inline PeelAssignment sample_peel_assignment(const MetricGraph& g,
                                             std::vector<VId> a_set, int genus,
                                             std::uint64_t seed) {
  if (a_set.empty())
    throw StructuralError("sample_peel_assignment: anchor set is empty");
  if (!g.connected())
    throw StructuralError("sample_peel_assignment: graph must be connected");
  std::sort(a_set.begin(), a_set.end());
  a_set.erase(std::unique(a_set.begin(), a_set.end()), a_set.end());
  std::unordered_set<VId> in_a(a_set.begin(), a_set.end());

  // G' = G without the edges inside A; assignment distances are d_{G'}.
  std::vector<Edge> kept;
  for (const Edge& e : g.edges())
    if (!(in_a.count(e.u) && in_a.count(e.v))) kept.push_back(e);
  MetricGraph gp(g.vertices(), std::move(kept));
  DistTable dp = gp.all_pairs();

  PeelAssignment out;
  out.seed = seed;
  for (VId a : a_set) out.f[a] = a;

  // Ambient nearest anchor, for vertices G' cut off from A.
  DistTable dg;
  bool have_dg = false;
  auto ambient_nearest = [&](VId v) {
    if (!have_dg) {
      dg = g.all_pairs();
      have_dg = true;
    }
    VId best = a_set.front();
    double bd = dg.at(v, best);
    for (VId a : a_set)
      if (dg.at(v, a) < bd - kRelTol || (approx_eq(dg.at(v, a), bd) && a < best)) {
        bd = dg.at(v, a);
        best = a;
      }
    return best;
  };

  double diam = dp.finite_diameter();
  int jmax = 1;
  while (std::pow(2.0, jmax) < 4 * std::max(1.0, diam)) ++jmax;

  std::map<int, Partition> pj;  // scale index -> sampled partition, lazy
  auto partition_at = [&](int j) -> const Partition& {
    auto it = pj.find(j);
    if (it != pj.end()) return it->second;
    double delta = std::pow(2.0, j);
    Partition p = detail::kpr_components(gp, genus, delta,
                                         derive_seed(seed, static_cast<std::uint64_t>(j)));
    out.scales.push_back(delta);
    return pj.emplace(j, std::move(p)).first->second;
  };

  for (VId v : g.vertices()) {
    if (in_a.count(v)) continue;
    double dva = kInf;
    for (VId a : a_set) dva = std::min(dva, dp.at(v, a));
    if (dva == kInf) {
      out.f[v] = ambient_nearest(v);
      ++out.fallback_count;
      continue;
    }
    int j = static_cast<int>(std::ceil(std::log2(std::max(1.0, dva)))) + 1;
    j = std::min(std::max(j, 1), jmax);
    const Partition& p = partition_at(j);
    const std::vector<VId>& cluster = p.blocks[p.block_of(v)];
    VId best = -1;
    double bd = kInf;
    for (VId a : a_set) {
      double da = kInf;
      for (VId c : cluster) da = std::min(da, dp.at(a, c));
      if (da < bd - kRelTol * std::max(1.0, bd) ||
          (approx_eq(da, bd) && (best == -1 || a < best))) {
        bd = da;
        best = a;
      }
    }
    if (bd == kInf) {
      out.f[v] = ambient_nearest(v);
      ++out.fallback_count;
    } else {
      out.f[v] = best;
    }
  }
  std::sort(out.scales.begin(), out.scales.end());
  return out;
}

}  // namespace genus
