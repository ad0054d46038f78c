#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "genus/cutgraph.hpp"
#include "genus/peeling.hpp"
#include "genus/planarity.hpp"
#include "genus/treeembed.hpp"

namespace genus {

struct PlanarizeOptions {
  bool exact_cutgraph = true;  // false: tree-cotree heuristic
  TreeEmbedMode tree_mode = TreeEmbedMode::kCore;
};

// One draw of the random planar graph R plus the vertex mapping F.
struct EmbeddingSample {
  MetricGraph r;
  std::map<VId, VId> f;  // V(G) -> V(R)
  std::uint64_t seed = 0;
  bool identity = false;  // genus-0 shortcut: R = G, F = id

  // Provenance.
  CutGraphResult cutgraph;
  PeelAssignment assignment;
  std::uint64_t tree_seed = 0;
  double rescale_factor = 1.0;
  std::vector<VId> anchors;        // V(K), ids in J
  std::map<VId, VId> anchor_node;  // anchor -> its R vertex on the tree
  // 1-sum bookkeeping: R vertex -> copy anchor, or -1 for tree vertices.
  std::map<VId, VId> r_home;

  json to_json() const {
    json j;
    j["graph"] = graph_to_json(r);
    json fm = json::object();
    for (auto [v, rv] : f) fm[std::to_string(v)] = rv;
    j["map"] = fm;
    j["seed"] = seed;
    j["identity"] = identity;
    j["rescale_factor"] = fmt_len(rescale_factor);
    json hm = json::object();
    for (auto [v, home] : r_home) hm[std::to_string(v)] = home;
    j["homes"] = hm;
    json an = json::object();
    for (auto [a, node] : anchor_node) an[std::to_string(a)] = node;
    j["anchor_nodes"] = an;
    if (!identity) {
      j["cutgraph"] = cutgraph.to_json();
      j["assignment"] = assignment.to_json();
      j["tree_seed"] = tree_seed;
    }
    return j;
  }
};

// Reads back the fields verification needs (R, F, homes, anchor nodes);
// solver provenance is reported-only and not reconstructed.
inline EmbeddingSample sample_from_json(const json& j) {
  if (!j.is_object()) throw StructuralError("sample: top level must be an object");
  for (const char* key : {"graph", "map", "seed", "identity", "homes", "anchor_nodes"})
    if (!j.contains(key))
      throw StructuralError(std::string("sample: missing key '") + key + "'");
  EmbeddingSample s;
  s.r = graph_from_json(j.at("graph"));
  for (const auto& [k, v] : j.at("map").items())
    s.f[static_cast<VId>(std::stoll(k))] = v.get<VId>();
  s.seed = j.at("seed").get<std::uint64_t>();
  s.identity = j.at("identity").get<bool>();
  s.rescale_factor = parse_len(j.at("rescale_factor").get<std::string>(), "sample");
  for (const auto& [k, v] : j.at("homes").items())
    s.r_home[static_cast<VId>(std::stoll(k))] = v.get<VId>();
  for (const auto& [k, v] : j.at("anchor_nodes").items())
    s.anchor_node[static_cast<VId>(std::stoll(k))] = v.get<VId>();
  return s;
}

inline EmbeddingSample sample_planarization(const SurfaceEmbedding& emb,
                                            const PlanarizeOptions& opt,
                                            std::uint64_t seed) {
  GenusInfo gi = emb.euler_genus();  // errors out on disconnected input
  EmbeddingSample s;
  s.seed = seed;

  if (gi.euler_genus == 0) {
    s.identity = true;
    s.r = emb.base();
    for (VId v : emb.base().vertices()) s.f[v] = v;
    for (VId v : emb.base().vertices()) s.r_home[v] = -1;
    return s;
  }
  int genus = (gi.euler_genus + 1) / 2;  // orientable: eg = 2g

  // Stage 1: rescale to minimum pairwise distance 1.
  auto [g1, factor] = rescale_min_distance(emb.base());
  s.rescale_factor = factor;
  SurfaceEmbedding emb1(g1, emb.rotation());

  // Stage 2: cut graph.
  s.cutgraph = opt.exact_cutgraph
                   ? min_cut_graph_exact(emb1)
                   : cut_graph_treecotree(emb1, g1.vertices().front());
  if (!s.cutgraph.certified)
    throw InternalError("sample_planarization[cutgraph]: uncertified cut graph");

  // Stage 3: split complex J, Z, K.
  SplitComplex sc = build_split_complex(g1, s.cutgraph.h);
  s.anchors = sc.k.vertex_ids;

  // Stage 4: peel assignment over J with anchors V(K).
  s.assignment = sample_peel_assignment(sc.j, s.anchors, genus, derive_seed(seed, 1));

  // Stage 5: the peeled graph.
  PeeledGraph peel = build_peel(sc.j, s.anchors);

  // Stage 6: dominating tree for K.
  s.tree_seed = derive_seed(seed, 2);
  DominatingTree tp = embed_cutgraph_tree(sc, opt.tree_mode, s.tree_seed);

  // Stage 7: splice. R = the tree with, at each anchor's leaf, the part
  // of that anchor's peel copy reachable from the gluing point. The
  // unreachable remainder of a copy carries no image and is dropped.
  VId copy_base = 0;
  for (VId t : tp.tree.vertices()) copy_base = std::max(copy_base, t);
  ++copy_base;
  std::vector<VId> rvs = tp.tree.vertices();
  std::vector<Edge> res = tp.tree.edges();
  EId next_eid = 0;
  for (const Edge& e : res) next_eid = std::max(next_eid, e.id);
  ++next_eid;
  for (VId t : tp.tree.vertices()) s.r_home[t] = -1;
  for (VId a : s.anchors) s.anchor_node[a] = tp.point_node.at(a);

  // Reachability inside each copy, from the core gluing vertex.
  std::unordered_set<VId> live;  // peel ids reachable from their own anchor
  {
    std::unordered_map<VId, std::vector<std::pair<VId, EId>>> adj;
    for (const Edge& e : peel.graph.edges()) {
      adj[e.u].push_back({e.v, e.id});
      adj[e.v].push_back({e.u, e.id});
    }
    for (VId a : s.anchors) {
      VId start = peel.core_of(a);
      std::vector<VId> stack{start};
      std::unordered_set<VId> seen{start};
      while (!stack.empty()) {
        VId x = stack.back();
        stack.pop_back();
        for (auto [y, eid] : adj[x]) {
          // Stay inside copy a; core edges do not exist here.
          if (peel.copy_anchor_of(y) != a && y != start) continue;
          if (peel.edge_origin.at(eid).first != a) continue;
          if (seen.insert(y).second) stack.push_back(y);
        }
      }
      for (VId x : seen) live.insert(x);
    }
  }

  auto r_id = [&](VId peeled) -> VId {
    // Core vertices live on the tree; copy vertices shift past it.
    VId orig = peel.original_of(peeled);
    if (peel.copy_anchor_of(peeled) == orig && peel.core_of(orig) == peeled)
      return tp.point_node.at(orig);
    return copy_base + peeled;
  };
  for (VId pv : peel.graph.vertices()) {
    VId a = peel.copy_anchor_of(pv);
    if (peel.core_of(a) == pv) continue;  // tree handles the anchors
    if (!live.count(pv)) continue;
    rvs.push_back(copy_base + pv);
    s.r_home[copy_base + pv] = a;
  }
  for (const Edge& e : peel.graph.edges()) {
    auto [home, orig_edge] = peel.edge_origin.at(e.id);
    if (home == -1) continue;  // core replaced by the tree
    if (!live.count(e.u) || !live.count(e.v)) continue;
    res.push_back({next_eid++, r_id(e.u), r_id(e.v), e.len, e.sign});
  }

  // Undo the rescale so R is in the input's units.
  if (factor != 1.0)
    for (Edge& e : res) e.len /= factor;
  s.r = MetricGraph(std::move(rvs), std::move(res));

  // F: anchors (original graph vertices in V(C)) go to their tree leaf;
  // everything else lands in its assigned copy.
  std::unordered_set<VId> anchor_set(s.anchors.begin(), s.anchors.end());
  for (VId v : emb.base().vertices()) {
    VId target;
    if (anchor_set.count(v)) {
      target = tp.point_node.at(v);
    } else {
      VId pv = peel.copy_of(s.assignment.at(v), v);
      if (!live.count(pv))
        throw InternalError(
            "sample_planarization[splice]: image fell into a trimmed component");
      target = copy_base + pv;
    }
    s.f[v] = target;
  }
  // The cut graph's parent graph is local to this call; keep only the
  // value fields so the provenance cannot dangle.
  s.cutgraph.h.parent = nullptr;
  return s;
}

struct VerificationReport {
  bool planar = false;
  bool structure_ok = false;
  bool non_contraction = false;
  bool pair_subset_sampled = false;  // true when > 1e6 pairs forced sampling
  std::string failure;

  bool ok() const { return planar && structure_ok && non_contraction; }
};

// Independent re-check of a sample: planarity by the incremental
// embedding test (not the constructive 1-sum argument), the 1-sum
// structure itself, and exact non-contraction over the pair set.
inline VerificationReport verify_sample(const MetricGraph& g,
                                        const EmbeddingSample& s) {
  VerificationReport rep;

  rep.planar = is_planar(s.r);
  if (!rep.planar) rep.failure = "planarity: independent test rejected R";

  // Structure: every edge stays inside one copy, inside the tree, or
  // crosses at an anchor's gluing vertex.
  rep.structure_ok = true;
  for (const Edge& e : s.r.edges()) {
    auto hu = s.r_home.find(e.u);
    auto hv = s.r_home.find(e.v);
    if (hu == s.r_home.end() || hv == s.r_home.end()) {
      rep.structure_ok = false;
      rep.failure = "structure: edge " + std::to_string(e.id) + " has unmapped ends";
      break;
    }
    VId a = hu->second, b = hv->second;
    bool ok = a == b || a == -1 || b == -1;
    if (ok && a != b) {
      // Copy-tree contact only at that copy's anchor node.
      VId copy = a == -1 ? b : a;
      VId tnode = a == -1 ? e.u : e.v;
      auto it = s.anchor_node.find(copy);
      ok = it != s.anchor_node.end() && it->second == tnode;
    }
    if (!ok) {
      rep.structure_ok = false;
      rep.failure = "structure: edge " + std::to_string(e.id) +
                    " violates the 1-sum contact rule";
      break;
    }
  }

  // Non-contraction, exact over all pairs (sampled above 1e6 pairs).
  rep.non_contraction = true;
  std::vector<VId> vs = g.vertices();
  std::size_t n = vs.size();
  std::vector<std::pair<VId, VId>> pairs;
  if (n * (n - 1) / 2 > 1000000) {
    rep.pair_subset_sampled = true;
    Rng rng(s.seed ^ 0x9e3779b97f4a7c15ull);
    for (int t = 0; t < 1000000; ++t) {
      VId x = vs[rng.next_below(n)];
      VId y = vs[rng.next_below(n)];
      if (x != y) pairs.push_back({x, y});
    }
  } else {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) pairs.push_back({vs[i], vs[j]});
  }
  std::map<VId, std::vector<double>> rows;  // source vertex -> distances in R
  for (auto [x, y] : pairs) {
    auto it = rows.find(x);
    if (it == rows.end())
      it = rows.emplace(x, s.r.dijkstra(s.f.at(x))).first;
    double dr = it->second[s.r.vertex_index(s.f.at(y))];
    double dgxy = g.shortest_dist(x, y);
    if (dr < dgxy - 1e-9) {
      rep.non_contraction = false;
      rep.failure = "non-contraction: pair (" + std::to_string(x) + "," +
                    std::to_string(y) + ") contracted";
      break;
    }
  }
  return rep;
}

}  // namespace genus
