#include <doctest.h>

#include "genus/cutgraph.hpp"
#include "genus/generators.hpp"

using namespace genus;

namespace {

// Bouquet of two unit loops on the torus: 1 vertex, 2 edges, 1 face.
SurfaceEmbedding bouquet2() {
  MetricGraph g({0}, {{0, 0, 0, 1.0}, {1, 0, 0, 1.0}});
  return SurfaceEmbedding(g, {{0, {{0, 0}, {1, 0}, {0, 1}, {1, 1}}}});
}

// Exhaustive minimum cut graph by scanning all edge subsets. Oracle for
// the branch-and-bound solver; practical up to ~20 edges.
std::pair<double, std::vector<EId>> exhaustive_min(const SurfaceEmbedding& emb) {
  const MetricGraph& g = emb.base();
  FaceStructure fs = emb.faces();
  int eg = emb.euler_genus().euler_genus;
  std::vector<EId> ids;
  for (const Edge& e : g.edges()) ids.push_back(e.id);
  std::sort(ids.begin(), ids.end());
  REQUIRE(ids.size() <= 20);
  double best = kInf;
  std::vector<EId> best_set;
  for (std::uint32_t mask = 1; mask < (1u << ids.size()); ++mask) {
    std::vector<EId> sel;
    for (std::size_t i = 0; i < ids.size(); ++i)
      if (mask & (1u << i)) sel.push_back(ids[i]);
    Subgraph h = Subgraph::from_edges(g, sel);
    double len = h.total_length();
    if (len > best + 1e-9) continue;
    if (!detail::certify_cut_graph(fs, eg, h)) continue;
    if (len < best - 1e-9 || (std::abs(len - best) <= 1e-9 && h.edge_ids < best_set)) {
      best = len;
      best_set = h.edge_ids;
    }
  }
  REQUIRE(best < kInf);
  return {best, best_set};
}

}  // namespace

TEST_CASE("is_cut_graph on the 3x3 torus") {
  auto emb = gen_torus_grid(3);
  auto hid = [](int i, int j) { return 2 * (i * 3 + j); };
  auto wid = [](int i, int j) { return 2 * (i * 3 + j) + 1; };

  SUBCASE("two 3-cycles through a shared vertex cut the torus") {
    std::vector<EId> eids{hid(0, 0), hid(0, 1), hid(0, 2),
                          wid(0, 0), wid(1, 0), wid(2, 0)};
    Subgraph h = Subgraph::from_edges(emb.base(), eids);
    CHECK(h.vertex_ids.size() == 5);
    CHECK(is_cut_graph(emb, h));
  }
  SUBCASE("a contractible quadrilateral does not") {
    Subgraph h =
        Subgraph::from_edges(emb.base(), {hid(0, 0), wid(0, 1), hid(1, 0), wid(0, 0)});
    CHECK_FALSE(is_cut_graph(emb, h));
  }
  SUBCASE("the entire graph does not") {
    std::vector<EId> all;
    for (const Edge& e : emb.base().edges()) all.push_back(e.id);
    CHECK_FALSE(is_cut_graph(emb, Subgraph::from_edges(emb.base(), all)));
  }
  SUBCASE("empty and disconnected subsets rejected") {
    CHECK_FALSE(is_cut_graph(emb, Subgraph::from_edges(emb.base(), {})));
    // Two vertex-disjoint edges.
    CHECK_FALSE(
        is_cut_graph(emb, Subgraph::from_edges(emb.base(), {hid(0, 0), hid(2, 0)})));
  }
  SUBCASE("foreign edge ids rejected") {
    Subgraph h;
    h.parent = &emb.base();
    h.edge_ids = {999};
    CHECK_THROWS_AS(is_cut_graph(emb, h), StructuralError);
  }
}

TEST_CASE("is_cut_graph invariant under edge-id relabeling") {
  auto emb = gen_torus_grid(3);
  auto relabel = [](EId e) { return 500 - 3 * e; };
  std::vector<Edge> es = emb.base().edges();
  for (Edge& e : es) e.id = relabel(e.id);
  std::map<VId, std::vector<Dart>> rot;
  for (const auto& [v, darts] : emb.rotation()) {
    auto d = darts;
    for (Dart& x : d) x.edge = relabel(x.edge);
    rot[v] = d;
  }
  SurfaceEmbedding emb2(MetricGraph(emb.base().vertices(), es), rot);
  std::vector<EId> h1{0, 2, 4, 1, 7, 13};
  std::vector<EId> h2;
  for (EId e : h1) h2.push_back(relabel(e));
  CHECK(is_cut_graph(emb, Subgraph::from_edges(emb.base(), h1)) ==
        is_cut_graph(emb2, Subgraph::from_edges(emb2.base(), h2)));
  CHECK(is_cut_graph(emb2, Subgraph::from_edges(emb2.base(), h2)));
}

TEST_CASE("exact minimum on the unit 3x3 torus is 6, matching exhaustive search") {
  auto emb = gen_torus_grid(3);
  auto r = min_cut_graph_exact(emb);
  CHECK(r.certified);
  CHECK(r.solver == "exact");
  CHECK(r.total_length == doctest::Approx(6.0));
  auto [olen, oset] = exhaustive_min(emb);
  CHECK(r.total_length == doctest::Approx(olen));
  CHECK(r.h.edge_ids == oset);
  CHECK(r.euler_number == 2);
}

TEST_CASE("exact minimum on the loop bouquet is the whole graph") {
  auto emb = bouquet2();
  CHECK(emb.euler_genus().euler_genus == 2);
  auto r = min_cut_graph_exact(emb);
  CHECK(r.certified);
  CHECK(r.total_length == doctest::Approx(2.0));
  CHECK(r.h.edge_ids == std::vector<EId>{0, 1});
  CHECK(r.high_degree_count == 1);  // single vertex of degree 4
}

TEST_CASE("exact minimum respects length variation") {
  // Torus with one horizontal cycle made cheap: the solver must prefer it.
  auto emb = gen_torus_grid(3);
  std::vector<Edge> es = emb.base().edges();
  for (Edge& e : es)
    if (e.id == 0 || e.id == 2 || e.id == 4) e.len = 0.25;
  SurfaceEmbedding cheap(MetricGraph(emb.base().vertices(), es), emb.rotation());
  auto r = min_cut_graph_exact(cheap);
  auto [olen, oset] = exhaustive_min(cheap);
  CHECK(r.total_length == doctest::Approx(olen));
  CHECK(r.h.edge_ids == oset);
  for (EId e : {0, 2, 4})
    CHECK(std::count(r.h.edge_ids.begin(), r.h.edge_ids.end(), e) == 1);
}

TEST_CASE("exact solver rejects genus-0 input") {
  std::vector<VId> vs{0, 1, 2, 3};
  std::vector<Edge> es{{0, 0, 1, 1.0}, {1, 0, 2, 1.0}, {2, 0, 3, 1.0},
                       {3, 1, 2, 1.0}, {4, 1, 3, 1.0}, {5, 2, 3, 1.0}};
  std::map<VId, std::vector<Dart>> rot{
      {0, {{0, 0}, {1, 0}, {2, 0}}},
      {1, {{0, 1}, {4, 0}, {3, 0}}},
      {2, {{1, 1}, {3, 1}, {5, 0}}},
      {3, {{2, 1}, {5, 1}, {4, 1}}},
  };
  SurfaceEmbedding sphere(MetricGraph(vs, es), rot);
  CHECK_THROWS_AS(min_cut_graph_exact(sphere), StructuralError);
  CHECK_THROWS_AS(cut_graph_treecotree(sphere, 0), StructuralError);
}

TEST_CASE("tree-cotree heuristic certifies on generator instances") {
  SUBCASE("3x3 torus, every root") {
    auto emb = gen_torus_grid(3);
    for (VId root : emb.base().vertices()) {
      auto r = cut_graph_treecotree(emb, root);
      CHECK(r.certified);
      CHECK(r.euler_number == 2);
      CHECK(r.total_length >= 6.0 - 1e-9);  // never beats the exact minimum
    }
  }
  SUBCASE("genus chain g=3") {
    auto emb = gen_genus_chain(3, 3);
    auto r = cut_graph_treecotree(emb, emb.base().vertices().front());
    CHECK(r.certified);
    CHECK(r.euler_number == 6);
  }
  SUBCASE("k5 tori g=2") {
    auto emb = gen_k5_tori(2, 40);
    auto r = cut_graph_treecotree(emb, emb.base().vertices().front());
    CHECK(r.certified);
    CHECK(r.euler_number == 4);
  }
}

TEST_CASE("genus bounds hold on exactly solved instances") {
  struct Case {
    SurfaceEmbedding emb;
    int genus;
  };
  std::vector<Case> cases;
  cases.push_back({gen_torus_grid(3), 1});
  cases.push_back({bouquet2(), 1});
  for (auto& c : cases) {
    auto r = min_cut_graph_exact(c.emb);
    REQUIRE(r.certified);
    int g = c.genus;
    CHECK(r.high_degree_count <= 4 * g - 2);
    CHECK(r.euler_number < 6 * g);
    double dil = dilation(c.emb.base(), r.h.vertex_ids);
    CHECK(dil <= r.high_degree_count + 2 + 1e-9);
    CHECK(dil <= 4.0 * g + 1e-9);
  }
}

TEST_CASE("dilation") {
  SUBCASE("full vertex set has dilation 1") {
    auto emb = gen_torus_grid(3);
    CHECK(dilation(emb.base(), emb.base().vertices()) == doctest::Approx(1.0));
  }
  SUBCASE("4-cycle with a shortcut removed") {
    MetricGraph g({0, 1, 2, 3}, {{0, 0, 1, 1.0},
                                 {1, 1, 2, 1.0},
                                 {2, 2, 3, 0.5},
                                 {3, 3, 0, 0.5}});
    CHECK(dilation(g, {0, 1, 2}) == doctest::Approx(2.0));
    CHECK(dilation(g, {1, 3}) == kInf);  // induced subgraph has no edges
    CHECK(dilation(g, {2}) == doctest::Approx(1.0));
  }
}
