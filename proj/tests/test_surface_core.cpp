#include <doctest.h>

#include <set>

#include "genus/generators.hpp"
#include "genus/io.hpp"
#include "genus/planarity.hpp"
#include "genus/rng.hpp"
#include "genus/surface.hpp"

using namespace genus;

namespace {

// Planar rotation of K4 (tetrahedron).
SurfaceEmbedding k4_sphere() {
  std::vector<VId> vs{0, 1, 2, 3};
  std::vector<Edge> es{
      {0, 0, 1, 1.0}, {1, 0, 2, 1.0}, {2, 0, 3, 1.0},
      {3, 1, 2, 1.0}, {4, 1, 3, 1.0}, {5, 2, 3, 1.0},
  };
  std::map<VId, std::vector<Dart>> rot{
      {0, {{0, 0}, {1, 0}, {2, 0}}},
      {1, {{0, 1}, {4, 0}, {3, 0}}},
      {2, {{1, 1}, {3, 1}, {5, 0}}},
      {3, {{2, 1}, {5, 1}, {4, 1}}},
  };
  return SurfaceEmbedding(MetricGraph(vs, es), rot);
}

// Naive Bellman-Ford oracle for shortest paths.
std::vector<double> bellman_ford(const MetricGraph& g, VId src) {
  std::size_t n = g.num_vertices();
  std::vector<double> d(n, kInf);
  d[g.vertex_index(src)] = 0;
  for (std::size_t it = 0; it + 1 < n || it == 0; ++it) {
    bool changed = false;
    for (const Edge& e : g.edges()) {
      int u = g.vertex_index(e.u), v = g.vertex_index(e.v);
      if (d[u] + e.len < d[v]) d[v] = d[u] + e.len, changed = true;
      if (d[v] + e.len < d[u]) d[u] = d[v] + e.len, changed = true;
    }
    if (!changed) break;
  }
  return d;
}

MetricGraph random_graph(int n, int extra_edges, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<VId> vs;
  std::vector<Edge> es;
  for (int i = 0; i < n; ++i) vs.push_back(i);
  int eid = 0;
  for (int i = 1; i < n; ++i) {
    int j = static_cast<int>(rng.next_below(i));
    es.push_back({eid++, j, i, 0.1 + rng.next_double() * 5.0});
  }
  for (int t = 0; t < extra_edges; ++t) {
    int a = static_cast<int>(rng.next_below(n));
    int b = static_cast<int>(rng.next_below(n));
    if (a == b) continue;
    es.push_back({eid++, a, b, 0.1 + rng.next_double() * 5.0});
  }
  return MetricGraph(vs, es);
}

}  // namespace

TEST_CASE("K4 planar rotation: 4 triangular faces, sphere") {
  auto emb = k4_sphere();
  auto fs = emb.faces();
  CHECK(fs.walks.size() == 4);
  for (const auto& w : fs.walks) CHECK(w.size() == 3);
  auto gi = emb.euler_genus();
  CHECK(gi.euler_characteristic == 2);
  CHECK(gi.euler_genus == 0);
  CHECK(gi.orientable);
}

TEST_CASE("face tracing consumes each dart exactly once (orientable case)") {
  auto emb = gen_torus_grid(4);
  auto fs = emb.faces();
  std::map<std::pair<EId, int>, int> count;
  std::size_t total = 0;
  for (const auto& w : fs.walks)
    for (const Dart& d : w) {
      ++count[{d.edge, d.end}];
      ++total;
    }
  CHECK(total == 2 * emb.base().num_edges());
  for (auto& [d, c] : count) CHECK(c == 1);
}

TEST_CASE("3x3 toroidal grid: 9 quadrilateral faces, chi = 0") {
  auto emb = gen_torus_grid(3);
  CHECK(emb.base().num_vertices() == 9);
  CHECK(emb.base().num_edges() == 18);
  auto fs = emb.faces();
  CHECK(fs.walks.size() == 9);
  for (const auto& w : fs.walks) CHECK(w.size() == 4);
  auto gi = emb.euler_genus();
  CHECK(gi.euler_characteristic == 0);
  CHECK(gi.euler_genus == 2);
  CHECK(gi.orientable);
}

TEST_CASE("single signed loop: projective plane") {
  MetricGraph g({0}, {{0, 0, 0, 1.0, -1}});
  SurfaceEmbedding emb(g, {{0, {{0, 0}, {0, 1}}}});
  auto fs = emb.faces();
  CHECK(fs.walks.size() == 1);
  auto gi = emb.euler_genus();
  CHECK(gi.euler_characteristic == 1);
  CHECK(gi.euler_genus == 1);
  CHECK_FALSE(gi.orientable);
}

TEST_CASE("malformed rotations rejected") {
  MetricGraph g({0, 1}, {{0, 0, 1, 1.0}});
  CHECK_THROWS_AS(SurfaceEmbedding(g, {{0, {{0, 0}, {0, 0}}}, {1, {{0, 1}}}}),
                  StructuralError);
  CHECK_THROWS_AS(SurfaceEmbedding(g, {{0, {{0, 0}}}}), StructuralError);
  CHECK_THROWS_AS(SurfaceEmbedding(g, {{0, {{0, 1}}}, {1, {{0, 0}}}}), StructuralError);
}

TEST_CASE("genus chain generator certifies eg = 2g") {
  for (int g = 1; g <= 3; ++g) {
    auto emb = gen_genus_chain(g, 3);
    auto gi = emb.euler_genus();
    CHECK(gi.euler_genus == 2 * g);
    CHECK(gi.orientable);
  }
  auto emb = gen_genus_chain(2, 4);
  CHECK(emb.euler_genus().euler_genus == 4);
}

TEST_CASE("euler_genus invariant under relabeling and rotation shifts") {
  auto emb = gen_genus_chain(2, 3);
  Rng rng(77);
  // Relabel vertices by a random bijection and rotate each cyclic order.
  std::vector<VId> old_ids = emb.base().vertices();
  std::vector<VId> new_ids = old_ids;
  rng.shuffle(new_ids);
  std::map<VId, VId> relabel;
  for (std::size_t i = 0; i < old_ids.size(); ++i) relabel[old_ids[i]] = new_ids[i];
  std::vector<Edge> es = emb.base().edges();
  for (Edge& e : es) {
    e.u = relabel[e.u];
    e.v = relabel[e.v];
  }
  std::map<VId, std::vector<Dart>> rot;
  for (const auto& [v, darts] : emb.rotation()) {
    std::vector<Dart> d = darts;
    std::size_t shift = rng.next_below(d.size());
    std::rotate(d.begin(), d.begin() + shift, d.end());
    rot[relabel[v]] = d;
  }
  std::vector<VId> vs = new_ids;
  std::sort(vs.begin(), vs.end());
  SurfaceEmbedding emb2(MetricGraph(vs, es), rot);
  CHECK(emb2.euler_genus().euler_genus == emb.euler_genus().euler_genus);
}

TEST_CASE("shortest paths: trivial cases") {
  MetricGraph g({0, 1, 2, 3},
                {{0, 0, 1, 1.0}, {1, 1, 2, 1.0}, {2, 2, 3, 1.0}, {3, 3, 0, 1.0}});
  CHECK(g.shortest_dist(0, 2) == doctest::Approx(2.0));
  MetricGraph h({0, 1}, {{0, 0, 1, 3.0}});
  CHECK(h.shortest_dist(0, 1) == doctest::Approx(3.0));
}

TEST_CASE("all_pairs agrees with Bellman-Ford on random 50-vertex instance") {
  auto g = random_graph(50, 80, 12345);
  auto ap = g.all_pairs();
  for (VId s : {0, 7, 23, 41, 49}) {
    auto bf = bellman_ford(g, s);
    for (std::size_t i = 0; i < g.num_vertices(); ++i)
      CHECK(ap.at(s, g.vertices()[i]) == doctest::Approx(bf[i]).epsilon(1e-12));
  }
}

TEST_CASE("all_pairs is a metric") {
  auto g = random_graph(30, 40, 999);
  auto ap = g.all_pairs();
  auto n = g.num_vertices();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      CHECK(ap.at_index(i, j) == ap.at_index(j, i));
      for (std::size_t l = 0; l < n; ++l)
        CHECK(ap.at_index(i, j) <= ap.at_index(i, l) + ap.at_index(l, j) + 1e-9);
    }
}

TEST_CASE("rescale_min_distance") {
  SUBCASE("unit lengths: identity") {
    auto emb = gen_torus_grid(3);
    auto [g, f] = rescale_min_distance(emb.base());
    CHECK(f == doctest::Approx(1.0));
  }
  SUBCASE("triangle (2,4,4) -> factor 1/2") {
    MetricGraph t({0, 1, 2}, {{0, 0, 1, 2.0}, {1, 1, 2, 4.0}, {2, 2, 0, 4.0}});
    auto [g, f] = rescale_min_distance(t);
    CHECK(f == doctest::Approx(0.5));
    auto ap = g.all_pairs();
    double mind = kInf;
    for (VId u : g.vertices())
      for (VId v : g.vertices())
        if (u != v) mind = std::min(mind, ap.at(u, v));
    CHECK(mind == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("min pairwise distance 1 after rescale on k5 tori") {
    auto emb = gen_k5_tori(2, 40);
    auto [g, f] = rescale_min_distance(emb.base());
    auto ap = g.all_pairs();
    double mind = kInf;
    for (VId u : g.vertices())
      for (VId v : g.vertices())
        if (u != v) mind = std::min(mind, ap.at(u, v));
    CHECK(mind == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("zero and negative length edges rejected") {
  CHECK_THROWS_AS(MetricGraph({0, 1}, {{0, 0, 1, 0.0}}), StructuralError);
  CHECK_THROWS_AS(MetricGraph({0, 1}, {{0, 0, 1, -1.0}}), StructuralError);
}

TEST_CASE("is_planar basics") {
  // Any tree.
  auto tree = random_graph(20, 0, 5);
  CHECK(is_planar(tree));
  // K5.
  {
    std::vector<VId> vs{0, 1, 2, 3, 4};
    std::vector<Edge> es;
    int id = 0;
    for (int i = 0; i < 5; ++i)
      for (int j = i + 1; j < 5; ++j) es.push_back({id++, i, j, 1.0});
    CHECK_FALSE(is_planar(MetricGraph(vs, es)));
  }
  // K3,3.
  {
    std::vector<VId> vs{0, 1, 2, 3, 4, 5};
    std::vector<Edge> es;
    int id = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = 3; j < 6; ++j) es.push_back({id++, i, j, 1.0});
    CHECK_FALSE(is_planar(MetricGraph(vs, es)));
  }
  // Planar: the K4 sphere graph, with loops and parallel edges added.
  {
    auto g = k4_sphere().base();
    std::vector<Edge> es = g.edges();
    es.push_back({10, 0, 0, 1.0});
    es.push_back({11, 0, 1, 1.0});
    CHECK(is_planar(MetricGraph(g.vertices(), es)));
  }
  // Toroidal grid is planar as an abstract graph only for... it is not:
  // the 3x3 torus grid contains K3,3 subdivisions? Check against known:
  // k=3 toroidal grid is K3,3-free? Leave to the oracle cross-check below.
}

TEST_CASE("graph file round trip") {
  auto emb = gen_torus_grid(3);
  std::string s1 = embedding_to_string(emb);
  auto emb2 = embedding_from_json(json::parse(s1));
  std::string s2 = embedding_to_string(emb2);
  CHECK(s1 == s2);
  CHECK(emb2.euler_genus().euler_genus == 2);
}

TEST_CASE("loader reports first violation") {
  json j;
  j["vertices"] = {0, 1};
  j["edges"] = json::array({{{"id", 0}, {"u", 0}, {"v", 1}, {"len", "0"}, {"sign", 1}}});
  j["rotation"] = json::object();
  CHECK_THROWS_WITH_AS(embedding_from_json(j),
                       "edges[0]: length must be strictly positive", StructuralError);
}
