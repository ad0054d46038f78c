#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <string>
#include <vector>

#include "genus/surface.hpp"

namespace genus {
namespace detail {

struct EmbBuilder {
  std::vector<VId> vertices;
  std::vector<Edge> edges;
  std::map<VId, std::vector<Dart>> rotation;

  SurfaceEmbedding build() const {
    return SurfaceEmbedding(MetricGraph(vertices, edges), rotation);
  }

  void insert_dart_after(VId v, const Dart& after, const Dart& d) {
    auto& rot = rotation.at(v);
    auto it = std::find(rot.begin(), rot.end(), after);
    if (it == rot.end()) throw InternalError("insert_dart_after: anchor dart missing");
    rot.insert(it + 1, d);
  }
};

// One k x k unit toroidal grid appended at the given id offsets.
inline void add_torus_block(EmbBuilder& b, int k, VId vbase, EId ebase) {
  auto vid = [&](int i, int j) { return vbase + i * k + j; };
  auto hid = [&](int i, int j) { return ebase + 2 * (i * k + j); };      // east edge
  auto wid = [&](int i, int j) { return ebase + 2 * (i * k + j) + 1; };  // south edge
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      b.vertices.push_back(vid(i, j));
      b.edges.push_back({hid(i, j), vid(i, j), vid(i, (j + 1) % k), 1.0, +1});
      b.edges.push_back({wid(i, j), vid(i, j), vid((i + 1) % k, j), 1.0, +1});
    }
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      b.rotation[vid(i, j)] = {
          {hid(i, j), 0},
          {wid(i, j), 0},
          {hid(i, (j - 1 + k) % k), 1},
          {wid((i - 1 + k) % k, j), 1},
      };
    }
}

inline int face_containing(const FaceStructure& fs, const Dart& d) {
  for (std::size_t f = 0; f < fs.walks.size(); ++f)
    for (const Dart& w : fs.walks[f])
      if (w == d) return static_cast<int>(f);
  throw InternalError("face_containing: dart not found in any walk");
}

// Glue a tube (cylinder of 4 edges) between two quadrilateral faces,
// destroying both and lowering Euler characteristic by 2. The pairing
// orientation is found by trying the eight dihedral matchings and keeping
// the first that certifies; the result is deterministic.
inline void glue_tube(EmbBuilder& b, const Dart& face_a_dart, const Dart& face_b_dart,
                      EId tube_base, int target_eg) {
  SurfaceEmbedding emb = b.build();
  FaceStructure fs = emb.faces();
  int fa = face_containing(fs, face_a_dart);
  int fb = face_containing(fs, face_b_dart);
  if (fa == fb) throw InternalError("glue_tube: faces coincide");
  if (fs.corners[fa].size() != 4 || fs.corners[fb].size() != 4)
    throw InternalError("glue_tube: expected quadrilateral faces");

  const auto& ca = fs.corners[fa];
  const auto& cb = fs.corners[fb];
  for (int dir : {-1, +1}) {
    for (int off = 0; off < 4; ++off) {
      EmbBuilder cand = b;
      for (int i = 0; i < 4; ++i) {
        int j = ((dir * i + off) % 4 + 4) % 4;
        EId te = tube_base + i;
        cand.edges.push_back({te, ca[i].vertex, cb[j].vertex, 1.0, +1});
        cand.insert_dart_after(ca[i].vertex, ca[i].after, {te, 0});
        cand.insert_dart_after(cb[j].vertex, cb[j].after, {te, 1});
      }
      SurfaceEmbedding trial = cand.build();
      if (!trial.base().connected()) continue;
      GenusInfo gi = trial.euler_genus();
      if (gi.euler_genus == target_eg && gi.orientable) {
        b = std::move(cand);
        return;
      }
    }
  }
  throw InternalError("glue_tube: no orientation-consistent gluing found");
}

}  // namespace detail

// k x k unit-length grid on the torus with the canonical rotation.
inline SurfaceEmbedding gen_torus_grid(int k) {
  if (k < 3) throw StructuralError("gen_torus_grid: k must be >= 3");
  detail::EmbBuilder b;
  detail::add_torus_block(b, k, 0, 0);
  SurfaceEmbedding emb = b.build();
  GenusInfo gi = emb.euler_genus();
  if (gi.euler_genus != 2 || !gi.orientable)
    throw InternalError("gen_torus_grid: self-certification failed");
  return emb;
}

// g toroidal k-grids chained by removing a quadrilateral face from each
// neighbor pair and joining the boundaries with a 4-edge cylinder.
// Self-certifying: Euler genus is recomputed before return.
inline SurfaceEmbedding gen_genus_chain(int g, int k) {
  if (g < 1) throw StructuralError("gen_genus_chain: g must be >= 1");
  if (k < 3) throw StructuralError("gen_genus_chain: k must be >= 3");
  detail::EmbBuilder b;
  detail::add_torus_block(b, k, 0, 0);
  int c = k / 2;
  EId tube_base = g * 2 * k * k;
  for (int j = 0; j + 1 < g; ++j) {
    detail::add_torus_block(b, k, (j + 1) * k * k, (j + 1) * 2 * k * k);
    // A face deep in block j and the (0,0) face of the fresh block.
    auto hid = [&](int blk, int i, int jj) { return blk * 2 * k * k + 2 * (i * k + jj); };
    Dart da{hid(j, c, c), 0};
    Dart db{hid(j + 1, 0, 0), 0};
    detail::glue_tube(b, da, db, tube_base + 4 * j, 2 * (j + 2));
  }
  SurfaceEmbedding emb = b.build();
  GenusInfo gi = emb.euler_genus();
  if (gi.euler_genus != 2 * g || !gi.orientable)
    throw InternalError("gen_genus_chain: self-certification failed (eg=" +
                        std::to_string(gi.euler_genus) + ")");
  return emb;
}

namespace detail {

// Two interleaved unit loops at a degree-2 vertex: the minimal toroidal
// block, raising Euler genus by exactly 2.
inline void attach_handle(EmbBuilder& b, VId w, EId loop_base, int target_eg) {
  auto& rot = b.rotation.at(w);
  if (rot.size() != 2) throw InternalError("attach_handle: expected degree-2 vertex");
  EId ea = loop_base, eb = loop_base + 1;
  b.edges.push_back({ea, w, w, 1.0, +1});
  b.edges.push_back({eb, w, w, 1.0, +1});
  rot = {rot[0], {ea, 0}, {eb, 0}, {ea, 1}, {eb, 1}, rot[1]};
  GenusInfo gi = b.build().euler_genus();
  if (gi.euler_genus != target_eg)
    throw InternalError("attach_handle: Euler genus " + std::to_string(gi.euler_genus) +
                        ", expected " + std::to_string(target_eg));
}

}  // namespace detail

// Combinatorial analog of the K5-frame family: a toroidally embedded K5
// skeleton with edges subdivided into unit paths, each branch vertex
// blown up into a wheel, and g-1 small handles spread evenly along the
// subdivided edges. Self-certifying.
inline SurfaceEmbedding gen_k5_tori(int g, int n) {
  if (g < 2) throw StructuralError("gen_k5_tori: g must be >= 2");
  if (n < 20 * g)
    throw StructuralError("gen_k5_tori: density precondition violated (need n >= 20*g)");
  int L = std::max(3, static_cast<int>(n / 10));
  int total = 10 * L;
  if (10 * L < g * g + 10 * g)
    throw StructuralError("gen_k5_tori: density precondition violated (n too small for g)");

  // Toroidal K5: fix the rotation at vertex 0, search the (3!)^4 cyclic
  // orders at vertices 1..4 for one of Euler genus 2. Deterministic: the
  // lexicographically first hit is taken.
  detail::EmbBuilder b;
  std::map<std::pair<int, int>, EId> eid;
  {
    EId next = 0;
    for (int u = 0; u < 5; ++u)
      for (int v = u + 1; v < 5; ++v) eid[{u, v}] = next++;
    for (int u = 0; u < 5; ++u) b.vertices.push_back(u);
    for (auto& [uv, id] : eid) b.edges.push_back({id, uv.first, uv.second, 1.0, +1});
    auto dart_to = [&](int u, int v) {
      EId e = eid[{std::min(u, v), std::max(u, v)}];
      return Dart{e, u < v ? 0 : 1};
    };
    auto rot_of = [&](int u, const std::array<int, 4>& nbrs) {
      std::vector<Dart> rot;
      for (int v : nbrs) rot.push_back(dart_to(u, v));
      return rot;
    };
    std::array<std::array<int, 4>, 5> nbrs;
    for (int u = 0; u < 5; ++u) {
      int k = 0;
      for (int v = 0; v < 5; ++v)
        if (v != u) nbrs[u][k++] = v;
    }
    b.rotation[0] = rot_of(0, nbrs[0]);
    bool found = false;
    std::array<int, 4> idx{0, 0, 0, 0};  // odometer over 6^4 tail permutations
    std::array<std::array<int, 3>, 6> all_perms{{{0, 1, 2},
                                                 {0, 2, 1},
                                                 {1, 0, 2},
                                                 {1, 2, 0},
                                                 {2, 0, 1},
                                                 {2, 1, 0}}};
    for (idx[0] = 0; idx[0] < 6 && !found; ++idx[0])
      for (idx[1] = 0; idx[1] < 6 && !found; ++idx[1])
        for (idx[2] = 0; idx[2] < 6 && !found; ++idx[2])
          for (idx[3] = 0; idx[3] < 6 && !found; ++idx[3]) {
            for (int u = 1; u <= 4; ++u) {
              std::array<int, 4> order;
              order[0] = nbrs[u][0];  // anchor the cyclic order
              for (int t = 0; t < 3; ++t)
                order[1 + t] = nbrs[u][1 + all_perms[idx[u - 1]][t]];
              b.rotation[u] = rot_of(u, order);
            }
            if (b.build().euler_genus().euler_genus == 2) found = true;
          }
    if (!found)
      throw InternalError("gen_k5_tori: no toroidal K5 rotation found");
  }

  // Subdivide every K5 edge into a path of L unit edges. Subdivision
  // vertices of edge e get ids 100 + e*L + (1..L-1); path edge ids
  // 100 + e*L + (0..L-1).
  {
    std::vector<Edge> base_edges = b.edges;
    b.edges.clear();
    for (const Edge& e : base_edges) {
      VId prev = e.u;
      for (int s = 0; s < L; ++s) {
        EId pe = 100 + e.id * L + s;
        VId next_v = (s == L - 1) ? e.v : 100 + e.id * L + s + 1;
        if (s < L - 1) b.vertices.push_back(next_v);
        b.edges.push_back({pe, prev, next_v, 1.0, +1});
        if (s > 0) b.rotation[prev] = {{pe - 1, 1}, {pe, 0}};
        prev = next_v;
      }
      // Patch the endpoint rotations: old darts become path-end darts.
      for (VId end : {e.u, e.v}) {
        Dart old{e.id, end == e.u ? 0 : 1};
        Dart fresh = (end == e.u) ? Dart{100 + e.id * L, 0}
                                  : Dart{100 + e.id * L + L - 1, 1};
        auto& rot = b.rotation.at(end);
        auto it = std::find(rot.begin(), rot.end(), old);
        if (it == rot.end()) throw InternalError("gen_k5_tori: subdivision patch failed");
        *it = fresh;
      }
    }
  }

  // Blow each branch vertex up into a wheel: hub + 4 rim vertices; the
  // four incident paths reattach to the rim in rotation order.
  {
    EId wheel_edge_base = 100 + 10 * L + 1000;
    for (int u = 0; u < 5; ++u) {
      std::vector<Dart> rot = b.rotation.at(u);
      if (rot.size() != 4) throw InternalError("gen_k5_tori: branch degree != 4");
      VId hub = 1000000 + 10 * u;
      std::vector<VId> rim(4);
      for (int t = 0; t < 4; ++t) rim[t] = hub + 1 + t;
      b.vertices.push_back(hub);
      for (int t = 0; t < 4; ++t) b.vertices.push_back(rim[t]);
      EId spoke0 = wheel_edge_base + 10 * u;      // spokes: +0..3
      EId ring0 = wheel_edge_base + 10 * u + 4;   // ring:   +4..7 (rim t -> t+1)
      for (int t = 0; t < 4; ++t) {
        b.edges.push_back({spoke0 + t, hub, rim[t], 1.0, +1});
        b.edges.push_back({ring0 + t, rim[t], rim[(t + 1) % 4], 1.0, +1});
      }
      // Reattach path dart t to rim vertex t.
      for (int t = 0; t < 4; ++t) {
        Dart d = rot[t];
        Edge& pe = *std::find_if(b.edges.begin(), b.edges.end(),
                                 [&](const Edge& e) { return e.id == d.edge; });
        (d.end == 0 ? pe.u : pe.v) = rim[t];
        b.rotation[rim[t]] = {d, {ring0 + t, 0}, {spoke0 + t, 1}, {ring0 + (t + 3) % 4, 1}};
      }
      std::vector<Dart> hub_rot;
      for (int t = 0; t < 4; ++t) hub_rot.push_back({spoke0 + t, 0});
      b.rotation[hub] = hub_rot;
      b.rotation.erase(u);
      b.vertices.erase(std::find(b.vertices.begin(), b.vertices.end(), u));
    }
    GenusInfo gi = b.build().euler_genus();
    if (gi.euler_genus != 2)
      throw InternalError("gen_k5_tori: wheel blow-up changed genus (eg=" +
                          std::to_string(gi.euler_genus) + ")");
  }

  // Handles at evenly spaced subdivision vertices along the edge order.
  {
    EId loop_base = 5000000;
    int spacing = total / g;
    int shift = 0;
    for (int m = 0; m + 1 < g; ++m) {
      int s = (m + 1) * spacing + shift;
      if (s % L == 0) {
        ++shift;
        ++s;
      }
      if (s >= total) throw StructuralError("gen_k5_tori: handle placement overflow");
      int e = s / L, off = s % L;
      VId w = 100 + e * L + off;
      detail::attach_handle(b, w, loop_base + 2 * m, 2 + 2 * (m + 1));
    }
  }

  SurfaceEmbedding emb = b.build();
  GenusInfo gi = emb.euler_genus();
  if (gi.euler_genus != 2 * g || !gi.orientable)
    throw InternalError("gen_k5_tori: self-certification failed (eg=" +
                        std::to_string(gi.euler_genus) + ")");
  return emb;
}

}  // namespace genus
