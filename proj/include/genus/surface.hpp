#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "genus/metric_graph.hpp"

namespace genus {

// One end of an edge. Edge e contributes darts (e,0) at e.u and (e,1) at e.v;
// a self-loop has both darts at the same vertex.
struct Dart {
  EId edge;
  int end;  // 0 | 1
  bool operator==(const Dart& o) const { return edge == o.edge && end == o.end; }
  bool operator<(const Dart& o) const {
    return edge != o.edge ? edge < o.edge : end < o.end;
  }
};

// A face corner: the gap between two rotation-consecutive darts at a
// vertex that the face walk passes through.
struct FaceCorner {
  VId vertex;
  Dart after;   // rotation predecessor of the gap
  Dart before;  // rotation successor of the gap
};

struct FaceStructure {
  // Face walks as dart sequences (the dart recorded is the end the walk
  // leaves through at each traversal).
  std::vector<std::vector<Dart>> walks;
  // corners[f][t] is the corner the walk of face f passes after its t-th
  // edge traversal.
  std::vector<std::vector<FaceCorner>> corners;
  // For each edge, the (exactly two) face indices of its two occurrences.
  std::map<EId, std::pair<int, int>> edge_faces;
};

struct GenusInfo {
  int euler_characteristic;
  int euler_genus;
  bool orientable;
  int num_faces;
};

// Combinatorial surface embedding: a signed rotation system over darts.
// All signs +1 encodes an orientable embedding; -1 marks orientation
// reversal along the edge.
class SurfaceEmbedding {
 public:
  SurfaceEmbedding() = default;

  SurfaceEmbedding(MetricGraph base, std::map<VId, std::vector<Dart>> rotation)
      : base_(std::move(base)), rotation_(std::move(rotation)) {
    validate();
  }

  const MetricGraph& base() const { return base_; }
  const std::map<VId, std::vector<Dart>>& rotation() const { return rotation_; }

  VId dart_vertex(const Dart& d) const {
    const Edge& e = base_.edge(d.edge);
    return d.end == 0 ? e.u : e.v;
  }

  // Rotation-system face tracing via the flag (edge-side) structure:
  // each dart carries two flags; faces are the alternating orbits of the
  // corner and edge involutions, one orbit per face of size 2 * degree.
  FaceStructure faces() const {
    const auto& edges = base_.edges();
    std::size_t ndart = 2 * edges.size();
    std::size_t nflag = 2 * ndart;
    if (ndart == 0) {
      FaceStructure fs;
      fs.walks.push_back({});  // single vertex, one (empty) face
      return fs;
    }

    auto dart_id = [&](const Dart& d) {
      return 2 * static_cast<std::size_t>(base_.edge_index(d.edge)) +
             static_cast<std::size_t>(d.end);
    };
    auto flag_id = [&](std::size_t dart, int side) { return 2 * dart + side; };

    // Corner involution from the cyclic rotations: side 1 of a dart meets
    // side 0 of its rotation successor.
    std::vector<std::size_t> tV(nflag, nflag);
    for (const auto& [v, rot] : rotation_) {
      for (std::size_t i = 0; i < rot.size(); ++i) {
        std::size_t a = dart_id(rot[i]);
        std::size_t b = dart_id(rot[(i + 1) % rot.size()]);
        tV[flag_id(a, 1)] = flag_id(b, 0);
        tV[flag_id(b, 0)] = flag_id(a, 1);
      }
    }

    // Edge involution; a -1 sign swaps the sides across the edge.
    std::vector<std::size_t> tE(nflag, nflag);
    for (std::size_t ei = 0; ei < edges.size(); ++ei) {
      std::size_t dA = 2 * ei, dB = 2 * ei + 1;
      if (edges[ei].sign == +1) {
        tE[flag_id(dA, 0)] = flag_id(dB, 1);
        tE[flag_id(dB, 1)] = flag_id(dA, 0);
        tE[flag_id(dA, 1)] = flag_id(dB, 0);
        tE[flag_id(dB, 0)] = flag_id(dA, 1);
      } else {
        tE[flag_id(dA, 0)] = flag_id(dB, 0);
        tE[flag_id(dB, 0)] = flag_id(dA, 0);
        tE[flag_id(dA, 1)] = flag_id(dB, 1);
        tE[flag_id(dB, 1)] = flag_id(dA, 1);
      }
    }

    FaceStructure fs;
    auto flag_dart = [&](std::size_t flag) {
      std::size_t dart = flag / 2;
      return Dart{edges[dart / 2].id, static_cast<int>(dart % 2)};
    };
    std::vector<char> seen(nflag, 0);
    std::vector<int> occ_count(edges.size(), 0);
    std::vector<std::pair<int, int>> occ(edges.size(), {-1, -1});
    // Start each orbit at a flag consistent with a global orientation,
    // so that for orientable embeddings every face is traced in the same
    // rotational sense and each dart is recorded exactly once. For
    // non-orientable embeddings some darts necessarily repeat.
    auto [is_orientable, orient] = orientation_();
    std::vector<std::size_t> start_order;
    start_order.reserve(nflag);
    for (std::size_t f = 0; f < nflag; ++f) {
      std::size_t dart = f / 2;
      int vi = base_.vertex_index(dart_vertex(flag_dart(f)));
      int preferred = orient[vi] == 1 ? 0 : 1;
      if (static_cast<int>(f % 2) == preferred) start_order.push_back(f);
    }
    for (std::size_t f = 0; f < nflag; ++f) start_order.push_back(f);
    (void)is_orientable;
    for (std::size_t f0 : start_order) {
      if (seen[f0]) continue;
      std::vector<Dart> walk;
      std::vector<FaceCorner> corners;
      std::size_t f = f0;
      do {
        seen[f] = 1;
        std::size_t dart = f / 2;
        const Edge& e = edges[dart / 2];
        walk.push_back({e.id, static_cast<int>(dart % 2)});
        int face_idx = static_cast<int>(fs.walks.size());
        std::size_t ei = dart / 2;
        if (occ_count[ei] == 0)
          occ[ei].first = face_idx;
        else if (occ_count[ei] == 1)
          occ[ei].second = face_idx;
        ++occ_count[ei];
        std::size_t g = tE[f];
        seen[g] = 1;
        // The corner crossed between this traversal and the next.
        Dart da = flag_dart(g);
        f = tV[g];
        Dart db = flag_dart(f);
        if (g % 2 == 1)
          corners.push_back({dart_vertex(da), da, db});
        else
          corners.push_back({dart_vertex(da), db, da});
      } while (f != f0);
      fs.walks.push_back(std::move(walk));
      fs.corners.push_back(std::move(corners));
    }
    for (std::size_t ei = 0; ei < edges.size(); ++ei) {
      if (occ_count[ei] != 2)
        throw InternalError("face tracing: edge " + std::to_string(edges[ei].id) +
                            " traversed " + std::to_string(occ_count[ei]) +
                            " times (expected 2)");
      fs.edge_faces[edges[ei].id] = occ[ei];
    }
    return fs;
  }

  GenusInfo euler_genus() const {
    if (!base_.connected())
      throw StructuralError("euler_genus: graph must be connected");
    FaceStructure fs = faces();
    int V = static_cast<int>(base_.num_vertices());
    int E = static_cast<int>(base_.num_edges());
    int F = static_cast<int>(fs.walks.size());
    GenusInfo gi;
    gi.num_faces = F;
    gi.euler_characteristic = V - E + F;
    gi.euler_genus = 2 - gi.euler_characteristic;
    gi.orientable = orientable();
    if (gi.euler_genus < 0)
      throw InternalError("euler_genus: negative Euler genus (broken rotation)");
    return gi;
  }

  // An embedding scheme is orientable iff every cycle has sign product +1.
  bool orientable() const { return orientation_().first; }

 private:
  // Greedy sign-consistent vertex orientation. first = orientable; the
  // assignment is still returned (best effort) when not.
  std::pair<bool, std::vector<int>> orientation_() const {
    std::size_t n = base_.num_vertices();
    bool ok = true;
    std::vector<int> orient(n, 0);
    for (std::size_t s = 0; s < n; ++s) {
      if (orient[s] != 0) continue;
      orient[s] = 1;
      std::vector<int> stack{static_cast<int>(s)};
      while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        for (auto [ei, y] : base_.adjacent(x)) {
          const Edge& e = base_.edges()[ei];
          if (x == y) {  // self-loop
            if (e.sign == -1) ok = false;
            continue;
          }
          int want = orient[x] * e.sign;
          if (orient[y] == 0) {
            orient[y] = want;
            stack.push_back(y);
          } else if (orient[y] != want) {
            ok = false;
          }
        }
      }
    }
    return {ok, orient};
  }

  void validate() const {
    std::map<Dart, int> count;
    for (const auto& [v, rot] : rotation_) {
      if (!base_.has_vertex(v))
        throw StructuralError("rotation references unknown vertex " + std::to_string(v));
      for (const Dart& d : rot) {
        if (!base_.has_edge(d.edge) || (d.end != 0 && d.end != 1))
          throw StructuralError("rotation at vertex " + std::to_string(v) +
                                ": malformed dart");
        if (dart_vertex(d) != v)
          throw StructuralError("dart (" + std::to_string(d.edge) + "," +
                                std::to_string(d.end) + ") listed at wrong vertex " +
                                std::to_string(v));
        if (++count[d] > 1)
          throw StructuralError("dart (" + std::to_string(d.edge) + "," +
                                std::to_string(d.end) + ") appears more than once");
      }
    }
    if (count.size() != 2 * base_.num_edges())
      throw StructuralError("rotation system is missing darts: has " +
                            std::to_string(count.size()) + ", expected " +
                            std::to_string(2 * base_.num_edges()));
  }

  MetricGraph base_;
  std::map<VId, std::vector<Dart>> rotation_;
};

}  // namespace genus
