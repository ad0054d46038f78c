#pragma once

#include <algorithm>
#include <set>
#include <utility>
#include <vector>

#include "genus/metric_graph.hpp"

namespace genus {
namespace detail {

// Demoucron-Malgrange-Pertuiset planarity on a simple biconnected graph
// given as an adjacency list over 0..n-1. O(n^2)-ish, ample at desk scale.
class Demoucron {
 public:
  explicit Demoucron(std::vector<std::vector<int>> adj) : adj_(std::move(adj)) {
    n_ = static_cast<int>(adj_.size());
    embedded_v_.assign(n_, 0);
    for (int u = 0; u < n_; ++u)
      for (int v : adj_[u])
        if (u < v) ++m_;
  }

  bool run() {
    std::vector<int> cycle = find_cycle();
    if (cycle.size() < 3) throw InternalError("demoucron: no cycle in biconnected input");
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      embedded_v_[cycle[i]] = 1;
      mark_edge(cycle[i], cycle[(i + 1) % cycle.size()]);
    }
    faces_.push_back(cycle);
    std::reverse(cycle.begin(), cycle.end());
    faces_.push_back(cycle);

    while (static_cast<int>(embedded_e_.size()) < m_) {
      auto bridges = compute_bridges();
      if (bridges.empty())
        throw InternalError("demoucron: unembedded edges but no bridges");
      // Admissible faces per bridge; a bridge with none kills planarity.
      int best = -1;
      std::vector<int> best_faces;
      for (std::size_t b = 0; b < bridges.size(); ++b) {
        std::vector<int> adm;
        for (std::size_t f = 0; f < faces_.size(); ++f) {
          std::set<int> fv(faces_[f].begin(), faces_[f].end());
          bool ok = true;
          for (int a : bridges[b].attachments)
            if (!fv.count(a)) {
              ok = false;
              break;
            }
          if (ok) adm.push_back(static_cast<int>(f));
        }
        if (adm.empty()) return false;
        if (best < 0 || adm.size() < best_faces.size()) {
          best = static_cast<int>(b);
          best_faces = adm;
        }
      }
      embed_path(bridges[best], best_faces[0]);
    }
    return true;
  }

 private:
  struct Bridge {
    std::vector<int> attachments;     // embedded vertices it touches
    std::vector<int> interior;        // non-embedded vertices (empty for a chord)
  };

  static std::pair<int, int> norm(int u, int v) { return {std::min(u, v), std::max(u, v)}; }
  void mark_edge(int u, int v) { embedded_e_.insert(norm(u, v)); }
  bool edge_embedded(int u, int v) const { return embedded_e_.count(norm(u, v)) != 0; }

  std::vector<int> find_cycle() const {
    std::vector<int> parent(n_, -2), order;
    std::vector<int> stack{0};
    parent[0] = -1;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (int y : adj_[x]) {
        if (parent[y] == -2) {
          parent[y] = x;
          stack.push_back(y);
        } else if (y != parent[x]) {
          // back/cross edge in the DFS-ish tree: walk ancestors
          std::vector<int> px, py;
          for (int a = x; a != -1; a = parent[a]) px.push_back(a);
          for (int a = y; a != -1; a = parent[a]) py.push_back(a);
          std::set<int> sx(px.begin(), px.end());
          int meet = -1;
          for (int a : py)
            if (sx.count(a)) {
              meet = a;
              break;
            }
          std::vector<int> cyc;
          for (int a = x; a != meet; a = parent[a]) cyc.push_back(a);
          cyc.push_back(meet);
          std::vector<int> tail;
          for (int a = y; a != meet; a = parent[a]) tail.push_back(a);
          std::reverse(tail.begin(), tail.end());
          cyc.insert(cyc.end(), tail.begin(), tail.end());
          if (cyc.size() >= 3) return cyc;
        }
      }
    }
    return {};
  }

  std::vector<Bridge> compute_bridges() const {
    std::vector<Bridge> out;
    // Chords: unembedded edges between embedded vertices.
    for (int u = 0; u < n_; ++u)
      for (int v : adj_[u])
        if (u < v && embedded_v_[u] && embedded_v_[v] && !edge_embedded(u, v))
          out.push_back({{u, v}, {}});
    // Components of non-embedded vertices plus their attachments.
    std::vector<int> comp(n_, -1);
    for (int s = 0; s < n_; ++s) {
      if (embedded_v_[s] || comp[s] != -1) continue;
      Bridge b;
      std::set<int> att;
      std::vector<int> stack{s};
      comp[s] = s;
      while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        b.interior.push_back(x);
        for (int y : adj_[x]) {
          if (embedded_v_[y]) {
            att.insert(y);
          } else if (comp[y] == -1) {
            comp[y] = s;
            stack.push_back(y);
          }
        }
      }
      b.attachments.assign(att.begin(), att.end());
      if (b.attachments.size() < 2)
        throw InternalError("demoucron: bridge with <2 attachments (input not biconnected)");
      out.push_back(std::move(b));
    }
    return out;
  }

  void embed_path(const Bridge& b, int face_idx) {
    std::vector<int> path;
    if (b.interior.empty()) {
      path = {b.attachments[0], b.attachments[1]};
    } else {
      // BFS from one attachment through the bridge interior to another.
      int x = b.attachments[0];
      std::set<int> interior(b.interior.begin(), b.interior.end());
      std::vector<int> prev(n_, -1);
      std::vector<int> queue;
      for (int y : adj_[x])
        if (interior.count(y) && prev[y] == -1) {
          prev[y] = x;
          queue.push_back(y);
        }
      int goal = -1;
      for (std::size_t qi = 0; qi < queue.size() && goal < 0; ++qi) {
        int u = queue[qi];
        for (int y : adj_[u]) {
          if (embedded_v_[y] && y != x) {
            prev[y] = u;
            goal = y;
            break;
          }
          if (interior.count(y) && prev[y] == -1) {
            prev[y] = u;
            queue.push_back(y);
          }
        }
      }
      if (goal < 0) throw InternalError("demoucron: bridge path not found");
      for (int a = goal; a != -1 && a != x; a = prev[a]) path.push_back(a);
      path.push_back(x);
      std::reverse(path.begin(), path.end());
    }

    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      mark_edge(path[i], path[i + 1]);
      embedded_v_[path[i]] = 1;
    }
    embedded_v_[path.back()] = 1;

    // Split the host face along the path.
    std::vector<int> face = faces_[face_idx];
    int L = static_cast<int>(face.size());
    int px = -1, py = -1;
    for (int i = 0; i < L; ++i) {
      if (face[i] == path.front()) px = i;
      if (face[i] == path.back()) py = i;
    }
    if (px < 0 || py < 0) throw InternalError("demoucron: path ends not on face");
    std::vector<int> f1, f2;
    for (int i = px; i != py; i = (i + 1) % L) f1.push_back(face[i]);
    f1.push_back(face[py]);
    for (std::size_t i = path.size() - 2; i >= 1; --i) f1.push_back(path[i]);
    for (int i = py; i != px; i = (i + 1) % L) f2.push_back(face[i]);
    f2.push_back(face[px]);
    for (std::size_t i = 1; i + 1 < path.size(); ++i) f2.push_back(path[i]);
    faces_[face_idx] = std::move(f1);
    faces_.push_back(std::move(f2));
  }

  int n_ = 0;
  int m_ = 0;
  std::vector<std::vector<int>> adj_;
  std::vector<char> embedded_v_;
  std::set<std::pair<int, int>> embedded_e_;
  std::vector<std::vector<int>> faces_;
};

}  // namespace detail

// Planarity of the underlying multigraph. Self-loops and parallel edges
// never affect planarity, so the test runs on the simplification, split
// into biconnected blocks.
inline bool is_planar(const MetricGraph& g) {
  int n = static_cast<int>(g.num_vertices());
  // Simple adjacency over vertex indices.
  std::vector<std::set<int>> nb(n);
  for (const Edge& e : g.edges()) {
    int u = g.vertex_index(e.u), v = g.vertex_index(e.v);
    if (u == v) continue;
    nb[u].insert(v);
    nb[v].insert(u);
  }

  // Biconnected blocks via DFS with an edge stack.
  std::vector<std::vector<std::pair<int, int>>> blocks;
  {
    std::vector<int> num(n, -1), low(n, 0);
    std::vector<std::pair<int, int>> estack;
    int counter = 0;
    // Explicit stack DFS to stay safe on long paths.
    struct Frame {
      int v, parent;
      std::set<int>::const_iterator it;
    };
    for (int s = 0; s < n; ++s) {
      if (num[s] != -1) continue;
      std::vector<Frame> st;
      num[s] = low[s] = counter++;
      st.push_back({s, -1, nb[s].begin()});
      while (!st.empty()) {
        Frame& fr = st.back();
        if (fr.it != nb[fr.v].end()) {
          int w = *fr.it;
          ++fr.it;
          if (w == fr.parent) continue;
          if (num[w] == -1) {
            estack.push_back({fr.v, w});
            num[w] = low[w] = counter++;
            st.push_back({w, fr.v, nb[w].begin()});
          } else if (num[w] < num[fr.v]) {
            estack.push_back({fr.v, w});
            low[fr.v] = std::min(low[fr.v], num[w]);
          }
        } else {
          int v = fr.v, parent = fr.parent;
          st.pop_back();
          if (parent >= 0) {
            low[parent] = std::min(low[parent], low[v]);
            if (low[v] >= num[parent]) {
              std::vector<std::pair<int, int>> blk;
              while (!estack.empty()) {
                auto e = estack.back();
                estack.pop_back();
                blk.push_back(e);
                if (e.first == parent && e.second == v) break;
              }
              if (!blk.empty()) blocks.push_back(std::move(blk));
            }
          }
        }
      }
    }
  }

  for (const auto& blk : blocks) {
    if (blk.size() < 9) continue;  // every graph with <9 edges is planar
    // Local relabel.
    std::vector<int> verts;
    for (auto [u, v] : blk) {
      verts.push_back(u);
      verts.push_back(v);
    }
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    int bn = static_cast<int>(verts.size());
    if (static_cast<int>(blk.size()) > 3 * bn - 6) return false;
    std::vector<std::vector<int>> adj(bn);
    auto idx = [&](int v) {
      return static_cast<int>(std::lower_bound(verts.begin(), verts.end(), v) - verts.begin());
    };
    for (auto [u, v] : blk) {
      adj[idx(u)].push_back(idx(v));
      adj[idx(v)].push_back(idx(u));
    }
    if (!detail::Demoucron(std::move(adj)).run()) return false;
  }
  return true;
}

}  // namespace genus
