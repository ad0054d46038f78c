#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "genus/io.hpp"
#include "genus/metric_graph.hpp"
#include "genus/rng.hpp"

namespace genus {

// Random partition of a finite metric into blocks of diameter <= delta.
struct Partition {
  std::vector<std::vector<VId>> blocks;  // disjoint, sorted ids, cover V
  double delta = 0;
  std::string scheme;
  std::uint64_t seed = 0;
  int fallback_splits = 0;  // oversized pieces broken by the greedy fallback

  int block_of(VId v) const {
    auto it = index_.find(v);
    if (it == index_.end())
      throw StructuralError("Partition: unknown vertex id " + std::to_string(v));
    return it->second;
  }
  bool separated(VId x, VId y) const { return block_of(x) != block_of(y); }

  void finalize() {
    index_.clear();
    for (auto& b : blocks) std::sort(b.begin(), b.end());
    std::sort(blocks.begin(), blocks.end());
    for (std::size_t i = 0; i < blocks.size(); ++i)
      for (VId v : blocks[i]) {
        if (!index_.emplace(v, static_cast<int>(i)).second)
          throw InternalError("Partition: vertex " + std::to_string(v) +
                              " in two blocks");
      }
  }

  json to_json() const {
    json j;
    j["blocks"] = blocks;
    j["delta"] = fmt_len(delta);
    j["scheme"] = scheme;
    j["seed"] = seed;
    j["fallback_splits"] = fallback_splits;
    return j;
  }

 private:
  std::unordered_map<VId, int> index_;
};

namespace detail {

// Exact postcondition check: blocks cover each point once and have
// diameter <= delta under the given table.
inline void check_partition(const Partition& p, const DistTable& d) {
  std::size_t covered = 0;
  for (const auto& b : p.blocks) {
    covered += b.size();
    for (std::size_t i = 0; i < b.size(); ++i)
      for (std::size_t j = i + 1; j < b.size(); ++j)
        if (!approx_le(d.at(b[i], b[j]), p.delta))
          throw InternalError("partition: block diameter exceeds delta");
  }
  if (covered != d.size())
    throw InternalError("partition: blocks do not cover the point set");
}

// Split an oversized piece by repeatedly carving the ball of radius
// delta/2 around its smallest remaining id. Increments the counter once
// per extra piece produced.
inline void fallback_split(std::vector<VId> piece, const DistTable& d, double delta,
                           std::vector<std::vector<VId>>& out, int& counter) {
  std::sort(piece.begin(), piece.end());
  bool first = true;
  while (!piece.empty()) {
    VId center = piece.front();
    std::vector<VId> ball, rest;
    for (VId v : piece)
      (approx_le(d.at(center, v), delta / 2) ? ball : rest).push_back(v);
    out.push_back(std::move(ball));
    piece = std::move(rest);
    if (!first) ++counter;
    first = false;
  }
}

}  // namespace detail

// Random-radius, random-order ball carving over an explicit metric.
// Every block sits inside a ball of radius < delta/2, so the diameter
// bound is structural; the Lipschitz constant is O(log n) over seeds.
inline Partition ckr_partition(const DistTable& metric, double delta,
                               std::uint64_t seed) {
  if (!(delta > 0)) throw StructuralError("ckr_partition: delta must be positive");
  Rng rng(seed);
  double radius = rng.uniform(delta / 4, delta / 2);
  std::vector<VId> order = metric.ids();
  std::sort(order.begin(), order.end());
  rng.shuffle(order);

  Partition p;
  p.delta = delta;
  p.scheme = "ckr";
  p.seed = seed;
  std::unordered_map<VId, int> owner;
  std::vector<std::vector<VId>> blocks(order.size());
  for (VId v : metric.ids()) {
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (metric.at(order[i], v) <= radius) {
        blocks[i].push_back(v);
        break;
      }
    }
  }
  for (auto& b : blocks)
    if (!b.empty()) p.blocks.push_back(std::move(b));
  p.finalize();
  detail::check_partition(p, metric);
  return p;
}

// Iterated annulus chopping for bounded-genus graphs: r = genus + 2
// rounds of shortest-path bands of width delta/(2r) at a random offset,
// pieces split into connected components between rounds. Oversized
// survivors are broken by the greedy ball fallback (counted).
// `precomputed` may carry g.all_pairs() when the caller samples many
// partitions of the same graph.
inline Partition kpr_partition(const MetricGraph& g, int genus, double delta,
                               std::uint64_t seed,
                               const DistTable* precomputed = nullptr) {
  if (!(delta > 0)) throw StructuralError("kpr_partition: delta must be positive");
  if (genus < 0) throw StructuralError("kpr_partition: genus must be nonnegative");
  if (!g.connected()) throw StructuralError("kpr_partition: graph must be connected");
  Rng rng(seed);
  int rounds = genus + 2;
  double width = delta / (2.0 * rounds);
  DistTable dg = precomputed ? *precomputed : g.all_pairs();

  std::vector<std::vector<VId>> pieces{g.vertices()};
  for (int round = 0; round < rounds; ++round) {
    std::vector<std::vector<VId>> next;
    // Deterministic piece order: by smallest contained id.
    std::sort(pieces.begin(), pieces.end());
    for (auto& piece : pieces) {
      if (piece.size() <= 1) {
        next.push_back(piece);
        continue;
      }
      std::sort(piece.begin(), piece.end());
      MetricGraph sub = induced_subgraph(g, piece);
      double offset = rng.uniform(0.0, width);
      // Band index by shortest-path distance from the piece root; the
      // induced piece may be disconnected, unreachable vertices band by
      // component below.
      std::vector<double> dist = sub.dijkstra(piece.front());
      std::map<long long, std::vector<VId>> bands;
      std::vector<VId> unreachable;
      for (std::size_t i = 0; i < piece.size(); ++i) {
        VId v = sub.vertices()[i];
        double dv = dist[i];
        if (dv == kInf) {
          unreachable.push_back(v);
          continue;
        }
        long long band = static_cast<long long>(std::floor((dv + offset) / width));
        bands[band].push_back(v);
      }
      if (!unreachable.empty()) bands[-1] = std::move(unreachable);
      // Each band splits into connected components of its induced graph.
      for (auto& [band, members] : bands) {
        MetricGraph bg = induced_subgraph(g, members);
        std::vector<char> seen(bg.num_vertices(), 0);
        for (std::size_t s = 0; s < bg.num_vertices(); ++s) {
          if (seen[s]) continue;
          std::vector<int> stack{static_cast<int>(s)};
          seen[s] = 1;
          std::vector<VId> comp;
          while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            comp.push_back(bg.vertices()[x]);
            for (auto [ei, y] : bg.adjacent(x))
              if (!seen[y]) {
                seen[y] = 1;
                stack.push_back(y);
              }
          }
          std::sort(comp.begin(), comp.end());
          next.push_back(std::move(comp));
        }
      }
    }
    pieces = std::move(next);
  }

  Partition p;
  p.delta = delta;
  p.scheme = "kpr";
  p.seed = seed;
  std::sort(pieces.begin(), pieces.end());
  for (auto& piece : pieces) {
    double diam = 0;
    for (std::size_t i = 0; i < piece.size(); ++i)
      for (std::size_t j = i + 1; j < piece.size(); ++j)
        diam = std::max(diam, dg.at(piece[i], piece[j]));
    if (approx_le(diam, delta))
      p.blocks.push_back(std::move(piece));
    else
      detail::fallback_split(std::move(piece), dg, delta, p.blocks, p.fallback_splits);
  }
  p.finalize();
  detail::check_partition(p, dg);
  return p;
}

// Separation-frequency estimate of the Lipschitz constant.
struct PairStat {
  VId x, y;
  double dist = 0;
  double freq = 0;   // empirical Pr[P(x) != P(y)]
  double ci_lo = 0;  // 95% Wilson interval
  double ci_hi = 0;
};

struct BetaEstimate {
  double beta_hat = 0;  // max over pairs of freq * delta / d(x,y)
  double beta_hi = 0;   // same functional on the CI upper ends
  double delta = 0;
  int trials = 0;
  std::vector<PairStat> pairs;

  std::string csv() const {
    std::ostringstream out;
    out << "x,y,dist,freq,ci_lo,ci_hi\n";
    for (const PairStat& p : pairs)
      out << p.x << "," << p.y << "," << fmt_len(p.dist) << "," << p.freq << ","
          << p.ci_lo << "," << p.ci_hi << "\n";
    return out.str();
  }
};

namespace detail {

inline std::pair<double, double> wilson95(int hits, int n) {
  double z = 1.959963984540054;
  double phat = static_cast<double>(hits) / n;
  double denom = 1 + z * z / n;
  double center = (phat + z * z / (2 * n)) / denom;
  double half = z * std::sqrt(phat * (1 - phat) / n + z * z / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

}  // namespace detail

// sampler(seed) -> Partition; trials use seeds derived from (seed, t).
// Pairs at distance zero are excluded.
inline BetaEstimate estimate_beta(
    const std::function<Partition(std::uint64_t)>& sampler, const DistTable& metric,
    std::vector<std::pair<VId, VId>> pair_sample, int trials, std::uint64_t seed) {
  if (trials < 100) throw StructuralError("estimate_beta: need at least 100 trials");
  pair_sample.erase(std::remove_if(pair_sample.begin(), pair_sample.end(),
                                   [&](const auto& pr) {
                                     return metric.at(pr.first, pr.second) == 0;
                                   }),
                    pair_sample.end());
  std::vector<int> hits(pair_sample.size(), 0);
  double delta = 0;
  for (int t = 0; t < trials; ++t) {
    Partition p = sampler(derive_seed(seed, static_cast<std::uint64_t>(t)));
    delta = p.delta;
    for (std::size_t i = 0; i < pair_sample.size(); ++i)
      if (p.separated(pair_sample[i].first, pair_sample[i].second)) ++hits[i];
  }
  BetaEstimate est;
  est.delta = delta;
  est.trials = trials;
  for (std::size_t i = 0; i < pair_sample.size(); ++i) {
    PairStat s;
    s.x = pair_sample[i].first;
    s.y = pair_sample[i].second;
    s.dist = metric.at(s.x, s.y);
    s.freq = static_cast<double>(hits[i]) / trials;
    auto [lo, hi] = detail::wilson95(hits[i], trials);
    s.ci_lo = lo;
    s.ci_hi = hi;
    est.beta_hat = std::max(est.beta_hat, s.freq * delta / s.dist);
    est.beta_hi = std::max(est.beta_hi, hi * delta / s.dist);
    est.pairs.push_back(s);
  }
  return est;
}

}  // namespace genus
