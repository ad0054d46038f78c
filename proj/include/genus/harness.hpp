#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "genus/planarize.hpp"

namespace genus {

struct MeasureOptions {
  PlanarizeOptions pipeline;
  bool full_pairs = false;  // default: adjacent pairs only
  std::string generator;    // instance metadata, free-form
};

struct PairDistortion {
  VId x, y;
  double dist = 0;
  double mean = 0;  // mean expansion over samples
  double max = 0;   // worst single-sample expansion
};

struct DistortionReport {
  double d_hat = 1;  // max over pairs of mean expansion
  double ci_lo = 1, ci_hi = 1;
  int samples = 0;
  std::uint64_t seed = 0;
  bool failed = false;
  std::string failure;
  std::vector<PairDistortion> pairs;
  std::size_t n = 0;
  int euler_genus = 0;
  std::string generator;
  bool full_pairs = false;

  json to_json() const {
    json j;
    j["d_hat"] = d_hat;
    j["ci_lo"] = ci_lo;
    j["ci_hi"] = ci_hi;
    j["samples"] = samples;
    j["seed"] = seed;
    j["failed"] = failed;
    if (failed) j["failure"] = failure;
    j["n"] = n;
    j["euler_genus"] = euler_genus;
    j["generator"] = generator;
    j["full_pairs"] = full_pairs;
    json ps = json::array();
    for (const auto& p : pairs)
      ps.push_back({{"x", p.x},
                    {"y", p.y},
                    {"dist", fmt_len(p.dist)},
                    {"mean", p.mean},
                    {"max", p.max}});
    j["pairs"] = ps;
    return j;
  }

  std::string csv() const {
    std::ostringstream out;
    out << "x,y,dist,mean,max\n";
    for (const auto& p : pairs)
      out << p.x << "," << p.y << "," << fmt_len(p.dist) << "," << p.mean << ","
          << p.max << "\n";
    return out.str();
  }
};

// Monte Carlo estimate of the stochastic embedding's distortion. Every
// sample is fully verified first; a failing sample aborts the whole
// estimate, naming its seed, so no report averages over bad draws.
inline DistortionReport estimate_distortion(const SurfaceEmbedding& emb,
                                            const MeasureOptions& opt, int n_samples,
                                            std::uint64_t seed) {
  if (n_samples < 30)
    throw StructuralError("estimate_distortion: need at least 30 samples");
  const MetricGraph& g = emb.base();
  DistortionReport rep;
  rep.samples = n_samples;
  rep.seed = seed;
  rep.n = g.num_vertices();
  rep.euler_genus = emb.euler_genus().euler_genus;
  rep.generator = opt.generator;
  rep.full_pairs = opt.full_pairs;

  std::vector<std::pair<VId, VId>> pairs;
  if (opt.full_pairs) {
    const auto& vs = g.vertices();
    for (std::size_t i = 0; i < vs.size(); ++i)
      for (std::size_t j = i + 1; j < vs.size(); ++j)
        pairs.push_back({std::min(vs[i], vs[j]), std::max(vs[i], vs[j])});
  } else {
    for (const Edge& e : g.edges())
      if (e.u != e.v) pairs.push_back({std::min(e.u, e.v), std::max(e.u, e.v)});
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

  DistTable dg = g.all_pairs();
  // expansion[p][t]: pair p in sample t.
  std::vector<std::vector<double>> expansion(pairs.size(),
                                             std::vector<double>(n_samples));
  for (int t = 0; t < n_samples; ++t) {
    std::uint64_t s_seed = derive_seed(seed, static_cast<std::uint64_t>(t));
    EmbeddingSample s = sample_planarization(emb, opt.pipeline, s_seed);
    VerificationReport v = verify_sample(g, s);
    if (!v.ok())
      throw InternalError("estimate_distortion: sample at seed " +
                          std::to_string(s_seed) + " failed verification: " +
                          v.failure);
    std::map<VId, std::vector<double>> rows;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      auto [x, y] = pairs[p];
      auto it = rows.find(x);
      if (it == rows.end()) it = rows.emplace(x, s.r.dijkstra(s.f.at(x))).first;
      double dr = it->second[s.r.vertex_index(s.f.at(y))];
      expansion[p][t] = dr / dg.at(x, y);
    }
  }

  for (std::size_t p = 0; p < pairs.size(); ++p) {
    PairDistortion pd;
    pd.x = pairs[p].first;
    pd.y = pairs[p].second;
    pd.dist = dg.at(pd.x, pd.y);
    double sum = 0;
    for (double e : expansion[p]) {
      sum += e;
      pd.max = std::max(pd.max, e);
    }
    pd.mean = sum / n_samples;
    rep.pairs.push_back(pd);
    rep.d_hat = std::max(rep.d_hat, pd.mean);
  }

  // Bootstrap CI over sample resampling (percentile method).
  if (!pairs.empty()) {
    const int kReps = 1000;
    std::vector<double> boot(kReps);
    Rng rng(derive_seed(seed, 0xb00ull));
    std::vector<int> idx(n_samples);
    for (int b = 0; b < kReps; ++b) {
      for (int t = 0; t < n_samples; ++t)
        idx[t] = static_cast<int>(rng.next_below(n_samples));
      double dmax = 1;
      for (std::size_t p = 0; p < pairs.size(); ++p) {
        double sum = 0;
        for (int t : idx) sum += expansion[p][t];
        dmax = std::max(dmax, sum / n_samples);
      }
      boot[b] = dmax;
    }
    std::sort(boot.begin(), boot.end());
    rep.ci_lo = boot[static_cast<std::size_t>(0.025 * kReps)];
    rep.ci_hi = boot[static_cast<std::size_t>(0.975 * kReps) - 1];
  }
  return rep;
}

}  // namespace genus
