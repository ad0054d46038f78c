#pragma once

#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "genus/generators.hpp"
#include "genus/harness.hpp"
#include "genus/io.hpp"

namespace genus {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

namespace detail {

inline std::uint64_t resolve_seed(bool seed_given, std::uint64_t seed_flag) {
  if (seed_given) return seed_flag;
  // Documented fallback; the flag always wins.
  if (const char* env = std::getenv("GENUS_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw StructuralError("GENUS_SEED: not an unsigned integer");
    }
  }
  throw StructuralError("--seed is required (or set GENUS_SEED)");
}

inline PlanarizeOptions pipeline_options(const std::string& cutgraph_mode,
                                         const std::string& tree_mode) {
  PlanarizeOptions opt;
  opt.exact_cutgraph = cutgraph_mode == "exact";
  opt.tree_mode = tree_mode == "direct" ? TreeEmbedMode::kDirect : TreeEmbedMode::kCore;
  return opt;
}

inline void check_edge_budget(const MetricGraph& g, long budget) {
  if (static_cast<long>(g.num_edges()) > budget)
    throw BudgetError("exact cut-graph search: instance has " +
                      std::to_string(g.num_edges()) + " edges, over the budget of " +
                      std::to_string(budget) + " (raise --budget or use treecotree)");
}

}  // namespace detail

// The whole CLI as a pure function of its arguments, so tests can assert
// byte-level determinism of stdout. Exit codes: 0 ok, 2 verification
// failure, 1 usage or structural errors.
inline CliResult cli_run(const std::vector<std::string>& args) {
  CliResult res;
  std::ostringstream out, err;

  CLI::App app{"stochastic planarization of embedded metric graphs"};
  app.require_subcommand(1);
  // Global flags may appear after the subcommand name.
  app.fallthrough();

  std::string format = "json";
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
  long budget = 40;
  app.add_option("--budget", budget, "edge budget for the exact cut-graph search")
      ->check(CLI::PositiveNumber);
  std::uint64_t seed_flag = 0;
  CLI::Option* seed_opt = app.add_option("--seed", seed_flag, "RNG seed");

  auto* gen = app.add_subcommand("gen", "emit a generator instance as a graph file");
  std::string family;
  int gen_k = 3, gen_g = 2, gen_n = 40;
  std::string gen_out;
  gen->add_option("--family", family, "torus | chain | k5")
      ->required()
      ->check(CLI::IsMember({"torus", "chain", "k5"}));
  gen->add_option("--k", gen_k, "grid size (torus, chain)");
  gen->add_option("--g", gen_g, "genus (chain, k5)");
  gen->add_option("--n", gen_n, "size parameter (k5)");
  gen->add_option("--out", gen_out, "output path; '-' for stdout")->required();

  auto* cut = app.add_subcommand("cutgraph", "compute a cut graph");
  std::string cut_in, cut_mode = "exact";
  cut->add_option("--in", cut_in, "graph file")->required();
  cut->add_option("--mode", cut_mode, "exact | treecotree")
      ->check(CLI::IsMember({"exact", "treecotree"}));

  auto* plan = app.add_subcommand("planarize", "draw one planarization sample");
  std::string plan_in, plan_cut = "exact", plan_tree = "core";
  plan->add_option("--in", plan_in, "graph file")->required();
  plan->add_option("--cutgraph", plan_cut, "exact | treecotree")
      ->check(CLI::IsMember({"exact", "treecotree"}));
  plan->add_option("--tree", plan_tree, "core | direct")
      ->check(CLI::IsMember({"core", "direct"}));

  auto* meas = app.add_subcommand("measure", "Monte Carlo distortion estimate");
  std::string meas_in, meas_cut = "exact", meas_tree = "core";
  int meas_n = 100;
  bool meas_full = false;
  meas->add_option("--in", meas_in, "graph file")->required();
  meas->add_option("--n", meas_n, "number of samples (>= 30)");
  meas->add_option("--cutgraph", meas_cut, "exact | treecotree")
      ->check(CLI::IsMember({"exact", "treecotree"}));
  meas->add_option("--tree", meas_tree, "core | direct")
      ->check(CLI::IsMember({"core", "direct"}));
  meas->add_flag("--full-pairs", meas_full, "measure all pairs, not just edges");

  auto* ver = app.add_subcommand("verify", "re-check a sample file");
  std::string ver_in, ver_sample;
  ver->add_option("--in", ver_in, "graph file the sample was drawn from")->required();
  ver->add_option("--sample", ver_sample, "sample file")->required();

  std::vector<const char*> argv;
  argv.push_back("genus_cli");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    res.code = app.exit(e, out, err);
    res.out = out.str();
    res.err = err.str();
    return res;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    res.code = 1;
    res.err = err.str();
    return res;
  }

  try {
    if (format == "csv" && !meas->parsed())
      throw StructuralError("--format csv is only available for 'measure'");

    if (gen->parsed()) {
      SurfaceEmbedding emb = [&] {
        if (family == "torus") return gen_torus_grid(gen_k);
        if (family == "chain") return gen_genus_chain(gen_g, gen_k);
        return gen_k5_tori(gen_g, gen_n);
      }();
      if (gen_out == "-")
        out << embedding_to_string(emb);
      else
        save_embedding(emb, gen_out);
    } else if (cut->parsed()) {
      SurfaceEmbedding emb = load_embedding(cut_in);
      if (cut_mode == "exact") detail::check_edge_budget(emb.base(), budget);
      CutGraphResult r = cut_mode == "exact"
                             ? min_cut_graph_exact(emb)
                             : cut_graph_treecotree(emb, emb.base().vertices().front());
      out << r.to_json().dump() << "\n";
    } else if (plan->parsed()) {
      std::uint64_t seed = detail::resolve_seed(seed_opt->count() > 0, seed_flag);
      SurfaceEmbedding emb = load_embedding(plan_in);
      PlanarizeOptions opt = detail::pipeline_options(plan_cut, plan_tree);
      if (opt.exact_cutgraph) detail::check_edge_budget(emb.base(), budget);
      EmbeddingSample s = sample_planarization(emb, opt, seed);
      VerificationReport v = verify_sample(emb.base(), s);
      if (!v.ok()) {
        err << "verification failed: " << v.failure << "\n";
        res.code = 2;
      } else {
        out << s.to_json().dump() << "\n";
      }
    } else if (meas->parsed()) {
      std::uint64_t seed = detail::resolve_seed(seed_opt->count() > 0, seed_flag);
      SurfaceEmbedding emb = load_embedding(meas_in);
      MeasureOptions opt;
      opt.pipeline = detail::pipeline_options(meas_cut, meas_tree);
      opt.full_pairs = meas_full;
      opt.generator = meas_in;
      if (opt.pipeline.exact_cutgraph) detail::check_edge_budget(emb.base(), budget);
      DistortionReport rep = estimate_distortion(emb, opt, meas_n, seed);
      if (format == "csv")
        out << rep.csv();
      else
        out << rep.to_json().dump() << "\n";
    } else if (ver->parsed()) {
      SurfaceEmbedding emb = load_embedding(ver_in);
      std::ifstream f(ver_sample, std::ios::binary);
      if (!f) throw StructuralError("cannot open: " + ver_sample);
      std::stringstream ss;
      ss << f.rdbuf();
      json j;
      try {
        j = json::parse(ss.str());
      } catch (const json::parse_error& e) {
        throw StructuralError(ver_sample + ": " + e.what());
      }
      EmbeddingSample s = sample_from_json(j);
      VerificationReport v = verify_sample(emb.base(), s);
      json rj;
      rj["ok"] = v.ok();
      rj["planar"] = v.planar;
      rj["structure_ok"] = v.structure_ok;
      rj["non_contraction"] = v.non_contraction;
      rj["pair_subset_sampled"] = v.pair_subset_sampled;
      if (!v.ok()) rj["failure"] = v.failure;
      out << rj.dump() << "\n";
      if (!v.ok()) res.code = 2;
    }
  } catch (const InternalError& e) {
    err << "error: " << e.what() << "\n";
    res.code = 2;  // a sample failed its built-in verification
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    res.code = 1;
  }
  res.out = out.str();
  res.err = err.str();
  return res;
}

}  // namespace genus
