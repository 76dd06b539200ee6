// Command-line harness: generate, experiment, bench, spectrum, fig3, stats.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hyperim/experiment.hpp"

namespace {

using hyperim::Json;

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

Json number_list(const std::string& s) {
  Json arr = Json::array();
  for (const auto& x : split_list(s)) arr.push_back(std::stod(x));
  return arr;
}

// Command-line values mirror config keys; anything given here wins over the file.
struct Overrides {
  std::string config;
  std::optional<std::string> output_dir, input, nverts, simplices, methods, beta1, beta2, lambda1, lambda2,
      seed_percent, seed_count, two_simplex, family, output_file, fig3_percents;
  std::optional<std::size_t> runs, threads, max_hyperedge_size, nodes, hyperedges, size, t_max, min_degree,
      max_degree;
  std::optional<std::uint64_t> rng_seed, gen_seed;
  std::optional<unsigned> gamma;
  std::optional<double> exponent, probability, mean_degree;
  bool dedup = false, dump_operator = false, no_gcc = false, reseed_random = false;

  void attach(CLI::App* app, bool generator_flags) {
    app->add_option("-c,--config", config, "JSON config file");
    app->add_option("-o,--output-dir", output_dir, "output directory (relative to $HYPERIM_OUTPUT_ROOT if set)");
    app->add_option("--rng-seed", rng_seed, "master seed");
    app->add_option("--threads", threads, "worker threads (0 = all cores)");
    app->add_option("--input", input, "hyperedge-list file");
    app->add_option("--nverts", nverts, "Benson nverts file");
    app->add_option("--simplices", simplices, "Benson simplices file");
    app->add_flag("--dedup", dedup, "drop repeated hyperedges on load");
    app->add_flag("--no-gcc", no_gcc, "do not restrict to the giant component");
    app->add_option("--two-simplex", two_simplex, "containment | size3only");
    app->add_option("--max-hyperedge-size", max_hyperedge_size, "cap for 2-simplex enumeration");
    app->add_option("--methods", methods, "comma list: CIA,degree,HD,CI,HADP,HSDP,Random");
    app->add_option("--beta1", beta1, "comma list of beta1 values");
    app->add_option("--beta2", beta2, "comma list of beta2 values");
    app->add_option("--lambda1", lambda1, "comma list of lambda1 values");
    app->add_option("--lambda2", lambda2, "comma list of lambda2 values");
    app->add_option("--gamma", gamma, "infectious period in steps");
    app->add_option("--seed-percent", seed_percent, "comma list of seed percentages of |V_GCC|");
    app->add_option("--seed-count", seed_count, "comma list of absolute seed counts");
    app->add_option("--runs", runs, "simulations per cell");
    app->add_option("--t-max", t_max, "step cap per run (0 = 10 N)");
    app->add_flag("--reseed-random", reseed_random, "Random method draws fresh seeds in every run");
    app->add_flag("--dump-operator", dump_operator, "write the WNB operator as wnb.coo");
    app->add_option("--percents", fig3_percents, "fig3: comma list of top-n% values");
    if (generator_flags) {
      app->add_option("--family", family, "scale_free | erdos_renyi | d_uniform");
      app->add_option("--nodes", nodes, "N");
      app->add_option("--hyperedges", hyperedges, "M");
      app->add_option("--exponent", exponent, "power-law exponent (scale_free)");
      app->add_option("--probability", probability, "membership probability (erdos_renyi)");
      app->add_option("--size", size, "hyperedge size (d_uniform)");
      app->add_option("--mean-degree", mean_degree, "target <d_N> (erdos_renyi / d_uniform)");
      app->add_option("--min-degree", min_degree, "lower cutoff of the power law (0 = 1)");
      app->add_option("--max-degree", max_degree, "upper cutoff of the power law (0 = structural)");
      app->add_option("--gen-seed", gen_seed, "generator seed");
      app->add_option("--output-file", output_file, "hypergraph file name");
    }
  }

  Json merged() const {
    Json j = Json::object();
    if (!config.empty()) {
      std::ifstream in(config);
      if (!in) throw std::runtime_error(config + ": cannot open config");
      j = Json::parse(in);
    }
    auto set = [&](const char* key, const auto& opt) {
      if (opt) j[key] = *opt;
    };
    set("output_dir", output_dir);
    set("rng_seed", rng_seed);
    set("threads", threads);
    set("two_simplex", two_simplex);
    set("max_hyperedge_size", max_hyperedge_size);
    set("runs", runs);
    set("gamma", gamma);
    set("t_max", t_max);
    set("output_file", output_file);
    if (dedup) j["dedup"] = true;
    if (no_gcc) j["use_gcc"] = false;
    if (reseed_random) j["reseed_random"] = true;
    if (input) {
      j.erase("generator");
      j.erase("benson");
      j["input"] = *input;
    }
    if (nverts || simplices) {
      j.erase("generator");
      j.erase("input");
      j["benson"] = Json{{"nverts", nverts.value_or("")}, {"simplices", simplices.value_or("")}};
    }
    if (methods) {
      j["methods"] = Json::array();
      for (const auto& m : split_list(*methods)) j["methods"].push_back(m);
    }
    if (beta1 || beta2) {
      j.erase("lambda1");
      j.erase("lambda2");
    }
    if (lambda1 || lambda2) {
      j.erase("beta1");
      j.erase("beta2");
    }
    if (beta1) j["beta1"] = number_list(*beta1);
    if (beta2) j["beta2"] = number_list(*beta2);
    if (lambda1) j["lambda1"] = number_list(*lambda1);
    if (lambda2) j["lambda2"] = number_list(*lambda2);
    if (seed_percent) {
      j.erase("seed_count");
      j["seed_percent"] = number_list(*seed_percent);
    }
    if (seed_count) {
      j.erase("seed_percent");
      j["seed_count"] = Json::array();
      for (const auto& x : split_list(*seed_count)) j["seed_count"].push_back(std::stoull(x));
    }
    if (dump_operator) j["spectrum"]["dump_operator"] = true;
    if (fig3_percents) j["fig3"]["percents"] = number_list(*fig3_percents);
    if (family || nodes || hyperedges || exponent || probability || size || mean_degree || gen_seed || min_degree ||
        max_degree) {
      auto& g = j["generator"];
      j.erase("input");
      j.erase("benson");
      set_in(g, "family", family);
      set_in(g, "num_nodes", nodes);
      set_in(g, "num_hyperedges", hyperedges);
      set_in(g, "exponent", exponent);
      set_in(g, "probability", probability);
      set_in(g, "uniform_size", size);
      set_in(g, "mean_degree", mean_degree);
      set_in(g, "min_degree", min_degree);
      set_in(g, "max_degree", max_degree);
      set_in(g, "rng_seed", gen_seed);
    }
    return j;
  }

  template <typename T>
  static void set_in(Json& j, const char* key, const std::optional<T>& v) {
    if (v) j[key] = *v;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Influence maximization under simplicial SIR contagion on hypergraphs"};
  app.require_subcommand(1);

  Overrides gen_o, exp_o, bench_o, spec_o, fig3_o, stats_o;
  auto* gen = app.add_subcommand("generate", "write a synthetic hypergraph and its provenance");
  gen_o.attach(gen, true);
  auto* exp = app.add_subcommand("experiment", "seed selection + Monte-Carlo evaluation over a parameter grid");
  exp_o.attach(exp, true);
  auto* bench = app.add_subcommand("bench", "runtime scaling of the selection methods on ER hypergraphs");
  bench_o.attach(bench, false);
  auto* spec = app.add_subcommand("spectrum", "leading eigenvalue of the weighted non-backtracking operator");
  spec_o.attach(spec, true);
  auto* fig3 = app.add_subcommand("fig3", "top-n% neighbor overlap probability of CI scores");
  fig3_o.attach(fig3, true);
  auto* stats = app.add_subcommand("stats", "dataset statistics (n, m, |V_GCC|, degree means, simplex densities)");
  stats_o.attach(stats, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      const auto cfg = hyperim::parse_config(gen_o.merged());
      const auto r = hyperim::cmd_generate(cfg);
      if (r.empty) std::cerr << "warning: generated hypergraph has no hyperedges\n";
      std::cout << r.file.string() << '\n';
    } else if (exp->parsed()) {
      const auto cfg = hyperim::parse_config(exp_o.merged());
      const auto failed = hyperim::cmd_experiment(cfg);
      if (failed) {
        std::cerr << failed << " experiment unit(s) failed; see the error column of results.csv\n";
        return 1;
      }
    } else if (bench->parsed()) {
      auto j = bench_o.merged();
      if (!j.contains("methods")) j["methods"] = Json::array({"CIA", "degree", "HD", "CI", "HADP", "HSDP", "Random"});
      hyperim::cmd_bench(hyperim::parse_config(j));
    } else if (spec->parsed()) {
      const auto cfg = hyperim::parse_config(spec_o.merged());
      const auto r = hyperim::cmd_spectrum(cfg);
      std::cout << hyperim::to_json(r, cfg.gamma).dump(2) << '\n';
    } else if (fig3->parsed()) {
      hyperim::cmd_fig3(hyperim::parse_config(fig3_o.merged()));
    } else if (stats->parsed()) {
      const auto cfg = hyperim::parse_config(stats_o.merged());
      const auto r = hyperim::cmd_stats(cfg);
      std::cout << hyperim::to_json(r.raw).dump(2) << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
