#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperim/datasets.hpp"
#include "hyperim/dynamics.hpp"
#include "hyperim/generators.hpp"
#include "hyperim/hypergraph.hpp"
#include "hyperim/influence.hpp"
#include "hyperim/message_passing.hpp"
#include "hyperim/parallel.hpp"
#include "hyperim/serialize.hpp"

namespace hyperim {

/// Environment variable naming the directory relative output paths resolve against.
inline constexpr const char* kOutputRootEnv = "HYPERIM_OUTPUT_ROOT";

enum class SourceKind { generator, edgelist, benson };

struct SourceConfig {
  SourceKind kind = SourceKind::generator;
  GenSpec generator;
  std::string path;  // edgelist
  std::string nverts, simplices;  // benson
  bool dedup = false;
};

struct BenchConfig {
  std::vector<std::size_t> sizes{1000, 2000, 4000, 8000};
  double mean_degree = 3.5;
  std::size_t repeats = 5;
  std::size_t warmup = 1;
  double seed_percent = 3.0;
  std::vector<std::size_t> seed_counts;  // optional k ladder at fixed N = ladder_n
  std::size_t ladder_n = 4000;
};

struct ExperimentConfig {
  SourceConfig source;
  bool use_lambda = false;
  std::vector<double> lambda1, lambda2;
  std::vector<double> beta1{0.25}, beta2{0.2};
  std::uint32_t gamma = 1;
  std::vector<double> seed_percents{3.0};
  std::vector<std::size_t> seed_counts;
  std::vector<SelectionMethod> methods{std::begin(kAllMethods), std::end(kAllMethods)};
  std::size_t runs = 100;
  std::uint64_t rng_seed = 1;
  std::string output_dir = "out";
  std::size_t threads = 0;
  std::size_t t_max = 0;
  TwoSimplexOptions two_simplex;
  bool use_gcc = true;
  bool reseed_random = false;  // Random draws fresh seeds in every run
  BenchConfig bench;
  std::vector<double> fig3_percents;
  std::vector<std::uint64_t> fig3_generator_seeds;
  bool dump_operator = false;
  PowerOptions power;
  std::string output_file = "hypergraph.txt";
  Json raw;
};

namespace detail {

template <typename T>
std::vector<T> number_list(const Json& j) {
  if (j.is_array()) return j.get<std::vector<T>>();
  return {j.get<T>()};
}

inline void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("config: " + what);
}

}  // namespace detail

inline ExperimentConfig parse_config(const Json& j) {
  using detail::number_list;
  using detail::require;
  ExperimentConfig c;
  c.raw = j;
  require(j.is_object(), "top level must be a JSON object");

  const int sources = int(j.contains("generator")) + int(j.contains("input")) + int(j.contains("benson"));
  require(sources <= 1, "specify at most one of generator, input, benson");
  if (j.contains("input")) {
    c.source.kind = SourceKind::edgelist;
    c.source.path = j.at("input").get<std::string>();
  } else if (j.contains("benson")) {
    c.source.kind = SourceKind::benson;
    c.source.nverts = j.at("benson").at("nverts").get<std::string>();
    c.source.simplices = j.at("benson").at("simplices").get<std::string>();
  } else if (j.contains("generator")) {
    c.source.generator = gen_spec_from_json(j.at("generator"));
  }
  c.source.dedup = j.value("dedup", false);

  if (j.contains("lambda1") || j.contains("lambda2")) {
    require(!j.contains("beta1") && !j.contains("beta2"), "use either lambda1/lambda2 or beta1/beta2");
    c.use_lambda = true;
    c.lambda1 = j.contains("lambda1") ? number_list<double>(j.at("lambda1")) : std::vector<double>{1.0};
    c.lambda2 = j.contains("lambda2") ? number_list<double>(j.at("lambda2")) : std::vector<double>{0.0};
    require(!c.lambda1.empty() && !c.lambda2.empty(), "lambda grids must be non-empty");
    for (double x : c.lambda1) require(x >= 0.0, "lambda1 must be >= 0");
    for (double x : c.lambda2) require(x >= 0.0, "lambda2 must be >= 0");
  } else {
    if (j.contains("beta1")) c.beta1 = number_list<double>(j.at("beta1"));
    if (j.contains("beta2")) c.beta2 = number_list<double>(j.at("beta2"));
    require(!c.beta1.empty() && !c.beta2.empty(), "beta grids must be non-empty");
    for (double x : c.beta1) require(x >= 0.0 && x <= 1.0, "beta1 values must lie in [0, 1]");
    for (double x : c.beta2) require(x >= 0.0 && x <= 1.0, "beta2 values must lie in [0, 1]");
  }
  c.gamma = j.value("gamma", 1u);
  require(c.gamma >= 1, "gamma must be >= 1");

  if (j.contains("seed_count")) {
    c.seed_counts = number_list<std::size_t>(j.at("seed_count"));
    c.seed_percents.clear();
    require(!j.contains("seed_percent"), "use either seed_count or seed_percent");
    require(!c.seed_counts.empty(), "seed_count schedule must be non-empty");
  } else if (j.contains("seed_percent")) {
    c.seed_percents = number_list<double>(j.at("seed_percent"));
    require(!c.seed_percents.empty(), "seed_percent schedule must be non-empty");
  }
  for (double p : c.seed_percents) require(p > 0.0 && p <= 100.0, "seed_percent must lie in (0, 100]");

  if (j.contains("methods")) {
    c.methods.clear();
    for (const auto& m : j.at("methods")) c.methods.push_back(parse_method(m.get<std::string>()));
    require(!c.methods.empty(), "methods must be non-empty");
  }
  c.runs = j.value("runs", c.runs);
  require(c.runs >= 1, "runs must be >= 1");
  c.rng_seed = j.value("rng_seed", c.rng_seed);
  c.output_dir = j.value("output_dir", c.output_dir);
  c.output_file = j.value("output_file", c.output_file);
  c.threads = j.value("threads", c.threads);
  c.t_max = j.value("t_max", c.t_max);
  c.use_gcc = j.value("use_gcc", c.use_gcc);
  c.reseed_random = j.value("reseed_random", c.reseed_random);
  const auto rule = j.value("two_simplex", std::string("containment"));
  require(rule == "containment" || rule == "size3only", "two_simplex must be containment or size3only");
  c.two_simplex.rule = rule == "size3only" ? TwoSimplexRule::size3only : TwoSimplexRule::containment;
  c.two_simplex.max_hyperedge_size = j.value("max_hyperedge_size", c.two_simplex.max_hyperedge_size);

  if (j.contains("bench")) {
    const auto& b = j.at("bench");
    if (b.contains("sizes")) c.bench.sizes = b.at("sizes").get<std::vector<std::size_t>>();
    c.bench.mean_degree = b.value("mean_degree", c.bench.mean_degree);
    c.bench.repeats = b.value("repeats", c.bench.repeats);
    c.bench.warmup = b.value("warmup", c.bench.warmup);
    c.bench.seed_percent = b.value("seed_percent", c.bench.seed_percent);
    if (b.contains("seed_counts")) c.bench.seed_counts = b.at("seed_counts").get<std::vector<std::size_t>>();
    c.bench.ladder_n = b.value("ladder_n", c.bench.ladder_n);
    require(!c.bench.sizes.empty(), "bench.sizes must be non-empty");
    require(c.bench.repeats >= 1, "bench.repeats must be >= 1");
  }
  if (j.contains("fig3")) {
    const auto& f = j.at("fig3");
    if (f.contains("percents")) c.fig3_percents = f.at("percents").get<std::vector<double>>();
    if (f.contains("generator_seeds")) c.fig3_generator_seeds = f.at("generator_seeds").get<std::vector<std::uint64_t>>();
  }
  if (c.fig3_percents.empty())
    for (int p = 1; p <= 20; ++p) c.fig3_percents.push_back(p);
  for (double p : c.fig3_percents) require(p > 0.0 && p <= 100.0, "fig3 percents must lie in (0, 100]");
  if (j.contains("spectrum")) {
    const auto& s = j.at("spectrum");
    c.dump_operator = s.value("dump_operator", false);
    c.power.tol = s.value("tol", c.power.tol);
    c.power.residual_tol = s.value("residual_tol", c.power.residual_tol);
    c.power.max_iters = s.value("max_iters", c.power.max_iters);
  }
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open config");
  return parse_config(Json::parse(in));
}

/// Output directory with relative paths resolved against $HYPERIM_OUTPUT_ROOT.
inline std::filesystem::path output_directory(const ExperimentConfig& c) {
  std::filesystem::path p(c.output_dir);
  if (p.is_relative()) {
    if (const char* root = std::getenv(kOutputRootEnv); root && *root) p = std::filesystem::path(root) / p;
  }
  std::filesystem::create_directories(p);
  return p;
}

inline std::ofstream open_output(const std::filesystem::path& dir, const std::string& name) {
  std::ofstream os(dir / name);
  if (!os) throw std::runtime_error((dir / name).string() + ": cannot write");
  os.imbue(std::locale::classic());
  return os;
}

inline LabeledHypergraph load_source(const SourceConfig& s, std::uint64_t generator_seed_override = 0) {
  switch (s.kind) {
    case SourceKind::generator: {
      auto spec = s.generator;
      if (generator_seed_override) spec.rng_seed = generator_seed_override;
      return {generate(spec), {}};
    }
    case SourceKind::edgelist: return load_hyperedge_list(s.path, LoadOptions{s.dedup});
    case SourceKind::benson: return load_benson(s.nverts, s.simplices, LoadOptions{s.dedup});
  }
  throw std::invalid_argument("unknown source");
}

inline std::string describe(const SourceConfig& s) {
  switch (s.kind) {
    case SourceKind::generator: return to_string(s.generator.family);
    case SourceKind::edgelist: return s.path;
    case SourceKind::benson: return s.simplices;
  }
  return "?";
}

/// The hypergraph an experiment runs on (its GCC unless use_gcc is off).
inline HypergraphViews prepare_views(const ExperimentConfig& c, std::uint64_t generator_seed_override = 0) {
  auto h = load_source(c.source, generator_seed_override).hypergraph;
  if (c.use_gcc) h = giant_component(h).hypergraph;
  return HypergraphViews(std::move(h), c.two_simplex);
}

// ---------------------------------------------------------------- generate

struct GenerateResult {
  std::filesystem::path file;
  std::filesystem::path provenance;
  bool empty = false;
};

inline GenerateResult cmd_generate(const ExperimentConfig& c) {
  if (c.source.kind != SourceKind::generator) throw std::invalid_argument("generate: config needs a generator section");
  const auto h = generate(c.source.generator);
  const auto dir = output_directory(c);
  GenerateResult r;
  r.file = dir / c.output_file;
  {
    auto os = open_output(dir, c.output_file);
    write_hyperedge_list(os, h);
  }
  r.empty = h.num_hyperedges() == 0;
  const auto adj = build_adjacency(h);
  std::uint64_t wsum = 0;
  for (auto w : adj.weighted_degree) wsum += w;
  Json prov{{"command", "generate"},
            {"schema_version", kCsvSchemaVersion},
            {"generator", to_json(c.source.generator)},
            {"num_nodes", h.num_nodes()},
            {"num_hyperedges", h.num_hyperedges()},
            {"num_links", adj.num_links()},
            {"file", r.file.filename().string()}};
  r.provenance = dir / (c.output_file + ".provenance.json");
  auto os = open_output(dir, c.output_file + ".provenance.json");
  os << prov.dump(2) << '\n';
  return r;
}

// -------------------------------------------------------------- experiment

struct ExperimentRow {
  std::size_t cell = 0;
  SelectionMethod method = SelectionMethod::cia;
  double lambda1 = std::nan(""), lambda2 = std::nan("");
  double beta1 = 0.0, beta2 = 0.0;
  std::size_t k = 0;
  OutbreakStats stats;
  std::vector<NodeId> seeds;
  std::string error;
};

struct ExperimentResult {
  std::size_t gcc_size = 0;
  SimplexDensities densities;
  std::vector<ExperimentRow> rows;  // ordered by (cell, method)
  std::size_t failed = 0;
};

/// Runs every (parameter cell × method) unit. All methods of a cell share the
/// simulation stream derive_seed(rng_seed, cell), so comparisons are paired.
inline ExperimentResult run_experiment(const ExperimentConfig& c, const HypergraphViews& views) {
  ExperimentResult res;
  res.gcc_size = views.num_nodes();
  res.densities = simplex_densities(views.adjacency, views.simplices);

  struct Cell {
    double l1 = std::nan(""), l2 = std::nan(""), b1 = 0.0, b2 = 0.0;
    std::size_t k = 0;
    std::string error;
  };
  std::vector<Cell> cells;
  std::vector<std::pair<double, double>> grid;
  if (c.use_lambda) {
    for (double a : c.lambda1)
      for (double b : c.lambda2) grid.emplace_back(a, b);
  } else {
    for (double a : c.beta1)
      for (double b : c.beta2) grid.emplace_back(a, b);
  }
  std::vector<std::size_t> ks;
  for (double p : c.seed_percents) ks.push_back(seeds_for_percent(p, std::max<std::size_t>(1, res.gcc_size)));
  for (auto k : c.seed_counts) ks.push_back(k);

  for (const auto& [a, b] : grid) {
    for (auto k : ks) {
      Cell cell;
      cell.k = k;
      try {
        if (c.use_lambda) {
          cell.l1 = a;
          cell.l2 = b;
          const auto betas = rescale_params(a, b, res.densities, c.gamma);
          cell.b1 = betas.beta1;
          cell.b2 = betas.beta2;
        } else {
          cell.b1 = a;
          cell.b2 = b;
        }
        if (k > res.gcc_size) throw std::invalid_argument("k exceeds |V_GCC|");
      } catch (const std::exception& e) {
        cell.error = e.what();
      }
      cells.push_back(cell);
    }
  }

  const std::size_t nm = c.methods.size();
  res.rows.resize(cells.size() * nm);
  parallel_for(
      res.rows.size(),
      [&](std::size_t u) {
        const std::size_t ci = u / nm;
        const auto& cell = cells[ci];
        auto& row = res.rows[u];
        row.cell = ci;
        row.method = c.methods[u % nm];
        row.lambda1 = cell.l1;
        row.lambda2 = cell.l2;
        row.beta1 = cell.b1;
        row.beta2 = cell.b2;
        row.k = cell.k;
        if (!cell.error.empty()) {
          row.error = cell.error;
          return;
        }
        try {
          const auto cell_seed = derive_seed(c.rng_seed, ci);
          EpidemicParams p{cell.b1, cell.b2, c.gamma, c.t_max, cell_seed};
          if (c.reseed_random && row.method == SelectionMethod::random) {
            row.stats = run_sir_random_seeds(views, cell.k, p, c.runs, res.gcc_size, 1);
            return;
          }
          const auto seeds = select_seeds(views.adjacency, cell.k, row.method, cell.b1, c.gamma,
                                          derive_seed(cell_seed, 0x5EED5));
          row.seeds = seeds.nodes;
          row.stats = run_sir(views, seeds.nodes, p, c.runs, res.gcc_size, 1);
        } catch (const std::exception& e) {
          row.error = e.what();
        }
      },
      c.threads);
  for (const auto& r : res.rows)
    if (!r.error.empty()) ++res.failed;
  return res;
}

inline void write_experiment_csv(std::ostream& os, const ExperimentResult& res) {
  write_csv_preamble(os, "experiment");
  os << "cell,method,lambda1,lambda2,beta1,beta2,k,runs,sigma_mean,sigma_std,fraction_of_gcc,non_absorbed,error\n";
  for (const auto& r : res.rows) {
    std::string err = r.error;
    std::replace(err.begin(), err.end(), ',', ';');
    std::replace(err.begin(), err.end(), '\n', ' ');
    os << r.cell << ',' << to_string(r.method) << ',' << (std::isnan(r.lambda1) ? "" : fmt_double(r.lambda1)) << ','
       << (std::isnan(r.lambda2) ? "" : fmt_double(r.lambda2)) << ',' << fmt_double(r.beta1) << ','
       << fmt_double(r.beta2) << ',' << r.k << ',' << r.stats.runs << ',' << fmt_double(r.stats.sigma_mean) << ','
       << fmt_double(r.stats.sigma_std) << ',' << fmt_double(r.stats.fraction_of_gcc) << ',' << r.stats.non_absorbed
       << ',' << err << '\n';
  }
}

inline void write_experiment_runs_csv(std::ostream& os, const ExperimentResult& res) {
  write_csv_preamble(os, "experiment_runs");
  os << "cell,method,run_id,sigma,absorbed\n";
  for (const auto& r : res.rows)
    for (std::size_t i = 0; i < r.stats.runs; ++i)
      os << r.cell << ',' << to_string(r.method) << ',' << i << ',' << r.stats.sigma_samples[i] << ','
         << int(r.stats.absorbed[i]) << '\n';
}

/// Writes results.csv, runs.csv and experiment.provenance.json. Returns the
/// number of failed units.
inline std::size_t cmd_experiment(const ExperimentConfig& c) {
  const auto views = prepare_views(c);
  const auto res = run_experiment(c, views);
  const auto dir = output_directory(c);
  {
    auto os = open_output(dir, "results.csv");
    write_experiment_csv(os, res);
  }
  {
    auto os = open_output(dir, "runs.csv");
    write_experiment_runs_csv(os, res);
  }
  Json prov{{"command", "experiment"},
            {"schema_version", kCsvSchemaVersion},
            {"source", describe(c.source)},
            {"config", c.raw},
            {"gcc_size", res.gcc_size},
            {"k1_mean", res.densities.k1_mean},
            {"k2_mean", res.densities.k2_mean},
            {"skipped_large_hyperedges", views.simplices.skipped_hyperedges},
            {"units", res.rows.size()},
            {"failed", res.failed}};
  auto os = open_output(dir, "experiment.provenance.json");
  os << prov.dump(2) << '\n';
  return res.failed;
}

// ------------------------------------------------------------------ bench

/// Least-squares slope of ln(y) against ln(x).
inline double fit_loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_loglog_slope: need >= 2 points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_loglog_slope: x values are all equal");
  return sxy / sxx;
}

/// Wall-clock seconds to go from a hypergraph to a seed set: adjacency
/// construction, scoring and selection.
inline double time_selection(const Hypergraph& h, SelectionMethod method, std::size_t k, double beta1,
                             std::uint32_t gamma, std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto adj = build_adjacency(h);
  const auto seeds = select_seeds(adj, k, method, beta1, gamma, seed);
  const auto t1 = std::chrono::steady_clock::now();
  if (seeds.nodes.size() != k) throw std::logic_error("time_selection: short seed set");
  return std::chrono::duration<double>(t1 - t0).count();
}

struct BenchRow {
  SelectionMethod method;
  std::size_t n = 0;
  std::size_t k = 0;
  double seconds = 0.0;
  bool size_ladder = true;
};

struct BenchResult {
  std::vector<BenchRow> rows;
  std::vector<std::pair<SelectionMethod, double>> slopes;  // over the size ladder
};

inline double median_time(const Hypergraph& h, SelectionMethod m, std::size_t k, const ExperimentConfig& c,
                          std::uint64_t seed) {
  for (std::size_t w = 0; w < c.bench.warmup; ++w) time_selection(h, m, k, 0.25, c.gamma, seed);
  std::vector<double> t;
  for (std::size_t r = 0; r < c.bench.repeats; ++r) t.push_back(time_selection(h, m, k, 0.25, c.gamma, seed));
  std::sort(t.begin(), t.end());
  return t[t.size() / 2];
}

inline Hypergraph bench_instance(const ExperimentConfig& c, std::size_t n) {
  GenSpec g;
  g.family = GeneratorFamily::erdos_renyi;
  g.num_nodes = n;
  g.num_hyperedges = n;
  g.probability = er_probability_for_mean_degree(n, n, c.bench.mean_degree);
  g.rng_seed = derive_seed(c.rng_seed, n);
  return giant_component(gen_er_bipartite(g)).hypergraph;
}

inline BenchResult run_bench(const ExperimentConfig& c) {
  BenchResult res;
  for (std::size_t n : c.bench.sizes) {
    const auto h = bench_instance(c, n);
    const std::size_t k = seeds_for_percent(c.bench.seed_percent, h.num_nodes());
    for (auto m : c.methods) res.rows.push_back({m, n, k, median_time(h, m, k, c, derive_seed(c.rng_seed, n)), true});
  }
  if (!c.bench.seed_counts.empty()) {
    const auto h = bench_instance(c, c.bench.ladder_n);
    for (std::size_t k : c.bench.seed_counts) {
      if (k > h.num_nodes()) throw std::invalid_argument("bench: seed count exceeds GCC size");
      for (auto m : c.methods)
        res.rows.push_back({m, c.bench.ladder_n, k, median_time(h, m, k, c, derive_seed(c.rng_seed, k)), false});
    }
  }
  if (c.bench.sizes.size() >= 2) {
    for (auto m : c.methods) {
      std::vector<double> x, y;
      for (const auto& r : res.rows) {
        if (r.method == m && r.size_ladder) {
          x.push_back(static_cast<double>(r.n));
          y.push_back(std::max(r.seconds, 1e-9));
        }
      }
      res.slopes.emplace_back(m, fit_loglog_slope(x, y));
    }
  }
  return res;
}

inline void cmd_bench(const ExperimentConfig& c) {
  const auto res = run_bench(c);
  const auto dir = output_directory(c);
  {
    auto os = open_output(dir, "bench.csv");
    write_csv_preamble(os, "bench");
    os << "method,N,k,seconds,ladder\n";
    for (const auto& r : res.rows)
      os << to_string(r.method) << ',' << r.n << ',' << r.k << ',' << fmt_double(r.seconds) << ','
         << (r.size_ladder ? "size" : "seeds") << '\n';
  }
  auto os = open_output(dir, "bench_fit.csv");
  write_csv_preamble(os, "bench_fit");
  os << "method,loglog_slope\n";
  Json slopes = Json::object();
  for (const auto& [m, s] : res.slopes) {
    os << to_string(m) << ',' << fmt_double(s) << '\n';
    slopes[to_string(m)] = s;
  }
  Json prov{{"command", "bench"}, {"schema_version", kCsvSchemaVersion}, {"config", c.raw}, {"slopes", slopes}};
  auto ps = open_output(dir, "bench.provenance.json");
  ps << prov.dump(2) << '\n';
}

// --------------------------------------------------------------- spectrum

struct SpectrumEntry {
  double beta1 = 0.0;
  SpectralResult spectral;
};

struct SpectrumResult {
  std::vector<SpectrumEntry> entries;
  CriticalPoint critical;
  std::size_t dim = 0;
};

inline SpectrumResult run_spectrum(const ExperimentConfig& c, const HypergraphViews& views) {
  SpectrumResult res;
  std::vector<double> betas = c.beta1;
  if (c.use_lambda) {
    betas.clear();
    const auto dens = simplex_densities(views.adjacency, views.simplices);
    for (double l : c.lambda1) betas.push_back(rescale_params(l, 0.0, dens, c.gamma).beta1);
  }
  for (double b : betas) {
    const auto op = build_wnb(views, b, c.gamma);
    res.dim = op.dim;
    res.entries.push_back({b, leading_eigen(op, c.power)});
  }
  res.critical = critical_beta1(views, c.gamma, c.power);
  return res;
}

inline Json to_json(const SpectrumResult& r, std::uint32_t gamma) {
  Json entries = Json::array();
  for (const auto& e : r.entries) {
    auto j = to_json(e.spectral);
    j["beta1"] = e.beta1;
    j["gamma"] = gamma;
    entries.push_back(j);
  }
  return Json{{"num_directed_links", r.dim},
              {"skeleton_radius", r.critical.skeleton_radius},
              {"beta1_star", json_number(r.critical.beta1_star)},
              {"entries", entries}};
}

inline SpectrumResult cmd_spectrum(const ExperimentConfig& c) {
  const auto views = prepare_views(c);
  const auto res = run_spectrum(c, views);
  const auto dir = output_directory(c);
  auto j = to_json(res, c.gamma);
  j["command"] = "spectrum";
  j["config"] = c.raw;
  {
    auto os = open_output(dir, "spectrum.json");
    os << j.dump(2) << '\n';
  }
  if (c.dump_operator && !c.beta1.empty()) {
    auto os = open_output(dir, "wnb.coo");
    build_wnb(views, res.entries.front().beta1, c.gamma).write_coordinates(os);
  }
  return res;
}

// ------------------------------------------------------------------- fig3

struct Fig3Row {
  std::string instance;
  double n_percent = 0.0;
  double probability = 0.0;
};

inline std::vector<Fig3Row> run_fig3(const ExperimentConfig& c) {
  std::vector<Fig3Row> rows;
  std::vector<std::uint64_t> seeds = c.fig3_generator_seeds;
  if (c.source.kind != SourceKind::generator || seeds.empty()) seeds.assign(1, 0);
  const double beta1 = c.use_lambda ? 1.0 : c.beta1.front();
  for (auto s : seeds) {
    const auto views = prepare_views(c, s);
    const auto ci = collective_influence(views.adjacency, beta1 > 0.0 ? beta1 : 1.0, c.gamma);
    const std::string name = describe(c.source) + (s ? "#" + std::to_string(s) : "");
    for (double p : c.fig3_percents) rows.push_back({name, p, top_overlap_probability(views.adjacency, ci.score, p)});
  }
  return rows;
}

inline std::vector<Fig3Row> cmd_fig3(const ExperimentConfig& c) {
  auto rows = run_fig3(c);
  const auto dir = output_directory(c);
  auto os = open_output(dir, "fig3.csv");
  write_csv_preamble(os, "fig3");
  os << "instance,n_percent,probability,null_rate\n";
  for (const auto& r : rows)
    os << r.instance << ',' << fmt_double(r.n_percent) << ',' << fmt_double(r.probability) << ','
       << fmt_double(r.n_percent / 100.0) << '\n';
  Json prov{{"command", "fig3"}, {"schema_version", kCsvSchemaVersion}, {"config", c.raw}};
  auto ps = open_output(dir, "fig3.provenance.json");
  ps << prov.dump(2) << '\n';
  return rows;
}

// ------------------------------------------------------------------ stats

struct StatsResult {
  DatasetStats raw;
  DatasetStats dedup;
};

inline StatsResult run_stats(const ExperimentConfig& c) {
  StatsResult r;
  auto src = c.source;
  src.dedup = false;
  r.raw = dataset_stats(load_source(src).hypergraph, c.two_simplex);
  src.dedup = true;
  r.dedup = dataset_stats(load_source(src).hypergraph, c.two_simplex);
  return r;
}

inline StatsResult cmd_stats(const ExperimentConfig& c) {
  const auto r = run_stats(c);
  const auto dir = output_directory(c);
  {
    auto os = open_output(dir, "stats.json");
    Json j{{"command", "stats"}, {"source", describe(c.source)}, {"with_duplicates", to_json(r.raw)},
           {"deduplicated", to_json(r.dedup)}};
    os << j.dump(2) << '\n';
  }
  auto os = open_output(dir, "table1.csv");
  write_table1_header(os);
  write_table1_row(os, describe(c.source), "with_duplicates", r.raw);
  write_table1_row(os, describe(c.source), "deduplicated", r.dedup);
  return r;
}

}  // namespace hyperim
