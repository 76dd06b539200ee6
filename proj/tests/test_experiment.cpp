#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "hyperim/experiment.hpp"
#include "test_util.hpp"

using namespace hyperim;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("hyperim_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream os(p);
  os << text;
}

Json small_sf(const fs::path& out) {
  return Json{{"generator", {{"family", "scale_free"}, {"num_nodes", 200}, {"num_hyperedges", 150},
                             {"exponent", 2.5}, {"rng_seed", 3}}},
              {"beta1", {0.2, 0.3}},
              {"beta2", {0.1}},
              {"seed_percent", {3}},
              {"runs", 30},
              {"rng_seed", 5},
              {"output_dir", out.string()}};
}

int run_cli(const std::string& args, const fs::path& root) {
  const std::string cmd = "HYPERIM_OUTPUT_ROOT='" + root.string() + "' '" HYPERIM_CLI_PATH "' " + args +
                          " > '" + (root / "stdout.txt").string() + "' 2> '" + (root / "stderr.txt").string() + "'";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Config, Defaults) {
  const auto c = parse_config(Json::object());
  EXPECT_EQ(c.runs, 100u);
  EXPECT_EQ(c.methods.size(), 7u);
  EXPECT_EQ(c.seed_percents, std::vector<double>{3.0});
  EXPECT_EQ(c.source.kind, SourceKind::generator);
  EXPECT_FALSE(c.use_lambda);
}

TEST(Config, LambdaGrid) {
  const auto c = parse_config(Json{{"lambda1", {0.5, 1.0}}, {"lambda2", 2.5}, {"seed_count", 1}});
  EXPECT_TRUE(c.use_lambda);
  EXPECT_EQ(c.lambda1.size(), 2u);
  EXPECT_EQ(c.lambda2, std::vector<double>{2.5});
  EXPECT_EQ(c.seed_counts, std::vector<std::size_t>{1});
  EXPECT_TRUE(c.seed_percents.empty());
}

TEST(Config, Rejections) {
  EXPECT_THROW(parse_config(Json::array()), std::invalid_argument);
  EXPECT_THROW(parse_config(Json{{"beta1", 0.1}, {"lambda1", 1.0}}), std::invalid_argument);
  EXPECT_THROW(parse_config(Json{{"beta1", Json::array()}}), std::invalid_argument);
  EXPECT_THROW(parse_config(Json{{"beta1", 1.5}}), std::invalid_argument);
  EXPECT_THROW(parse_config(Json{{"seed_percent", 0}}), std::invalid_argument);
  EXPECT_THROW(parse_config(Json{{"seed_percent", 101}}), std::invalid_argument);
  EXPECT_THROW(parse_config(Json{{"seed_percent", 3}, {"seed_count", 4}}), std::invalid_argument);
  EXPECT_THROW(parse_config(Json{{"methods", {"CIA", "PageRank"}}}), std::invalid_argument);
  EXPECT_THROW(parse_config(Json{{"methods", Json::array()}}), std::invalid_argument);
  EXPECT_THROW(parse_config(Json{{"runs", 0}}), std::invalid_argument);
  EXPECT_THROW(parse_config(Json{{"gamma", 0}}), std::invalid_argument);
  EXPECT_THROW(parse_config(Json{{"two_simplex", "closure"}}), std::invalid_argument);
  EXPECT_THROW(parse_config(Json{{"input", "a"}, {"benson", {{"nverts", "x"}, {"simplices", "y"}}}}),
               std::invalid_argument);
}

TEST(Config, PresetsParse) {
  for (const auto& entry : fs::directory_iterator(fs::path(HYPERIM_SOURCE_DIR) / "configs"))
    EXPECT_NO_THROW(load_config(entry.path().string())) << entry.path();
}

TEST(Experiment, ZeroInfectivityGivesSeedCount) {
  auto j = small_sf(scratch("zero"));
  j["beta1"] = 0.0;
  j["beta2"] = 0.0;
  const auto c = parse_config(j);
  const auto views = prepare_views(c);
  const auto res = run_experiment(c, views);
  ASSERT_EQ(res.rows.size(), 7u);
  for (const auto& r : res.rows) {
    EXPECT_TRUE(r.error.empty()) << r.error;
    EXPECT_EQ(r.stats.sigma_mean, double(r.k));
    EXPECT_EQ(r.k, seeds_for_percent(3, res.gcc_size));
  }
}

TEST(Experiment, DeterministicAcrossRunsAndThreads) {
  const auto a = scratch("det_a"), b = scratch("det_b");
  auto ja = small_sf(a);
  ja["threads"] = 1;
  auto jb = small_sf(b);
  jb["threads"] = 4;
  EXPECT_EQ(cmd_experiment(parse_config(ja)), 0u);
  EXPECT_EQ(cmd_experiment(parse_config(jb)), 0u);
  EXPECT_EQ(slurp(a / "results.csv"), slurp(b / "results.csv"));
  EXPECT_EQ(slurp(a / "runs.csv"), slurp(b / "runs.csv"));
  EXPECT_EQ(slurp(a / "results.csv").rfind("# hyperim experiment schema v1\n", 0), 0u);
}

TEST(Experiment, FailedCellDoesNotStopOthers) {
  auto j = small_sf(scratch("fail"));
  j.erase("seed_percent");
  j["seed_count"] = {2, 100000};
  j["methods"] = {"CIA", "Random"};
  const auto c = parse_config(j);
  const auto res = run_experiment(c, prepare_views(c));
  EXPECT_EQ(res.failed, 4u);
  for (const auto& r : res.rows) EXPECT_EQ(r.error.empty(), r.k == 2) << r.k;
}

TEST(Experiment, MethodsShareSimulationStream) {
  auto j = small_sf(scratch("paired"));
  j["methods"] = {"degree", "HD"};
  j["seed_count"] = 1;
  j.erase("seed_percent");
  const auto c = parse_config(j);
  const auto res = run_experiment(c, prepare_views(c));
  // Paired streams: identical seed sets give identical samples.
  for (std::size_t cell = 0; cell < res.rows.size(); cell += 2) {
    if (res.rows[cell].seeds == res.rows[cell + 1].seeds) {
      EXPECT_EQ(res.rows[cell].stats.sigma_samples, res.rows[cell + 1].stats.sigma_samples);
    }
  }
}

TEST(Generate, ByteIdenticalAndReloadable) {
  const auto a = scratch("gen_a"), b = scratch("gen_b");
  auto ja = small_sf(a), jb = small_sf(b);
  const auto ra = cmd_generate(parse_config(ja));
  const auto rb = cmd_generate(parse_config(jb));
  EXPECT_EQ(slurp(ra.file), slurp(rb.file));
  EXPECT_TRUE(fs::exists(ra.provenance));
  const auto reloaded = load_hyperedge_list(ra.file.string());
  const auto original = generate(parse_config(ja).source.generator);
  const auto x = dataset_stats(original), y = dataset_stats(reloaded.hypergraph);
  EXPECT_EQ(x.m, y.m);
  EXPECT_EQ(x.gcc_size, y.gcc_size);
  EXPECT_DOUBLE_EQ(x.mean_node_degree, y.mean_node_degree);
  EXPECT_DOUBLE_EQ(x.k2_mean, y.k2_mean);
}

TEST(Generate, EmptyErdosRenyi) {
  const auto dir = scratch("gen_empty");
  const auto r = cmd_generate(parse_config(Json{
      {"generator", {{"family", "erdos_renyi"}, {"num_nodes", 50}, {"num_hyperedges", 10}, {"probability", 0.0}}},
      {"output_dir", dir.string()}}));
  EXPECT_TRUE(r.empty);
  EXPECT_EQ(slurp(r.file), "");
}

TEST(Spectrum, TriangleAndForest) {
  const auto dir = scratch("spec");
  write_file(dir / "triangle.txt", "0 1\n1 2\n0 2\n");
  write_file(dir / "forest.txt", "0 1\n1 2\n1 3\n3 4\n");
  auto c = parse_config(Json{{"input", (dir / "triangle.txt").string()}, {"beta1", 0.5}, {"output_dir", dir.string()}});
  auto r = cmd_spectrum(c);
  ASSERT_EQ(r.entries.size(), 1u);
  EXPECT_NEAR(r.entries[0].spectral.lambda, 0.5, 1e-10);
  EXPECT_NEAR(r.critical.beta1_star, 1.0, 1e-10);
  EXPECT_TRUE(fs::exists(dir / "spectrum.json"));

  c = parse_config(Json{{"input", (dir / "triangle.txt").string()}, {"beta1", 0.25}, {"output_dir", dir.string()}});
  EXPECT_NEAR(cmd_spectrum(c).entries[0].spectral.lambda, 0.25, 1e-10);

  c = parse_config(Json{{"input", (dir / "forest.txt").string()}, {"beta1", 0.9}, {"output_dir", dir.string()}});
  r = cmd_spectrum(c);
  EXPECT_TRUE(std::isinf(r.critical.beta1_star));
  EXPECT_EQ(Json::parse(slurp(dir / "spectrum.json")).at("beta1_star"), "inf");
}

TEST(Fig3, FullPercentIsOneAndDeterministic) {
  const auto dir = scratch("fig3");
  auto j = small_sf(dir);
  j["fig3"] = {{"percents", {5, 100}}, {"generator_seeds", {1, 2}}};
  const auto rows = cmd_fig3(parse_config(j));
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[1].probability, 1.0);
  EXPECT_EQ(rows[3].probability, 1.0);
  const auto first = slurp(dir / "fig3.csv");
  cmd_fig3(parse_config(j));
  EXPECT_EQ(slurp(dir / "fig3.csv"), first);
}

TEST(Bench, SlopeFitSanity) {
  std::vector<double> n{1000, 2000, 4000, 8000}, t;
  for (double x : n) t.push_back(3e-6 * x);
  EXPECT_NEAR(fit_loglog_slope(n, t), 1.0, 0.01);
  std::vector<double> q;
  for (double x : n) q.push_back(1e-9 * x * x);
  EXPECT_NEAR(fit_loglog_slope(n, q), 2.0, 1e-9);
  EXPECT_THROW(fit_loglog_slope(std::vector<double>{5}, std::vector<double>{1}), std::invalid_argument);
}

TEST(Bench, TinyRunIsQuick) {
  const auto dir = scratch("bench");
  const auto c = parse_config(Json{{"bench", {{"sizes", {100, 200}}, {"repeats", 3}, {"seed_counts", {1, 3}},
                                              {"ladder_n", 100}}},
                                   {"output_dir", dir.string()}});
  const auto t0 = std::chrono::steady_clock::now();
  cmd_bench(c);
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 5.0);
  EXPECT_TRUE(fs::exists(dir / "bench.csv"));
  EXPECT_TRUE(fs::exists(dir / "bench_fit.csv"));
}

TEST(Stats, ReportsBothConventions) {
  const auto dir = scratch("stats");
  write_file(dir / "h.txt", "a b c\na b c\nc d\n");
  const auto r = cmd_stats(parse_config(Json{{"input", (dir / "h.txt").string()}, {"output_dir", dir.string()}}));
  EXPECT_EQ(r.raw.m, 3u);
  EXPECT_EQ(r.dedup.m, 2u);
  EXPECT_EQ(r.raw.n, 4u);
  EXPECT_TRUE(fs::exists(dir / "table1.csv"));
}

TEST(Cli, SubcommandsAndExitCodes) {
  const auto root = scratch("cli");
  EXPECT_EQ(run_cli("generate --family erdos_renyi --nodes 100 --hyperedges 100 --mean-degree 3 --gen-seed 2 "
                    "-o gen",
                    root),
            0);
  EXPECT_TRUE(fs::exists(root / "gen" / "hypergraph.txt"));
  EXPECT_EQ(run_cli("experiment --input '" + (root / "gen" / "hypergraph.txt").string() +
                        "' --methods CIA,Random --beta1 0.3 --beta2 0.2 --runs 20 -o exp",
                    root),
            0);
  EXPECT_TRUE(fs::exists(root / "exp" / "results.csv"));
  EXPECT_TRUE(fs::exists(root / "exp" / "experiment.provenance.json"));
  EXPECT_EQ(run_cli("spectrum --input '" + (root / "gen" / "hypergraph.txt").string() + "' --beta1 0.1 -o spec",
                    root),
            0);
  EXPECT_EQ(run_cli("fig3 --family d_uniform --nodes 300 --size 3 --mean-degree 3.5 --percents 5 -o f3", root), 0);
  EXPECT_EQ(run_cli("stats --input '" + (root / "gen" / "hypergraph.txt").string() + "' -o st", root), 0);
  EXPECT_EQ(run_cli("bench --methods CIA --threads 1 -o b -c '" + (root / "bench.json").string() + "'", root), 2);

  // One impossible cell: exit 1, the other cell still lands in the CSV.
  EXPECT_EQ(run_cli("experiment --family erdos_renyi --nodes 50 --hyperedges 50 --mean-degree 3 --seed-count 1,999 "
                    "--methods degree --runs 5 -o bad",
                    root),
            1);
  EXPECT_NE(slurp(root / "bad" / "results.csv").find("exceeds"), std::string::npos);
  EXPECT_EQ(run_cli("experiment --beta1 2 -o nope", root), 2);
  EXPECT_NE(run_cli("nonsense", root), 0);
}
