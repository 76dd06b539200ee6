#pragma once

#include <charconv>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "hyperim/datasets.hpp"
#include "hyperim/dynamics.hpp"
#include "hyperim/generators.hpp"
#include "hyperim/influence.hpp"
#include "hyperim/message_passing.hpp"

namespace hyperim {

using Json = nlohmann::ordered_json;

/// Version tag written as the first line of every CSV file.
inline constexpr int kCsvSchemaVersion = 1;

inline void write_csv_preamble(std::ostream& os, const std::string& schema) {
  os << "# hyperim " << schema << " schema v" << kCsvSchemaVersion << '\n';
}

/// Shortest round-trippable decimal form with '.' as decimal point.
inline std::string fmt_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

/// JSON cannot carry infinities; they are written as the string "inf".
inline Json json_number(double x) {
  if (std::isfinite(x)) return x;
  return fmt_double(x);
}

inline Json to_json(const GenSpec& g) {
  return Json{{"family", to_string(g.family)},     {"num_nodes", g.num_nodes},
              {"num_hyperedges", g.num_hyperedges}, {"exponent", g.exponent},
              {"probability", g.probability},       {"uniform_size", g.uniform_size},
              {"min_degree", g.min_degree},         {"max_degree", g.max_degree},
              {"rng_seed", g.rng_seed}};
}

inline GenSpec gen_spec_from_json(const Json& j) {
  GenSpec g;
  g.family = parse_family(j.value("family", std::string("scale_free")));
  g.num_nodes = j.value("num_nodes", g.num_nodes);
  g.num_hyperedges = j.value("num_hyperedges", g.num_hyperedges);
  g.exponent = j.value("exponent", g.exponent);
  g.probability = j.value("probability", g.probability);
  g.uniform_size = j.value("uniform_size", g.uniform_size);
  g.min_degree = j.value("min_degree", g.min_degree);
  g.max_degree = j.value("max_degree", g.max_degree);
  g.rng_seed = j.value("rng_seed", g.rng_seed);
  if (g.family == GeneratorFamily::erdos_renyi && j.contains("mean_degree") && !j.contains("probability")) {
    g.probability = er_probability_for_mean_degree(g.num_nodes, g.num_hyperedges, j.at("mean_degree").get<double>());
  }
  if (g.family == GeneratorFamily::d_uniform && j.contains("mean_degree") && !j.contains("num_hyperedges")) {
    g.num_hyperedges = d_uniform_edges_for_mean_degree(g.num_nodes, g.uniform_size, j.at("mean_degree").get<double>());
  }
  validate(g);
  return g;
}

inline Json to_json(const OutbreakStats& s) {
  return Json{{"runs", s.runs},
              {"reference_size", s.reference_size},
              {"sigma_mean", s.sigma_mean},
              {"sigma_std", s.sigma_std},
              {"fraction_of_gcc", s.fraction_of_gcc},
              {"non_absorbed", s.non_absorbed}};
}

/// One row per run: run_id, sigma, absorbed flag.
inline void write_runs_csv(std::ostream& os, const OutbreakStats& s) {
  write_csv_preamble(os, "runs");
  os << "run_id,sigma,absorbed\n";
  for (std::size_t r = 0; r < s.runs; ++r) os << r << ',' << s.sigma_samples[r] << ',' << int(s.absorbed[r]) << '\n';
}

inline Json to_json(const SpectralResult& r, bool with_vector = false) {
  Json j{{"lambda_c", json_number(r.lambda)},
         {"iterations", r.iterations},
         {"residual", json_number(r.residual)},
         {"converged", r.converged}};
  if (with_vector) j["eigvec"] = r.eigvec;
  return j;
}

inline Json to_json(const MpSolution& s) {
  return Json{{"converged", s.converged},
              {"iterations", s.iterations},
              {"last_change", s.last_change},
              {"steady_residual", s.steady_residual},
              {"trace", s.trace}};
}

inline Json to_json(const DatasetStats& s) {
  return Json{{"n", s.n},
              {"m", s.m},
              {"gcc_size", s.gcc_size},
              {"mean_node_degree", s.mean_node_degree},
              {"mean_hyperdegree", s.mean_hyperdegree},
              {"k1_mean", s.k1_mean},
              {"k2_mean", s.k2_mean},
              {"skipped_large_hyperedges", s.skipped_large_hyperedges}};
}

inline void write_table1_header(std::ostream& os) {
  write_csv_preamble(os, "table1");
  os << "name,convention,n,m,gcc_size,mean_node_degree,mean_hyperdegree,k1_mean,k2_mean,skipped_large_hyperedges\n";
}

inline void write_table1_row(std::ostream& os, const std::string& name, const std::string& convention,
                             const DatasetStats& s) {
  os << name << ',' << convention << ',' << s.n << ',' << s.m << ',' << s.gcc_size << ','
     << fmt_double(s.mean_node_degree) << ',' << fmt_double(s.mean_hyperdegree) << ',' << fmt_double(s.k1_mean)
     << ',' << fmt_double(s.k2_mean) << ',' << s.skipped_large_hyperedges << '\n';
}

/// node_id, score, rank (rank 1 = best under the tie-break order).
inline void write_scores_csv(std::ostream& os, const AdjacencyView& adj, const CiScores& ci) {
  const auto order = ranked_order<double>(adj, ci.score);
  std::vector<std::size_t> rank(order.size());
  for (std::size_t p = 0; p < order.size(); ++p) rank[order[p]] = p + 1;
  write_csv_preamble(os, "ci_scores");
  os << "node_id,score,rank\n";
  for (std::size_t v = 0; v < ci.score.size(); ++v) os << v << ',' << fmt_double(ci.score[v]) << ',' << rank[v] << '\n';
}

/// node_id, rank (selection order, 1-based), method.
inline void write_seeds_csv(std::ostream& os, const SeedSet& seeds) {
  write_csv_preamble(os, "seeds");
  os << "node_id,rank,method\n";
  for (std::size_t p = 0; p < seeds.nodes.size(); ++p)
    os << seeds.nodes[p] << ',' << p + 1 << ',' << to_string(seeds.method) << '\n';
}

}  // namespace hyperim
