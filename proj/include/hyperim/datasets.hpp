#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "hyperim/hypergraph.hpp"

namespace hyperim {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A hypergraph together with the original label of every dense node id.
struct LabeledHypergraph {
  Hypergraph hypergraph;
  std::vector<std::string> labels;
};

struct LoadOptions {
  bool dedup = false;  // drop repeated hyperedges (same member set), keeping the first
};

namespace detail {

class LabelTable {
 public:
  NodeId intern(const std::string& label) {
    auto [it, inserted] = ids_.try_emplace(label, static_cast<NodeId>(labels_.size()));
    if (inserted) labels_.push_back(label);
    return it->second;
  }
  std::vector<std::string> release() { return std::move(labels_); }
  std::size_t size() const { return labels_.size(); }

 private:
  std::unordered_map<std::string, NodeId> ids_;
  std::vector<std::string> labels_;
};

inline std::vector<std::vector<NodeId>> dedup_edges(std::vector<std::vector<NodeId>> edges) {
  std::set<std::vector<NodeId>> seen;
  std::vector<std::vector<NodeId>> out;
  for (auto& e : edges) {
    auto key = e;
    std::sort(key.begin(), key.end());
    if (seen.insert(key).second) out.push_back(std::move(e));
  }
  return out;
}

}  // namespace detail

/// Parses one hyperedge per line; labels separated by whitespace and/or
/// commas. Blank lines and lines starting with '#' are skipped.
inline LabeledHypergraph read_hyperedge_list(std::istream& in, const std::string& source = "<stream>",
                                             const LoadOptions& opts = {}) {
  detail::LabelTable table;
  std::vector<std::vector<NodeId>> edges;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream tokens(line);
    std::string tok;
    std::vector<std::string> labels;
    while (tokens >> tok) labels.push_back(tok);
    if (labels.empty() || labels.front().front() == '#') continue;
    std::vector<std::string> sorted = labels;
    std::sort(sorted.begin(), sorted.end());
    const auto dup = std::adjacent_find(sorted.begin(), sorted.end());
    if (dup != sorted.end()) {
      throw ParseError(source + ":" + std::to_string(lineno) + ": label '" + *dup +
                       "' repeated within one hyperedge");
    }
    std::vector<NodeId> e;
    e.reserve(labels.size());
    for (const auto& l : labels) e.push_back(table.intern(l));
    edges.push_back(std::move(e));
  }
  if (in.bad()) throw ParseError(source + ": read error");
  if (opts.dedup) edges = detail::dedup_edges(std::move(edges));
  const std::size_t n = table.size();
  return {Hypergraph(n, std::move(edges)), table.release()};
}

inline LabeledHypergraph load_hyperedge_list(const std::string& path, const LoadOptions& opts = {}) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  return read_hyperedge_list(in, path, opts);
}

/// Writes one hyperedge per line using the given labels (or dense ids).
inline void write_hyperedge_list(std::ostream& os, const Hypergraph& h, const std::vector<std::string>* labels = nullptr) {
  for (const auto& e : h.hyperedges()) {
    for (std::size_t p = 0; p < e.size(); ++p) {
      if (p) os << ' ';
      if (labels) {
        os << (*labels)[e[p]];
      } else {
        os << e[p];
      }
    }
    os << '\n';
  }
}

/// Paired "nverts" (one simplex size per line) and "simplices" (flattened
/// member labels) files.
inline LabeledHypergraph read_benson(std::istream& nverts, std::istream& simplices,
                                     const std::string& source = "<benson>", const LoadOptions& opts = {}) {
  std::vector<std::size_t> sizes;
  std::string tok;
  std::size_t expected = 0;
  while (nverts >> tok) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size() || v <= 0) {
      throw ParseError(source + ": nverts entry " + std::to_string(sizes.size() + 1) + " ('" + tok +
                       "') is not a positive integer");
    }
    sizes.push_back(static_cast<std::size_t>(v));
    expected += static_cast<std::size_t>(v);
  }
  std::vector<std::string> flat;
  while (simplices >> tok) flat.push_back(tok);
  if (flat.size() != expected) {
    throw ParseError(source + ": nverts sums to " + std::to_string(expected) + " labels but simplices holds " +
                     std::to_string(flat.size()));
  }

  detail::LabelTable table;
  std::vector<std::vector<NodeId>> edges;
  edges.reserve(sizes.size());
  std::size_t pos = 0;
  for (std::size_t a = 0; a < sizes.size(); ++a) {
    std::vector<NodeId> e;
    for (std::size_t q = 0; q < sizes[a]; ++q) e.push_back(table.intern(flat[pos++]));
    std::sort(e.begin(), e.end());
    if (std::adjacent_find(e.begin(), e.end()) != e.end()) {
      throw ParseError(source + ": simplex " + std::to_string(a + 1) + " repeats a label");
    }
    edges.push_back(std::move(e));
  }
  if (opts.dedup) edges = detail::dedup_edges(std::move(edges));
  const std::size_t n = table.size();
  return {Hypergraph(n, std::move(edges)), table.release()};
}

inline LabeledHypergraph load_benson(const std::string& nverts_path, const std::string& simplices_path,
                                     const LoadOptions& opts = {}) {
  std::ifstream nv(nverts_path);
  if (!nv) throw ParseError(nverts_path + ": cannot open file");
  std::ifstream sx(simplices_path);
  if (!sx) throw ParseError(simplices_path + ": cannot open file");
  return read_benson(nv, sx, nverts_path, opts);
}

struct DatasetStats {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t gcc_size = 0;
  double mean_node_degree = 0.0;  // <d_N> on the GCC
  double mean_hyperdegree = 0.0;  // <d_H> on the GCC
  double k1_mean = 0.0;
  double k2_mean = 0.0;
  std::size_t skipped_large_hyperedges = 0;
};

inline DatasetStats dataset_stats(const Hypergraph& h, const TwoSimplexOptions& opts = {}) {
  DatasetStats st;
  st.n = h.num_nodes();
  st.m = h.num_hyperedges();
  const auto gcc = giant_component(h);
  const auto& g = gcc.hypergraph;
  st.gcc_size = g.num_nodes();
  if (st.gcc_size == 0) return st;
  const auto adj = build_adjacency(g);
  const auto tri = enumerate_two_simplices(g, opts);
  double dn = 0.0, dh = 0.0;
  for (NodeId v = 0; v < st.gcc_size; ++v) {
    dn += adj.node_degree[v];
    dh += adj.hyperdegree[v];
  }
  st.mean_node_degree = dn / static_cast<double>(st.gcc_size);
  st.mean_hyperdegree = dh / static_cast<double>(st.gcc_size);
  const auto dens = simplex_densities(adj, tri);
  st.k1_mean = dens.k1_mean;
  st.k2_mean = dens.k2_mean;
  st.skipped_large_hyperedges = tri.skipped_hyperedges;
  return st;
}

}  // namespace hyperim
