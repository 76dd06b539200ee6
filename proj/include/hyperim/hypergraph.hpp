#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace hyperim {

using NodeId = std::uint32_t;
using LinkId = std::uint32_t;

inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

/// Node set plus an ordered multiset of hyperedges.
///
/// Members of each hyperedge are kept sorted. Duplicate hyperedges are
/// allowed and count towards the weighted adjacency and the 2-simplex weights.
class Hypergraph {
 public:
  Hypergraph() = default;

  Hypergraph(std::size_t num_nodes, std::vector<std::vector<NodeId>> hyperedges)
      : num_nodes_(num_nodes), hyperedges_(std::move(hyperedges)) {
    if (num_nodes_ >= kNoNode) throw std::invalid_argument("hypergraph: too many nodes");
    for (std::size_t a = 0; a < hyperedges_.size(); ++a) {
      auto& e = hyperedges_[a];
      if (e.empty()) {
        throw std::invalid_argument("hypergraph: hyperedge " + std::to_string(a) + " is empty");
      }
      std::sort(e.begin(), e.end());
      if (e.back() >= num_nodes_) {
        throw std::invalid_argument("hypergraph: hyperedge " + std::to_string(a) + " has node " +
                                    std::to_string(e.back()) + " >= num_nodes " +
                                    std::to_string(num_nodes_));
      }
      if (std::adjacent_find(e.begin(), e.end()) != e.end()) {
        throw std::invalid_argument("hypergraph: hyperedge " + std::to_string(a) +
                                    " repeats a node");
      }
    }
  }

  std::size_t num_nodes() const noexcept { return num_nodes_; }
  std::size_t num_hyperedges() const noexcept { return hyperedges_.size(); }
  const std::vector<std::vector<NodeId>>& hyperedges() const noexcept { return hyperedges_; }
  std::span<const NodeId> hyperedge(std::size_t a) const { return hyperedges_[a]; }

  bool operator==(const Hypergraph&) const = default;

 private:
  std::size_t num_nodes_ = 0;
  std::vector<std::vector<NodeId>> hyperedges_;
};

/// Compressed sparse rows with sorted column indices.
template <typename T>
struct CsrMatrix {
  std::size_t rows = 0;
  std::vector<std::size_t> row_ptr{0};
  std::vector<NodeId> cols;
  std::vector<T> values;

  std::size_t nnz() const noexcept { return cols.size(); }
  std::span<const NodeId> row_cols(std::size_t r) const {
    return {cols.data() + row_ptr[r], row_ptr[r + 1] - row_ptr[r]};
  }
  std::span<const T> row_values(std::size_t r) const {
    return {values.data() + row_ptr[r], row_ptr[r + 1] - row_ptr[r]};
  }
  /// Position of (r, c) in cols/values, or nnz() when structurally zero.
  std::size_t find(std::size_t r, NodeId c) const {
    const auto first = cols.begin() + static_cast<std::ptrdiff_t>(row_ptr[r]);
    const auto last = cols.begin() + static_cast<std::ptrdiff_t>(row_ptr[r + 1]);
    const auto it = std::lower_bound(first, last, c);
    return (it != last && *it == c) ? static_cast<std::size_t>(it - cols.begin()) : nnz();
  }
  T at(std::size_t r, NodeId c) const {
    const std::size_t p = find(r, c);
    return p == nnz() ? T{} : values[p];
  }
};

/// Node-hyperedge incidence as adjacency lists (node -> hyperedge ids).
inline std::vector<std::vector<std::uint32_t>> node_memberships(const Hypergraph& h) {
  std::vector<std::vector<std::uint32_t>> out(h.num_nodes());
  for (std::size_t a = 0; a < h.num_hyperedges(); ++a) {
    for (NodeId v : h.hyperedge(a)) out[v].push_back(static_cast<std::uint32_t>(a));
  }
  return out;
}

/// Derived pairwise structure: A = I·Iᵀ − D, its binary pattern, and degrees.
///
/// The binary adjacency shares A's sparsity pattern, so it is not stored
/// separately; `binary(i, j)` and `neighbors(i)` expose it.
struct AdjacencyView {
  std::size_t num_nodes = 0;
  CsrMatrix<std::uint32_t> weighted;
  std::vector<std::uint32_t> node_degree;      // d_N, row sums of the binary adjacency
  std::vector<std::uint32_t> hyperdegree;      // d_H
  std::vector<std::uint32_t> edge_size;        // d_E
  std::vector<std::uint64_t> weighted_degree;  // row sums of A

  std::span<const NodeId> neighbors(NodeId i) const { return weighted.row_cols(i); }
  std::span<const std::uint32_t> weights(NodeId i) const { return weighted.row_values(i); }
  std::uint32_t weight(NodeId i, NodeId j) const { return weighted.at(i, j); }
  bool binary(NodeId i, NodeId j) const { return weighted.find(i, j) != weighted.nnz(); }
  std::size_t num_links() const noexcept { return weighted.nnz() / 2; }

  CsrMatrix<std::uint8_t> binary_adjacency() const {
    CsrMatrix<std::uint8_t> b;
    b.rows = weighted.rows;
    b.row_ptr = weighted.row_ptr;
    b.cols = weighted.cols;
    b.values.assign(weighted.nnz(), 1);
    return b;
  }
};

inline AdjacencyView build_adjacency(const Hypergraph& h) {
  const std::size_t n = h.num_nodes();
  AdjacencyView view;
  view.num_nodes = n;
  view.hyperdegree.assign(n, 0);
  view.edge_size.reserve(h.num_hyperedges());
  for (const auto& e : h.hyperedges()) {
    view.edge_size.push_back(static_cast<std::uint32_t>(e.size()));
    for (NodeId v : e) ++view.hyperdegree[v];
  }

  const auto members = node_memberships(h);
  auto& a = view.weighted;
  a.rows = n;
  a.row_ptr.assign(1, 0);
  std::vector<std::uint32_t> count(n, 0);
  std::vector<NodeId> touched;
  for (NodeId i = 0; i < n; ++i) {
    touched.clear();
    for (auto alpha : members[i]) {
      for (NodeId j : h.hyperedge(alpha)) {
        if (j == i) continue;
        if (count[j]++ == 0) touched.push_back(j);
      }
    }
    std::sort(touched.begin(), touched.end());
    for (NodeId j : touched) {
      a.cols.push_back(j);
      a.values.push_back(count[j]);
      count[j] = 0;
    }
    a.row_ptr.push_back(a.cols.size());
  }

  view.node_degree.resize(n);
  view.weighted_degree.resize(n);
  for (NodeId i = 0; i < n; ++i) {
    view.node_degree[i] = static_cast<std::uint32_t>(a.row_ptr[i + 1] - a.row_ptr[i]);
    std::uint64_t s = 0;
    for (auto w : a.row_values(i)) s += w;
    view.weighted_degree[i] = s;
  }
  return view;
}

enum class TwoSimplexRule {
  containment,  // every 3-subset of every hyperedge
  size3only,    // only hyperedges with exactly three members
};

struct TwoSimplexOptions {
  TwoSimplexRule rule = TwoSimplexRule::containment;
  std::size_t max_hyperedge_size = 25;
};

/// Weighted 2-simplex tensor B stored as canonically sorted triples.
struct TwoSimplexSet {
  std::vector<std::array<NodeId, 3>> triples;  // i < k < l, sorted lexicographically
  std::vector<std::uint32_t> weight;           // B_ikl >= 1
  std::vector<std::size_t> node_ptr{0};        // node -> triple ids (CSR)
  std::vector<std::uint32_t> node_triples;
  std::size_t skipped_hyperedges = 0;  // over the size cap, contributed 1-simplices only

  std::size_t size() const noexcept { return triples.size(); }
  std::span<const std::uint32_t> triples_of(NodeId v) const {
    return {node_triples.data() + node_ptr[v], node_ptr[v + 1] - node_ptr[v]};
  }
  /// B_ikl for any ordering of the three ids; 0 when absent.
  std::uint32_t at(NodeId i, NodeId k, NodeId l) const {
    std::array<NodeId, 3> t{i, k, l};
    std::sort(t.begin(), t.end());
    const auto it = std::lower_bound(triples.begin(), triples.end(), t);
    return (it != triples.end() && *it == t) ? weight[static_cast<std::size_t>(it - triples.begin())]
                                             : 0u;
  }
  /// Sum over triples containing v of their weight (v's weighted 2-simplex count).
  std::uint64_t weighted_count(NodeId v) const {
    std::uint64_t s = 0;
    for (auto t : triples_of(v)) s += weight[t];
    return s;
  }
};

inline TwoSimplexSet enumerate_two_simplices(const Hypergraph& h, const TwoSimplexOptions& opts = {}) {
  const std::size_t n = h.num_nodes();
  TwoSimplexSet out;
  std::unordered_map<std::uint64_t, std::uint32_t> counts;
  const auto key = [n](NodeId i, NodeId k, NodeId l) {
    return (static_cast<std::uint64_t>(i) * n + k) * n + l;
  };
  if (n > 2'000'000) throw std::invalid_argument("enumerate_two_simplices: too many nodes");
  for (const auto& e : h.hyperedges()) {
    const std::size_t s = e.size();
    if (s < 3) continue;
    if (opts.rule == TwoSimplexRule::size3only && s != 3) continue;
    if (s > opts.max_hyperedge_size) {
      ++out.skipped_hyperedges;
      continue;
    }
    for (std::size_t x = 0; x < s; ++x)
      for (std::size_t y = x + 1; y < s; ++y)
        for (std::size_t z = y + 1; z < s; ++z) ++counts[key(e[x], e[y], e[z])];
  }

  std::vector<std::pair<std::uint64_t, std::uint32_t>> sorted(counts.begin(), counts.end());
  std::sort(sorted.begin(), sorted.end());
  out.triples.reserve(sorted.size());
  out.weight.reserve(sorted.size());
  for (const auto& [k, w] : sorted) {
    const auto l = static_cast<NodeId>(k % n);
    const auto rest = k / n;
    out.triples.push_back({static_cast<NodeId>(rest / n), static_cast<NodeId>(rest % n), l});
    out.weight.push_back(w);
  }

  std::vector<std::size_t> deg(n, 0);
  for (const auto& t : out.triples)
    for (NodeId v : t) ++deg[v];
  out.node_ptr.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) out.node_ptr[v + 1] = out.node_ptr[v] + deg[v];
  out.node_triples.resize(out.node_ptr[n]);
  std::vector<std::size_t> fill(out.node_ptr.begin(), out.node_ptr.end() - 1);
  for (std::uint32_t t = 0; t < out.triples.size(); ++t)
    for (NodeId v : out.triples[t]) out.node_triples[fill[v]++] = t;
  return out;
}

/// Directed links i -> j for every binary adjacency entry, ordered by (i, j).
///
/// Link ids coincide with positions in the CSR storage of A, so out-links of
/// i are the contiguous range [out_begin(i), out_end(i)).
struct LinkIndex {
  std::vector<NodeId> source;
  std::vector<NodeId> target;
  std::vector<LinkId> reverse_link;
  std::vector<std::size_t> row_ptr{0};   // out-links per node
  std::vector<std::size_t> in_ptr{0};    // in-links per node (CSR)
  std::vector<LinkId> in_list;
  std::vector<std::uint32_t> weight;     // A_ij of the link

  std::size_t size() const noexcept { return source.size(); }
  LinkId out_begin(NodeId i) const { return static_cast<LinkId>(row_ptr[i]); }
  LinkId out_end(NodeId i) const { return static_cast<LinkId>(row_ptr[i + 1]); }
  std::span<const LinkId> in_links(NodeId i) const {
    return {in_list.data() + in_ptr[i], in_ptr[i + 1] - in_ptr[i]};
  }
  /// Link id of i -> j; throws when the nodes are not adjacent.
  LinkId lookup(NodeId i, NodeId j) const {
    const auto first = target.begin() + static_cast<std::ptrdiff_t>(row_ptr[i]);
    const auto last = target.begin() + static_cast<std::ptrdiff_t>(row_ptr[i + 1]);
    const auto it = std::lower_bound(first, last, j);
    if (it == last || *it != j) {
      throw std::out_of_range("link " + std::to_string(i) + "->" + std::to_string(j) +
                              " does not exist");
    }
    return static_cast<LinkId>(it - target.begin());
  }
};

inline LinkIndex build_link_index(const AdjacencyView& view) {
  const auto& a = view.weighted;
  LinkIndex idx;
  const std::size_t n = view.num_nodes;
  if (a.nnz() >= std::numeric_limits<LinkId>::max()) {
    throw std::length_error("build_link_index: too many links");
  }
  idx.row_ptr = a.row_ptr;
  idx.target = a.cols;
  idx.weight = a.values;
  idx.source.resize(a.nnz());
  for (NodeId i = 0; i < n; ++i)
    for (std::size_t p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) idx.source[p] = i;

  idx.reverse_link.resize(a.nnz());
  for (LinkId id = 0; id < a.nnz(); ++id) {
    idx.reverse_link[id] = idx.lookup(idx.target[id], idx.source[id]);
  }
  // The reverse of i's out-links, in neighbor order, are exactly i's in-links.
  idx.in_ptr = idx.row_ptr;
  idx.in_list.resize(a.nnz());
  for (LinkId id = 0; id < a.nnz(); ++id) idx.in_list[id] = idx.reverse_link[id];
  return idx;
}

/// Result of restricting a hypergraph to its largest connected component.
struct ComponentRestriction {
  Hypergraph hypergraph;
  std::vector<NodeId> old_to_new;  // kNoNode for dropped nodes
  std::vector<NodeId> new_to_old;
};

/// Connected components under binary adjacency; labels are 0.. in order of
/// smallest member id.
inline std::vector<std::uint32_t> component_labels(const AdjacencyView& view, std::size_t* count = nullptr) {
  const std::size_t n = view.num_nodes;
  std::vector<std::uint32_t> label(n, std::numeric_limits<std::uint32_t>::max());
  std::vector<NodeId> stack;
  std::uint32_t next = 0;
  for (NodeId s = 0; s < n; ++s) {
    if (label[s] != std::numeric_limits<std::uint32_t>::max()) continue;
    label[s] = next;
    stack.assign(1, s);
    while (!stack.empty()) {
      const NodeId u = stack.back();
      stack.pop_back();
      for (NodeId v : view.neighbors(u)) {
        if (label[v] == std::numeric_limits<std::uint32_t>::max()) {
          label[v] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  if (count) *count = next;
  return label;
}

/// Largest component under binary adjacency (ties: the one holding the
/// smallest node id), relabeled contiguously in increasing old-id order.
inline ComponentRestriction giant_component(const Hypergraph& h) {
  ComponentRestriction out;
  const std::size_t n = h.num_nodes();
  out.old_to_new.assign(n, kNoNode);
  if (n == 0) return out;

  const auto view = build_adjacency(h);
  std::size_t ncomp = 0;
  const auto label = component_labels(view, &ncomp);
  std::vector<std::size_t> sizes(ncomp, 0);
  for (auto l : label) ++sizes[l];
  const auto best = static_cast<std::uint32_t>(
      std::max_element(sizes.begin(), sizes.end()) - sizes.begin());

  for (NodeId v = 0; v < n; ++v) {
    if (label[v] == best) {
      out.old_to_new[v] = static_cast<NodeId>(out.new_to_old.size());
      out.new_to_old.push_back(v);
    }
  }
  std::vector<std::vector<NodeId>> edges;
  for (const auto& e : h.hyperedges()) {
    std::vector<NodeId> kept;
    for (NodeId v : e)
      if (out.old_to_new[v] != kNoNode) kept.push_back(out.old_to_new[v]);
    if (!kept.empty()) edges.push_back(std::move(kept));
  }
  out.hypergraph = Hypergraph(out.new_to_old.size(), std::move(edges));
  return out;
}

struct SimplexDensities {
  double k1_mean = 0.0;  // mean over nodes of sum_j A_ij
  double k2_mean = 0.0;  // mean over nodes of sum_{k<l} B_ikl
};

inline SimplexDensities simplex_densities(const AdjacencyView& view, const TwoSimplexSet& simplices) {
  SimplexDensities d;
  if (view.num_nodes == 0) return d;
  std::uint64_t k1 = 0;
  for (auto w : view.weighted_degree) k1 += w;
  std::uint64_t k2 = 0;
  for (auto w : simplices.weight) k2 += 3ull * w;
  d.k1_mean = static_cast<double>(k1) / static_cast<double>(view.num_nodes);
  d.k2_mean = static_cast<double>(k2) / static_cast<double>(view.num_nodes);
  return d;
}

inline SimplexDensities simplex_densities(const Hypergraph& h, const TwoSimplexOptions& opts = {}) {
  return simplex_densities(build_adjacency(h), enumerate_two_simplices(h, opts));
}

/// Everything the dynamics, message passing and scoring need, built once.
struct HypergraphViews {
  Hypergraph hypergraph;
  AdjacencyView adjacency;
  TwoSimplexSet simplices;
  LinkIndex links;

  explicit HypergraphViews(Hypergraph h, const TwoSimplexOptions& opts = {})
      : hypergraph(std::move(h)),
        adjacency(build_adjacency(hypergraph)),
        simplices(enumerate_two_simplices(hypergraph, opts)),
        links(build_link_index(adjacency)) {}

  std::size_t num_nodes() const noexcept { return adjacency.num_nodes; }
};

}  // namespace hyperim
