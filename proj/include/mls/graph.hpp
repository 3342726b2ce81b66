#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mls/rational.hpp"

namespace mls {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Edge {
  EdgeId id = 0;
  VertexId u = 0;
  VertexId v = 0;
  Rational length;

  [[nodiscard]] bool is_loop() const { return u == v; }
  friend bool operator==(const Edge&, const Edge&) = default;
};

// An edge together with a traversal direction. Forward runs u -> v.
class DirectedEdge {
 public:
  constexpr DirectedEdge() = default;
  constexpr DirectedEdge(EdgeId edge, bool reversed) : edge_(edge), reversed_(reversed) {}

  static constexpr DirectedEdge forward(EdgeId e) { return {e, false}; }
  static constexpr DirectedEdge backward(EdgeId e) { return {e, true}; }

  [[nodiscard]] constexpr EdgeId edge() const { return edge_; }
  [[nodiscard]] constexpr bool is_reversed() const { return reversed_; }
  [[nodiscard]] constexpr DirectedEdge reverse() const { return {edge_, !reversed_}; }
  // Total order used for every deterministic tie-break: by edge id, forward first.
  [[nodiscard]] constexpr std::uint64_t key() const { return (std::uint64_t{edge_} << 1U) | (reversed_ ? 1U : 0U); }

  friend constexpr bool operator==(DirectedEdge a, DirectedEdge b) { return a.key() == b.key(); }
  friend constexpr auto operator<=>(DirectedEdge a, DirectedEdge b) { return a.key() <=> b.key(); }

 private:
  EdgeId edge_ = 0;
  bool reversed_ = false;
};

// Finite metric multigraph. Parallel edges and self-loops are allowed.
// Construction never rejects input; validate_graph() reports violations and
// operations that need a well-formed graph check what they rely on.
class MetricGraph {
 public:
  MetricGraph() = default;
  MetricGraph(std::string name, std::vector<VertexId> vertices, std::vector<Edge> edges)
      : name_(std::move(name)), vertices_(std::move(vertices)), edges_(std::move(edges)) {
    std::sort(vertices_.begin(), vertices_.end());
    std::stable_sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) { return a.id < b.id; });
    build_indices();
  }

  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] std::span<const VertexId> vertices() const { return vertices_; }
  [[nodiscard]] std::span<const Edge> edges() const { return edges_; }
  [[nodiscard]] std::size_t vertex_count() const { return vertices_.size(); }
  [[nodiscard]] std::size_t edge_count() const { return edges_.size(); }

  [[nodiscard]] bool has_vertex(VertexId v) const { return std::binary_search(vertices_.begin(), vertices_.end(), v); }
  [[nodiscard]] bool has_edge(EdgeId e) const { return find_edge(e) != npos; }

  [[nodiscard]] std::size_t vertex_index(VertexId v) const {
    auto it = std::lower_bound(vertices_.begin(), vertices_.end(), v);
    if (it == vertices_.end() || *it != v) throw GraphError("unknown vertex id " + std::to_string(v));
    return static_cast<std::size_t>(it - vertices_.begin());
  }
  [[nodiscard]] std::size_t edge_index(EdgeId e) const {
    const std::size_t i = find_edge(e);
    if (i == npos) throw GraphError("unknown edge id " + std::to_string(e));
    return i;
  }
  [[nodiscard]] const Edge& edge(EdgeId e) const { return edges_[edge_index(e)]; }
  [[nodiscard]] const Rational& length(EdgeId e) const { return edge(e).length; }

  [[nodiscard]] VertexId tail(DirectedEdge d) const {
    const Edge& e = edge(d.edge());
    return d.is_reversed() ? e.v : e.u;
  }
  [[nodiscard]] VertexId head(DirectedEdge d) const {
    const Edge& e = edge(d.edge());
    return d.is_reversed() ? e.u : e.v;
  }

  // Directed edges leaving v, sorted by DirectedEdge order. A self-loop at v
  // contributes both of its orientations.
  [[nodiscard]] std::span<const DirectedEdge> out_edges(VertexId v) const { return adjacency_[vertex_index(v)]; }

  [[nodiscard]] bool is_connected() const { return components_ <= 1; }
  [[nodiscard]] std::size_t component_count() const { return components_; }
  // First Betti number |E| - |V| + #components.
  [[nodiscard]] std::int64_t betti_number() const {
    return static_cast<std::int64_t>(edges_.size()) - static_cast<std::int64_t>(vertices_.size()) +
           static_cast<std::int64_t>(components_);
  }

  [[nodiscard]] Rational total_length() const {
    Rational total;
    for (const Edge& e : edges_) total += e.length;
    return total;
  }

  // Lengths rescaled to a common denominator; used for fast exact sums.
  // Valid only when has_common_scale() (lcm of denominators fits in 64 bits).
  [[nodiscard]] bool has_common_scale() const { return scale_ok_; }
  [[nodiscard]] std::int64_t common_scale() const { return scale_; }
  [[nodiscard]] std::int64_t scaled_length_at(std::size_t edge_idx) const { return scaled_[edge_idx]; }

  [[nodiscard]] MetricGraph renamed(std::string name) const {
    MetricGraph g = *this;
    g.name_ = std::move(name);
    return g;
  }

  [[nodiscard]] VertexId max_vertex_id() const { return vertices_.empty() ? 0 : vertices_.back(); }
  [[nodiscard]] EdgeId max_edge_id() const { return edges_.empty() ? 0 : edges_.back().id; }

  friend bool operator==(const MetricGraph& a, const MetricGraph& b) {
    return a.name_ == b.name_ && a.vertices_ == b.vertices_ && a.edges_ == b.edges_;
  }

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  [[nodiscard]] std::size_t find_edge(EdgeId e) const {
    if (!dense_edge_index_.empty()) {
      return e < dense_edge_index_.size() ? dense_edge_index_[e] : npos;
    }
    auto it = std::lower_bound(edges_.begin(), edges_.end(), e, [](const Edge& a, EdgeId id) { return a.id < id; });
    if (it == edges_.end() || it->id != e) return npos;
    return static_cast<std::size_t>(it - edges_.begin());
  }

  [[nodiscard]] std::size_t find_vertex(VertexId v) const {
    auto it = std::lower_bound(vertices_.begin(), vertices_.end(), v);
    if (it == vertices_.end() || *it != v) return npos;
    return static_cast<std::size_t>(it - vertices_.begin());
  }

  void build_indices() {
    if (!edges_.empty() && edges_.back().id < 4 * edges_.size() + 1024) {
      dense_edge_index_.assign(edges_.back().id + 1, npos);
      for (std::size_t i = edges_.size(); i-- > 0;) dense_edge_index_[edges_[i].id] = i;
    }

    adjacency_.assign(vertices_.size(), {});
    std::vector<std::size_t> parent(vertices_.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    components_ = vertices_.size();
    for (const Edge& e : edges_) {
      const std::size_t iu = find_vertex(e.u);
      const std::size_t iv = find_vertex(e.v);
      if (iu == npos || iv == npos) continue;
      adjacency_[iu].push_back(DirectedEdge::forward(e.id));
      adjacency_[iv].push_back(DirectedEdge::backward(e.id));
      const std::size_t ru = find(iu);
      const std::size_t rv = find(iv);
      if (ru != rv) {
        parent[ru] = rv;
        --components_;
      }
    }
    for (auto& out : adjacency_) std::sort(out.begin(), out.end());

    scale_ok_ = true;
    scale_ = 1;
    for (const Edge& e : edges_) {
      const std::int64_t g = std::gcd(scale_, e.length.den());
      int128 l = static_cast<int128>(scale_ / g) * e.length.den();
      if (l > (std::int64_t{1} << 40)) {
        scale_ok_ = false;
        break;
      }
      scale_ = static_cast<std::int64_t>(l);
    }
    scaled_.clear();
    if (scale_ok_) {
      scaled_.reserve(edges_.size());
      for (const Edge& e : edges_) {
        const int128 s = static_cast<int128>(e.length.num()) * (scale_ / e.length.den());
        if (s > (std::int64_t{1} << 52) || s < -(std::int64_t{1} << 52)) {
          scale_ok_ = false;
          scaled_.clear();
          break;
        }
        scaled_.push_back(static_cast<std::int64_t>(s));
      }
    }
  }

  std::string name_;
  std::vector<VertexId> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> dense_edge_index_;
  std::vector<std::vector<DirectedEdge>> adjacency_;
  std::size_t components_ = 0;
  std::int64_t scale_ = 1;
  bool scale_ok_ = true;
  std::vector<std::int64_t> scaled_;
};

struct ValidationReport {
  std::vector<std::string> violations;

  [[nodiscard]] bool ok() const { return violations.empty(); }
  [[nodiscard]] bool mentions(std::string_view needle) const {
    return std::any_of(violations.begin(), violations.end(),
                       [&](const std::string& v) { return v.find(needle) != std::string::npos; });
  }
};

inline ValidationReport validate_graph(const MetricGraph& g) {
  ValidationReport report;
  const auto vs = g.vertices();
  for (std::size_t i = 1; i < vs.size(); ++i) {
    if (vs[i] == vs[i - 1]) report.violations.push_back("duplicate vertex id " + std::to_string(vs[i]));
  }
  const auto es = g.edges();
  for (std::size_t i = 0; i < es.size(); ++i) {
    const Edge& e = es[i];
    if (i > 0 && es[i - 1].id == e.id) report.violations.push_back("duplicate edge id " + std::to_string(e.id));
    if (!e.length.is_positive()) {
      report.violations.push_back("non-positive length on edge " + std::to_string(e.id) + " (" + e.length.str() + ")");
    }
    if (!g.has_vertex(e.u) || !g.has_vertex(e.v)) {
      report.violations.push_back("dangling endpoint on edge " + std::to_string(e.id));
    }
  }
  if (!g.is_connected()) {
    report.violations.push_back("disconnected: " + std::to_string(g.component_count()) + " components");
  }
  return report;
}

// Number of edge-ends at v; a self-loop counts twice.
inline std::size_t vertex_degree(const MetricGraph& g, VertexId v) { return g.out_edges(v).size(); }

}  // namespace mls
