#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "mls/edge_path.hpp"
#include "mls/graph.hpp"
#include "mls/word_calculus.hpp"

namespace mls {

// Maximal branch-free arc of the core. For a circle core the single segment
// is the whole cycle with x == y.
struct Segment {
  VertexId x = 0;
  VertexId y = 0;
  EdgePath path;  // x to y through core-degree-2 vertices
  Rational length;

  [[nodiscard]] bool is_loop() const { return x == y; }
};

// A component of g minus the core, closed up; `attach` is where it meets the
// core (absent only when g is a tree and the core is empty).
struct ComplementTree {
  MetricGraph tree;
  std::optional<VertexId> attach;
};

struct SegmentPosition {
  std::size_t segment = 0;
  std::size_t offset = 0;  // index of the edge along the segment path
  bool reversed = false;   // edge traversed backwards by the segment path
};

struct CoreDecomposition {
  MetricGraph core;  // subgraph of the ambient graph; ids are shared
  std::vector<ComplementTree> complements;
  std::vector<VertexId> branch_points;  // ascending
  std::vector<Segment> segments;
  std::map<EdgeId, SegmentPosition> segment_of;

  [[nodiscard]] bool empty() const { return core.edge_count() == 0; }
  [[nodiscard]] bool is_branch_point(VertexId v) const {
    return std::binary_search(branch_points.begin(), branch_points.end(), v);
  }
};

namespace detail {

inline MetricGraph induced_subgraph(const MetricGraph& g, const std::string& name, std::span<const VertexId> vertices,
                                    std::span<const EdgeId> edges) {
  std::vector<Edge> es;
  es.reserve(edges.size());
  for (EdgeId e : edges) es.push_back(g.edge(e));
  return MetricGraph(name, std::vector<VertexId>(vertices.begin(), vertices.end()), std::move(es));
}

// Walks from directed edge `first` until reaching a vertex accepted by `stop`.
template <typename Stop>
EdgePath walk_segment(const MetricGraph& core, VertexId from, DirectedEdge first, Stop stop) {
  EdgePath p{from, core.head(first), {first}};
  while (!stop(p.end)) {
    DirectedEdge next = p.steps.back();
    bool found = false;
    for (DirectedEdge d : core.out_edges(p.end)) {
      if (d != p.steps.back().reverse()) {
        next = d;
        found = true;
        break;
      }
    }
    if (!found) throw GraphError("segment walk reached a leaf of the core");
    p.steps.push_back(next);
    p.end = core.head(next);
  }
  return p;
}

}  // namespace detail

// Iterated leaf pruning plus the segment and complement structure.
inline CoreDecomposition compute_core(const MetricGraph& g) {
  if (!g.is_connected()) {
    throw GraphError("core needs a connected graph (" + std::to_string(g.component_count()) + " components)");
  }
  const std::size_t n = g.vertex_count();
  std::vector<std::size_t> degree(n);
  for (std::size_t i = 0; i < n; ++i) degree[i] = g.out_edges(g.vertices()[i]).size();
  std::vector<bool> edge_alive(g.edge_count(), true);
  std::vector<bool> vertex_alive(n, true);
  std::vector<std::size_t> leaves;
  for (std::size_t i = 0; i < n; ++i) {
    if (degree[i] <= 1) leaves.push_back(i);
  }
  while (!leaves.empty()) {
    const std::size_t i = leaves.back();
    leaves.pop_back();
    if (!vertex_alive[i] || degree[i] > 1) continue;
    vertex_alive[i] = false;
    for (DirectedEdge d : g.out_edges(g.vertices()[i])) {
      const std::size_t ei = g.edge_index(d.edge());
      if (!edge_alive[ei]) continue;
      edge_alive[ei] = false;
      const std::size_t j = g.vertex_index(g.head(d));
      degree[i] -= 1;
      degree[j] -= 1;
      if (vertex_alive[j] && degree[j] <= 1) leaves.push_back(j);
    }
  }

  CoreDecomposition out;
  std::vector<VertexId> core_vertices;
  std::vector<EdgeId> core_edges;
  for (std::size_t i = 0; i < n; ++i) {
    if (vertex_alive[i]) core_vertices.push_back(g.vertices()[i]);
  }
  for (const Edge& e : g.edges()) {
    if (edge_alive[g.edge_index(e.id)]) core_edges.push_back(e.id);
  }
  out.core = detail::induced_subgraph(g, g.name() + "-core", core_vertices, core_edges);

  // Complement components: union the non-core vertices along pruned edges.
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (const Edge& e : g.edges()) {
    if (edge_alive[g.edge_index(e.id)]) continue;
    const std::size_t a = g.vertex_index(e.u);
    const std::size_t b = g.vertex_index(e.v);
    if (!vertex_alive[a] && !vertex_alive[b]) parent[find(a)] = find(b);
  }
  std::map<std::size_t, std::pair<std::set<VertexId>, std::vector<EdgeId>>> groups;
  std::map<std::size_t, std::set<VertexId>> attach_of;
  for (const Edge& e : g.edges()) {
    if (edge_alive[g.edge_index(e.id)]) continue;
    const std::size_t a = g.vertex_index(e.u);
    const std::size_t b = g.vertex_index(e.v);
    const std::size_t root = find(vertex_alive[a] ? b : a);
    auto& grp = groups[root];
    grp.first.insert(e.u);
    grp.first.insert(e.v);
    grp.second.push_back(e.id);
    if (vertex_alive[a]) attach_of[root].insert(e.u);
    if (vertex_alive[b]) attach_of[root].insert(e.v);
  }
  if (g.edge_count() == 0) groups[0].first.insert(g.vertices().front());
  for (auto& [root, grp] : groups) {
    ComplementTree t;
    const std::vector<VertexId> vs(grp.first.begin(), grp.first.end());
    t.tree = detail::induced_subgraph(g, g.name() + "-tree", vs, grp.second);
    const auto& at = attach_of[root];
    if (at.size() > 1) throw std::logic_error("complement component meets the core more than once");
    if (!at.empty()) t.attach = *at.begin();
    out.complements.push_back(std::move(t));
  }
  std::sort(out.complements.begin(), out.complements.end(), [](const ComplementTree& a, const ComplementTree& b) {
    return a.tree.vertices().front() < b.tree.vertices().front();
  });

  if (out.core.edge_count() == 0) return out;
  const MetricGraph& core = out.core;
  for (VertexId v : core.vertices()) {
    if (core.out_edges(v).size() >= 3) out.branch_points.push_back(v);
  }

  std::vector<bool> used(core.edge_count(), false);
  auto record = [&](EdgePath p) {
    const std::size_t idx = out.segments.size();
    for (std::size_t k = 0; k < p.steps.size(); ++k) {
      used[core.edge_index(p.steps[k].edge())] = true;
      out.segment_of[p.steps[k].edge()] = SegmentPosition{idx, k, p.steps[k].is_reversed()};
    }
    const Rational len = path_length(core, p);
    out.segments.push_back(Segment{p.start, p.end, std::move(p), len});
  };
  if (out.branch_points.empty()) {
    const VertexId start = core.vertices().front();
    record(detail::walk_segment(core, start, core.out_edges(start).front(), [&](VertexId v) { return v == start; }));
    return out;
  }
  for (VertexId b : out.branch_points) {
    for (DirectedEdge d : core.out_edges(b)) {
      if (used[core.edge_index(d.edge())]) continue;
      record(detail::walk_segment(core, b, d, [&](VertexId v) { return out.is_branch_point(v); }));
    }
  }
  return out;
}

// Circumference when the core has no branch points, i.e. is a single cycle.
inline std::optional<Rational> is_circle(const CoreDecomposition& c) {
  if (c.empty()) throw GraphError("empty core has no circle structure");
  if (!c.branch_points.empty()) return std::nullopt;
  return c.core.total_length();
}

// True iff g deformation retracts onto `sub`: every component of g minus sub
// is a tree whose closure meets sub in exactly one vertex.
inline bool retraction_check(const MetricGraph& g, const MetricGraph& sub) {
  if (sub.vertex_count() == 0 || !sub.is_connected()) return false;
  for (VertexId v : sub.vertices()) {
    if (!g.has_vertex(v)) return false;
  }
  std::vector<bool> sub_edge(g.edge_count(), false);
  for (const Edge& e : sub.edges()) {
    if (!g.has_edge(e.id)) return false;
    const Edge& ge = g.edge(e.id);
    if (ge.u != e.u || ge.v != e.v) return false;
    sub_edge[g.edge_index(e.id)] = true;
  }
  const std::size_t n = g.vertex_count();
  std::vector<bool> sub_vertex(n, false);
  for (VertexId v : sub.vertices()) sub_vertex[g.vertex_index(v)] = true;

  // Nodes: vertices 0..n-1, then edges n..n+m-1.
  const std::size_t m = g.edge_count();
  std::vector<std::size_t> parent(n + m);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (std::size_t k = 0; k < m; ++k) {
    if (sub_edge[k]) continue;
    const Edge& e = g.edges()[k];
    for (VertexId w : {e.u, e.v}) {
      const std::size_t wi = g.vertex_index(w);
      if (!sub_vertex[wi]) parent[find(n + k)] = find(wi);
    }
  }
  struct Tally {
    std::size_t vertices = 0;
    std::size_t edges = 0;
    std::size_t contacts = 0;
  };
  std::map<std::size_t, Tally> comps;
  for (std::size_t i = 0; i < n; ++i) {
    if (!sub_vertex[i]) comps[find(i)].vertices += 1;
  }
  for (std::size_t k = 0; k < m; ++k) {
    if (sub_edge[k]) continue;
    const Edge& e = g.edges()[k];
    auto& t = comps[find(n + k)];
    t.edges += 1;
    for (VertexId w : {e.u, e.v}) {
      if (sub_vertex[g.vertex_index(w)]) t.contacts += 1;
    }
  }
  return std::all_of(comps.begin(), comps.end(),
                     [](const auto& kv) { return kv.second.contacts == 1 && kv.second.edges == kv.second.vertices; });
}

}  // namespace mls
