#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "mls/edge_path.hpp"
#include "mls/graph.hpp"

namespace mls {

// Exact single-source distances, indexed by vertex index. Unreachable
// vertices hold std::nullopt.
inline std::vector<std::optional<Rational>> distances_from(const MetricGraph& g, VertexId source) {
  std::vector<std::optional<Rational>> dist(g.vertex_count());
  std::vector<bool> done(g.vertex_count(), false);
  using Item = std::pair<Rational, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  const std::size_t s = g.vertex_index(source);
  dist[s] = Rational(0);
  queue.emplace(Rational(0), s);
  const auto vs = g.vertices();
  while (!queue.empty()) {
    auto [d, i] = queue.top();
    queue.pop();
    if (done[i]) continue;
    done[i] = true;
    for (DirectedEdge e : g.out_edges(vs[i])) {
      const std::size_t j = g.vertex_index(g.head(e));
      const Rational nd = d + g.length(e.edge());
      if (!dist[j] || nd < *dist[j]) {
        dist[j] = nd;
        queue.emplace(nd, j);
      }
    }
  }
  return dist;
}

inline Rational distance(const MetricGraph& g, VertexId u, VertexId v) {
  const auto dist = distances_from(g, v);
  const auto& d = dist[g.vertex_index(u)];
  if (!d) throw GraphError("vertex " + std::to_string(v) + " is unreachable from " + std::to_string(u));
  return *d;
}

// A distance-minimizing path from u to v. Among all minimizers, the one whose
// directed-edge sequence is lexicographically least.
inline EdgePath shortest_path(const MetricGraph& g, VertexId u, VertexId v) {
  const auto to_target = distances_from(g, v);
  if (!to_target[g.vertex_index(u)]) {
    throw GraphError("vertex " + std::to_string(v) + " is unreachable from " + std::to_string(u));
  }
  EdgePath path{u, v, {}};
  VertexId at = u;
  while (at != v) {
    const Rational here = *to_target[g.vertex_index(at)];
    bool moved = false;
    for (DirectedEdge e : g.out_edges(at)) {
      const auto& there = to_target[g.vertex_index(g.head(e))];
      if (there && *there + g.length(e.edge()) == here) {
        path.steps.push_back(e);
        at = g.head(e);
        moved = true;
        break;
      }
    }
    if (!moved) throw GraphError("shortest path reconstruction failed (non-positive edge length?)");
  }
  return path;
}

struct Subdivision {
  MetricGraph graph;
  std::vector<EdgeId> chain;        // replacement edges, in order from the old u to the old v
  std::vector<VertexId> interior;   // fresh degree-2 vertices, same order
};

// Replaces edge e by a chain through fresh vertices placed at the given
// fractions of its length. The first piece keeps e's id.
inline Subdivision subdivide_edge_detailed(const MetricGraph& g, EdgeId e, std::span<const Rational> fractions) {
  const Edge old = g.edge(e);
  Rational prev(0);
  for (const Rational& f : fractions) {
    if (!(f > prev) || !(f < Rational(1))) {
      throw GraphError("subdivision fractions must be strictly increasing inside (0,1)");
    }
    prev = f;
  }
  std::vector<VertexId> vertices(g.vertices().begin(), g.vertices().end());
  std::vector<Edge> edges;
  for (const Edge& x : g.edges()) {
    if (x.id != e) edges.push_back(x);
  }
  Subdivision out;
  VertexId next_vertex = g.vertex_count() == 0 ? 0 : g.max_vertex_id() + 1;
  EdgeId next_edge = g.max_edge_id() + 1;
  VertexId at = old.u;
  Rational consumed(0);
  for (std::size_t i = 0; i <= fractions.size(); ++i) {
    const Rational upto = i < fractions.size() ? fractions[i] : Rational(1);
    const VertexId to = i < fractions.size() ? next_vertex++ : old.v;
    const EdgeId id = i == 0 ? e : next_edge++;
    edges.push_back(Edge{id, at, to, old.length * (upto - consumed)});
    out.chain.push_back(id);
    if (i < fractions.size()) {
      vertices.push_back(to);
      out.interior.push_back(to);
    }
    at = to;
    consumed = upto;
  }
  out.graph = MetricGraph(g.name(), std::move(vertices), std::move(edges));
  return out;
}

inline MetricGraph subdivide_edge(const MetricGraph& g, EdgeId e, std::span<const Rational> fractions) {
  return subdivide_edge_detailed(g, e, fractions).graph;
}

struct TreeAttachment {
  MetricGraph graph;
  std::map<VertexId, VertexId> vertex_map;  // tree vertex -> vertex of the result
  std::map<EdgeId, EdgeId> edge_map;        // tree edge -> edge of the result
};

inline bool is_tree(const MetricGraph& t) {
  return t.vertex_count() == 0 || (t.is_connected() && t.edge_count() + 1 == t.vertex_count());
}

// Glues `tree` onto g by identifying `root` with v. Other tree vertices and
// all tree edges receive fresh ids.
inline TreeAttachment attach_tree_detailed(const MetricGraph& g, VertexId v, const MetricGraph& tree, VertexId root) {
  if (!g.has_vertex(v)) throw GraphError("attach point " + std::to_string(v) + " is not a vertex");
  TreeAttachment out;
  if (tree.vertex_count() == 0) {
    out.graph = g;
    return out;
  }
  if (!tree.has_vertex(root)) throw GraphError("tree root " + std::to_string(root) + " is not a tree vertex");
  if (!is_tree(tree)) throw GraphError("attached graph contains a cycle or is disconnected");
  std::vector<VertexId> vertices(g.vertices().begin(), g.vertices().end());
  std::vector<Edge> edges(g.edges().begin(), g.edges().end());
  VertexId next_vertex = g.max_vertex_id() + 1;
  EdgeId next_edge = g.edge_count() == 0 ? 0 : g.max_edge_id() + 1;
  for (VertexId t : tree.vertices()) {
    if (t == root) {
      out.vertex_map[t] = v;
    } else {
      out.vertex_map[t] = next_vertex;
      vertices.push_back(next_vertex++);
    }
  }
  for (const Edge& te : tree.edges()) {
    out.edge_map[te.id] = next_edge;
    edges.push_back(Edge{next_edge++, out.vertex_map.at(te.u), out.vertex_map.at(te.v), te.length});
  }
  out.graph = MetricGraph(g.name(), std::move(vertices), std::move(edges));
  return out;
}

inline MetricGraph attach_tree(const MetricGraph& g, VertexId v, const MetricGraph& tree, VertexId root) {
  return attach_tree_detailed(g, v, tree, root).graph;
}

struct RandomGraphParams {
  std::size_t vertices = 5;
  std::size_t extra_edges = 3;
  std::int64_t length_bound = 10;
  std::int64_t max_denominator = 4;
};

// Random spanning tree plus `extra_edges` uniformly random edges (self-loops
// and parallels allowed). Lengths are uniform rationals in (0, length_bound]
// with denominators at most max_denominator. Deterministic per seed.
inline MetricGraph random_graph(std::uint64_t seed, const RandomGraphParams& params) {
  if (params.vertices == 0 || params.length_bound <= 0 || params.max_denominator <= 0) {
    throw GraphError("random_graph parameters must be positive");
  }
  std::mt19937_64 rng(seed);
  auto uniform = [&rng](std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
  };
  auto random_length = [&] {
    const std::int64_t den = uniform(1, params.max_denominator);
    return Rational(uniform(1, params.length_bound * den), den);
  };
  const auto n = static_cast<std::int64_t>(params.vertices);
  std::vector<VertexId> vertices(params.vertices);
  for (std::size_t i = 0; i < params.vertices; ++i) vertices[i] = static_cast<VertexId>(i);
  std::vector<Edge> edges;
  EdgeId next = 0;
  for (std::int64_t i = 1; i < n; ++i) {
    const auto parent = static_cast<VertexId>(uniform(0, i - 1));
    edges.push_back(Edge{next++, parent, static_cast<VertexId>(i), random_length()});
  }
  for (std::size_t k = 0; k < params.extra_edges; ++k) {
    const auto a = static_cast<VertexId>(uniform(0, n - 1));
    const auto b = static_cast<VertexId>(uniform(0, n - 1));
    edges.push_back(Edge{next++, std::min(a, b), std::max(a, b), random_length()});
  }
  return MetricGraph("random-" + std::to_string(seed), std::move(vertices), std::move(edges));
}

}  // namespace mls
