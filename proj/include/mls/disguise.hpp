#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mls/free_group.hpp"
#include "mls/fundamental_group.hpp"
#include "mls/hull.hpp"
#include "mls/metric.hpp"
#include "mls/word_calculus.hpp"

namespace mls {

struct DisguiseOptions {
  std::size_t subdivisions = 3;   // edges to subdivide (with repetition)
  std::size_t max_cuts = 2;       // new vertices per subdivision
  std::size_t pendant_trees = 2;
  std::size_t max_tree_edges = 3;
  std::int64_t length_bound = 5;  // pendant edge lengths
  std::int64_t max_denominator = 3;
  bool relabel = true;
};

// Ground truth of a disguise: where g1's vertices and edges went, the branch
// map on the core, and the word tau with f#(g) = tau phi(g) tau^-1 for the
// certificate anchored at the least branch point.
struct DisguiseTruth {
  std::map<VertexId, VertexId> vertex_map;
  std::map<EdgeId, EdgePath> edge_map;
  std::map<VertexId, VertexId> branch_map;
  GroupWord tau;
};

struct Disguise {
  MetricGraph graph;
  HomPair phi;
  DisguiseTruth truth;
};

namespace detail {

struct Tracking {
  MetricGraph h;
  std::map<EdgeId, std::vector<DirectedEdge>> forward_edges;  // g1 edge -> steps in h
  std::map<VertexId, VertexId> forward_vertices;              // g1 vertex -> h vertex
  std::map<EdgeId, std::vector<DirectedEdge>> back_edges;     // h edge -> steps in g1
  std::map<VertexId, VertexId> back_vertices;                 // h vertex -> g1 vertex
};

inline std::vector<DirectedEdge> map_steps(const std::map<EdgeId, std::vector<DirectedEdge>>& m,
                                           const std::vector<DirectedEdge>& steps) {
  std::vector<DirectedEdge> out;
  for (DirectedEdge d : steps) {
    const auto& img = m.at(d.edge());
    if (d.is_reversed()) {
      for (auto it = img.rbegin(); it != img.rend(); ++it) out.push_back(it->reverse());
    } else {
      out.insert(out.end(), img.begin(), img.end());
    }
  }
  return out;
}

}  // namespace detail

// Isometric copy of g1: random subdivisions, pendant trees and relabelling,
// with the induced isomorphism of fundamental groups and its inverse.
inline Disguise disguise(const MetricGraph& g1, std::uint64_t seed, const DisguiseOptions& options = {}) {
  const CoreDecomposition core1 = compute_core(g1);
  if (core1.empty()) throw GraphError("core is empty: a contractible graph cannot be disguised");
  std::mt19937_64 rng(seed);
  auto uniform = [&rng](std::int64_t lo, std::int64_t hi) { return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng); };

  detail::Tracking t;
  t.h = g1;
  for (VertexId v : g1.vertices()) t.forward_vertices[v] = t.back_vertices[v] = v;
  for (const Edge& e : g1.edges()) t.forward_edges[e.id] = t.back_edges[e.id] = {DirectedEdge::forward(e.id)};

  for (std::size_t s = 0; s < options.subdivisions && options.max_cuts > 0; ++s) {
    const Edge e = t.h.edges()[static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(t.h.edge_count()) - 1))];
    const auto cuts = static_cast<std::size_t>(uniform(1, static_cast<std::int64_t>(options.max_cuts)));
    const auto den = uniform(static_cast<std::int64_t>(cuts) + 1, static_cast<std::int64_t>(cuts) + 4);
    std::vector<std::int64_t> nums(static_cast<std::size_t>(den - 1));
    std::iota(nums.begin(), nums.end(), 1);
    std::shuffle(nums.begin(), nums.end(), rng);
    nums.resize(cuts);
    std::sort(nums.begin(), nums.end());
    std::vector<Rational> fractions;
    for (auto n : nums) fractions.emplace_back(n, den);
    const Subdivision sd = subdivide_edge_detailed(t.h, e.id, fractions);
    std::vector<DirectedEdge> chain;
    for (EdgeId c : sd.chain) chain.push_back(DirectedEdge::forward(c));
    for (auto& [id, steps] : t.forward_edges) {
      std::vector<DirectedEdge> next;
      for (DirectedEdge d : steps) {
        if (d.edge() != e.id) {
          next.push_back(d);
        } else if (!d.is_reversed()) {
          next.insert(next.end(), chain.begin(), chain.end());
        } else {
          for (auto it = chain.rbegin(); it != chain.rend(); ++it) next.push_back(it->reverse());
        }
      }
      steps = std::move(next);
    }
    const auto old = t.back_edges.at(e.id);
    for (std::size_t i = 0; i < sd.chain.size(); ++i) {
      t.back_edges[sd.chain[i]] = i + 1 == sd.chain.size() ? old : std::vector<DirectedEdge>{};
    }
    for (VertexId v : sd.interior) t.back_vertices[v] = t.back_vertices.at(e.u);
    t.h = sd.graph;
  }

  for (std::size_t s = 0; s < options.pendant_trees && options.max_tree_edges > 0; ++s) {
    const auto m = static_cast<std::size_t>(uniform(1, static_cast<std::int64_t>(options.max_tree_edges)));
    std::vector<VertexId> tv(m + 1);
    std::iota(tv.begin(), tv.end(), 0);
    std::vector<Edge> te;
    for (std::size_t i = 1; i <= m; ++i) {
      const auto den = uniform(1, options.max_denominator);
      te.push_back(Edge{static_cast<EdgeId>(i - 1), static_cast<VertexId>(uniform(0, static_cast<std::int64_t>(i) - 1)),
                        static_cast<VertexId>(i), Rational(uniform(1, options.length_bound * den), den)});
    }
    const MetricGraph tree("pendant", tv, te);
    const VertexId at = t.h.vertices()[static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(t.h.vertex_count()) - 1))];
    const TreeAttachment ta = attach_tree_detailed(t.h, at, tree, 0);
    for (const auto& [tvx, hv] : ta.vertex_map) {
      if (tvx != 0) t.back_vertices[hv] = t.back_vertices.at(at);
    }
    for (const auto& [tex, he] : ta.edge_map) t.back_edges[he] = {};
    t.h = ta.graph;
  }

  if (options.relabel) {
    std::vector<VertexId> vids(3 * t.h.vertex_count());
    std::iota(vids.begin(), vids.end(), 0);
    std::shuffle(vids.begin(), vids.end(), rng);
    std::vector<EdgeId> eids(3 * t.h.edge_count());
    std::iota(eids.begin(), eids.end(), 0);
    std::shuffle(eids.begin(), eids.end(), rng);
    std::map<VertexId, VertexId> vmap;
    std::map<EdgeId, EdgeId> emap;
    for (std::size_t i = 0; i < t.h.vertex_count(); ++i) vmap[t.h.vertices()[i]] = vids[i];
    for (std::size_t i = 0; i < t.h.edge_count(); ++i) emap[t.h.edges()[i].id] = eids[i];
    std::vector<VertexId> nv;
    std::vector<Edge> ne;
    for (VertexId v : t.h.vertices()) nv.push_back(vmap.at(v));
    for (const Edge& e : t.h.edges()) ne.push_back(Edge{emap.at(e.id), vmap.at(e.u), vmap.at(e.v), e.length});
    for (auto& [id, steps] : t.forward_edges) {
      for (DirectedEdge& d : steps) d = DirectedEdge(emap.at(d.edge()), d.is_reversed());
    }
    for (auto& [v, hv] : t.forward_vertices) hv = vmap.at(hv);
    std::map<EdgeId, std::vector<DirectedEdge>> be;
    std::map<VertexId, VertexId> bv;
    for (auto& [id, steps] : t.back_edges) be[emap.at(id)] = steps;
    for (auto& [v, gv] : t.back_vertices) bv[vmap.at(v)] = gv;
    t.back_edges = std::move(be);
    t.back_vertices = std::move(bv);
    t.h = MetricGraph(t.h.name(), std::move(nv), std::move(ne));
  }

  Disguise out;
  out.graph = t.h.renamed(g1.name() + "-disguise-" + std::to_string(seed));
  const MetricGraph& g2 = out.graph;
  const Basis b1 = spanning_tree(g1);
  const Basis b2 = spanning_tree(g2);

  auto forward_path = [&](const EdgePath& p) {
    return EdgePath{t.forward_vertices.at(p.start), t.forward_vertices.at(p.end), detail::map_steps(t.forward_edges, p.steps)};
  };
  auto back_path = [&](const EdgePath& p) {
    return EdgePath{t.back_vertices.at(p.start), t.back_vertices.at(p.end), detail::map_steps(t.back_edges, p.steps)};
  };

  const EdgePath t2 = shortest_path(g2, b2.basepoint(), t.forward_vertices.at(b1.basepoint()));
  const EdgePath t1 = reverse(reduce_path(back_path(t2)));
  out.phi.name = "disguise-" + std::to_string(seed);
  out.phi.has_inverse = true;
  for (std::uint32_t k = 1; k <= b1.rank(); ++k) {
    out.phi.forward.images.push_back(loop_to_word(b2, then(then(t2, forward_path(b1.generator_loop(k))), reverse(t2))));
  }
  for (std::uint32_t k = 1; k <= b2.rank(); ++k) {
    out.phi.inverse.images.push_back(loop_to_word(b1, then(then(t1, back_path(b2.generator_loop(k))), reverse(t1))));
  }

  out.truth.vertex_map = t.forward_vertices;
  for (const auto& [id, steps] : t.forward_edges) {
    const Edge& e = g1.edge(id);
    out.truth.edge_map[id] = EdgePath{t.forward_vertices.at(e.u), t.forward_vertices.at(e.v), steps};
  }
  for (VertexId x : core1.branch_points) out.truth.branch_map[x] = t.forward_vertices.at(x);
  if (!core1.branch_points.empty()) {
    const VertexId anchor = core1.branch_points.front();
    const EdgePath alpha1 = shortest_path(g1, b1.basepoint(), anchor);
    const EdgePath to_anchor = shortest_path(g2, b2.basepoint(), t.forward_vertices.at(anchor));
    out.truth.tau = loop_to_word(b2, then(then(to_anchor, forward_path(reverse(alpha1))), reverse(t2)));
  }
  return out;
}

// Hom file with the ground truth appended as comment lines.
inline std::string format_disguise_hom(const Disguise& d) {
  std::ostringstream out;
  out << format_hom(d.phi);
  for (const auto& [x, y] : d.truth.branch_map) out << "# truth branch " << x << " -> " << y << '\n';
  out << "# truth tau " << format_word(d.truth.tau) << '\n';
  return out.str();
}

// Reads the `# truth` lines of a disguise hom file.
inline DisguiseTruth parse_truth(std::string_view text) {
  DisguiseTruth truth;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream tok(line);
    std::string hash;
    std::string tag;
    std::string kind;
    if (!(tok >> hash >> tag >> kind) || hash != "#" || tag != "truth") continue;
    if (kind == "branch") {
      VertexId x = 0;
      VertexId y = 0;
      std::string arrow;
      if (tok >> x >> arrow >> y && arrow == "->") truth.branch_map[x] = y;
    } else if (kind == "tau") {
      std::string rest;
      std::getline(tok, rest);
      truth.tau = parse_word(rest);
    }
  }
  return truth;
}

}  // namespace mls
