#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

#include "mls/free_group.hpp"
#include "mls/graph.hpp"
#include "mls/metric.hpp"
#include "mls/word_calculus.hpp"

namespace mls {

struct SpanningTreeOptions {
  std::optional<VertexId> root;       // default: least vertex id
  std::vector<EdgeId> edge_priority;  // preferred edges first; unlisted edges follow by id
};

// Free basis of pi_1(g, basepoint) read off a spanning tree: one generator per
// non-tree edge, in increasing edge id.
class Basis {
 public:
  Basis() = default;
  Basis(MetricGraph g, const SpanningTreeOptions& options);

  [[nodiscard]] const MetricGraph& graph() const { return graph_; }
  [[nodiscard]] VertexId basepoint() const { return base_; }
  [[nodiscard]] std::uint32_t rank() const { return static_cast<std::uint32_t>(generators_.size()); }
  [[nodiscard]] const std::vector<EdgeId>& generators() const { return generators_; }
  [[nodiscard]] const std::vector<EdgeId>& tree_edges() const { return tree_; }
  [[nodiscard]] bool is_tree_edge(EdgeId e) const { return generator_of_[graph_.edge_index(e)] == 0; }
  // 1-based generator number of a non-tree edge, 0 for tree edges.
  [[nodiscard]] std::uint32_t generator_of(EdgeId e) const { return generator_of_[graph_.edge_index(e)]; }

  // Tree path from the basepoint to v.
  [[nodiscard]] EdgePath tree_path(VertexId v) const {
    return EdgePath{base_, v, from_base_[graph_.vertex_index(v)]};
  }
  // Reduced based loop of generator k (1-based).
  [[nodiscard]] const EdgePath& generator_loop(std::uint32_t k) const { return loops_.at(k - 1); }
  [[nodiscard]] const std::vector<DirectedEdge>& generator_loop_reversed(std::uint32_t k) const {
    return reversed_loops_.at(k - 1);
  }

 private:
  MetricGraph graph_;
  VertexId base_ = 0;
  std::vector<EdgeId> tree_;
  std::vector<EdgeId> generators_;
  std::vector<std::uint32_t> generator_of_;
  std::vector<std::vector<DirectedEdge>> from_base_;
  std::vector<EdgePath> loops_;
  std::vector<std::vector<DirectedEdge>> reversed_loops_;
};

inline Basis::Basis(MetricGraph g, const SpanningTreeOptions& options) : graph_(std::move(g)) {
  if (graph_.vertex_count() == 0) throw GraphError("spanning tree of an empty graph");
  if (!graph_.is_connected()) {
    throw GraphError("spanning tree needs a connected graph (" + std::to_string(graph_.component_count()) +
                     " components)");
  }
  base_ = options.root.value_or(graph_.vertices().front());
  if (!graph_.has_vertex(base_)) throw GraphError("tree root " + std::to_string(base_) + " is not a vertex");

  std::vector<std::size_t> rank_of(graph_.edge_count());
  for (std::size_t i = 0; i < graph_.edge_count(); ++i) rank_of[i] = options.edge_priority.size() + i;
  for (std::size_t r = 0; r < options.edge_priority.size(); ++r) {
    const EdgeId e = options.edge_priority[r];
    if (!graph_.has_edge(e)) throw GraphError("edge priority names unknown edge " + std::to_string(e));
    rank_of[graph_.edge_index(e)] = std::min(rank_of[graph_.edge_index(e)], r);
  }

  const std::size_t n = graph_.vertex_count();
  from_base_.assign(n, {});
  std::vector<bool> seen(n, false);
  std::vector<bool> in_tree(graph_.edge_count(), false);
  std::queue<VertexId> frontier;
  seen[graph_.vertex_index(base_)] = true;
  frontier.push(base_);
  while (!frontier.empty()) {
    const VertexId at = frontier.front();
    frontier.pop();
    auto out = std::vector<DirectedEdge>(graph_.out_edges(at).begin(), graph_.out_edges(at).end());
    std::stable_sort(out.begin(), out.end(), [&](DirectedEdge a, DirectedEdge b) {
      return rank_of[graph_.edge_index(a.edge())] < rank_of[graph_.edge_index(b.edge())];
    });
    for (DirectedEdge d : out) {
      const VertexId to = graph_.head(d);
      const std::size_t j = graph_.vertex_index(to);
      if (seen[j]) continue;
      seen[j] = true;
      in_tree[graph_.edge_index(d.edge())] = true;
      from_base_[j] = from_base_[graph_.vertex_index(at)];
      from_base_[j].push_back(d);
      frontier.push(to);
    }
  }

  generator_of_.assign(graph_.edge_count(), 0);
  for (const Edge& e : graph_.edges()) {
    if (in_tree[graph_.edge_index(e.id)]) {
      tree_.push_back(e.id);
    } else {
      generators_.push_back(e.id);
      generator_of_[graph_.edge_index(e.id)] = static_cast<std::uint32_t>(generators_.size());
    }
  }
  for (EdgeId e : generators_) {
    const DirectedEdge d = DirectedEdge::forward(e);
    EdgePath loop = then(then(tree_path(graph_.tail(d)), EdgePath{graph_.tail(d), graph_.head(d), {d}}),
                         reverse(tree_path(graph_.head(d))));
    loops_.push_back(reduce_path(loop));
    reversed_loops_.push_back(reverse(loops_.back()).steps);
  }
}

inline Basis spanning_tree(const MetricGraph& g) { return Basis(g, {}); }
inline Basis spanning_tree(const MetricGraph& g, const SpanningTreeOptions& options) { return Basis(g, options); }

inline void check_word(const Basis& b, const GroupWord& w) {
  for (Letter l : w.letters()) {
    if (l.generator() == 0 || l.generator() > b.rank()) {
      throw HomError("generator g" + std::to_string(l.generator()) + " out of range for rank " +
                     std::to_string(b.rank()));
    }
  }
}

namespace detail {

inline void append_word_steps(const Basis& b, const GroupWord& w, std::vector<DirectedEdge>& out) {
  for (Letter l : w.letters()) {
    const auto& steps = l.is_inverse() ? b.generator_loop_reversed(l.generator()) : b.generator_loop(l.generator()).steps;
    for (DirectedEdge d : steps) push_reduced(out, d);
  }
}

}  // namespace detail

// Reduced loop at the basepoint: for each letter, tree path to the edge's tail,
// the edge, tree path home.
inline EdgePath word_to_loop(const Basis& b, const GroupWord& w) {
  check_word(b, w);
  EdgePath out{b.basepoint(), b.basepoint(), {}};
  detail::append_word_steps(b, w, out.steps);
  return out;
}

inline GroupWord loop_to_word(const Basis& b, const EdgePath& loop) {
  if (loop.start != b.basepoint() || loop.end != b.basepoint()) {
    throw GraphError("loop is not based at the basepoint " + std::to_string(b.basepoint()));
  }
  std::vector<Letter> letters;
  for (DirectedEdge d : loop.steps) {
    const std::uint32_t k = b.generator_of(d.edge());
    if (k != 0) {
      const Letter l(k, d.is_reversed());
      if (!letters.empty() && letters.back() == l.inverse()) {
        letters.pop_back();
      } else {
        letters.push_back(l);
      }
    }
  }
  return GroupWord(std::move(letters));
}

// Length of the cyclically reduced representative of w's free homotopy class.
inline Rational marked_length(const Basis& b, const GroupWord& w) {
  check_word(b, w);
  thread_local std::vector<DirectedEdge> buf;
  buf.clear();
  detail::append_word_steps(b, w, buf);
  std::size_t lo = 0;
  std::size_t hi = buf.size();
  while (hi - lo >= 2 && buf[lo] == buf[hi - 1].reverse()) {
    ++lo;
    --hi;
  }
  return steps_length(b.graph(), std::span<const DirectedEdge>(buf.data() + lo, hi - lo));
}

struct SpectrumRow {
  GroupWord word;  // canonical cyclic word
  Rational length;
};

// One row per conjugacy class met among reduced words of length <= max_len,
// ordered by canonical word.
inline std::vector<SpectrumRow> spectrum_table(const Basis& b, std::size_t max_len) {
  if (max_len == 0) throw std::invalid_argument("spectrum table needs max length >= 1");
  std::map<GroupWord, Rational> rows;
  for_each_reduced_word(b.rank(), max_len, [&](const GroupWord& w) {
    GroupWord c = canonical_cyclic_word(w);
    if (!rows.contains(c)) {
      const Rational len = marked_length(b, c);
      rows.emplace(std::move(c), len);
    }
  });
  std::vector<SpectrumRow> out;
  out.reserve(rows.size());
  for (auto& [w, l] : rows) out.push_back({w, l});
  return out;
}

inline std::string format_spectrum_tsv(const std::vector<SpectrumRow>& rows) {
  std::ostringstream out;
  out << "cyclic_word\tlength\n";
  for (const auto& r : rows) out << format_word(r.word) << '\t' << r.length.fraction_str() << '\n';
  return out.str();
}

// Isomorphism pi_1(g, from.base) -> pi_1(g, to.base) for two bases of the same
// graph, conjugating along to's tree path to from's basepoint.
inline GroupHom change_of_basis_hom(const Basis& from, const Basis& to) {
  const EdgePath t = to.tree_path(from.basepoint());
  GroupHom h;
  for (std::uint32_t k = 1; k <= from.rank(); ++k) {
    h.images.push_back(loop_to_word(to, then(then(t, from.generator_loop(k)), reverse(t))));
  }
  return h;
}

}  // namespace mls
