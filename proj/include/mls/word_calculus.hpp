#pragma once

#include <algorithm>
#include <charconv>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mls/edge_path.hpp"
#include "mls/graph.hpp"

namespace mls {

// ---- lengths ---------------------------------------------------------------

inline Rational steps_length(const MetricGraph& g, std::span<const DirectedEdge> steps) {
  if (g.has_common_scale()) {
    std::int64_t sum = 0;
    for (DirectedEdge d : steps) sum += g.scaled_length_at(g.edge_index(d.edge()));
    return Rational(sum, g.common_scale());
  }
  Rational total;
  for (DirectedEdge d : steps) total += g.length(d.edge());
  return total;
}

inline Rational path_length(const MetricGraph& g, const EdgePath& p) { return steps_length(g, p.steps); }
inline Rational path_length(const MetricGraph& g, const CyclicPath& c) { return steps_length(g, c.steps()); }

// ---- reduction -------------------------------------------------------------

inline bool is_reduced(std::span<const DirectedEdge> steps) {
  for (std::size_t i = 1; i < steps.size(); ++i) {
    if (steps[i] == steps[i - 1].reverse()) return false;
  }
  return true;
}
inline bool is_reduced(const EdgePath& p) { return is_reduced(std::span<const DirectedEdge>(p.steps)); }

// Reduced and, read cyclically, the last step does not backtrack the first.
inline bool is_cyclically_reduced(std::span<const DirectedEdge> steps) {
  if (!is_reduced(steps)) return false;
  return steps.size() < 2 || steps.front() != steps.back().reverse();
}
inline bool is_cyclically_reduced(const EdgePath& loop) {
  return loop.is_closed() && is_cyclically_reduced(std::span<const DirectedEdge>(loop.steps));
}

// Appends `d` to a reduced word held in `stack`, cancelling an immediate backtrack.
inline void push_reduced(std::vector<DirectedEdge>& stack, DirectedEdge d) {
  if (!stack.empty() && stack.back() == d.reverse()) {
    stack.pop_back();
  } else {
    stack.push_back(d);
  }
}

// Unique reduced path homotopic rel endpoints (left fold with cancellation).
inline EdgePath reduce_path(const EdgePath& p) {
  EdgePath out{p.start, p.end, {}};
  out.steps.reserve(p.steps.size());
  for (DirectedEdge d : p.steps) push_reduced(out.steps, d);
  return out;
}

struct CyclicReduction {
  EdgePath conjugator;  // from the loop's basepoint to core_loop.start
  EdgePath core_loop;   // cyclically reduced loop, based where the conjugator ends
  CyclicPath core;      // canonical rotation of core_loop
};

// reduce_path(loop) == conjugator, then core_loop, then reverse(conjugator).
inline CyclicReduction cyclically_reduce(const MetricGraph& g, const EdgePath& loop) {
  if (!loop.is_closed()) {
    throw GraphError("cyclic reduction needs a closed loop (" + std::to_string(loop.start) + " != " +
                     std::to_string(loop.end) + ")");
  }
  const EdgePath reduced = reduce_path(loop);
  const auto& s = reduced.steps;
  std::size_t lo = 0;
  std::size_t hi = s.size();
  while (hi - lo >= 2 && s[lo] == s[hi - 1].reverse()) {
    ++lo;
    --hi;
  }
  CyclicReduction out;
  out.conjugator = subpath(g, reduced, 0, lo);
  out.core_loop = subpath(g, reduced, lo, hi - lo);
  out.core = CyclicPath::from_steps(out.core_loop.steps);
  return out;
}

struct ConcatDecomposition {
  EdgePath q1;
  EdgePath q2;
  EdgePath r;  // maximal tail of p1 cancelled by the head of p2
};

// For reduced p1, p2 with p1.end == p2.start: p1 == q1 then r,
// p2 == reverse(r) then q2, and q1 then q2 is reduced.
inline ConcatDecomposition concat_reduce(const MetricGraph& g, const EdgePath& p1, const EdgePath& p2) {
  if (!is_reduced(p1) || !is_reduced(p2)) throw GraphError("concat_reduce requires reduced paths");
  if (p1.end != p2.start) throw GraphError("concat_reduce requires p1 to end where p2 starts");
  std::size_t k = 0;
  const std::size_t n1 = p1.steps.size();
  while (k < n1 && k < p2.steps.size() && p2.steps[k] == p1.steps[n1 - 1 - k].reverse()) ++k;
  ConcatDecomposition out;
  out.q1 = subpath(g, p1, 0, n1 - k);
  out.r = subpath(g, p1, n1 - k, k);
  out.q2 = subpath(g, p2, k, p2.steps.size() - k);
  return out;
}

// True when the terminal vertex is not visited earlier along the path.
inline bool is_non_self_terminating(const MetricGraph& g, const EdgePath& p) {
  const auto seq = vertex_sequence(g, p);
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    if (seq[i] == p.end) return false;
  }
  return true;
}

inline bool visits(const MetricGraph& g, const EdgePath& p, VertexId v) {
  const auto seq = vertex_sequence(g, p);
  return std::find(seq.begin(), seq.end(), v) != seq.end();
}

// Reduced loop homotopic to: p, then the loop, then p reversed. The result is
// checked to pass through p's terminal vertex, and, when p is
// non-self-terminating, to begin with p or end with p reversed.
inline EdgePath path_loop_path_normal_form(const MetricGraph& g, const EdgePath& p, const EdgePath& loop) {
  if (loop.empty()) throw GraphError("path-loop-path normal form needs a non-empty loop");
  if (!loop.is_closed() || loop.start != p.end) throw GraphError("loop must be based at the path's terminal vertex");
  if (!is_reduced(p)) throw GraphError("path must be reduced");
  if (!is_cyclically_reduced(loop)) throw GraphError("loop must be cyclically reduced");
  const EdgePath eta = reduce_path(then(then(p, loop), reverse(p)));
  if (!visits(g, eta, p.end)) {
    throw std::logic_error("path-loop-path normal form misses the conjugation point");
  }
  if (is_non_self_terminating(g, p)) {
    const std::size_t t = p.steps.size();
    const bool begins = eta.steps.size() >= t && std::equal(p.steps.begin(), p.steps.end(), eta.steps.begin());
    const EdgePath back = reverse(p);
    const bool ends = eta.steps.size() >= t && std::equal(back.steps.begin(), back.steps.end(), eta.steps.end() - static_cast<std::ptrdiff_t>(t));
    if (!begins && !ends) throw std::logic_error("path-loop-path normal form neither begins with p nor ends with p^-1");
  }
  return eta;
}

// ---- cyclic equality -------------------------------------------------------

inline bool cyclic_equal(const CyclicPath& a, const CyclicPath& b) { return a == b; }
inline bool cyclic_equal_unoriented(const CyclicPath& a, const CyclicPath& b) {
  return a == b || a == b.reversed();
}

// ---- path literals: "e3 e7^-1 e3" -------------------------------------------

inline std::string format_steps(std::span<const DirectedEdge> steps) {
  std::string out;
  for (DirectedEdge d : steps) {
    if (!out.empty()) out += ' ';
    out += 'e';
    out += std::to_string(d.edge());
    if (d.is_reversed()) out += "^-1";
  }
  return out;
}
inline std::string format_path(const EdgePath& p) { return format_steps(p.steps); }
inline std::string format_cyclic(const CyclicPath& c) { return format_steps(c.steps()); }

inline std::vector<DirectedEdge> parse_steps(std::string_view text) {
  std::vector<DirectedEdge> steps;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) {
    bool reversed = false;
    std::string_view body = tok;
    if (body.size() > 3 && body.substr(body.size() - 3) == "^-1") {
      reversed = true;
      body.remove_suffix(3);
    }
    EdgeId id = 0;
    if (body.size() < 2 || body.front() != 'e') throw std::invalid_argument("bad path token '" + tok + "'");
    auto [ptr, ec] = std::from_chars(body.data() + 1, body.data() + body.size(), id);
    if (ec != std::errc() || ptr != body.data() + body.size()) throw std::invalid_argument("bad path token '" + tok + "'");
    steps.push_back(DirectedEdge(id, reversed));
  }
  return steps;
}

// Parses a literal into a path of g. The start vertex is taken from the first
// step unless given; an empty literal needs an explicit start.
inline EdgePath parse_path(const MetricGraph& g, std::string_view text, std::optional<VertexId> start = std::nullopt) {
  auto steps = parse_steps(text);
  for (DirectedEdge d : steps) {
    if (!g.has_edge(d.edge())) throw GraphError("path uses unknown edge e" + std::to_string(d.edge()));
  }
  if (start) return make_path(g, *start, std::move(steps));
  return make_path(g, std::move(steps));
}

}  // namespace mls
