#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mls/graph.hpp"

namespace mls {

// Oriented edge sequence with explicit endpoints. Steps are stored in
// traversal order; the empty path is the constant path at `start`.
struct EdgePath {
  VertexId start = 0;
  VertexId end = 0;
  std::vector<DirectedEdge> steps;

  [[nodiscard]] bool empty() const { return steps.empty(); }
  [[nodiscard]] std::size_t size() const { return steps.size(); }
  [[nodiscard]] bool is_closed() const { return start == end; }
  [[nodiscard]] DirectedEdge front() const { return steps.front(); }
  [[nodiscard]] DirectedEdge back() const { return steps.back(); }

  friend bool operator==(const EdgePath&, const EdgePath&) = default;
};

inline EdgePath constant_path(VertexId v) { return EdgePath{v, v, {}}; }

// Checks that consecutive steps chain in g and fills in the terminal vertex.
inline EdgePath make_path(const MetricGraph& g, VertexId start, std::vector<DirectedEdge> steps) {
  if (!g.has_vertex(start)) throw GraphError("path starts at unknown vertex " + std::to_string(start));
  VertexId at = start;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (g.tail(steps[i]) != at) {
      throw GraphError("path step " + std::to_string(i) + " (edge " + std::to_string(steps[i].edge()) +
                       ") does not start at vertex " + std::to_string(at));
    }
    at = g.head(steps[i]);
  }
  return EdgePath{start, at, std::move(steps)};
}

// Start inferred from the first step; the sequence must be non-empty.
inline EdgePath make_path(const MetricGraph& g, std::vector<DirectedEdge> steps) {
  if (steps.empty()) throw GraphError("cannot infer the start of an empty path");
  const VertexId start = g.tail(steps.front());
  return make_path(g, start, std::move(steps));
}

// `first` followed by `second`.
inline EdgePath then(const EdgePath& first, const EdgePath& second) {
  if (first.end != second.start) {
    throw GraphError("cannot concatenate: path ends at " + std::to_string(first.end) + " but next starts at " +
                     std::to_string(second.start));
  }
  EdgePath out{first.start, second.end, first.steps};
  out.steps.insert(out.steps.end(), second.steps.begin(), second.steps.end());
  return out;
}

inline EdgePath reverse(const EdgePath& p) {
  EdgePath out{p.end, p.start, {}};
  out.steps.reserve(p.steps.size());
  for (auto it = p.steps.rbegin(); it != p.steps.rend(); ++it) out.steps.push_back(it->reverse());
  return out;
}

// Vertices visited in order, including both endpoints (size() + 1 entries).
inline std::vector<VertexId> vertex_sequence(const MetricGraph& g, const EdgePath& p) {
  std::vector<VertexId> seq;
  seq.reserve(p.steps.size() + 1);
  seq.push_back(p.start);
  for (DirectedEdge d : p.steps) seq.push_back(g.head(d));
  return seq;
}

// Sub-path of steps [first, first + count).
inline EdgePath subpath(const MetricGraph& g, const EdgePath& p, std::size_t first, std::size_t count) {
  if (first + count > p.steps.size()) throw GraphError("subpath out of range");
  const VertexId start = first == 0 ? p.start : g.head(p.steps[first - 1]);
  std::vector<DirectedEdge> steps(p.steps.begin() + static_cast<std::ptrdiff_t>(first),
                                  p.steps.begin() + static_cast<std::ptrdiff_t>(first + count));
  const VertexId end = count == 0 ? start : g.head(steps.back());
  return EdgePath{start, end, std::move(steps)};
}

// Rotation index of the lexicographically least rotation under DirectedEdge order.
template <typename T>
std::size_t least_rotation(std::span<const T> s) {
  const std::size_t n = s.size();
  std::size_t best = 0;
  for (std::size_t r = 1; r < n; ++r) {
    for (std::size_t k = 0; k < n; ++k) {
      const T& a = s[(r + k) % n];
      const T& b = s[(best + k) % n];
      if (a < b) {
        best = r;
        break;
      }
      if (b < a) break;
    }
  }
  return best;
}

// Closed edge sequence considered up to rotation. Stores the canonical
// representative: the rotation whose directed-edge sequence is least.
class CyclicPath {
 public:
  CyclicPath() = default;

  static CyclicPath from_steps(std::vector<DirectedEdge> steps) {
    CyclicPath c;
    if (!steps.empty()) {
      const std::size_t r = least_rotation<DirectedEdge>(steps);
      std::rotate(steps.begin(), steps.begin() + static_cast<std::ptrdiff_t>(r), steps.end());
    }
    c.steps_ = std::move(steps);
    return c;
  }
  static CyclicPath from_loop(const EdgePath& loop) {
    if (!loop.is_closed()) throw GraphError("cyclic path requires a closed loop");
    return from_steps(loop.steps);
  }

  [[nodiscard]] std::span<const DirectedEdge> steps() const { return steps_; }
  [[nodiscard]] std::size_t size() const { return steps_.size(); }
  [[nodiscard]] bool empty() const { return steps_.empty(); }

  [[nodiscard]] CyclicPath reversed() const {
    std::vector<DirectedEdge> r;
    r.reserve(steps_.size());
    for (auto it = steps_.rbegin(); it != steps_.rend(); ++it) r.push_back(it->reverse());
    return from_steps(std::move(r));
  }

  friend bool operator==(const CyclicPath&, const CyclicPath&) = default;
  friend auto operator<=>(const CyclicPath& a, const CyclicPath& b) { return a.steps_ <=> b.steps_; }

 private:
  std::vector<DirectedEdge> steps_;
};

}  // namespace mls
