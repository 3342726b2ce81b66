#pragma once

#include <set>

#include "mls/hull.hpp"
#include "mls/oracle.hpp"

namespace mls {

// Compares the pruned core with the union of supports of all cyclically
// reduced loops of at most max_edges edges.
//
// With `restricted` the search only walks loops that enter each vertex at most
// twice and use each directed edge once. Every core edge lies on a simple
// cycle or on a bridge between two simple cycles, and both shapes are of that
// kind, so the restricted union already reaches the full core once max_edges
// is at least 2 |E(core)|.
inline bool core_equals_loop_union(const MetricGraph& g, std::size_t max_edges, bool restricted = false) {
  const CoreDecomposition c = compute_core(g);
  std::set<EdgeId> core_edges;
  for (const Edge& e : c.core.edges()) core_edges.insert(e.id);
  const auto loops = enumerate_cyclic_loops(g, LoopSearchLimits{max_edges, 0, restricted});
  return loop_support(loops) == core_edges;
}

}  // namespace mls
