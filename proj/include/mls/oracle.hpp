#pragma once

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mls/edge_path.hpp"
#include "mls/free_group.hpp"
#include "mls/fundamental_group.hpp"
#include "mls/graph.hpp"
#include "mls/word_calculus.hpp"

// Exhaustive reference computations. Nothing in the reconstruction pipeline
// depends on this header.

namespace mls {

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultBudget = 10'000'000;

// MLS_BUDGET overrides the default step budget.
inline std::uint64_t oracle_budget() {
  if (const char* env = std::getenv("MLS_BUDGET")) {
    std::uint64_t v = 0;
    const std::string_view s(env);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && ptr == s.data() + s.size() && v > 0) return v;
  }
  return kDefaultBudget;
}

struct LoopEnumeration {
  std::vector<CyclicPath> loops;  // canonical rotations, ascending
};

struct LoopSearchLimits {
  std::size_t max_edges = 0;
  std::uint64_t budget = 0;  // 0: use oracle_budget()
  // Simple-ish loops only: each vertex entered at most twice, each directed
  // edge used at most once.
  bool restricted = false;
};

// Every cyclically reduced cyclic edge loop with at most max_edges edges, each
// once, oriented.
inline LoopEnumeration enumerate_cyclic_loops(const MetricGraph& g, const LoopSearchLimits& limits) {
  const std::uint64_t budget = limits.budget == 0 ? oracle_budget() : limits.budget;
  std::uint64_t steps = 0;
  LoopEnumeration out;
  std::vector<DirectedEdge> walk;
  std::vector<std::uint8_t> vertex_visits(g.vertex_count(), 0);
  std::vector<std::uint8_t> directed_used(2 * g.edge_count(), 0);
  auto dslot = [&](DirectedEdge d) { return 2 * g.edge_index(d.edge()) + (d.is_reversed() ? 1 : 0); };

  for (const Edge& e : g.edges()) {
    for (DirectedEdge first : {DirectedEdge::forward(e.id), DirectedEdge::backward(e.id)}) {
      const VertexId home = g.tail(first);
      // The canonical rotation starts with its least directed edge, so only
      // edges no smaller than `first` may follow.
      auto rec = [&](auto&& self) -> void {
        if (++steps > budget) throw BudgetExceeded("loop enumeration exceeded budget of " + std::to_string(budget) + " steps");
        const DirectedEdge last = walk.back();
        const VertexId at = g.head(last);
        if (at == home && first != last.reverse()) {
          if (least_rotation<DirectedEdge>(walk) == 0) out.loops.push_back(CyclicPath::from_steps(walk));
        }
        if (walk.size() == limits.max_edges) return;
        for (DirectedEdge d : g.out_edges(at)) {
          if (d < first || d == last.reverse()) continue;
          const VertexId to = g.head(d);
          const std::size_t vi = g.vertex_index(to);
          if (limits.restricted) {
            if (directed_used[dslot(d)] != 0) continue;
            if (vertex_visits[vi] >= (to == home ? 3 : 2)) continue;  // home starts at 1
          }
          walk.push_back(d);
          ++directed_used[dslot(d)];
          ++vertex_visits[vi];
          self(self);
          --vertex_visits[vi];
          --directed_used[dslot(d)];
          walk.pop_back();
        }
      };
      if (limits.max_edges == 0) continue;
      walk.assign(1, first);
      ++directed_used[dslot(first)];
      vertex_visits[g.vertex_index(home)] = 1;
      const std::size_t hv = g.vertex_index(g.head(first));
      ++vertex_visits[hv];
      rec(rec);
      --vertex_visits[hv];
      vertex_visits[g.vertex_index(home)] = 0;
      --directed_used[dslot(first)];
    }
  }
  std::sort(out.loops.begin(), out.loops.end());
  out.loops.erase(std::unique(out.loops.begin(), out.loops.end()), out.loops.end());
  return out;
}

inline LoopEnumeration enumerate_cyclic_loops(const MetricGraph& g, std::size_t max_edges) {
  return enumerate_cyclic_loops(g, LoopSearchLimits{max_edges, 0, false});
}

// Union of the supports of all loops in the enumeration.
inline std::set<EdgeId> loop_support(const LoopEnumeration& loops) {
  std::set<EdgeId> out;
  for (const auto& c : loops.loops) {
    for (DirectedEdge d : c.steps()) out.insert(d.edge());
  }
  return out;
}

// ---- brute-force isometry of cores ---------------------------------------

struct IsometryWitness {
  std::map<VertexId, VertexId> vertex_map;                  // branch vertices
  std::vector<std::pair<std::size_t, std::size_t>> arcs;    // arc index in g1 -> arc index in g2
};

struct CollapsedArc {
  VertexId a = 0;
  VertexId b = 0;  // a <= b
  Rational length;
};

struct CollapsedCore {
  std::vector<VertexId> branch;  // degree >= 3
  std::vector<CollapsedArc> arcs;
  Rational total;
};

// Branch vertices plus arcs between them, computed by walking from each
// branch vertex through degree-2 vertices.
inline CollapsedCore collapse_core(const MetricGraph& g) {
  CollapsedCore out;
  for (VertexId v : g.vertices()) {
    const std::size_t deg = g.out_edges(v).size();
    if (deg < 2) throw GraphError("brute-force isometry needs a core (vertex " + std::to_string(v) + " has degree " + std::to_string(deg) + ")");
    if (deg >= 3) out.branch.push_back(v);
  }
  for (const Edge& e : g.edges()) out.total += e.length;
  std::set<EdgeId> seen;
  for (VertexId b : out.branch) {
    for (DirectedEdge d : g.out_edges(b)) {
      if (seen.contains(d.edge())) continue;
      Rational len;
      DirectedEdge cur = d;
      VertexId at = b;
      while (true) {
        seen.insert(cur.edge());
        len += g.length(cur.edge());
        at = g.head(cur);
        if (g.out_edges(at).size() >= 3) break;
        const auto outs = g.out_edges(at);
        cur = outs[0] == cur.reverse() ? outs[1] : outs[0];
      }
      out.arcs.push_back(CollapsedArc{std::min(b, at), std::max(b, at), len});
    }
  }
  return out;
}

inline constexpr std::size_t kMaxBruteForceBranch = 10;

// Exhaustive search for a length-preserving isomorphism of the segment
// structures, i.e. an isometry of the metric graphs.
inline std::optional<IsometryWitness> brute_force_isometry(const MetricGraph& g1, const MetricGraph& g2) {
  const CollapsedCore c1 = collapse_core(g1);
  const CollapsedCore c2 = collapse_core(g2);
  if (c1.branch.size() > kMaxBruteForceBranch || c2.branch.size() > kMaxBruteForceBranch) {
    throw BudgetExceeded("brute-force isometry is limited to " + std::to_string(kMaxBruteForceBranch) + " branch vertices");
  }
  if (c1.branch.empty() || c2.branch.empty()) {
    if (!c1.branch.empty() || !c2.branch.empty()) return std::nullopt;
    if (g1.edge_count() == 0 || g2.edge_count() == 0) {
      if (g1.edge_count() != g2.edge_count()) return std::nullopt;
      return IsometryWitness{};
    }
    if (c1.total != c2.total) return std::nullopt;
    return IsometryWitness{{}, {{0, 0}}};
  }
  if (c1.branch.size() != c2.branch.size() || c1.arcs.size() != c2.arcs.size()) return std::nullopt;

  const std::size_t n = c1.branch.size();
  auto index_in = [](const CollapsedCore& c, VertexId v) {
    return static_cast<std::size_t>(std::lower_bound(c.branch.begin(), c.branch.end(), v) - c.branch.begin());
  };
  // lengths[i][j]: sorted arc lengths between branch vertices i and j.
  auto tabulate = [&](const CollapsedCore& c) {
    std::vector<std::vector<std::vector<Rational>>> t(n, std::vector<std::vector<Rational>>(n));
    for (const auto& a : c.arcs) {
      const std::size_t i = index_in(c, a.a);
      const std::size_t j = index_in(c, a.b);
      t[i][j].push_back(a.length);
      if (i != j) t[j][i].push_back(a.length);
    }
    for (auto& row : t) {
      for (auto& cell : row) std::sort(cell.begin(), cell.end());
    }
    return t;
  };
  const auto t1 = tabulate(c1);
  const auto t2 = tabulate(c2);

  std::vector<std::size_t> image(n, n);
  std::vector<bool> taken(n, false);
  auto assign = [&](auto&& self, std::size_t i) -> bool {
    if (i == n) return true;
    for (std::size_t j = 0; j < n; ++j) {
      if (taken[j]) continue;
      bool ok = t1[i][i] == t2[j][j];
      for (std::size_t k = 0; ok && k < i; ++k) ok = t1[i][k] == t2[j][image[k]];
      if (!ok) continue;
      image[i] = j;
      taken[j] = true;
      if (self(self, i + 1)) return true;
      taken[j] = false;
    }
    return false;
  };
  if (!assign(assign, 0)) return std::nullopt;

  IsometryWitness w;
  for (std::size_t i = 0; i < n; ++i) w.vertex_map[c1.branch[i]] = c2.branch[image[i]];
  std::vector<bool> arc_taken(c2.arcs.size(), false);
  for (std::size_t a = 0; a < c1.arcs.size(); ++a) {
    const VertexId x = w.vertex_map.at(c1.arcs[a].a);
    const VertexId y = w.vertex_map.at(c1.arcs[a].b);
    for (std::size_t b = 0; b < c2.arcs.size(); ++b) {
      if (arc_taken[b] || c2.arcs[b].length != c1.arcs[a].length) continue;
      if (c2.arcs[b].a == std::min(x, y) && c2.arcs[b].b == std::max(x, y)) {
        arc_taken[b] = true;
        w.arcs.emplace_back(a, b);
        break;
      }
    }
  }
  return w;
}

// ---- bounded spectrum comparison ----------------------------------------

inline constexpr std::size_t kMaxSpectrumWordLength = 8;
inline constexpr std::uint32_t kMaxSpectrumRank = 4;

// First reduced word w (shortlex) with l1(w) != l2(phi w), if any.
inline std::optional<GroupWord> spectra_agree_up_to(const Basis& b1, const Basis& b2, const GroupHom& phi,
                                                    std::size_t max_len) {
  if (max_len > kMaxSpectrumWordLength || b1.rank() > kMaxSpectrumRank) {
    throw BudgetExceeded("bounded spectrum check is limited to words of length " +
                         std::to_string(kMaxSpectrumWordLength) + " over rank " + std::to_string(kMaxSpectrumRank));
  }
  if (phi.source_rank() != b1.rank()) throw HomError("hom source rank does not match the basis");
  std::optional<GroupWord> found;
  struct Stop {};
  try {
    for_each_reduced_word(b1.rank(), max_len, [&](const GroupWord& w) {
      if (marked_length(b1, w) != marked_length(b2, apply_hom(phi, w))) {
        found = w;
        throw Stop{};
      }
    });
  } catch (const Stop&) {
  }
  return found;
}

}  // namespace mls
