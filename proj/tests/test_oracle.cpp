#include <gtest/gtest.h>

#include <cstdlib>

#include "mls/oracle.hpp"
#include "test_support.hpp"

namespace {

using namespace mls;
using namespace mls::testing;

CyclicPath C(const MetricGraph& g, std::string_view literal) { return CyclicPath::from_loop(P(g, literal)); }

// All closed walks up to n edges, kept when cyclically reduced, deduplicated.
std::set<CyclicPath> naive_loops(const MetricGraph& g, std::size_t n) {
  std::set<CyclicPath> out;
  std::vector<DirectedEdge> walk;
  auto rec = [&](auto&& self, VertexId home, VertexId at) -> void {
    if (!walk.empty() && at == home && is_cyclically_reduced(walk)) out.insert(CyclicPath::from_steps(walk));
    if (walk.size() == n) return;
    for (DirectedEdge d : g.out_edges(at)) {
      walk.push_back(d);
      self(self, home, g.head(d));
      walk.pop_back();
    }
  };
  for (VertexId v : g.vertices()) rec(rec, v, v);
  return out;
}

TEST(EnumerateCyclicLoops, ThetaTwoEdges) {
  const MetricGraph t = theta();
  const auto e = enumerate_cyclic_loops(t, 2);
  const std::set<CyclicPath> got(e.loops.begin(), e.loops.end());
  const std::set<CyclicPath> expect{C(t, "e0 e1^-1"), C(t, "e1 e0^-1"), C(t, "e0 e2^-1"),
                                    C(t, "e2 e0^-1"), C(t, "e1 e2^-1"), C(t, "e2 e1^-1")};
  EXPECT_EQ(got, expect);
  EXPECT_EQ(e.loops.size(), 6U);
}

TEST(EnumerateCyclicLoops, TreeAndSelfLoop) {
  const MetricGraph tree("t", {0, 1, 2}, {Edge{0, 0, 1, 1}, Edge{1, 0, 2, 1}});
  EXPECT_TRUE(enumerate_cyclic_loops(tree, 6).loops.empty());
  const MetricGraph loop("loop", {0}, {Edge{0, 0, 0, 1}});
  const auto e = enumerate_cyclic_loops(loop, 1);
  ASSERT_EQ(e.loops.size(), 2U);
  EXPECT_EQ(e.loops[0], CyclicPath::from_steps({fwd(0)}));
  EXPECT_EQ(e.loops[1], CyclicPath::from_steps({bwd(0)}));
}

TEST(EnumerateCyclicLoops, MatchesNaiveWalkSearch) {
  for (const MetricGraph& g : connected_graphs_up_to(4)) {
    const auto e = enumerate_cyclic_loops(g, 5);
    const std::set<CyclicPath> got(e.loops.begin(), e.loops.end());
    EXPECT_EQ(got.size(), e.loops.size());
    EXPECT_EQ(got, naive_loops(g, 5)) << format_graph(g);
  }
}

// Home is entered at most twice too, so a rose yields one- and two-petal loops.
TEST(EnumerateCyclicLoops, RestrictedRoseStaysSmall) {
  std::vector<Edge> petals;
  for (EdgeId e = 0; e < 7; ++e) petals.push_back(Edge{e, 0, 0, 1});
  const MetricGraph rose("rose", {0}, petals);
  const auto e = enumerate_cyclic_loops(rose, LoopSearchLimits{14, 100'000, true});
  EXPECT_EQ(e.loops.size(), 2U * 7 + 2U * 7 * 6);
  for (const auto& c : e.loops) EXPECT_LE(c.size(), 2U);
}

TEST(EnumerateCyclicLoops, BudgetIsEnforced) {
  const MetricGraph g = random_graph(3, RandomGraphParams{4, 6, 3, 1});
  EXPECT_THROW((void)enumerate_cyclic_loops(g, LoopSearchLimits{12, 50, false}), BudgetExceeded);
  ::setenv("MLS_BUDGET", "40", 1);
  EXPECT_EQ(oracle_budget(), 40U);
  EXPECT_THROW((void)enumerate_cyclic_loops(g, 12), BudgetExceeded);
  ::unsetenv("MLS_BUDGET");
  EXPECT_EQ(oracle_budget(), kDefaultBudget);
}

TEST(EnumerateCyclicLoops, LengthsReproduceSpectrumValues) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const MetricGraph g = random_graph(seed, RandomGraphParams{3, 2, 5, 2});
    const Basis b = spanning_tree(g);
    std::multiset<Rational> from_loops;
    std::multiset<Rational> from_table;
    const auto loops = enumerate_cyclic_loops(g, 8);
    for (const auto& row : spectrum_table(b, 2)) {
      if (cyclically_reduce(g, word_to_loop(b, row.word)).core.size() <= 8) from_table.insert(row.length);
    }
    std::set<GroupWord> classes;
    for_each_reduced_word(b.rank(), 2, [&](const GroupWord& w) { classes.insert(canonical_cyclic_word(w)); });
    for (const auto& c : loops.loops) {
      const std::vector<DirectedEdge> s(c.steps().begin(), c.steps().end());
      const EdgePath loop = make_path(g, s);
      const EdgePath t = b.tree_path(loop.start);
      if (classes.contains(canonical_cyclic_word(loop_to_word(b, then(then(t, loop), reverse(t)))))) {
        from_loops.insert(path_length(g, c));
      }
    }
    EXPECT_EQ(from_loops, from_table);
  }
}

TEST(BruteForceIsometry, KnownCases) {
  const MetricGraph t = theta();
  const MetricGraph relabeled("t2", {5, 9}, {Edge{7, 9, 5, 3}, Edge{8, 5, 9, 1}, Edge{12, 9, 5, 2}});
  const auto w = brute_force_isometry(t, relabeled);
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(w->vertex_map.size(), 2U);
  EXPECT_FALSE(brute_force_isometry(t, dumbbell()).has_value());
  EXPECT_FALSE(brute_force_isometry(t, with_length(t, 1, Rational(15, 7))).has_value());
}

TEST(BruteForceIsometry, DisguisesOfOneGraphAreIsometric) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const MetricGraph g = random_cored_graph(seed, 10);
    const Disguise d1 = disguise(g, seed);
    const Disguise d2 = disguise(g, seed + 1000);
    const auto w = brute_force_isometry(compute_core(d1.graph).core, compute_core(d2.graph).core);
    ASSERT_TRUE(w.has_value()) << format_graph(g);
    EXPECT_EQ(w->arcs.size(), compute_core(g).segments.size());
  }
}

TEST(BruteForceIsometry, CirclesCompareCircumference) {
  EXPECT_TRUE(brute_force_isometry(cycle({1, 2, 3}), cycle({3, 3})).has_value());
  EXPECT_FALSE(brute_force_isometry(cycle({1, 2, 3}), cycle({3, 4})).has_value());
  EXPECT_FALSE(brute_force_isometry(cycle({1, 2}), theta()).has_value());
}

TEST(BruteForceIsometry, RejectsNonCoresAndLargeInputs) {
  const MetricGraph path("p", {0, 1}, {Edge{0, 0, 1, 1}});
  EXPECT_THROW((void)brute_force_isometry(path, path), GraphError);
  // Rose-like chain of 12 theta blocks has 22 branch vertices.
  std::vector<VertexId> vs;
  std::vector<Edge> es;
  EdgeId id = 0;
  for (VertexId v = 0; v < 12; ++v) {
    vs.push_back(v);
    es.push_back(Edge{id++, v, (v + 1) % 12, 1});
    es.push_back(Edge{id++, v, (v + 1) % 12, 2});
  }
  const MetricGraph big("big", vs, es);
  EXPECT_THROW((void)brute_force_isometry(big, big), BudgetExceeded);
}

TEST(SpectraAgree, KnownCases) {
  const MetricGraph t = theta();
  const Basis b = spanning_tree(t);
  EXPECT_FALSE(spectra_agree_up_to(b, b, GroupHom::identity(2), 4).has_value());
  const Basis bumped = spanning_tree(with_length(t, 1, Rational(2) + Rational(1, 7)));
  EXPECT_EQ(spectra_agree_up_to(b, bumped, GroupHom::identity(2), 1), std::optional<GroupWord>(GroupWord{1}));
  const Disguise d = disguise(t, 5);
  EXPECT_FALSE(spectra_agree_up_to(b, spanning_tree(d.graph), d.phi.forward, 6).has_value());
}

TEST(SpectraAgree, Guards) {
  const Basis b = spanning_tree(theta());
  EXPECT_THROW((void)spectra_agree_up_to(b, b, GroupHom::identity(2), 9), BudgetExceeded);
  const Basis rose5 = spanning_tree(MetricGraph("rose", {0}, {Edge{0, 0, 0, 1}, Edge{1, 0, 0, 1}, Edge{2, 0, 0, 1},
                                                               Edge{3, 0, 0, 1}, Edge{4, 0, 0, 1}}));
  EXPECT_THROW((void)spectra_agree_up_to(rose5, rose5, GroupHom::identity(5), 2), BudgetExceeded);
  EXPECT_THROW((void)spectra_agree_up_to(b, b, GroupHom::identity(3), 2), HomError);
}

}  // namespace
