#include <gtest/gtest.h>

#include "mls/oracle.hpp"
#include "test_support.hpp"

namespace {

using namespace mls;
using namespace mls::testing;

TEST(SpanningTree, Theta) {
  const Basis b = spanning_tree(theta());
  EXPECT_EQ(b.tree_edges(), std::vector<EdgeId>{0});
  EXPECT_EQ(b.generators(), (std::vector<EdgeId>{1, 2}));
  EXPECT_EQ(b.rank(), 2U);
  EXPECT_EQ(b.basepoint(), 0U);
}

TEST(SpanningTree, TreeHasRankZero) {
  const MetricGraph t("t", {0, 1, 2}, {Edge{0, 0, 1, 1}, Edge{1, 1, 2, 1}});
  const Basis b = spanning_tree(t);
  EXPECT_EQ(b.rank(), 0U);
  EXPECT_TRUE(b.generators().empty());
}

TEST(SpanningTree, DumbbellSelfLoopsAreGenerators) {
  const Basis b = spanning_tree(dumbbell());
  EXPECT_EQ(b.tree_edges(), std::vector<EdgeId>{2});
  EXPECT_EQ(b.generators(), (std::vector<EdgeId>{0, 1}));
  EXPECT_EQ(b.rank(), 2U);
}

TEST(SpanningTree, RankIsBettiNumberAndTreeSpans) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const MetricGraph g = random_graph(seed, RandomGraphParams{1 + seed % 9, seed % 6, 5, 2});
    const Basis b = spanning_tree(g);
    EXPECT_EQ(static_cast<std::int64_t>(b.rank()), g.betti_number());
    EXPECT_EQ(b.tree_edges().size() + 1, g.vertex_count());
    for (VertexId v : g.vertices()) {
      const EdgePath t = b.tree_path(v);
      EXPECT_EQ(t.end, v);
      for (DirectedEdge d : t.steps) EXPECT_TRUE(b.is_tree_edge(d.edge()));
    }
  }
  EXPECT_THROW((void)spanning_tree(MetricGraph("two", {0, 1}, {})), GraphError);
}

TEST(WordToLoop, KnownCases) {
  const MetricGraph t = theta();
  const Basis b = spanning_tree(t);
  EXPECT_TRUE(word_to_loop(b, GroupWord{}).empty());
  EXPECT_EQ(word_to_loop(b, GroupWord{1}), P(t, "e1 e0^-1"));
  EXPECT_TRUE(word_to_loop(b, GroupWord{1, -1}).empty());
  EXPECT_THROW((void)word_to_loop(b, GroupWord{3}), HomError);
}

TEST(LoopToWord, KnownCases) {
  const MetricGraph t = theta();
  const Basis b = spanning_tree(t);
  EXPECT_TRUE(loop_to_word(b, constant_path(0)).empty());
  EXPECT_EQ(loop_to_word(b, P(t, "e1 e0^-1")), (GroupWord{1}));
  EXPECT_EQ(loop_to_word(b, P(t, "e2 e1^-1")), (GroupWord{2, -1}));
  EXPECT_THROW((void)loop_to_word(b, P(t, "e0^-1 e1")), GraphError);
}

TEST(LoopToWord, InvertsWordToLoop) {
  std::mt19937_64 rng(67);
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const MetricGraph g = random_graph(seed, RandomGraphParams{5, 3, 5, 2});
    const Basis b = spanning_tree(g);
    for (int i = 0; i < 20; ++i) {
      std::vector<Letter> l;
      for (std::size_t k = rng() % 7; k > 0; --k) l.emplace_back(1 + static_cast<std::uint32_t>(rng() % b.rank()), rng() % 2 == 1);
      const GroupWord w(l);
      const EdgePath loop = word_to_loop(b, w);
      EXPECT_TRUE(is_reduced(loop));
      EXPECT_EQ(loop_to_word(b, loop), free_reduce(w));
    }
  }
}

TEST(MarkedLength, KnownCases) {
  const Basis b = spanning_tree(theta());
  EXPECT_EQ(marked_length(b, GroupWord{1}), Rational(3));
  EXPECT_EQ(marked_length(b, GroupWord{2, -1}), Rational(5));
  EXPECT_EQ(marked_length(b, GroupWord{}), Rational(0));
}

TEST(MarkedLength, EqualsLengthOfCyclicReductionOfLoop) {
  std::mt19937_64 rng(71);
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const MetricGraph g = random_graph(seed, RandomGraphParams{4, 4, 7, 5});
    const Basis b = spanning_tree(g);
    for (int i = 0; i < 30; ++i) {
      std::vector<Letter> l;
      for (std::size_t k = rng() % 8; k > 0; --k) l.emplace_back(1 + static_cast<std::uint32_t>(rng() % b.rank()), rng() % 2 == 1);
      const GroupWord w(l);
      const Rational expect = path_length(g, cyclically_reduce(g, word_to_loop(b, w)).core);
      EXPECT_EQ(marked_length(b, w), expect);
      EXPECT_EQ(marked_length(b, w) == Rational(0), w.is_identity());
    }
  }
}

// Every cyclically reduced loop is the unique geodesic of its class, so its
// length must be the marked length of the word read off after rebasing.
TEST(MarkedLength, AgreesWithLoopEnumeration) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const MetricGraph g = random_graph(seed, RandomGraphParams{4, 2, 6, 3});
    const Basis b = spanning_tree(g);
    const auto loops = enumerate_cyclic_loops(g, 6);
    std::map<GroupWord, Rational> by_class;
    for (const CyclicPath& c : loops.loops) {
      const std::vector<DirectedEdge> s(c.steps().begin(), c.steps().end());
      const EdgePath loop = make_path(g, s);
      const EdgePath t = b.tree_path(loop.start);
      const GroupWord w = loop_to_word(b, then(then(t, loop), reverse(t)));
      EXPECT_EQ(marked_length(b, w), path_length(g, c));
      const auto [it, fresh] = by_class.emplace(canonical_cyclic_word(w), path_length(g, c));
      EXPECT_TRUE(fresh) << "two cyclic loops in one class";
    }
    for (const auto& row : spectrum_table(b, 2)) {
      if (cyclically_reduce(g, word_to_loop(b, row.word)).core.size() <= 6) {
        ASSERT_TRUE(by_class.contains(row.word)) << format_word(row.word);
        EXPECT_EQ(by_class.at(row.word), row.length);
      }
    }
  }
}

TEST(MarkedLength, ConjugationInversionHomogeneity) {
  std::mt19937_64 rng(73);
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const MetricGraph g = random_graph(seed, RandomGraphParams{4, 2 + seed % 2, 8, 4});
    const Basis b = spanning_tree(g);
    for (int i = 0; i < 40; ++i) {
      std::vector<Letter> l;
      for (std::size_t k = 1 + rng() % 5; k > 0; --k) l.emplace_back(1 + static_cast<std::uint32_t>(rng() % b.rank()), rng() % 2 == 1);
      const GroupWord w = free_reduce(GroupWord(l));
      const GroupWord u{static_cast<int>(1 + rng() % b.rank()), -static_cast<int>(1 + rng() % b.rank())};
      const Rational lw = marked_length(b, w);
      EXPECT_EQ(marked_length(b, u * w * u.inverse()), lw);
      EXPECT_EQ(marked_length(b, w.inverse()), lw);
      for (int n = 1; n <= 4; ++n) EXPECT_EQ(marked_length(b, power(w, n)), Rational(n) * lw);
      if (!w.empty()) {
        EXPECT_TRUE(lw.is_positive());
      }
    }
  }
}

TEST(SpectrumTable, ThetaLengthOne) {
  const auto rows = spectrum_table(spanning_tree(theta()), 1);
  ASSERT_EQ(rows.size(), 4U);
  std::map<GroupWord, Rational> m;
  for (const auto& r : rows) m[r.word] = r.length;
  EXPECT_EQ(m.at(GroupWord{1}), Rational(3));
  EXPECT_EQ(m.at(GroupWord{-1}), Rational(3));
  EXPECT_EQ(m.at(GroupWord{2}), Rational(4));
  EXPECT_EQ(m.at(GroupWord{-2}), Rational(4));
  EXPECT_EQ(format_spectrum_tsv(rows), "cyclic_word\tlength\ng1\t3/1\ng1^-1\t3/1\ng2\t4/1\ng2^-1\t4/1\n");
}

TEST(SpectrumTable, RankZeroIsEmpty) {
  const MetricGraph t("t", {0, 1}, {Edge{0, 0, 1, 1}});
  EXPECT_TRUE(spectrum_table(spanning_tree(t), 4).empty());
}

TEST(SpectrumTable, ClassesAndInversePairs) {
  const Basis b = spanning_tree(random_graph(9, RandomGraphParams{5, 3, 6, 3}));
  const auto rows = spectrum_table(b, 3);
  std::map<GroupWord, Rational> m;
  for (const auto& r : rows) m[r.word] = r.length;
  std::set<GroupWord> expect;
  for_each_reduced_word(b.rank(), 3, [&](const GroupWord& w) { expect.insert(canonical_cyclic_word(w)); });
  EXPECT_EQ(m.size(), expect.size());
  for (const auto& [w, l] : m) {
    EXPECT_TRUE(expect.contains(w));
    EXPECT_EQ(m.at(canonical_cyclic_word(w.inverse())), l);
  }
}

TEST(ChangeOfBasis, SpectrumAgreesRowWise) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const MetricGraph g = random_graph(seed, RandomGraphParams{5, 3, 6, 3});
    const Basis b1 = spanning_tree(g);
    SpanningTreeOptions opts;
    opts.root = g.vertices().back();
    for (auto it = g.edges().rbegin(); it != g.edges().rend(); ++it) opts.edge_priority.push_back(it->id);
    const Basis b2 = spanning_tree(g, opts);
    ASSERT_EQ(b2.basepoint(), g.vertices().back());
    const GroupHom h = change_of_basis_hom(b1, b2);
    const GroupHom back = change_of_basis_hom(b2, b1);
    // The round trip is conjugation by a loop, not the identity.
    for (std::uint32_t k = 1; k <= b1.rank(); ++k) {
      const GroupWord g = GroupWord::generator(k);
      EXPECT_EQ(canonical_cyclic_word(apply_hom(compose(back, h), g)), canonical_cyclic_word(g));
    }
    for (const auto& row : spectrum_table(b1, 3)) {
      EXPECT_EQ(marked_length(b2, apply_hom(h, row.word)), row.length);
    }
    std::multiset<Rational> left;
    std::multiset<Rational> right;
    for (const auto& row : spectrum_table(b1, 3)) left.insert(row.length);
    for (const auto& row : spectrum_table(b1, 3)) right.insert(marked_length(b2, apply_hom(h, row.word)));
    EXPECT_EQ(left, right);
  }
}

}  // namespace
