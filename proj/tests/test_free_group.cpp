#include <gtest/gtest.h>

#include "test_support.hpp"

namespace {

using namespace mls;
using namespace mls::testing;

GroupWord random_word(std::mt19937_64& rng, std::uint32_t rank, std::size_t len) {
  std::vector<Letter> l;
  for (std::size_t i = 0; i < len; ++i) l.emplace_back(1 + static_cast<std::uint32_t>(rng() % rank), rng() % 2 == 1);
  return GroupWord(std::move(l));
}

TEST(FreeReduce, CancelsNestedPairs) {
  EXPECT_EQ(free_reduce(GroupWord{1, 2, -2, -1, 3}), (GroupWord{3}));
  EXPECT_EQ(free_reduce(GroupWord{1, -1}), GroupWord{});
  EXPECT_TRUE(is_freely_reduced(GroupWord{1, 2, 1}));
  EXPECT_FALSE(is_freely_reduced(GroupWord{1, 2, -2}));
  EXPECT_TRUE((GroupWord{2, -2}).is_identity());
}

TEST(FreeReduce, GroupLaws) {
  std::mt19937_64 rng(43);
  for (int i = 0; i < 500; ++i) {
    const GroupWord a = random_word(rng, 3, rng() % 6);
    const GroupWord b = random_word(rng, 3, rng() % 6);
    const GroupWord c = random_word(rng, 3, rng() % 6);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_TRUE((a * a.inverse()).empty());
    EXPECT_EQ((a * b).inverse(), b.inverse() * a.inverse());
    EXPECT_TRUE(is_freely_reduced(a * b));
    EXPECT_EQ(free_reduce(free_reduce(a)), free_reduce(a));
  }
}

TEST(Power, RepeatsAndInverts) {
  const GroupWord w{1, 2};
  EXPECT_EQ(power(w, 3), (GroupWord{1, 2, 1, 2, 1, 2}));
  EXPECT_EQ(power(w, -2), (GroupWord{-2, -1, -2, -1}));
  EXPECT_TRUE(power(w, 0).empty());
}

TEST(CyclicWord, ConjugacyDecomposition) {
  std::mt19937_64 rng(47);
  for (int i = 0; i < 500; ++i) {
    const GroupWord w = free_reduce(random_word(rng, 3, rng() % 9));
    const WordConjugacy c = cyclically_reduce_word(w);
    EXPECT_EQ(c.conjugator * c.core * c.conjugator.inverse(), w);
    if (c.core.size() >= 2) EXPECT_NE(c.core.letters().front(), c.core.letters().back().inverse());
  }
}

TEST(CyclicWord, CanonicalFormIsClassInvariant) {
  std::mt19937_64 rng(53);
  for (int i = 0; i < 400; ++i) {
    const GroupWord w = random_word(rng, 3, 1 + rng() % 6);
    const GroupWord u = random_word(rng, 3, rng() % 4);
    const GroupWord k = canonical_cyclic_word(w);
    EXPECT_EQ(canonical_cyclic_word(u * w * u.inverse()), k);
    const GroupWord core = cyclically_reduce_word(free_reduce(w)).core;
    for (std::size_t r = 0; r < core.size(); ++r) {
      EXPECT_EQ(canonical_cyclic_word(rotate_word(core, r)), k);
      EXPECT_LE(k.letters(), rotate_word(core, r).letters());
    }
  }
}

TEST(ReducedWords, EnumerationIsCompleteAndOrdered) {
  for (std::uint32_t rank = 1; rank <= 3; ++rank) {
    for (std::size_t len = 1; len <= 5; ++len) {
      std::vector<GroupWord> seen;
      for_each_reduced_word(rank, len, [&](const GroupWord& w) { seen.push_back(w); });
      EXPECT_EQ(seen.size(), reduced_word_count(rank, len));
      EXPECT_TRUE(std::is_sorted(seen.begin(), seen.end()));
      EXPECT_EQ(std::adjacent_find(seen.begin(), seen.end()), seen.end());
      for (const auto& w : seen) {
        EXPECT_TRUE(is_freely_reduced(w));
        EXPECT_LE(w.max_generator(), rank);
      }
    }
  }
  // Rank 2, length <= 2: 4 + 4 * 3 words.
  EXPECT_EQ(reduced_word_count(2, 2), 16U);
  EXPECT_EQ(reduced_word_count(0, 5), 0U);
}

TEST(WordLiteral, ParseAndFormat) {
  EXPECT_EQ(W("g1 g2^-1 g10"), (GroupWord{1, -2, 10}));
  EXPECT_EQ(format_word(GroupWord{3, -1}), "g3 g1^-1");
  EXPECT_TRUE(W("").empty());
  EXPECT_THROW((void)W("g0"), std::invalid_argument);
  EXPECT_THROW((void)W("h1"), std::invalid_argument);
}

TEST(ApplyHom, KnownCases) {
  std::mt19937_64 rng(59);
  const GroupHom id = GroupHom::identity(3);
  for (int i = 0; i < 50; ++i) {
    const GroupWord w = random_word(rng, 3, rng() % 7);
    EXPECT_EQ(apply_hom(id, w), free_reduce(w));
  }
  const GroupHom swap{{GroupWord{2}, GroupWord{1}}};
  EXPECT_EQ(apply_hom(swap, GroupWord{1, -2}), (GroupWord{2, -1}));
  const GroupHom shear{{GroupWord{1, 2}, GroupWord{2}}};
  EXPECT_EQ(apply_hom(shear, GroupWord{-1}), (GroupWord{-2, -1}));
  EXPECT_THROW((void)apply_hom(swap, GroupWord{3}), HomError);
}

TEST(ApplyHom, IsHomomorphismAndComposes) {
  std::mt19937_64 rng(61);
  for (int i = 0; i < 200; ++i) {
    GroupHom h;
    GroupHom k;
    for (int g = 0; g < 3; ++g) {
      h.images.push_back(free_reduce(random_word(rng, 3, rng() % 4)));
      k.images.push_back(free_reduce(random_word(rng, 3, rng() % 4)));
    }
    const GroupWord a = random_word(rng, 3, rng() % 5);
    const GroupWord b = random_word(rng, 3, rng() % 5);
    EXPECT_EQ(apply_hom(h, a * b), apply_hom(h, a) * apply_hom(h, b));
    EXPECT_EQ(apply_hom(h, a.inverse()), apply_hom(h, a).inverse());
    EXPECT_EQ(apply_hom(compose(k, h), a), apply_hom(k, apply_hom(h, a)));
  }
}

TEST(Isomorphism, CertifiedByExplicitInverse) {
  const GroupHom shear{{GroupWord{1, 2}, GroupWord{2}}};
  const GroupHom unshear{{GroupWord{1, -2}, GroupWord{2}}};
  EXPECT_TRUE(certifies_isomorphism(shear, unshear));
  EXPECT_TRUE(is_identity_on_generators(compose(unshear, shear)));
  const GroupHom collapse{{GroupWord{1}, GroupWord{1}}};
  EXPECT_FALSE(certifies_isomorphism(collapse, GroupHom::identity(2)));
  EXPECT_FALSE(certifies_isomorphism(shear, GroupHom::identity(3)));
}

TEST(HomFile, RoundTripWithInverseAndComments) {
  HomPair h;
  h.name = "shear";
  h.forward.images = {GroupWord{1, 2}, GroupWord{2}};
  h.inverse.images = {GroupWord{1, -2}, GroupWord{2}};
  h.has_inverse = true;
  const std::string text = format_hom(h);
  EXPECT_EQ(text, "hom shear\ngen g1 = g1 g2\ngen g2 = g2\ninverse\ngen g1 = g1 g2^-1\ngen g2 = g2\n");
  const HomPair back = parse_hom(text + "# truth tau g1\n");
  EXPECT_EQ(back.forward, h.forward);
  EXPECT_EQ(back.inverse, h.inverse);
  EXPECT_TRUE(back.has_inverse);
  EXPECT_EQ(parse_hom("hom e\ngen g1 =\n").forward.images.front(), GroupWord{});
}

TEST(HomFile, RejectsMalformedInput) {
  EXPECT_THROW((void)parse_hom("gen g1 = g1\n"), HomError);
  EXPECT_THROW((void)parse_hom("hom h\ngen g2 = g1\n"), HomError);
  EXPECT_THROW((void)parse_hom("hom h\ngen g1 g1\n"), HomError);
  EXPECT_THROW((void)parse_hom("hom h\ngen g1 = x\n"), HomError);
  EXPECT_THROW((void)parse_hom("hom h\ninverse\ninverse\n"), HomError);
}

}  // namespace
