#include <gtest/gtest.h>

#include <random>

#include "mls/rational.hpp"

using mls::Rational;

TEST(Rational, LowestTermsWithPositiveDenominator) {
  const Rational r(6, -4);
  EXPECT_EQ(r.num(), -3);
  EXPECT_EQ(r.den(), 2);
  EXPECT_EQ(Rational(0, -7).den(), 1);
  EXPECT_THROW(Rational(1, 0), std::domain_error);
}

TEST(Rational, ExactArithmetic) {
  EXPECT_EQ(Rational(1, 3) + Rational(1, 6), Rational(1, 2));
  EXPECT_EQ(Rational(1, 3) - Rational(1, 2), Rational(-1, 6));
  EXPECT_EQ(Rational(2, 3) * Rational(9, 4), Rational(3, 2));
  EXPECT_EQ(Rational(2, 3) / Rational(4, 9), Rational(3, 2));
  EXPECT_LT(Rational(1, 3), Rational(34, 100));
  EXPECT_GT(Rational(-1, 3), Rational(-34, 100));
}

TEST(Rational, ParsesFractionsAndDecimals) {
  EXPECT_EQ(Rational::parse("7/21"), Rational(1, 3));
  EXPECT_EQ(Rational::parse("2.25"), Rational(9, 4));
  EXPECT_EQ(Rational::parse("-0.5"), Rational(-1, 2));
  EXPECT_EQ(Rational::parse("12"), Rational(12));
  EXPECT_THROW(Rational::parse("1/0"), std::exception);
  EXPECT_THROW(Rational::parse("abc"), std::exception);
  EXPECT_THROW(Rational::parse(""), std::exception);
}

TEST(Rational, PrintsCanonically) {
  EXPECT_EQ(Rational(4, 6).str(), "2/3");
  EXPECT_EQ(Rational(5).str(), "5");
  EXPECT_EQ(Rational(-3, 9).str(), "-1/3");
}

TEST(Rational, OverflowIsReportedNotWrapped) {
  const Rational big(std::numeric_limits<std::int64_t>::max() / 2);
  EXPECT_THROW(big * Rational(4), std::overflow_error);
}

TEST(Rational, FieldLawsOnRandomValues) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::int64_t> num(-50, 50);
  std::uniform_int_distribution<std::int64_t> den(1, 30);
  for (int i = 0; i < 2000; ++i) {
    const Rational a(num(rng), den(rng));
    const Rational b(num(rng), den(rng));
    const Rational c(num(rng), den(rng));
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ(a - a, Rational(0));
    if (b != Rational(0)) EXPECT_EQ(a / b * b, a);
    EXPECT_EQ(Rational::parse(a.str()), a);
  }
}
