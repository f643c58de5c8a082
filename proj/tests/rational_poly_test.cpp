#include <gtest/gtest.h>

#include "unfriendly/rational_poly.hpp"

using namespace unfriendly;

TEST(RationalPoly, NormalizesAndTrims) {
  RationalPoly p({Integer(2), Integer(4), Integer(0)}, Integer(6));
  EXPECT_EQ(p.degree(), 1);
  EXPECT_EQ(p.coefficient(0), Rational(1, 3));
  EXPECT_EQ(p.coefficient(1), Rational(2, 3));
  EXPECT_EQ(p.denominator(), Integer(3));
  EXPECT_TRUE(RationalPoly().is_zero());
  EXPECT_EQ(RationalPoly().degree(), -1);
}

TEST(RationalPoly, RingOperations) {
  RationalPoly t = RationalPoly::t();
  RationalPoly a = t + RationalPoly(1);
  RationalPoly sq = a * a;
  EXPECT_EQ(sq.to_string(), RationalPoly::from_coefficients({1, 2, 1}).to_string());
  EXPECT_EQ(sq - a * a, RationalPoly());
  EXPECT_EQ(sq(Rational(1, 2)), Rational(9, 4));
  EXPECT_EQ(a.negated_argument()(Rational(2)), Rational(-1));
  EXPECT_EQ(sq.derivative_at(1, Rational(1)), Rational(4));
  EXPECT_EQ(t.shifted(2).divided_by_t_power(3), RationalPoly(1));
  EXPECT_THROW(a.divided_by_t_power(1), std::domain_error);
}

TEST(RationalPoly, AccumulatorMatchesDirectSum) {
  RationalPoly p = RationalPoly::from_coefficients({Rational(1, 3), Rational(2, 5)});
  RationalPoly q = RationalPoly::from_coefficients({Rational(0), Rational(1, 7)});
  PolyAccumulator acc;
  acc.add_product(p, q, Rational(3, 4));
  acc.add(p, Rational(-1, 2));
  EXPECT_EQ(acc.result(), p * q * Rational(3, 4) - p * Rational(1, 2));
}

TEST(ExactDistribution, FromPgfAndCdf) {
  auto d = ExactDistribution::from_pgf(RationalPoly::from_coefficients({0, 0, Rational(2, 9), Rational(7, 9)}));
  EXPECT_EQ(d.total(), Rational(1));
  EXPECT_EQ(d.mean(), Rational(25, 9));
  EXPECT_EQ(d.cdf(2), Rational(2, 9));
  EXPECT_EQ(d.cdf(1), Rational(0));
  EXPECT_EQ(d.support_min(), 2);
  EXPECT_EQ(d.shifted(1).support_max(), 4);
  EXPECT_THROW(ExactDistribution({{1, Rational(-1)}}), std::invalid_argument);
}
