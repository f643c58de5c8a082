#include <gtest/gtest.h>

#include <sstream>

#include "unfriendly/pgf.hpp"
#include "unfriendly/series.hpp"

using namespace unfriendly;

namespace {

ZSeries zero_series(std::size_t order) { return ZSeries::constant(RationalPoly(), order); }

RationalPoly t() { return RationalPoly::t(); }

}  // namespace

TEST(ZSeries, ArithmeticAndReciprocal) {
  // 1/(1 - t z) = sum t^n z^n
  ZSeries d({RationalPoly(1), -t(), RationalPoly(), RationalPoly(), RationalPoly()});
  ZSeries r = d.reciprocal();
  for (std::size_t n = 0; n <= 4; ++n) EXPECT_EQ(r[n], RationalPoly::monomial(1, n));
  EXPECT_EQ(r * d, ZSeries::constant(RationalPoly(1), 4));
  EXPECT_EQ(r.derivative().order(), 3u);
  EXPECT_EQ(r.antiderivative().derivative(), r);
  EXPECT_EQ(r.antiderivative()[0], RationalPoly());
  EXPECT_EQ(r.dilated(Rational(2))[3], RationalPoly::monomial(8, 3));
  EXPECT_THROW(ZSeries({t(), RationalPoly(1)}).reciprocal(), std::domain_error);
}

TEST(Series, LeadingTerms) {
  EXPECT_EQ(series_U(3)[0], RationalPoly(1) + t());
  EXPECT_EQ(series_GB(3)[0], t());
  EXPECT_EQ(series_GY(3)[0], RationalPoly(1));
  EXPECT_EQ(series_GY(3)[2], RationalPoly::from_coefficients({0, Rational(1, 3), Rational(2, 3)}));
  ZSeries gx = series_GX(4);
  EXPECT_EQ(gx[0], RationalPoly(1));
  EXPECT_EQ(gx[1], t());
  EXPECT_EQ(gx[3], RationalPoly::from_coefficients({0, 0, Rational(2, 9), Rational(7, 9)}));
  EXPECT_EQ(series_Q(3)[1], RationalPoly());
}

TEST(Series, MatchesRecurrences) {
  const std::size_t N = 40;
  PgfEngine e;
  ZSeries ga = series_GA(20), gb = series_GB(20), gy = series_GY(N), gx = series_GX(N);
  for (int n = 0; n <= 20; ++n) {
    EXPECT_EQ(ga[static_cast<std::size_t>(n)], e.pgf(FamilyTag::A, n)) << n;
    EXPECT_EQ(gb[static_cast<std::size_t>(n)], e.pgf(FamilyTag::B, n)) << n;
  }
  for (int n = 0; n <= static_cast<int>(N); ++n) {
    EXPECT_EQ(gy[static_cast<std::size_t>(n)], e.pgf(FamilyTag::Y, n)) << n;
    EXPECT_EQ(gx[static_cast<std::size_t>(n)], e.pgf(FamilyTag::X, n)) << n;
  }
  EXPECT_EQ(x_pgf_via_series(37), e.pgf(FamilyTag::X, 37));
}

TEST(Series, OdeResidualsVanish) {
  const std::size_t N = 16;
  ZSeries u = series_U(N), v = series_V(N);
  auto half_tz = [](const ZSeries& s) { return s.times_z().scaled(t() * Rational(1, 2)); };
  ZSeries ru = u.derivative() - u.scaled(t()) - half_tz(u * u);
  ZSeries rv = v.derivative() + v.scaled(t()) + half_tz(v * v);
  EXPECT_EQ(ru, zero_series(N - 1));
  EXPECT_EQ(rv, zero_series(N - 1));

  ZSeries ga = series_GA(N), gb = series_GB(N), gy = series_GY(N);
  EXPECT_EQ(ga + gb, u);
  EXPECT_EQ(ga - gb, v);
  // 2z G_Y' - (1 + t z + t z^2 (G_A + G_B)) G_Y + 1 = 0
  ZSeries coef = ZSeries::constant(RationalPoly(1), N) + ZSeries::constant(t(), N).times_z() +
                 (ga + gb).times_z(2).scaled(t());
  ZSeries riccati = gy.derivative().times_z().scaled(RationalPoly(2)) - coef.truncated(N - 1) * gy +
                    ZSeries::constant(RationalPoly(1), N - 1);
  EXPECT_EQ(riccati, zero_series(N - 1));
}

TEST(Series, GYAtMinusOne) {
  ZSeries gy = series_GY(25);
  Rational f = 1;
  for (long n = 0; n <= 25; ++n) {
    if (n > 0) f *= Rational(-1, 2 * n - 1);
    EXPECT_EQ(gy[static_cast<std::size_t>(n)](Rational(-1)), f) << n;
  }
}

TEST(Series, CsvDump) {
  std::ostringstream os;
  series_GY(2).write_csv(os);
  EXPECT_EQ(os.str(), "n,t^0,t^1,t^2\n0,1/1,0/1,0/1\n1,0/1,1/1,0/1\n2,0/1,1/3,2/3\n");
}

TEST(F1, Coefficients) {
  RationalSeq f1 = series_f1(60);
  EXPECT_EQ(f1[0], Rational(1));
  EXPECT_EQ(f1[1], Rational(1));
  EXPECT_EQ(f1[2], Rational(-2, 3));
  for (std::size_t n = 0; n <= 60; ++n) EXPECT_LE(abs(f1[n]), f1.decay->at(n)) << n;
  // n! f_n / (2 (-1)^{n-1}) -> 1 + 2/(n+1)
  Rational ratio = f1[40] * Rational(detail::factorial(40)) / (-2);
  EXPECT_NEAR(ratio.get_d(), 1.0 + 2.0 / 41.0, 0.01);
}

TEST(F2, DecayBoundHolds) {
  RationalSeq f2 = series_f2(60);
  for (std::size_t n = f2.decay->from; n <= 60; ++n) EXPECT_LE(abs(f2[n]), f2.decay->at(n)) << n;
  double worst = 0;
  for (std::size_t n = 5; n <= 40; ++n) {
    Rational scaled = abs(f2[n]) * Rational(detail::factorial(static_cast<long>(n))) /
                      Rational(Integer(1) << static_cast<mp_bitcnt_t>(n));
    worst = std::max(worst, scaled.get_d());
  }
  EXPECT_LT(worst, 10.0);
}

TEST(MomentSeries, ReproduceExactMoments) {
  PgfEngine e;
  RationalSeq mx = series_MX(25), sx = series_SX(25);
  for (int n = 1; n <= 25; ++n) {
    auto d = e.distribution(FamilyTag::X, n);
    Rational second = 0;
    for (const auto& [k, p] : d.pmf()) second += p * k * k;
    EXPECT_EQ(mx[static_cast<std::size_t>(n)], d.mean()) << n;
    EXPECT_EQ(sx[static_cast<std::size_t>(n)], second) << n;
  }
}

TEST(CoeffTail, GeometricSumOfExp) {
  RationalSeq e = exp_neg_seq(200);
  for (long n : {5L, 10L, 20L}) {
    TailValue v = coeff_tail(e, 1, n, TailMode::Direct);
    Rational exact = 0;
    for (long k = 0; k <= n; ++k) exact += e[static_cast<std::size_t>(k)];
    EXPECT_TRUE(v.encloses(exact)) << n;
    EXPECT_LE(v.remainder, Rational(2, 1) / Rational(detail::factorial(n + 1)));
    EXPECT_EQ(v.estimate.to_decimal(20), "0.36787944117144232160");
  }
}

TEST(CoeffTail, MeanOfXFromF1) {
  RationalSeq f1 = series_f1(200);
  PgfEngine e;
  TailValue v = coeff_tail(f1, 3, 30, TailMode::Integrated);
  EXPECT_TRUE(v.encloses(e.distribution(FamilyTag::X, 30).mean()));
  EXPECT_LT(v.remainder.get_d(), 1e-26);
}

TEST(CoeffTail, ValuesAtOne) {
  RationalSeq f1 = series_f1(200);
  long prec = bits_for_digits(40);
  Real f = derivative_at_one(f1, 0, prec);
  Real expect = Real::from_int(2, prec) - exp(Rational(-1), prec);
  EXPECT_EQ(f.to_decimal(30), expect.to_decimal(30));
  // f1'(1) = 1 - sqrt(pi/(2e)) erf(1/sqrt 2), the negative of the 1/(1-z) constant
  Real half = sqrt(Real::from_rational(Rational(1, 2), prec));
  Real c0 = sqrt(pi(prec) * exp(Rational(-1), prec) / 2L) * erf(half) - Real::from_int(1, prec);
  EXPECT_EQ(derivative_at_one(f1, 1, prec).to_decimal(30), (-c0).to_decimal(30));
  EXPECT_TRUE(derivative_at_one(f1, 2, prec).contains(Rational(0)));
}

TEST(CoeffTail, RejectsMissingDecayBound) {
  RationalSeq plain{{Rational(1), Rational(2)}, std::nullopt};
  EXPECT_THROW(coeff_tail(plain, 1, 3, TailMode::Direct), std::invalid_argument);
}

TEST(OneRowNumeric, MatchesExactPgf) {
  PgfEngine e;
  for (long double tv : {0.5L, 2.0L}) {
    auto s = one_row_series_numeric(tv, 20);
    for (int n = 0; n <= 20; ++n) {
      double exact = e.pgf(FamilyTag::Z, n)(Rational(static_cast<double>(tv))).get_d();
      EXPECT_NEAR(static_cast<double>(s[static_cast<std::size_t>(n)]), exact, 1e-9 * std::max(1.0, exact)) << n;
    }
  }
}
