#include <gtest/gtest.h>

#include "unfriendly/seat_model.hpp"

using namespace unfriendly;

namespace {

ExactDistribution law(std::map<long, Rational> pmf) { return ExactDistribution(std::move(pmf)); }

SeatGrid grid(const char* text) { return SeatGrid::parse(text); }

}  // namespace

TEST(BuildConfig, SeatCountsPerFamily) {
  for (int n = 0; n <= 6; ++n) {
    EXPECT_EQ(build_config({FamilyTag::X, n}).size(), static_cast<std::size_t>(2 * n));
    EXPECT_EQ(build_config({FamilyTag::A, n}).size(), static_cast<std::size_t>(2 * n));
    EXPECT_EQ(build_config({FamilyTag::B, n}).size(), static_cast<std::size_t>(n == 0 ? 1 : 2 * n));
    EXPECT_EQ(build_config({FamilyTag::Z, n}).size(), static_cast<std::size_t>(n));
    if (n >= 1) {
      EXPECT_EQ(build_config({FamilyTag::Y, n}).size(), static_cast<std::size_t>(2 * n - 1));
    }
  }
}

TEST(BuildConfig, Geometry) {
  EXPECT_EQ(build_config({FamilyTag::X, 3}).to_text(), "OOO\nOOO\n");
  EXPECT_EQ(build_config({FamilyTag::Y, 2}).to_text(), "O.\nOO\n");
  EXPECT_EQ(build_config({FamilyTag::A, 1}).to_text(), "O.\n.O\n");
  EXPECT_EQ(build_config({FamilyTag::B, 2}).to_text(), ".O.\nOOO\n");
}

TEST(BuildConfig, RejectsOverlap) {
  EXPECT_THROW(build_custom({{0, 1}, {0, 1}}), std::invalid_argument);
  EXPECT_THROW(build_custom({{2, 1}}), std::invalid_argument);
}

TEST(Parser, RejectsBadCharacters) {
  EXPECT_THROW(grid("OxO\nOOO\n"), std::invalid_argument);
  EXPECT_THROW(grid("OOO\n"), std::invalid_argument);
  EXPECT_EQ(grid("..O\n.OO\r\n").to_text(), ".O\nOO\n");
}

TEST(Oracle, FrozenLaws) {
  EXPECT_EQ(exact_distribution(grid(".O.\nOOO\n")), law({{1, Rational(1, 4)}, {3, Rational(3, 4)}}));
  EXPECT_EQ(exact_distribution(grid("OO.\nOOO\n")), law({{2, Rational(7, 15)}, {3, Rational(8, 15)}}));
  EXPECT_EQ(exact_distribution(grid("O.\nOO\n")).mean(), Rational(5, 3));
  EXPECT_EQ(exact_distribution(build_config({FamilyTag::X, 3})), law({{2, Rational(2, 9)}, {3, Rational(7, 9)}}));
  EXPECT_EQ(exact_distribution(build_config({FamilyTag::Z, 3})).mean(), Rational(5, 3));
  EXPECT_EQ(exact_distribution(build_config({FamilyTag::X, 2})), ExactDistribution::point_mass(2));
}

TEST(Oracle, LimitIsReported) {
  EXPECT_THROW(exact_distribution(build_config({FamilyTag::X, 13})), OracleLimitExceeded);
  EXPECT_NO_THROW(exact_distribution(build_config({FamilyTag::X, 12})));
}

TEST(Oracle, InvariantUnderTranslationAndReflection) {
  SeatGrid g = grid("OO.O.\nO.OOO\n");
  auto d = exact_distribution(g);
  EXPECT_EQ(d.total(), Rational(1));
  EXPECT_EQ(exact_distribution(g.translated(17)), d);
  EXPECT_EQ(exact_distribution(g.mirrored()), d);
  EXPECT_EQ(exact_distribution(g.rows_swapped()), d);
  EXPECT_EQ(g.canonical_key(), g.mirrored().rows_swapped().translated(-4).canonical_key());
}

TEST(Oracle, PartiallyOccupiedGridCountsExistingDiners) {
  SeatGrid g = build_config({FamilyTag::Z, 3});
  g.occupy(1);
  EXPECT_TRUE(g.invariants_hold());
  EXPECT_EQ(exact_distribution(g), ExactDistribution::point_mass(1));
}

TEST(Oracle, XSupportBounds) {
  ExactOracle oracle;
  for (int n = 1; n <= 10; ++n) {
    auto d = oracle.distribution(build_config({FamilyTag::X, n}));
    EXPECT_EQ(d.total(), Rational(1));
    EXPECT_GE(d.support_min(), n / 2 + 1);
    EXPECT_LE(d.support_max(), n);
  }
}

TEST(Simulate, DegenerateGrids) {
  for (auto mode : {SelectionMode::UniformFree, SelectionMode::Retry}) {
    auto r1 = simulate(build_config({FamilyTag::X, 1}), 200, 7, mode);
    auto r2 = simulate(build_config({FamilyTag::X, 2}), 200, 7, mode);
    EXPECT_EQ(r1.histogram, (std::map<long, std::uint64_t>{{1, 200}}));
    EXPECT_EQ(r2.histogram, (std::map<long, std::uint64_t>{{2, 200}}));
  }
}

TEST(Simulate, DeterministicAndOrderIndependent) {
  SeatGrid g = build_config({FamilyTag::X, 6});
  auto a = simulate(g, 500, 42);
  auto b = simulate(g, 500, 42);
  auto c = simulate(g, 1000, 42);
  EXPECT_EQ(a.counts, b.counts);
  EXPECT_TRUE(std::equal(a.counts.begin(), a.counts.end(), c.counts.begin()));
  EXPECT_NE(simulate(g, 500, 43).counts, a.counts);
}

TEST(Simulate, YTwoFrequency) {
  auto r = simulate(build_config({FamilyTag::Y, 2}), 1000000, 2024);
  double p1 = static_cast<double>(r.histogram[1]) / 1e6;
  EXPECT_NEAR(p1, 1.0 / 3.0, 0.003);
}

TEST(Simulate, EveryStepKeepsInvariants) {
  SeatGrid g = build_config({FamilyTag::X, 8});
  SplitMix64 rng(99);
  while (g.count(SeatState::Free) > 0) {
    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < g.size(); ++i)
      if (g.state(i) == SeatState::Free) free.push_back(i);
    g.occupy(free[rng.below(free.size())]);
    ASSERT_TRUE(g.invariants_hold());
  }
  EXPECT_THROW(g.occupy(0), std::logic_error);
}
