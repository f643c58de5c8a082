#include <gtest/gtest.h>

#include "unfriendly/pgf.hpp"
#include "unfriendly/seat_model.hpp"
#include "unfriendly/stats.hpp"

using namespace unfriendly;

TEST(ChiSquare, PoolingAndImpossibleOutcomes) {
  ExactDistribution law({{0, Rational(1, 2)}, {1, Rational(49999, 100000)}, {2, Rational(1, 100000)}});
  std::map<long, std::uint64_t> h{{0, 500}, {1, 500}};
  auto r = chi_square_test(h, law, 1000);
  EXPECT_EQ(r.bins, 2);  // outcome 2 expects 0.01 counts and is pooled
  EXPECT_EQ(r.dof, 1);
  EXPECT_NEAR(r.statistic, 0, 1e-5);
  EXPECT_GT(r.p_value, 0.99);
  h[5] = 1;
  EXPECT_EQ(chi_square_test(h, law, 1001).p_value, 0);
  std::map<long, std::uint64_t> skewed{{0, 700}, {1, 300}};
  EXPECT_LT(chi_square_test(skewed, law, 1000).p_value, 1e-6);
}

// Every small grid, both selection modes, against the exact law.
TEST(Simulator, ModesMatchOracleOnSmallGrids) {
  const std::uint64_t trials = 100000;
  std::vector<SeatGrid> grids{build_config({FamilyTag::Y, 3}), build_config({FamilyTag::X, 4}),
                              build_config({FamilyTag::A, 3}), build_config({FamilyTag::B, 3}),
                              SeatGrid::parse(".O.\nOOO"), SeatGrid::parse("OO.O\nO.OO")};
  std::uint64_t seed = 100;
  for (const auto& g : grids) {
    ASSERT_LE(g.size(), 8u);
    ExactDistribution law = exact_distribution(g);
    for (SelectionMode mode : {SelectionMode::UniformFree, SelectionMode::Retry}) {
      auto sim = simulate(g, trials, ++seed, mode);
      auto r = chi_square_test(sim.histogram, law, trials);
      EXPECT_GT(r.p_value, 1e-3) << g.to_text() << " statistic " << r.statistic;
    }
  }
}

TEST(Simulator, XFiftyMeanAndLaw) {
  const std::uint64_t trials = 100000;
  PgfEngine engine;
  ExactDistribution law = engine.distribution(FamilyTag::X, 50);
  MomentReport m = moments_of(law, 50);
  auto sim = simulate(build_config({FamilyTag::X, 50}), trials, 2024);
  double sigma = std::sqrt(0.75) * std::exp(-1.0);
  EXPECT_LT(std::abs(sim.mean() - m.mean.get_d()), 4 * sigma * std::sqrt(1.0 / trials) * std::sqrt(50.0));
  EXPECT_GT(chi_square_test(sim.histogram, law, trials).p_value, 1e-3);
}
