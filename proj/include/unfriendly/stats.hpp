#pragma once

// Goodness of fit of a Monte Carlo histogram against an exact law.

#include <boost/math/distributions/chi_squared.hpp>

#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <vector>

#include "unfriendly/rational_poly.hpp"

namespace unfriendly {

struct ChiSquareResult {
  double statistic = 0;
  int dof = 0;
  double p_value = 1;
  int bins = 0;
};

// Outcomes are pooled left to right until each bin expects at least
// `min_expected` counts; a short last bin is merged into its neighbour.
inline ChiSquareResult chi_square_test(const std::map<long, std::uint64_t>& histogram, const ExactDistribution& law,
                                       std::uint64_t trials, double min_expected = 5) {
  if (trials == 0) throw std::invalid_argument("chi-square test needs trials");
  std::uint64_t outside = 0;
  for (const auto& [k, c] : histogram)
    if (sgn(law.probability(k)) == 0) outside += c;
  ChiSquareResult r;
  if (outside > 0) {  // an impossible outcome was observed
    r.statistic = std::numeric_limits<double>::infinity();
    r.p_value = 0;
    return r;
  }
  std::vector<std::pair<double, double>> bins;  // expected, observed
  double exp_acc = 0, obs_acc = 0;
  for (const auto& [k, p] : law.pmf()) {
    exp_acc += p.get_d() * static_cast<double>(trials);
    auto it = histogram.find(k);
    obs_acc += it == histogram.end() ? 0.0 : static_cast<double>(it->second);
    if (exp_acc >= min_expected) {
      bins.emplace_back(exp_acc, obs_acc);
      exp_acc = obs_acc = 0;
    }
  }
  if (exp_acc > 0 || obs_acc > 0) {
    if (bins.empty()) bins.emplace_back(exp_acc, obs_acc);
    else {
      bins.back().first += exp_acc;
      bins.back().second += obs_acc;
    }
  }
  r.bins = static_cast<int>(bins.size());
  for (const auto& [e, o] : bins) r.statistic += (o - e) * (o - e) / e;
  r.dof = r.bins - 1;
  if (r.dof < 1) return r;
  boost::math::chi_squared dist(r.dof);
  r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
  return r;
}

}  // namespace unfriendly
