// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

#include "unfriendly/asymptotics.hpp"
#include "unfriendly/dominance.hpp"
#include "unfriendly/hardcore.hpp"
#include "unfriendly/pgf.hpp"
#include "unfriendly/seat_model.hpp"
#include "unfriendly/series.hpp"
#include "unfriendly/spectral.hpp"
#include "unfriendly/stats.hpp"

using namespace unfriendly;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream note;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      note << " [failed: " << what << "]";
    }
  }
};

PgfEngine& engine() {
  static PgfEngine e;
  return e;
}

const ConstantSet& consts() {
  static const ConstantSet c = constants(40);
  return c;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool bounded_ratio(const std::vector<double>& v, double limit) {
  double lo = INFINITY, hi = 0;
  for (double x : v) {
    lo = std::min(lo, std::abs(x));
    hi = std::max(hi, std::abs(x));
  }
  return lo > 0 && hi / lo < limit;
}

void criterion1(Outcome& o) {
  auto t0 = std::chrono::steady_clock::now();
  PgfEngine local;
  ExactOracle oracle;
  int compared = 0;
  for (FamilyTag tag : {FamilyTag::X, FamilyTag::Y, FamilyTag::A, FamilyTag::B}) {
    for (int n = 0; n <= 10; ++n) {
      auto N = static_cast<std::size_t>(n);
      RationalPoly ser = tag == FamilyTag::X   ? x_pgf_via_series(N)
                         : tag == FamilyTag::Y ? series_GY(N)[N]
                         : tag == FamilyTag::A ? series_GA(N)[N]
                                               : series_GB(N)[N];
      const RationalPoly& rec = local.pgf(tag, n);
      RationalPoly orc = oracle.pgf(build_config({tag, n}));
      o.require(rec == orc && rec == ser, std::string(family_name(tag)) + "_" + std::to_string(n));
      ++compared;
    }
  }
  double secs = seconds_since(t0);
  o.require(secs < 60, "runtime");
  o.note << " " << compared << " laws, " << secs << " s";
}

void criterion2(Outcome& o) {
  const auto& c = consts();
  double worst = 0;
  for (int n = 8; n <= 50; ++n) {
    Real err = Real::from_rational(moments(engine(), {FamilyTag::X, n}).mean, c.mu.precision()) -
               c.mu * static_cast<long>(n) - c.c1;
    worst = std::max(worst, std::abs(err.to_double()));
  }
  o.require(worst < 1e-7, "mean error");
  auto p = factorial_error_profile(30, 30, &engine());
  std::vector<double> scaled;
  for (const auto& r : p.rows)
    if (r.n >= 10) scaled.push_back(r.mean_scaled.to_double());
  o.require(bounded_ratio(scaled, 10), "scaled mean error bounded");
  o.note << " max |E - mu n - c1| (8..50) = " << worst << "; scaled error at n=10,30: " << scaled.front() << ", "
         << scaled.back() << " (" << p.digits_used << " digits)";
}

void criterion3(Outcome& o) {
  const auto& c = consts();
  double worst = 0;
  for (int n = 20; n <= 50; ++n) {
    Real err = Real::from_rational(moments(engine(), {FamilyTag::X, n}).variance, c.mu.precision()) -
               c.sigma2 * static_cast<long>(n) - c.c2;
    worst = std::max(worst, std::abs(err.to_double()));
  }
  o.require(worst < 1e-5, "variance error");
  auto p = factorial_error_profile(30, 30, &engine());
  std::vector<double> scaled;
  for (const auto& r : p.rows)
    if (r.n >= 10) scaled.push_back(r.variance_scaled.to_double());
  o.require(bounded_ratio(scaled, 10), "scaled variance error bounded");
  o.note << " max |V - sigma^2 n - c2| (20..50) = " << worst << "; scaled error at n=10,30: " << scaled.front()
         << ", " << scaled.back();
}

void criterion4(Outcome& o) {
  const auto& c = consts();
  HardcoreConstants h = hardcore_constants(30);
  auto check = [&o](const char* name, const Real& x, const std::string& printed) {
    int places = static_cast<int>(printed.size() - printed.find('.') - 1);
    std::string got = x.to_decimal(places + 8);
    bool ok = got.rfind(printed, 0) == 0;
    o.require(ok, std::string(name) + " = " + got.substr(0, printed.size() + 2) + ", printed " + printed);
    return ok;
  };
  int ok = 0;
  ok += check("c1", c.c1, "0.335022706294844");
  ok += check("c2", c.c2, "-0.156407503800915");
  ok += check("c3", c.c3, "-0.016469973369929");
  ok += check("c4", c.c4, "0.091221676624710");
  ok += check("jamming_2row", c.jamming_2row, "0.408030");
  ok += check("jamming_1row", c.jamming_1row, "0.432332");
  ok += check("hardcore density", h.two_row_density, "0.36180");
  ok += check("hardcore variance", h.two_row_variance, "0.08944");
  ok += check("one-row hardcore density", h.one_row_density, "0.41149");
  ok += check("one-row hardcore variance", h.one_row_variance, "0.008539");
  OneRowEstimate est = one_row_transfer_estimate();
  o.note << " " << ok << "/10 printed values reproduced; one-row variance from exact transfer laws = "
         << est.variance;
}

void criterion5(Outcome& o) {
  Complex t1 = std::polar(1.0, std::numbers::pi / 3);
  auto b1 = branches(t1, 50, CutSide::Upper);
  auto b2 = branches(Complex(0.5), 50, CutSide::Upper);
  double w1 = 0, w2 = 0;
  for (int n = 20; n <= 40; ++n) {
    const RationalPoly& x = engine().pgf(FamilyTag::X, n);
    w1 = std::max(w1, std::abs(xnt_spectral(n, t1, b1).value - x.evaluate(t1)));
    w2 = std::max(w2, std::abs(xnt_spectral(n, Complex(0.5), b2).value - x.evaluate(Complex(0.5))));
  }
  o.require(w1 < 1e-8, "t = e^{i pi/3}");
  o.require(w2 < 1e-6, "t = 1/2");
  o.note << " max error " << w1 << " at e^{i pi/3}, " << w2 << " at 1/2";
}

void criterion6(Outcome& o) {
  for (int n = 1; n <= 30; ++n) {
    o.require(xn_at_minus_one(n) == engine().pgf(FamilyTag::X, n)(Rational(-1)), "X_" + std::to_string(n) + "(-1)");
    Integer num, den;
    mpz_fac_ui(num.get_mpz_t(), static_cast<unsigned long>(n));
    mpz_fac_ui(den.get_mpz_t(), static_cast<unsigned long>(2 * n));
    num <<= static_cast<mp_bitcnt_t>(n);
    if (n % 2) num = -num;
    Rational y(num, den);
    y.canonicalize();
    o.require(y == engine().pgf(FamilyTag::Y, n)(Rational(-1)), "Y_" + std::to_string(n) + "(-1)");
  }
  double exact = xn_at_minus_one(30).get_d();
  double ratio = xn_minus_one_asymptotic(30) / exact;
  double printed = xn_minus_one_asymptotic_reciprocal_form(30) / exact;
  o.require(std::abs(ratio - 1) < 0.01, "asymptotic ratio");
  o.note << " exact values n<=30; asymptotic/exact at n=30 = " << ratio << " (printed normalization gives " << printed
         << ")";
}

void criterion7(Outcome& o) {
  auto vs = verify_ladder(12, &engine());
  o.require(all_hold(vs), "ladder");
  int probes = 0, probes_hold = 0;
  for (const auto& v : vs)
    if (!v.asserted) ++probes, probes_hold += v.holds;
  auto r = counterexample_report();
  o.require(r.grids[0].law.pmf() == std::map<long, Rational>{{1, Rational(1, 4)}, {3, Rational(3, 4)}}, "H1 law");
  o.require(r.grids[1].law.pmf() == std::map<long, Rational>{{2, Rational(7, 15)}, {3, Rational(8, 15)}}, "G1 law");
  o.require(r.grids[2].mean == 2 && r.grids[3].mean == Rational(5, 3), "means");
  o.note << " " << vs.size() - static_cast<std::size_t>(probes) << " relation checks; '-1' probe held in " << probes_hold
         << "/" << probes << "; E[H2] = " << to_string(r.grids[2].mean) << ", E[G2] = " << to_string(r.grids[3].mean);
}

void criterion8(Outcome& o) {
  ExactDistribution l100 = x_law(100), l400 = x_law(400);
  double d100 = clt_report(l100, 100), d400 = clt_report(l400, 400);
  double ratio = d400 / d100;
  o.require(ratio >= 0.35 && ratio <= 0.7, "Kolmogorov ratio");
  int bad = 0;
  o.note << " Kolmogorov " << d100 << " -> " << d400 << " (ratio " << ratio << "); llt(400, x):";
  for (double x : {-1.0, 0.0, 1.0}) {
    double v = llt_report(l400, 400, x);
    o.note << " " << x << ":" << v << " (at the lattice point " << llt_lattice_report(l400, 400, x) << ");";
    bad += v < 0.85 || v > 1.15;
  }
  o.require(bad == 0, "llt outside [0.85, 1.15]");
}

void criterion9(Outcome& o) {
  for (int n = 0; n <= 30; ++n)
    o.require(one_row_mean(n) == engine().distribution(FamilyTag::Z, n).mean(), "Z mean " + std::to_string(n));
  auto rows = one_row_variance_profile(30, &engine());
  std::vector<double> scaled;
  for (const auto& r : rows)
    if (r.n >= 10) scaled.push_back(r.scaled);
  o.require(bounded_ratio(scaled, 10), "variance error at factorial rate");
  double worst = 0;
  for (double t : {0.5, 2.0}) {
    auto s = one_row_series_numeric(t, 20);
    for (int n = 0; n <= 20; ++n) {
      double exact = engine().pgf(FamilyTag::Z, n)(Rational(t)).get_d();
      worst = std::max(worst, std::abs(static_cast<double>(s[static_cast<std::size_t>(n)]) - exact));
    }
  }
  o.require(worst < 1e-9, "numeric series");
  o.note << " scaled variance error (n=10..30) in [" << *std::min_element(scaled.begin(), scaled.end()) << ", "
         << *std::max_element(scaled.begin(), scaled.end()) << "]; numeric series error " << worst;
}

void criterion10(Outcome& o) {
  for (int n = 1; n <= 16; ++n)
    o.require(enumerate_arrangements(n).count == fib_count(n), "count " + std::to_string(n));
  for (int n = 0; n <= 50; ++n)
    o.require(pgf_hardcore(FamilyTag::X, n) == pgf_hardcore_recurrence(FamilyTag::X, n), "pgf " + std::to_string(n));
  double density = ExactDistribution::from_pgf(pgf_hardcore(FamilyTag::X, 200)).mean().get_d() / 400;
  o.require(std::abs(density - 0.36180) <= 0.01, "density");
  o.note << " mean/2n at n=200 = " << density;
}

void criterion11(Outcome& o) {
  const std::uint64_t trials = 100000;
  ExactDistribution law = engine().distribution(FamilyTag::X, 50);
  auto sim = simulate(build_config({FamilyTag::X, 50}), trials, 20240601);
  double exact = law.mean().get_d();
  double sigma = std::sqrt(consts().sigma2.to_double());
  double band = 4 * sigma * std::sqrt(1.0 / trials) * std::sqrt(50.0);
  o.require(std::abs(sim.mean() - exact) < band, "mean");
  ChiSquareResult chi = chi_square_test(sim.histogram, law, trials);
  o.require(chi.p_value > 1e-3, "chi-square");
  o.note << " |mean - exact| = " << std::abs(sim.mean() - exact) << " (band " << band << "); chi-square "
         << chi.statistic << " on " << chi.dof << " dof, p = " << chi.p_value;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<void(Outcome&)>> criteria[] = {
      {"cross-engine exactness", criterion1}, {"mean asymptotics", criterion2},
      {"variance asymptotics", criterion3},       {"printed constants", criterion4},
      {"spectral identity", criterion5},      {"values at t = -1", criterion6},
      {"stochastic dominance", criterion7},   {"limit theorems", criterion8},
      {"one-row baseline", criterion9},       {"hardcore model", criterion10},
      {"Monte Carlo", criterion11},
  };
  int failures = 0, index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    try {
      run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.note << " [exception: " << e.what() << "]";
    }
    failures += !o.pass;
    std::printf("%s %2d %s:%s (%.1f s)\n", o.pass ? "PASS" : "FAIL", index, name, o.note.str().c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", index - failures, index);
  return failures == 0 ? 0 : 1;
}
