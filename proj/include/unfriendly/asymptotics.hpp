#pragma once

// Closed-form constants at arbitrary precision, and checks of the exact laws
// against the mean/variance/cumulant asymptotics and the limit theorems.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "unfriendly/pgf.hpp"
#include "unfriendly/real.hpp"
#include "unfriendly/series.hpp"
#include "unfriendly/spectral.hpp"

namespace unfriendly {

struct ConstantSet {
  int digits = 0;
  Real mu, sigma2, phi, c0, c1, c2, c3, c4, jamming_2row, jamming_1row;
  Real e_inv;  // e^{-1}, handy for the linear terms
};

inline Real ipow(const Real& x, int k) {
  Real r = Real::from_int(1, x.precision());
  for (int i = 0; i < k; ++i) r = r * x;
  return r;
}

// Everything from e, pi, sqrt and erf series; the decimals are only compared
// against in tests.
inline ConstantSet constants(int digits) {
  if (digits < 10) throw std::invalid_argument("constants needs at least 10 digits");
  const long prec = bits_for_digits(digits + 10);
  auto num = [prec](long v) { return Real::from_int(v, prec); };

  Real e = exp(Rational(1), prec), ei = exp(Rational(-1), prec);
  Real e2 = e * e, ei2 = ei * ei;
  Real p = pi(prec);
  Real phi = erf(sqrt(Real::from_rational(Rational(1, 2), prec)));
  Real pe = p * e;
  Real s = sqrt(pe * 2L);  // sqrt(2 pi e)

  ConstantSet c;
  c.digits = digits;
  c.e_inv = ei;
  c.phi = phi;
  c.mu = num(1) - ei / 2L;
  c.sigma2 = ei2 * Rational(3, 4);
  c.c0 = sqrt(p / (e * 2L)) * phi - num(1);
  c.c1 = ei / 2L * (s * phi - num(1));
  c.c2 = ei2 / 4L * (-(pe * phi * phi) - s * phi * 2L + num(5));
  c.c3 = ei2 * ei / 16L *
         (ipow(s, 3) * ipow(phi, 3) + pe * phi * phi * 12L - s * (e2 * 4L - num(15)) * phi - num(64) + e2 * 4L);
  c.c4 = ei2 * ei2 / 16L *
         (-(pe * pe * ipow(phi, 4) * 3L) - ipow(s, 3) * ipow(phi, 3) * 6L + pe * (e2 * 4L - num(21)) * phi * phi * 2L +
          s * (e2 * 4L - num(11)) * phi * 4L + num(280) - e2 * 40L);
  c.jamming_2row = (num(2) - ei) / 4L;
  c.jamming_1row = (num(1) - ei2) / 2L;
  return c;
}

// ---------------------------------------------------------------------------
// Factorial error profile

class PrecisionEscalationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FactorialErrorRow {
  int n = 0;
  Real mean_scaled;      // (E X_n - mu n - c1)(n+3)!/2
  Real variance_scaled;  // (V X_n - sigma^2 n - c2)(n+4)!/2^{n+5}
};

struct FactorialErrorProfile {
  int digits_used = 0;
  std::vector<FactorialErrorRow> rows;
};

// Exact moments from the pgf engine; the constants' precision is doubled until
// every scaled value is resolved to `digits` places.
inline FactorialErrorProfile factorial_error_profile(int n_max, int digits = 30, PgfEngine* engine = nullptr) {
  if (n_max < 1 || n_max > 100) throw std::invalid_argument("n_max must lie in 1..100");
  PgfEngine local;
  PgfEngine& eng = engine ? *engine : local;
  std::vector<MomentReport> exact;
  for (int n = 1; n <= n_max; ++n) exact.push_back(moments(eng, {FamilyTag::X, n}));

  // the scale factors reach (n_max+4)!, so start with that many extra digits
  int work = digits + static_cast<int>(std::lgamma(n_max + 5.0) / std::log(10.0)) + 10;
  for (int attempt = 0; attempt < 6; ++attempt, work *= 2) {
    ConstantSet c = constants(work);
    const long prec = c.mu.precision();
    FactorialErrorProfile out;
    out.digits_used = work;
    bool resolved = true;
    for (int n = 1; n <= n_max; ++n) {
      const MomentReport& m = exact[static_cast<std::size_t>(n - 1)];
      Rational mean_scale(detail::factorial(n + 3), 2);
      Rational var_scale(detail::factorial(n + 4), Integer(1) << static_cast<mp_bitcnt_t>(n + 5));
      mean_scale.canonicalize();
      var_scale.canonicalize();
      FactorialErrorRow row;
      row.n = n;
      row.mean_scaled = (Real::from_rational(m.mean, prec) - c.mu * static_cast<long>(n) - c.c1) * mean_scale;
      row.variance_scaled =
          (Real::from_rational(m.variance, prec) - c.sigma2 * static_cast<long>(n) - c.c2) * var_scale;
      resolved = resolved && row.mean_scaled.certified_digits() >= digits &&
                 row.variance_scaled.certified_digits() >= digits;
      out.rows.push_back(std::move(row));
    }
    if (resolved) return out;
  }
  throw PrecisionEscalationError("factorial error profile not resolved after precision escalation");
}

inline void write_profile_csv(std::ostream& out, const FactorialErrorProfile& p, int digits = 17) {
  out << "n,mean_scaled,variance_scaled\n";
  for (const auto& r : p.rows)
    out << r.n << ',' << r.mean_scaled.to_decimal(digits) << ',' << r.variance_scaled.to_decimal(digits) << '\n';
}

// ---------------------------------------------------------------------------
// Cumulants

struct CumulantCheck {
  int n = 0;
  Rational kappa3, kappa4;
  double deviation3 = 0, deviation4 = 0;  // exact minus the asymptotic line
};

inline CumulantCheck cumulant_check(const MomentReport& m, const ConstantSet& c) {
  const long prec = c.mu.precision();
  Real e = Real::from_int(1, prec) / c.e_inv;
  Real e2 = e * e, ei3 = ipow(c.e_inv, 3), ei4 = ipow(c.e_inv, 4);
  long n = m.n;
  Real line3 = ei3 / 8L * (e2 * 2L - Real::from_int(17, prec)) * n + c.c3;
  // slope e^{-4}(71 - 12e^2)/8; the e^3 variant disagrees with the exact cumulants
  Real line4 = ei4 / 8L * (Real::from_int(71, prec) - e2 * 12L) * n + c.c4;
  CumulantCheck r;
  r.n = m.n;
  r.kappa3 = m.kappa3;
  r.kappa4 = m.kappa4;
  r.deviation3 = (Real::from_rational(m.kappa3, prec) - line3).to_double();
  r.deviation4 = (Real::from_rational(m.kappa4, prec) - line4).to_double();
  return r;
}

inline CumulantCheck cumulant_check(int n, PgfEngine* engine = nullptr) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  PgfEngine local;
  return cumulant_check(moments(engine ? *engine : local, {FamilyTag::X, n}), constants(30));
}

// ---------------------------------------------------------------------------
// Limit theorems

// Exact law of X_n; the single-convolution series route is much faster for large n.
inline ExactDistribution x_law(int n) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  return ExactDistribution::from_pgf(x_pgf_via_series(static_cast<std::size_t>(n)));
}

struct Normalization {
  double mu, sigma;
};
inline Normalization x_normalization() {
  ConstantSet c = constants(20);
  return {c.mu.to_double(), std::sqrt(c.sigma2.to_double())};
}

inline double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// sup_x |P((X_n - mu n)/(sigma sqrt n) <= x) - Phi(x)|; the sup over a lattice law
// is attained at a support point, from the left or from the right.
inline double clt_report(const ExactDistribution& law, int n) {
  Normalization z = x_normalization();
  double scale = z.sigma * std::sqrt(static_cast<double>(n));
  double below = 0, worst = 0;
  for (const auto& [k, p] : law.pmf()) {
    double x = (static_cast<double>(k) - z.mu * n) / scale;
    double phi = std_normal_cdf(x);
    double above = below + p.get_d();
    worst = std::max({worst, std::abs(below - phi), std::abs(above - phi)});
    below = above;
  }
  return worst;
}
inline double clt_report(int n) { return clt_report(x_law(n), n); }

// P(X_n = floor(mu n + x sigma sqrt n)) sigma sqrt(2 pi n) e^{x^2/2}
inline double llt_report(const ExactDistribution& law, int n, double x) {
  if (std::abs(x) > std::pow(static_cast<double>(n), 1.0 / 6.0))
    throw std::invalid_argument("llt_report needs |x| <= n^(1/6)");
  Normalization z = x_normalization();
  double root = std::sqrt(static_cast<double>(n));
  long k = static_cast<long>(std::floor(z.mu * n + x * z.sigma * root));
  return law.probability(k).get_d() * z.sigma * std::sqrt(2 * std::numbers::pi * n) * std::exp(x * x / 2);
}
inline double llt_report(int n, double x) { return llt_report(x_law(n), n, x); }

// Same point k, but with the Gaussian evaluated at k's own standardized
// position rather than at x; removes the O(x/(sigma sqrt n)) lattice offset.
inline double llt_lattice_report(const ExactDistribution& law, int n, double x) {
  if (std::abs(x) > std::pow(static_cast<double>(n), 1.0 / 6.0))
    throw std::invalid_argument("llt_report needs |x| <= n^(1/6)");
  Normalization z = x_normalization();
  double root = std::sqrt(static_cast<double>(n));
  long k = static_cast<long>(std::floor(z.mu * n + x * z.sigma * root));
  double xk = (static_cast<double>(k) - z.mu * n) / (z.sigma * root);
  return law.probability(k).get_d() * z.sigma * std::sqrt(2 * std::numbers::pi * n) * std::exp(xk * xk / 2);
}

// ---------------------------------------------------------------------------
// Spectral-gap checks. Both remainders are far below double resolution of
// X_n(t) itself for moderate n, so they are evaluated as the k != 0 part of
// the branch sum; the identity that makes this legitimate is checked
// separately against the exact polynomials.

// |log E e^{s X_n} - (s + 2 log R_0(e^s) - (n+1) log rho_0(e^s))|
inline double quasi_power_residual(int n, const std::vector<BranchData>& bs) {
  const BranchData* b0 = nullptr;
  for (const auto& b : bs)
    if (b.k == 0) b0 = &b;
  Complex rel = 0;
  for (const auto& b : bs)
    if (b.k != 0) rel += (b.residue / b0->residue) * (b.residue / b0->residue) * std::pow(b0->rho / b.rho, n + 1);
  if (std::abs(rel) < 1e-6) return std::abs(rel - rel * rel / 2.0);
  return std::abs(std::log(1.0 + rel));
}
inline double quasi_power_residual(int n, double s, int K = 30) {
  if (s == 0) return 0;
  return quasi_power_residual(n, branches(std::exp(s), K, CutSide::Upper));
}

// The same main term evaluated directly, for the range where double suffices.
inline double quasi_power_residual_direct(const RationalPoly& xn, int n, double s) {
  Complex t = std::exp(s);
  BranchData b0 = branch(0, t);
  Complex lhs = std::log(xn.evaluate(t));
  Complex rhs = s + 2.0 * std::log(b0.residue) - static_cast<double>(n + 1) * std::log(b0.rho);
  return std::abs(lhs - rhs);
}

// |X_n(t) - t R_0(t)^2 rho_0(t)^{-n-1}| for |t| = 1
inline double spectral_remainder(int n, Complex t, const std::vector<BranchData>& bs) {
  Complex s = 0;
  for (const auto& b : bs)
    if (b.k != 0) s += b.residue * b.residue * std::pow(b.rho, -(n + 1));
  return std::abs(t * s);
}
inline double spectral_remainder(int n, Complex t, int K = 30) {
  return spectral_remainder(n, t, branches(t, K, CutSide::Upper));
}

// max_{k != 0} |rho_0/rho_k|, the true geometric rate of the remainder above
inline double nearest_branch_ratio(Complex t, int K = 5) {
  auto bs = branches(t, K, CutSide::Upper);
  double r0 = 0, q = 0;
  for (const auto& b : bs)
    if (b.k == 0) r0 = std::abs(b.rho);
  for (const auto& b : bs)
    if (b.k != 0) q = std::max(q, r0 / std::abs(b.rho));
  return q;
}

// Largest C with r_n <= C q^n over the fit range, then whether the check range obeys it.
struct RateFit {
  double constant = 0;
  bool holds = true;
  int worst_n = 0;
};

template <class F>
RateFit fit_geometric_rate(F residual, double q, int fit_lo, int fit_hi, int check_hi) {
  RateFit fit;
  for (int n = fit_lo; n <= fit_hi; ++n) fit.constant = std::max(fit.constant, residual(n) / std::pow(q, n));
  for (int n = fit_hi + 1; n <= check_hi; ++n)
    if (residual(n) > fit.constant * std::pow(q, n) * (1 + 1e-9)) {
      fit.holds = false;
      fit.worst_n = n;
    }
  return fit;
}

// ---------------------------------------------------------------------------
// One-row baseline

struct OneRowVarianceRow {
  int n = 0;
  double error = 0;   // V(Z_n) - e^{-4}(n+3)
  double scaled = 0;  // error (n+2)!/4^n
};

inline std::vector<OneRowVarianceRow> one_row_variance_profile(int n_max, PgfEngine* engine = nullptr) {
  PgfEngine local;
  PgfEngine& eng = engine ? *engine : local;
  const int digits = 40 + static_cast<int>(std::lgamma(n_max + 3.0) / std::log(10.0));
  const long prec = bits_for_digits(digits);
  Real ei4 = exp(Rational(-4), prec);
  std::vector<OneRowVarianceRow> rows;
  for (int n = 1; n <= n_max; ++n) {
    Real err = Real::from_rational(moments(eng, {FamilyTag::Z, n}).variance, prec) - ei4 * static_cast<long>(n + 3);
    Integer four_n;
    mpz_ui_pow_ui(four_n.get_mpz_t(), 4, static_cast<unsigned long>(n));
    Rational scale(detail::factorial(n + 2), four_n);
    scale.canonicalize();
    rows.push_back({n, err.to_double(), (err * scale).to_double()});
  }
  return rows;
}

}  // namespace unfriendly
