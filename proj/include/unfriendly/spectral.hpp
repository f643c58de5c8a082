#pragma once

// Poles and residues of G_Y(z,t) = Q/P via Lambert W, the branch-sum
// identities for X_n(t) and Y_n(t), and exact/asymptotic values at t = -1.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <ostream>
#include <queue>
#include <stdexcept>
#include <vector>

#include "unfriendly/lambert_w.hpp"
#include "unfriendly/rational_poly.hpp"

namespace unfriendly {

struct BranchData {
  int k = 0;
  Complex rho;
  Complex residue;
  double defect = 0;  // |P(rho, t)|
};

struct SpectralSum {
  Complex value;
  double tail_estimate = 0;
};

namespace detail {

// 2 int_0^1 (1+u^2)^m e^{-a(1+u^2)} du, which is int_0^1 v^{-1/2}(1+v)^m e^{-a(1+v)} dv.
// Global adaptive bisection over 15-point Kronrod panels. The target is
// relative to the integral, floored at roundoff in the L1 norm so that heavy
// cancellation (large |a|) cannot force endless refinement.
inline Complex half_integral(Complex a, int m = 0, double tol = 1e-13) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  auto f = [a, m](double u) {
    double s = 1 + u * u;
    return std::pow(s, m) * std::exp(-a * s);
  };
  struct Panel {
    double lo, hi, err, l1;
    Complex value;
    bool operator<(const Panel& o) const { return err < o.err; }
  };
  auto panel = [&f](double lo, double hi) {
    Panel p{lo, hi, 0, 0, 0};
    p.value = GK::integrate(f, lo, hi, 0, 0.0, &p.err, &p.l1);
    return p;
  };
  std::priority_queue<Panel> heap;
  heap.push(panel(0, 1));
  Complex total = heap.top().value;
  double err = heap.top().err, l1 = heap.top().l1;
  for (int splits = 0; splits < 4000; ++splits) {
    if (err <= std::max(tol * std::abs(total), 64 * std::numeric_limits<double>::epsilon() * l1)) break;
    Panel p = heap.top();
    heap.pop();
    double mid = (p.lo + p.hi) / 2;
    Panel left = panel(p.lo, mid), right = panel(mid, p.hi);
    total += left.value + right.value - p.value;
    err += left.err + right.err - p.err;
    l1 += left.l1 + right.l1 - p.l1;
    heap.push(left);
    heap.push(right);
  }
  return 2.0 * total;
}

inline void check_t(Complex t) {
  if (t == Complex(0) || t == Complex(-1)) throw std::domain_error("t must differ from 0 and -1");
}

}  // namespace detail

// Closed forms in z, with J_m(z) = int_0^1 v^{-1/2}(1+v)^m e^{-tz(1+v)/2} dv.
inline Complex closed_P(Complex z, Complex t) { return (1.0 + t) * (1.0 - t * z) - (1.0 - t) * std::exp(-t * z); }
inline Complex closed_dP(Complex z, Complex t) { return -t * (1.0 + t) + t * (1.0 - t) * std::exp(-t * z); }
inline Complex closed_d2P(Complex z, Complex t) { return -t * t * (1.0 - t) * std::exp(-t * z); }
inline Complex closed_J(Complex z, Complex t, int m = 0) { return detail::half_integral(t * z / 2.0, m); }
inline Complex closed_Q(Complex z, Complex t) {
  return 1.0 + t - (1.0 - t) * std::exp(-t * z) - (1.0 - t) / 2.0 * t * z * closed_J(z, t);
}
inline Complex closed_dQ(Complex z, Complex t) {
  return t * (1.0 - t) * std::exp(-t * z) -
         (1.0 - t) * t / 2.0 * (closed_J(z, t) - t * z / 2.0 * closed_J(z, t, 1));
}

// 2P'Q' - QP'' - (t^2(1-t)/2) P J_0; vanishes identically.
inline Complex residue_identity_defect(Complex z, Complex t) {
  return 2.0 * closed_dP(z, t) * closed_dQ(z, t) - closed_Q(z, t) * closed_d2P(z, t) -
         t * t * (1.0 - t) / 2.0 * closed_P(z, t) * closed_J(z, t);
}

inline Complex rho_k(int k, Complex t, CutSide side = CutSide::Reject) {
  detail::check_t(t);
  Complex z = -std::exp(-1.0) * (1.0 - t) / (1.0 + t);
  return (1.0 + lambert_w(k, z, side)) / t;
}

inline Complex residue_k(Complex rho, Complex t) {
  Complex I = detail::half_integral(t * rho / 2.0);
  return (1.0 - (1.0 - t) / (2.0 * (1.0 + t)) * I) / t;
}

inline BranchData branch(int k, Complex t, CutSide side = CutSide::Reject) {
  BranchData b;
  b.k = k;
  b.rho = rho_k(k, t, side);
  b.residue = residue_k(b.rho, t);
  b.defect = std::abs(closed_P(b.rho, t));
  return b;
}

// All branches -K..K. At t = 1 only rho_0 = 1 is finite; the others are skipped.
inline std::vector<BranchData> branches(Complex t, int K, CutSide side = CutSide::Reject) {
  if (K < 0) throw std::invalid_argument("K must be nonnegative");
  detail::check_t(t);
  std::vector<BranchData> out;
  for (int k = -K; k <= K; ++k) {
    if (t == Complex(1) && k != 0) continue;
    out.push_back(branch(k, t, side));
  }
  return out;
}

namespace detail {

// sum_k c_k(rho_k, R_k) over the given branches, with a tail guess from the two
// outermost terms: they decay like |k|^{-(n+1)}, so the rest is about K/n times as large.
template <class Term>
SpectralSum branch_sum(int n, const std::vector<BranchData>& bs, Term term) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  int K = 0;
  for (const auto& b : bs) K = std::max(K, std::abs(b.k));
  SpectralSum s;
  double outer = 0;
  for (const auto& b : bs) {
    Complex v = term(b);
    s.value += v;
    if (std::abs(b.k) == K) outer += std::abs(v);
  }
  s.tail_estimate = K == 0 ? 0 : outer * K / n;
  return s;
}

inline std::vector<BranchData> spectral_branches(Complex t, int K) {
  if (std::abs(t + 1.0) < 1e-3) throw std::domain_error("spectral route refused near t = -1");
  return branches(t, K, CutSide::Upper);
}

}  // namespace detail

// X_n(t) = t sum_k R_k^2 rho_k^{-n-1}, over precomputed branches (see branches()).
inline SpectralSum xnt_spectral(int n, Complex t, const std::vector<BranchData>& bs) {
  auto s = detail::branch_sum(n, bs, [n](const BranchData& b) {
    return b.residue * b.residue * std::pow(b.rho, -(n + 1));
  });
  s.value *= t;
  s.tail_estimate *= std::abs(t);
  return s;
}
inline SpectralSum xnt_spectral(int n, Complex t, int K) {
  return xnt_spectral(n, t, detail::spectral_branches(t, K));
}

// Y_n(t) = sum_k R_k rho_k^{-n-1}, n >= 1
inline SpectralSum ynt_spectral(int n, const std::vector<BranchData>& bs) {
  return detail::branch_sum(n, bs, [n](const BranchData& b) { return b.residue * std::pow(b.rho, -(n + 1)); });
}
inline SpectralSum ynt_spectral(int n, Complex t, int K) { return ynt_spectral(n, detail::spectral_branches(t, K)); }

// P(X_n = j), j = 0..n, from the branch sums at the (2n+1)-th roots of unity by
// a discrete Fourier inversion. Odd length keeps every node away from t = -1.
inline std::vector<double> x_pmf_spectral(int n, int K) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  const int M = 2 * n + 1;
  std::vector<Complex> values(static_cast<std::size_t>(M));
  values[0] = 1;
  for (int j = 1; j <= n; ++j) {
    Complex t = std::polar(1.0, 2 * std::numbers::pi * j / M);
    values[static_cast<std::size_t>(j)] = xnt_spectral(n, t, K).value;
    values[static_cast<std::size_t>(M - j)] = std::conj(values[static_cast<std::size_t>(j)]);
  }
  std::vector<double> pmf(static_cast<std::size_t>(n + 1));
  for (int k = 0; k <= n; ++k) {
    Complex s = 0;
    for (int j = 0; j < M; ++j) s += values[static_cast<std::size_t>(j)] * std::polar(1.0, -2 * std::numbers::pi * j * k / M);
    pmf[static_cast<std::size_t>(k)] = s.real() / M;
  }
  return pmf;
}

// 1 + sum_k R_k (1/(rho_k - z) - 1/rho_k)
inline Complex gy_partial_fractions(Complex z, Complex t, int K) {
  Complex s = 1;
  for (const auto& b : branches(t, K, CutSide::Upper)) s += b.residue * (1.0 / (b.rho - z) - 1.0 / b.rho);
  return s;
}

// sum_{l != j} R_l/(rho_l(rho_l - rho_j)) - (-1/rho_j + R_j/rho_j^2); tends to 0 as K grows.
inline Complex sum_rule_defect(Complex t, int j, int K) {
  auto bs = branches(t, K, CutSide::Upper);
  const BranchData* bj = nullptr;
  for (const auto& b : bs)
    if (b.k == j) bj = &b;
  if (!bj) throw std::invalid_argument("branch j outside the range");
  Complex s = 0;
  for (const auto& b : bs)
    if (b.k != j) s += b.residue / (b.rho * (b.rho - bj->rho));
  return s - (-1.0 / bj->rho + bj->residue / (bj->rho * bj->rho));
}

// X_n(-1) = -((-2)^{n-1}/n) sum_{0<=k<n} k!(n-1-k)!/((2k)!(2n-2-2k)!)
inline Rational xn_at_minus_one(int n) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  auto fact = [](long m) {
    Integer f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(m));
    return f;
  };
  Rational s = 0;
  for (long k = 0; k < n; ++k) s += Rational(fact(k) * fact(n - 1 - k), fact(2 * k) * fact(2 * n - 2 - 2 * k));
  Integer pow2 = Integer(1) << static_cast<mp_bitcnt_t>(n - 1);
  if ((n - 1) % 2) pow2 = -pow2;
  Rational r = -s * Rational(pow2, n);
  r.canonicalize();
  return r;
}

// Saddle point of the integral form
//   X_n(-1) = (n-1)!(-2)^{n-2}/(2n-2)! int_0^1 ((1+2s)^{n-1} + (1-2s)^{n-1}) dv,  s = sqrt(v(1-v)),
// gives (sqrt(pi n)/2) n!(-4)^n/(2n)! (1 - 9/(8n) + O(n^-2)).
inline double xn_minus_one_asymptotic(int n) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  double log_mag = std::lgamma(n + 1.0) + n * std::log(4.0) - std::lgamma(2.0 * n + 1) +
                   0.5 * std::log(std::numbers::pi * n) - std::log(2.0);
  return (n % 2 ? -1.0 : 1.0) * std::exp(log_mag) * (1 - 9.0 / (8.0 * n));
}

// The variant 2 n!(-4)^n/((2n)! sqrt(pi n)) (1 + 9/(8n)), which is the reciprocal
// normalization; kept for comparison only, it is off by a factor of about pi n/4.
inline double xn_minus_one_asymptotic_reciprocal_form(int n) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  double log_mag = std::log(2.0) + std::lgamma(n + 1.0) + n * std::log(4.0) - std::lgamma(2.0 * n + 1) -
                   0.5 * std::log(std::numbers::pi * n);
  return (n % 2 ? -1.0 : 1.0) * std::exp(log_mag) * (1 + 9.0 / (8.0 * n));
}

inline void write_branch_csv(std::ostream& out, const std::vector<BranchData>& bs) {
  out << "k,re_rho,im_rho,re_R,im_R,defect\n";
  auto old = out.precision(std::numeric_limits<double>::max_digits10);
  for (const auto& b : bs)
    out << b.k << ',' << b.rho.real() << ',' << b.rho.imag() << ',' << b.residue.real() << ',' << b.residue.imag()
        << ',' << b.defect << '\n';
  out.precision(old);
}

}  // namespace unfriendly
