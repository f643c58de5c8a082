#pragma once

// Truncated power series in z with polynomial-in-t coefficients, the closed
// form generating functions expanded as such series, and the coefficient
// sequences behind the exact mean/second-moment generating functions.

#include <cmath>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "unfriendly/rational_poly.hpp"
#include "unfriendly/real.hpp"

namespace unfriendly {

class ZSeries {
 public:
  ZSeries() = default;
  explicit ZSeries(std::vector<RationalPoly> terms) : terms_(std::move(terms)) {
    if (terms_.empty()) throw std::invalid_argument("series needs at least one term");
  }
  static ZSeries constant(const RationalPoly& c, std::size_t order) {
    std::vector<RationalPoly> t(order + 1);
    t[0] = c;
    return ZSeries(std::move(t));
  }

  std::size_t order() const { return terms_.size() - 1; }
  const RationalPoly& operator[](std::size_t n) const { return terms_.at(n); }
  const std::vector<RationalPoly>& terms() const { return terms_; }

  ZSeries truncated(std::size_t order) const {
    if (order > this->order()) throw std::invalid_argument("cannot extend a truncated series");
    return ZSeries(std::vector<RationalPoly>(terms_.begin(), terms_.begin() + static_cast<std::ptrdiff_t>(order) + 1));
  }

  friend ZSeries operator+(const ZSeries& a, const ZSeries& b) {
    std::size_t n = std::min(a.order(), b.order());
    std::vector<RationalPoly> out(n + 1);
    for (std::size_t i = 0; i <= n; ++i) out[i] = a.terms_[i] + b.terms_[i];
    return ZSeries(std::move(out));
  }
  friend ZSeries operator-(const ZSeries& a, const ZSeries& b) { return a + b.scaled(RationalPoly(-1)); }

  friend ZSeries operator*(const ZSeries& a, const ZSeries& b) {
    std::size_t n = std::min(a.order(), b.order());
    std::vector<RationalPoly> out(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      PolyAccumulator acc;
      for (std::size_t j = 0; j <= i; ++j) acc.add_product(a.terms_[j], b.terms_[i - j]);
      out[i] = acc.result();
    }
    return ZSeries(std::move(out));
  }

  ZSeries scaled(const RationalPoly& c) const {
    std::vector<RationalPoly> out(terms_.size());
    for (std::size_t i = 0; i < terms_.size(); ++i) out[i] = terms_[i] * c;
    return ZSeries(std::move(out));
  }

  // z^k * this, same order.
  ZSeries times_z(std::size_t k = 1) const {
    std::vector<RationalPoly> out(terms_.size());
    for (std::size_t i = k; i < terms_.size(); ++i) out[i] = terms_[i - k];
    return ZSeries(std::move(out));
  }

  // z -> c z
  ZSeries dilated(const Rational& c) const {
    std::vector<RationalPoly> out(terms_.size());
    Rational p = 1;
    for (std::size_t i = 0; i < terms_.size(); ++i, p *= c) out[i] = terms_[i] * p;
    return ZSeries(std::move(out));
  }

  // t -> -t in every coefficient
  ZSeries negated_t() const {
    std::vector<RationalPoly> out(terms_.size());
    for (std::size_t i = 0; i < terms_.size(); ++i) out[i] = terms_[i].negated_argument();
    return ZSeries(std::move(out));
  }

  // Order drops by one.
  ZSeries derivative() const {
    if (order() == 0) return constant(RationalPoly(), 0);
    std::vector<RationalPoly> out(order());
    for (std::size_t i = 1; i < terms_.size(); ++i) out[i - 1] = terms_[i] * Rational(static_cast<long>(i));
    return ZSeries(std::move(out));
  }

  // Term n is term_{n-1}/n, zero constant; order grows by one.
  ZSeries antiderivative() const {
    std::vector<RationalPoly> out(terms_.size() + 1);
    for (std::size_t i = 1; i < out.size(); ++i) out[i] = terms_[i - 1] * Rational(1, static_cast<long>(i));
    return ZSeries(std::move(out));
  }

  // num / den; den's constant term must be a nonzero constant polynomial.
  static ZSeries divide(const ZSeries& num, const ZSeries& den) {
    if (den.terms_[0].degree() != 0)
      throw std::domain_error("series division needs an invertible constant term");
    Rational inv = 1 / den.terms_[0].coefficient(0);
    std::size_t n = std::min(num.order(), den.order());
    std::vector<RationalPoly> out(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      PolyAccumulator acc;
      acc.add(num.terms_[i]);
      for (std::size_t j = 1; j <= i; ++j) acc.add_product(den.terms_[j], out[i - j], Rational(-1));
      out[i] = acc.result() * inv;
    }
    return ZSeries(std::move(out));
  }
  ZSeries reciprocal() const { return divide(constant(RationalPoly(1), order()), *this); }

  friend bool operator==(const ZSeries& a, const ZSeries& b) { return a.terms_ == b.terms_; }

  // One row per power of z; columns are t-coefficients as "p/q".
  void write_csv(std::ostream& out) const {
    int width = 0;
    for (const auto& p : terms_) width = std::max(width, p.degree() + 1);
    out << "n";
    for (int j = 0; j < width; ++j) out << ",t^" << j;
    out << "\n";
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      out << i;
      for (int j = 0; j < width; ++j) out << "," << to_string(terms_[i].coefficient(static_cast<std::size_t>(j)));
      out << "\n";
    }
  }

 private:
  std::vector<RationalPoly> terms_;
};

namespace detail {

inline RationalPoly one_minus_t() { return RationalPoly(1) - RationalPoly::t(); }
inline RationalPoly one_plus_t() { return RationalPoly(1) + RationalPoly::t(); }

inline Integer factorial(long n) {
  Integer f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
  return f;
}

inline Integer binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  Integer b;
  mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return b;
}

// int_0^1 v^{-1/2} (1+v)^m dv
inline Rational half_moment(long m) {
  Rational s = 0;
  for (long k = 0; k <= m; ++k) s += Rational(binomial(m, k) * 2, 2 * k + 1);
  s.canonicalize();
  return s;
}

// int_0^1 v^{-1/2} (1-v)(1+v)^m dv
inline Rational half_moment_damped(long m) {
  Rational s = 0;
  for (long k = 0; k <= m; ++k) s += Rational(binomial(m, k) * 2, 2 * k + 1) - Rational(binomial(m, k) * 2, 2 * k + 3);
  s.canonicalize();
  return s;
}

}  // namespace detail

// P and Q with the common factor t removed; both have constant term 2.
inline ZSeries series_P(std::size_t N) {
  std::vector<RationalPoly> out(N + 1);
  out[0] = RationalPoly(2);
  if (N >= 1) out[1] = RationalPoly::monomial(-2, 1);
  for (std::size_t j = 2; j <= N; ++j) {
    Rational c(j % 2 ? 1 : -1, detail::factorial(static_cast<long>(j)));
    out[j] = RationalPoly::monomial(c, j - 1) * detail::one_minus_t();
  }
  return ZSeries(std::move(out));
}

inline ZSeries series_Q(std::size_t N) {
  std::vector<RationalPoly> out(N + 1);
  out[0] = RationalPoly(2);
  for (std::size_t m = 1; m <= N; ++m) {
    long mm = static_cast<long>(m);
    Rational exp_part(m % 2 ? 1 : -1, detail::factorial(mm));
    Integer two_pow = 1;
    two_pow <<= static_cast<mp_bitcnt_t>(m - 1);
    // -(1/2)(-1/2)^{m-1} c_{m-1}/(m-1)!
    Rational integral_part = Rational((m - 1) % 2 ? 1 : -1, two_pow * 2 * detail::factorial(mm - 1)) *
                             detail::half_moment(mm - 1);
    integral_part.canonicalize();
    out[m] = (RationalPoly::monomial(exp_part, m - 1) + RationalPoly::monomial(integral_part, m - 1)) *
             detail::one_minus_t();
  }
  return ZSeries(std::move(out));
}

inline ZSeries series_U(std::size_t N) { return series_P(N).reciprocal().scaled(detail::one_plus_t() * RationalPoly(2)); }
inline ZSeries series_V(std::size_t N) { return series_U(N).negated_t(); }
inline ZSeries series_GA(std::size_t N) {
  ZSeries u = series_U(N);
  return (u + u.negated_t()).scaled(RationalPoly(Rational(1, 2)));
}
inline ZSeries series_GB(std::size_t N) {
  ZSeries u = series_U(N);
  return (u - u.negated_t()).scaled(RationalPoly(Rational(1, 2)));
}
inline ZSeries series_GY(std::size_t N) { return ZSeries::divide(series_Q(N), series_P(N)); }

// 1 + t * int_0^z G_Y^2
inline ZSeries series_GX(std::size_t N) {
  if (N < 1) throw std::invalid_argument("series_GX needs order >= 1");
  ZSeries y = series_GY(N - 1);
  ZSeries x = (y * y).antiderivative().scaled(RationalPoly::t());
  std::vector<RationalPoly> terms = x.terms();
  terms[0] = RationalPoly(1);
  return ZSeries(std::move(terms));
}

// [z^n] G_X alone: one convolution of the G_Y prefix instead of the full square.
inline RationalPoly x_pgf_via_series(std::size_t n) {
  if (n == 0) return RationalPoly(1);
  ZSeries y = series_GY(n - 1);
  PolyAccumulator acc;
  for (std::size_t k = 0; 2 * k <= n - 1; ++k) {
    std::size_t j = n - 1 - k;
    acc.add_product(y[k], y[j], k == j ? Rational(1) : Rational(2));
  }
  return acc.result().shifted(1) * Rational(1, static_cast<long>(n));
}

// ---------------------------------------------------------------------------
// Rational coefficient sequences

// |f_n| <= scale * base^n / n! for n >= from.
struct DecayBound {
  Rational scale;
  long base = 1;
  std::size_t from = 0;

  Rational at(std::size_t n) const {
    Integer p;
    mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(base), n);
    Rational r = scale * Rational(p, detail::factorial(static_cast<long>(n)));
    r.canonicalize();
    return r;
  }
};

struct RationalSeq {
  std::vector<Rational> values;
  std::optional<DecayBound> decay;

  const Rational& operator[](std::size_t n) const { return values.at(n); }
  std::size_t size() const { return values.size(); }
};

inline RationalSeq exp_neg_seq(std::size_t N) {
  RationalSeq s;
  for (std::size_t n = 0; n <= N; ++n) s.values.emplace_back(n % 2 ? -1 : 1, detail::factorial(static_cast<long>(n)));
  s.decay = DecayBound{Rational(1), 1, 0};
  return s;
}

// f1(z) = 1 + z - (z^2/2) int_0^1 v^{-1/2}(1-v) e^{-(1+v)z/2} dv
inline RationalSeq series_f1(std::size_t N) {
  RationalSeq s;
  for (std::size_t n = 0; n <= N; ++n) {
    if (n < 2) {
      s.values.emplace_back(1);
      continue;
    }
    long m = static_cast<long>(n) - 2;
    Integer two_pow = 1;
    two_pow <<= static_cast<mp_bitcnt_t>(m + 1);
    Rational c = Rational(m % 2 ? 1 : -1, two_pow * detail::factorial(m)) * detail::half_moment_damped(m);
    c.canonicalize();
    s.values.push_back(c);
  }
  s.decay = DecayBound{Rational(1), 2, 0};
  return s;
}

namespace detail {

inline std::vector<Rational> cauchy(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  std::size_t n = std::min(a.size(), b.size());
  std::vector<Rational> out(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) out[i] += a[j] * b[i - j];
  return out;
}

inline std::vector<Rational> poly_seq(std::vector<Rational> p, std::size_t n) {
  p.resize(n, 0);
  return p;
}

}  // namespace detail

// f2 = f1^2/2 - e^{-z} f1 + (z^2 - z + 2) f1 + (1-z)(1+2z) e^{-z} - (1-z)^2 (3+2z)/2
inline RationalSeq series_f2(std::size_t N) {
  const std::size_t len = N + 1;
  std::vector<Rational> f1 = series_f1(N).values, e = exp_neg_seq(N).values;
  auto sq = detail::cauchy(f1, f1);
  auto ef = detail::cauchy(e, f1);
  auto qf = detail::cauchy(detail::poly_seq({2, -1, 1}, len), f1);
  auto pe = detail::cauchy(detail::poly_seq({1, 1, -2}, len), e);
  auto tail = detail::poly_seq({Rational(-3, 2), 2, Rational(1, 2), -1}, len);
  RationalSeq s;
  for (std::size_t n = 0; n < len; ++n) {
    Rational v = sq[n] / 2 - ef[n] + qf[n] + pe[n] + tail[n];
    v.canonicalize();
    s.values.push_back(v);
  }
  // the f1^2 and e^{-z} f1 parts dominate; the rest is below 4^n/n! from n = 4 on
  s.decay = DecayBound{Rational(2), 4, 4};
  return s;
}

// [z^n] int_0^z f(u)/(1-u)^m du = (1/n) sum_{k<n} C(n+m-k-2, m-1) f_k
inline RationalSeq integrated_quotient(const RationalSeq& f, long m, std::size_t N) {
  RationalSeq s;
  s.values.emplace_back(0);
  for (std::size_t n = 1; n <= N; ++n) {
    Rational acc = 0;
    for (std::size_t k = 0; k < n; ++k)
      acc += Rational(detail::binomial(static_cast<long>(n) + m - static_cast<long>(k) - 2, m - 1)) * f[k];
    acc /= static_cast<long>(n);
    acc.canonicalize();
    s.values.push_back(acc);
  }
  return s;
}

inline RationalSeq series_MX(std::size_t N) { return integrated_quotient(series_f1(N), 3, N); }
inline RationalSeq series_SX(std::size_t N) { return integrated_quotient(series_f2(N), 4, N); }

// ---------------------------------------------------------------------------
// Coefficient extraction

enum class TailMode { Direct, Integrated };

struct TailValue {
  Real estimate;          // ball containing the closed-form main term
  Rational remainder;     // bound on |exact coefficient - main term|
  std::size_t terms_used = 0;

  bool encloses(const Rational& exact) const {
    Rational lo = estimate.lower() - remainder, hi = estimate.upper() + remainder;
    return lo <= exact && exact <= hi;
  }
};

// f^{(j)}(1) = sum_k k(k-1)...(k-j+1) f_k, summed until the decay bound puts
// the tail below 2^-prec. Throws if the sequence is too short.
inline Real derivative_at_one(const RationalSeq& f, unsigned j, long prec, std::size_t* used = nullptr) {
  if (!f.decay) throw std::invalid_argument("coefficient sequence has no decay bound");
  const DecayBound& d = *f.decay;
  Rational target(Integer(1), Integer(1) << static_cast<mp_bitcnt_t>(prec));
  Rational sum = 0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (k >= j) {
      Integer falling = 1;
      for (unsigned i = 0; i < j; ++i) falling *= static_cast<long>(k - i);
      sum += falling * f[k];
    }
    // tail over K = k+1.. : k^(j) base^k/k! = base^j base^{k-j}/(k-j)!, ratio below base/(K-j+1)
    std::size_t K = k + 1;
    if (K < d.from || K <= j + static_cast<std::size_t>(2 * d.base)) continue;
    Integer bj;
    mpz_ui_pow_ui(bj.get_mpz_t(), static_cast<unsigned long>(d.base), j);
    Rational ratio(d.base, static_cast<long>(K - j + 1));
    Rational tail = d.scale * Rational(bj) * (DecayBound{Rational(1), d.base, 0}.at(K - j)) / (1 - ratio);
    if (tail < target) {
      if (used) *used = K;
      return Real::from_rational(sum, prec).widened(tail);
    }
  }
  throw std::length_error("coefficient sequence too short for the requested precision");
}

// Main term sum_{j<m} ((-1)^j/j!) f^{(j)}(1) C(n+m-1-j, m-1-j) for [z^n] f/(1-z)^m
// (Direct), or the same at n-1 divided by n for [z^n] int_0^z f/(1-u)^m (Integrated).
inline TailValue coeff_tail(const RationalSeq& f, long m, long n, TailMode mode, int digits = 50) {
  if (m < 1) throw std::invalid_argument("coeff_tail needs m >= 1");
  if (!f.decay) throw std::invalid_argument("coefficient sequence has no decay bound");
  if (mode == TailMode::Integrated && n < 1) throw std::invalid_argument("integrated mode needs n >= 1");
  const long prec = bits_for_digits(digits);
  const long nn = mode == TailMode::Direct ? n : n - 1;

  TailValue out;
  out.estimate = Real::from_int(0, prec);
  for (long j = 0; j < m; ++j) {
    std::size_t used = 0;
    Real dj = derivative_at_one(f, static_cast<unsigned>(j), prec, &used);
    out.terms_used = std::max(out.terms_used, used);
    Rational w(detail::binomial(nn + m - 1 - j, m - 1 - j) * (j % 2 ? -1 : 1), detail::factorial(j));
    out.estimate = out.estimate + dj * w;
  }

  // delta = sum_{k >= nn+m} C(nn+m-k-1, m-1) f_k; |C(-r-1, m-1)| = C(r+m-1, m-1), r = k-nn-m.
  // With q = base/(nn+m+1) < 1 the sum is below eps_{nn+m} (1-q)^{-m}.
  const DecayBound& d = *f.decay;
  std::size_t first = static_cast<std::size_t>(nn + m);
  if (first < d.from) throw std::invalid_argument("index below the range of the decay bound");
  Rational q(d.base, nn + m + 1);
  if (q >= 1) throw std::invalid_argument("index too small for the decay bound");
  Rational remainder = d.at(first);
  for (long i = 0; i < m; ++i) remainder /= (1 - q);
  if (mode == TailMode::Integrated) {
    out.estimate = out.estimate / n;
    remainder /= n;
  }
  remainder.canonicalize();
  out.remainder = remainder;
  return out;
}

// One-row bivariate generating function at a fixed real t > 0, expanded in z
// in long double arithmetic: entry n approximates Z_n(t).
inline std::vector<long double> one_row_series_numeric(long double t, std::size_t N) {
  if (!(t > 0)) throw std::invalid_argument("one_row_series_numeric needs t > 0");
  const long double s = std::sqrt(t);
  std::vector<long double> e(N + 1), num(N + 1), den(N + 1), out(N + 1);
  long double p = 1;  // (2s)^n / n!
  for (std::size_t n = 0; n <= N; ++n) {
    if (n > 0) p *= 2 * s / static_cast<long double>(n);
    e[n] = p;
  }
  // numerator s((1+s)e^{2sz} + 1 - s); denominator (1+s)(1-sz)e^{2sz} - (1-s)(1+sz)
  for (std::size_t n = 0; n <= N; ++n) {
    num[n] = s * (1 + s) * e[n];
    den[n] = (1 + s) * e[n];
    if (n >= 1) den[n] -= (1 + s) * s * e[n - 1];
  }
  num[0] += s * (1 - s);
  den[0] -= 1 - s;
  if (N >= 1) den[1] -= (1 - s) * s;
  for (std::size_t n = 0; n <= N; ++n) {
    long double acc = num[n];
    for (std::size_t j = 1; j <= n; ++j) acc -= den[j] * out[n - j];
    out[n] = acc / den[0];
  }
  return out;
}

}  // namespace unfriendly
