#pragma once

// Dense polynomials in t with exact rational coefficients, plus exact
// discrete distributions. A polynomial is stored as integer numerators over
// one positive common denominator, reduced so that the content of the
// numerators is coprime to the denominator. Products and sums of products
// then run on integer multiply-accumulate.

#include <gmpxx.h>

#include <complex>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace unfriendly {

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational parse_rational(const std::string& text) {
  Rational q;
  if (q.set_str(text, 10) != 0) throw std::invalid_argument("not a rational: " + text);
  q.canonicalize();
  return q;
}

inline std::string to_string(const Rational& q) {
  std::string s = q.get_num().get_str();
  return s + "/" + q.get_den().get_str();
}

namespace detail {

// out[i + j] += a[i] * b[j], iterating the sparser operand in the outer loop.
inline void convolve_add(std::vector<Integer>& out, const std::vector<Integer>& a,
                         const std::vector<Integer>& b) {
  auto nonzeros = [](const std::vector<Integer>& v) {
    std::size_t c = 0;
    for (const auto& x : v) c += (sgn(x) != 0);
    return c;
  };
  const auto& outer = nonzeros(a) <= nonzeros(b) ? a : b;
  const auto& inner = (&outer == &a) ? b : a;
  if (out.size() < a.size() + b.size() - 1) out.resize(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < outer.size(); ++i) {
    if (sgn(outer[i]) == 0) continue;
    mpz_srcptr x = outer[i].get_mpz_t();
    for (std::size_t j = 0; j < inner.size(); ++j) {
      if (sgn(inner[j]) == 0) continue;
      mpz_addmul(out[i + j].get_mpz_t(), x, inner[j].get_mpz_t());
    }
  }
}

}  // namespace detail

class RationalPoly {
 public:
  RationalPoly() = default;
  RationalPoly(long c) : RationalPoly(Rational(c)) {}  // NOLINT(google-explicit-constructor)
  RationalPoly(const Rational& c) {                    // NOLINT(google-explicit-constructor)
    if (sgn(c) != 0) {
      num_ = {c.get_num()};
      den_ = c.get_den();
    }
  }
  RationalPoly(std::vector<Integer> numerators, Integer denominator)
      : num_(std::move(numerators)), den_(std::move(denominator)) {
    if (sgn(den_) == 0) throw std::domain_error("zero denominator");
    normalize();
  }

  static RationalPoly monomial(const Rational& c, std::size_t power) {
    if (sgn(c) == 0) return {};
    std::vector<Integer> n(power + 1, 0);
    n[power] = c.get_num();
    return RationalPoly(std::move(n), c.get_den());
  }
  static RationalPoly t() { return monomial(1, 1); }

  static RationalPoly from_coefficients(const std::vector<Rational>& coeffs) {
    Integer lcm = 1;
    for (const auto& c : coeffs) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den_mpz_t());
    std::vector<Integer> n;
    n.reserve(coeffs.size());
    for (const auto& c : coeffs) n.push_back(c.get_num() * (lcm / c.get_den()));
    return RationalPoly(std::move(n), lcm);
  }

  bool is_zero() const { return num_.empty(); }
  // -1 for the zero polynomial.
  int degree() const { return static_cast<int>(num_.size()) - 1; }
  // Index of the lowest nonzero coefficient; -1 for zero.
  int valuation() const {
    for (std::size_t i = 0; i < num_.size(); ++i)
      if (sgn(num_[i]) != 0) return static_cast<int>(i);
    return -1;
  }

  Rational coefficient(std::size_t i) const {
    if (i >= num_.size()) return 0;
    Rational q(num_[i], den_);
    q.canonicalize();
    return q;
  }
  std::vector<Rational> coefficients() const {
    std::vector<Rational> out;
    out.reserve(num_.size());
    for (std::size_t i = 0; i < num_.size(); ++i) out.push_back(coefficient(i));
    return out;
  }
  const std::vector<Integer>& numerators() const { return num_; }
  const Integer& denominator() const { return den_; }

  Rational operator()(const Rational& x) const {
    Rational acc = 0;
    for (std::size_t i = num_.size(); i-- > 0;) acc = acc * x + Rational(num_[i]);
    acc /= Rational(den_);
    return acc;
  }

  std::complex<double> evaluate(std::complex<double> x) const {
    std::complex<double> acc = 0;
    for (std::size_t i = num_.size(); i-- > 0;) acc = acc * x + coefficient(i).get_d();
    return acc;
  }

  // Value of the j-th derivative at x.
  Rational derivative_at(unsigned j, const Rational& x) const {
    Rational acc = 0;
    for (std::size_t i = num_.size(); i-- > j;) {
      Integer falling = 1;
      for (unsigned r = 0; r < j; ++r) falling *= static_cast<unsigned long>(i - r);
      acc = acc * x + Rational(num_[i] * falling);
    }
    acc /= Rational(den_);
    return acc;
  }

  RationalPoly derivative() const {
    if (num_.size() <= 1) return {};
    std::vector<Integer> n(num_.size() - 1);
    for (std::size_t i = 1; i < num_.size(); ++i) n[i - 1] = num_[i] * static_cast<unsigned long>(i);
    return RationalPoly(std::move(n), den_);
  }

  // p(t) -> p(-t)
  RationalPoly negated_argument() const {
    RationalPoly r = *this;
    for (std::size_t i = 1; i < r.num_.size(); i += 2) r.num_[i] = -r.num_[i];
    return r;
  }

  // p(t) * t^k
  RationalPoly shifted(std::size_t k) const {
    if (is_zero() || k == 0) return *this;
    RationalPoly r;
    r.num_.assign(k, 0);
    r.num_.insert(r.num_.end(), num_.begin(), num_.end());
    r.den_ = den_;
    return r;
  }

  // p(t) / t^k; throws unless exact.
  RationalPoly divided_by_t_power(std::size_t k) const {
    if (is_zero() || k == 0) return *this;
    for (std::size_t i = 0; i < k && i < num_.size(); ++i)
      if (sgn(num_[i]) != 0) throw std::domain_error("polynomial not divisible by t^k");
    RationalPoly r;
    r.num_.assign(num_.begin() + static_cast<std::ptrdiff_t>(k), num_.end());
    r.den_ = den_;
    return r;
  }

  RationalPoly operator-() const {
    RationalPoly r = *this;
    for (auto& x : r.num_) x = -x;
    return r;
  }

  friend RationalPoly operator+(const RationalPoly& a, const RationalPoly& b) {
    return combine(a, b, 1);
  }
  friend RationalPoly operator-(const RationalPoly& a, const RationalPoly& b) {
    return combine(a, b, -1);
  }
  friend RationalPoly operator*(const RationalPoly& a, const RationalPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Integer> out;
    detail::convolve_add(out, a.num_, b.num_);
    return RationalPoly(std::move(out), a.den_ * b.den_);
  }
  friend RationalPoly operator*(const RationalPoly& a, const Rational& s) {
    if (a.is_zero() || sgn(s) == 0) return {};
    std::vector<Integer> out = a.num_;
    for (auto& x : out) x *= s.get_num();
    return RationalPoly(std::move(out), a.den_ * s.get_den());
  }
  friend RationalPoly operator*(const Rational& s, const RationalPoly& a) { return a * s; }
  friend RationalPoly operator/(const RationalPoly& a, const Rational& s) {
    if (sgn(s) == 0) throw std::domain_error("division by zero");
    Rational inv = 1 / s;
    return a * inv;
  }
  RationalPoly& operator+=(const RationalPoly& b) { return *this = *this + b; }
  RationalPoly& operator-=(const RationalPoly& b) { return *this = *this - b; }
  RationalPoly& operator*=(const RationalPoly& b) { return *this = *this * b; }

  friend bool operator==(const RationalPoly& a, const RationalPoly& b) {
    return a.den_ == b.den_ && a.num_ == b.num_;
  }
  friend bool operator!=(const RationalPoly& a, const RationalPoly& b) { return !(a == b); }

  std::string to_string() const {
    if (is_zero()) return "0";
    std::string out;
    for (std::size_t i = 0; i < num_.size(); ++i) {
      Rational c = coefficient(i);
      if (sgn(c) == 0) continue;
      if (!out.empty()) out += sgn(c) > 0 ? " + " : " - ";
      else if (sgn(c) < 0) out += "-";
      Rational a = abs(c);
      if (i == 0 || a != 1) out += a.get_str();
      if (i > 0) out += (a != 1 ? "*t" : "t") + (i > 1 ? "^" + std::to_string(i) : "");
    }
    return out;
  }

 private:
  friend class PolyAccumulator;

  static RationalPoly combine(const RationalPoly& a, const RationalPoly& b, int sign) {
    if (b.is_zero()) return a;
    if (a.is_zero()) return sign > 0 ? b : -b;
    Integer lcm;
    mpz_lcm(lcm.get_mpz_t(), a.den_.get_mpz_t(), b.den_.get_mpz_t());
    Integer fa = lcm / a.den_, fb = lcm / b.den_;
    std::vector<Integer> out(std::max(a.num_.size(), b.num_.size()), 0);
    for (std::size_t i = 0; i < a.num_.size(); ++i) out[i] = a.num_[i] * fa;
    for (std::size_t i = 0; i < b.num_.size(); ++i) {
      if (sign > 0) mpz_addmul(out[i].get_mpz_t(), b.num_[i].get_mpz_t(), fb.get_mpz_t());
      else mpz_submul(out[i].get_mpz_t(), b.num_[i].get_mpz_t(), fb.get_mpz_t());
    }
    return RationalPoly(std::move(out), lcm);
  }

  void normalize() {
    while (!num_.empty() && sgn(num_.back()) == 0) num_.pop_back();
    if (num_.empty()) {
      den_ = 1;
      return;
    }
    if (sgn(den_) < 0) {
      den_ = -den_;
      for (auto& x : num_) x = -x;
    }
    Integer g = den_;
    for (const auto& x : num_) {
      if (g == 1) break;
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    }
    if (g != 1) {
      for (auto& x : num_) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
      mpz_divexact(den_.get_mpz_t(), den_.get_mpz_t(), g.get_mpz_t());
    }
  }

  std::vector<Integer> num_;
  Integer den_ = 1;
};

// Accumulates sum_i s_i * a_i * b_i over a running common denominator, so the
// inner loops are pure integer multiply-accumulate.
class PolyAccumulator {
 public:
  void add_product(const RationalPoly& a, const RationalPoly& b, const Rational& scale = 1) {
    if (a.is_zero() || b.is_zero() || sgn(scale) == 0) return;
    std::vector<Integer> prod;
    detail::convolve_add(prod, a.num_, b.num_);
    add_scaled(prod, a.den_ * b.den_, scale);
  }
  void add(const RationalPoly& a, const Rational& scale = 1) {
    if (a.is_zero() || sgn(scale) == 0) return;
    add_scaled(a.num_, a.den_, scale);
  }
  RationalPoly result() const { return RationalPoly(num_, den_); }

 private:
  void add_scaled(const std::vector<Integer>& n, const Integer& d, const Rational& scale) {
    Integer term_den = d * scale.get_den();
    Integer lcm;
    mpz_lcm(lcm.get_mpz_t(), den_.get_mpz_t(), term_den.get_mpz_t());
    if (lcm != den_) {
      Integer up = lcm / den_;
      for (auto& x : num_) x *= up;
      den_ = lcm;
    }
    Integer factor = (lcm / term_den) * scale.get_num();
    if (num_.size() < n.size()) num_.resize(n.size(), 0);
    for (std::size_t i = 0; i < n.size(); ++i)
      if (sgn(n[i]) != 0) mpz_addmul(num_[i].get_mpz_t(), n[i].get_mpz_t(), factor.get_mpz_t());
  }

  std::vector<Integer> num_;
  Integer den_ = 1;
};

// Law of a nonnegative-integer-valued (or shifted) random variable with exact
// rational probabilities.
class ExactDistribution {
 public:
  ExactDistribution() = default;
  explicit ExactDistribution(std::map<long, Rational> pmf) : pmf_(std::move(pmf)) {
    for (auto it = pmf_.begin(); it != pmf_.end();) {
      if (sgn(it->second) < 0) throw std::invalid_argument("negative probability");
      it = sgn(it->second) == 0 ? pmf_.erase(it) : std::next(it);
    }
  }

  static ExactDistribution from_pgf(const RationalPoly& pgf) {
    std::map<long, Rational> pmf;
    for (int i = 0; i <= pgf.degree(); ++i) {
      Rational c = pgf.coefficient(static_cast<std::size_t>(i));
      if (sgn(c) != 0) pmf.emplace(i, c);
    }
    return ExactDistribution(std::move(pmf));
  }
  static ExactDistribution point_mass(long x) { return ExactDistribution({{x, Rational(1)}}); }

  const std::map<long, Rational>& pmf() const { return pmf_; }
  bool empty() const { return pmf_.empty(); }
  long support_min() const { return pmf_.empty() ? 0 : pmf_.begin()->first; }
  long support_max() const { return pmf_.empty() ? 0 : pmf_.rbegin()->first; }

  Rational probability(long x) const {
    auto it = pmf_.find(x);
    return it == pmf_.end() ? Rational(0) : it->second;
  }
  // P(X <= x)
  Rational cdf(long x) const {
    Rational acc = 0;
    for (const auto& [k, p] : pmf_) {
      if (k > x) break;
      acc += p;
    }
    return acc;
  }
  Rational total() const {
    Rational acc = 0;
    for (const auto& [k, p] : pmf_) acc += p;
    return acc;
  }
  Rational mean() const {
    Rational acc = 0;
    for (const auto& [k, p] : pmf_) acc += p * k;
    return acc;
  }
  ExactDistribution shifted(long c) const {
    std::map<long, Rational> out;
    for (const auto& [k, p] : pmf_) out.emplace(k + c, p);
    return ExactDistribution(std::move(out));
  }
  // Inverse of from_pgf; requires a nonnegative support.
  RationalPoly to_pgf() const {
    std::vector<Rational> c;
    for (const auto& [k, p] : pmf_) {
      if (k < 0) throw std::domain_error("negative outcome has no PGF");
      if (c.size() <= static_cast<std::size_t>(k)) c.resize(static_cast<std::size_t>(k) + 1, 0);
      c[static_cast<std::size_t>(k)] = p;
    }
    return RationalPoly::from_coefficients(c);
  }

  friend bool operator==(const ExactDistribution& a, const ExactDistribution& b) {
    return a.pmf_ == b.pmf_;
  }

 private:
  std::map<long, Rational> pmf_;
};

}  // namespace unfriendly
