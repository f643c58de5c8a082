#pragma once

// Fixed-point ball arithmetic on GMP integers.
//
// A Real holds a midpoint m and a radius r (both integers) at a binary
// precision p; the represented set is [(m - r) 2^-p, (m + r) 2^-p]. Every
// operation rounds the midpoint and widens the radius so the true value
// stays inside the ball.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace unfriendly {

inline long bits_for_digits(int digits) {
  return static_cast<long>(std::ceil(digits * 3.3219280948873623)) + 64;
}

class Real {
 public:
  Real() = default;
  Real(mpz_class mid, mpz_class rad, long prec)
      : mid_(std::move(mid)), rad_(std::move(rad)), prec_(prec) {}

  static Real from_rational(const mpq_class& q, long prec) {
    mpz_class scaled = q.get_num();
    mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), prec);
    mpz_class mid;
    mpz_fdiv_q(mid.get_mpz_t(), scaled.get_mpz_t(), q.get_den_mpz_t());
    mpz_class rem = scaled - mid * q.get_den();
    return Real(mid, rem == 0 ? mpz_class(0) : mpz_class(1), prec);
  }
  static Real from_int(long v, long prec) {
    mpz_class m = v;
    mpz_mul_2exp(m.get_mpz_t(), m.get_mpz_t(), prec);
    return Real(m, 0, prec);
  }

  const mpz_class& mid() const { return mid_; }
  const mpz_class& rad() const { return rad_; }
  long precision() const { return prec_; }

  double to_double() const {
    long exp = 0;
    double d = mpz_get_d_2exp(&exp, mid_.get_mpz_t());
    return std::ldexp(d, static_cast<int>(exp - prec_));
  }
  // Upper bound on the absolute error, as a double.
  double radius() const {
    long exp = 0;
    double d = mpz_get_d_2exp(&exp, rad_.get_mpz_t());
    return std::ldexp(d, static_cast<int>(exp - prec_)) * (1.0 + 1e-15);
  }

  // Lower/upper bounds as exact rationals.
  mpq_class lower() const { return scaled_rational(mid_ - rad_); }
  mpq_class upper() const { return scaled_rational(mid_ + rad_); }
  bool contains(const mpq_class& q) const { return lower() <= q && q <= upper(); }
  bool certainly_positive() const { return mid_ - rad_ > 0; }
  bool certainly_negative() const { return mid_ + rad_ < 0; }

  // Number of decimal digits after the point that the radius guarantees.
  int certified_digits() const {
    if (rad_ == 0) return 1 << 20;
    double r = radius();
    return std::max(0, static_cast<int>(std::floor(-std::log10(2.0 * r))));
  }

  // Midpoint rounded to `digits` places after the decimal point.
  std::string to_decimal(int digits) const {
    mpz_class scaled = mid_;
    mpz_class ten;
    mpz_ui_pow_ui(ten.get_mpz_t(), 10, static_cast<unsigned long>(digits));
    scaled *= ten;
    // round half away from zero
    mpz_class q;
    mpz_class absval = abs(scaled);
    mpz_class half = 1;
    mpz_mul_2exp(half.get_mpz_t(), half.get_mpz_t(), prec_ - 1);
    absval += half;
    mpz_fdiv_q_2exp(q.get_mpz_t(), absval.get_mpz_t(), prec_);
    std::string s = q.get_str();
    if (static_cast<int>(s.size()) <= digits) s.insert(0, digits + 1 - s.size(), '0');
    std::string out = s.substr(0, s.size() - digits);
    if (digits > 0) out += "." + s.substr(s.size() - digits);
    bool negative = mid_ < 0 && q != 0;
    return negative ? "-" + out : out;
  }

  Real with_precision(long prec) const {
    if (prec == prec_) return *this;
    if (prec > prec_) {
      mpz_class m = mid_, r = rad_;
      mpz_mul_2exp(m.get_mpz_t(), m.get_mpz_t(), prec - prec_);
      mpz_mul_2exp(r.get_mpz_t(), r.get_mpz_t(), prec - prec_);
      return Real(m, r, prec);
    }
    mpz_class m, r;
    mpz_fdiv_q_2exp(m.get_mpz_t(), mid_.get_mpz_t(), prec_ - prec);
    mpz_cdiv_q_2exp(r.get_mpz_t(), rad_.get_mpz_t(), prec_ - prec);
    return Real(m, r + 1, prec);
  }

  Real operator-() const { return Real(-mid_, rad_, prec_); }

  friend Real operator+(const Real& a, const Real& b) {
    align(a, b);
    return Real(a.mid_ + b.mid_, a.rad_ + b.rad_, a.prec_);
  }
  friend Real operator-(const Real& a, const Real& b) {
    align(a, b);
    return Real(a.mid_ - b.mid_, a.rad_ + b.rad_, a.prec_);
  }
  friend Real operator*(const Real& a, const Real& b) {
    align(a, b);
    mpz_class prod = a.mid_ * b.mid_;
    mpz_class mid;
    mpz_fdiv_q_2exp(mid.get_mpz_t(), prod.get_mpz_t(), a.prec_);
    mpz_class err = abs(a.mid_) * b.rad_ + abs(b.mid_) * a.rad_ + a.rad_ * b.rad_;
    mpz_class rad;
    mpz_cdiv_q_2exp(rad.get_mpz_t(), err.get_mpz_t(), a.prec_);
    return Real(mid, rad + 1, a.prec_);
  }
  friend Real operator/(const Real& a, const Real& b) {
    align(a, b);
    mpz_class bl = abs(b.mid_) - b.rad_;
    if (bl <= 0) throw std::domain_error("Real division by a ball containing zero");
    mpz_class num = a.mid_;
    mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), a.prec_);
    mpz_class mid;
    mpz_fdiv_q(mid.get_mpz_t(), num.get_mpz_t(), b.mid_.get_mpz_t());
    // |a/b - ma/mb| <= (ra |mb| + |ma| rb) / (|mb| (|mb| - rb))
    mpz_class err = a.rad_ * abs(b.mid_) + abs(a.mid_) * b.rad_;
    mpz_mul_2exp(err.get_mpz_t(), err.get_mpz_t(), a.prec_);
    mpz_class den = abs(b.mid_) * bl;
    mpz_class rad;
    mpz_cdiv_q(rad.get_mpz_t(), err.get_mpz_t(), den.get_mpz_t());
    return Real(mid, rad + 1, a.prec_);
  }

  Real operator*(long k) const { return Real(mid_ * k, rad_ * (k < 0 ? -k : k), prec_); }
  Real operator/(long k) const {
    if (k == 0) throw std::domain_error("Real division by zero");
    mpz_class mid, rad;
    mpz_fdiv_q_ui(mid.get_mpz_t(), mid_.get_mpz_t(), static_cast<unsigned long>(k < 0 ? -k : k));
    if (k < 0) mid = -mid;
    mpz_cdiv_q_ui(rad.get_mpz_t(), rad_.get_mpz_t(), static_cast<unsigned long>(k < 0 ? -k : k));
    return Real(mid, rad + 1, prec_);
  }
  Real operator*(const mpq_class& q) const {
    Real r = *this * Real(q.get_num(), 0, 0).with_precision(prec_);
    mpz_class mid, rad;
    mpz_fdiv_q(mid.get_mpz_t(), r.mid_.get_mpz_t(), q.get_den_mpz_t());
    mpz_cdiv_q(rad.get_mpz_t(), r.rad_.get_mpz_t(), q.get_den_mpz_t());
    return Real(mid, rad + 1, prec_);
  }

  // Widen the radius by an absolute amount given as a rational.
  Real widened(const mpq_class& bound) const {
    mpz_class scaled = bound.get_num();
    mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), prec_);
    mpz_class r;
    mpz_cdiv_q(r.get_mpz_t(), scaled.get_mpz_t(), bound.get_den_mpz_t());
    return Real(mid_, rad_ + abs(r), prec_);
  }

 private:
  mpq_class scaled_rational(const mpz_class& v) const {
    mpz_class den = 1;
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), prec_);
    mpq_class q(v, den);
    q.canonicalize();
    return q;
  }
  static void align(const Real& a, const Real& b) {
    if (a.prec_ != b.prec_) throw std::logic_error("Real operands at different precision");
  }

  mpz_class mid_ = 0;
  mpz_class rad_ = 0;
  long prec_ = 0;
};

inline Real sqrt(const Real& x) {
  mpz_class lo = x.mid() - x.rad();
  if (lo <= 0) throw std::domain_error("sqrt of a ball that is not strictly positive");
  long p = x.precision();
  mpz_class scaled = x.mid();
  mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), p);
  mpz_class mid;
  mpz_sqrt(mid.get_mpz_t(), scaled.get_mpz_t());
  // |sqrt(a) - sqrt(b)| <= |a - b| / (2 sqrt(min))
  mpz_class lo_scaled = lo;
  mpz_mul_2exp(lo_scaled.get_mpz_t(), lo_scaled.get_mpz_t(), p);
  mpz_class root_lo;
  mpz_sqrt(root_lo.get_mpz_t(), lo_scaled.get_mpz_t());
  mpz_class err = x.rad();
  mpz_mul_2exp(err.get_mpz_t(), err.get_mpz_t(), p);
  mpz_class rad = 0;
  if (x.rad() != 0) {
    mpz_class den = 2 * root_lo;
    mpz_cdiv_q(rad.get_mpz_t(), err.get_mpz_t(), den.get_mpz_t());
  }
  return Real(mid, rad + 1, p);
}

inline Real cbrt(const Real& x) {
  mpz_class lo = x.mid() - x.rad();
  if (lo <= 0) throw std::domain_error("cbrt of a ball that is not strictly positive");
  long p = x.precision();
  mpz_class scaled = x.mid();
  mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), 2 * p);
  mpz_class mid;
  mpz_root(mid.get_mpz_t(), scaled.get_mpz_t(), 3);
  // |cbrt(a) - cbrt(b)| <= |a - b| / (3 min^{2/3})
  mpz_class lo_scaled = lo;
  mpz_mul_2exp(lo_scaled.get_mpz_t(), lo_scaled.get_mpz_t(), 2 * p);
  mpz_class root_lo;
  mpz_root(root_lo.get_mpz_t(), lo_scaled.get_mpz_t(), 3);
  mpz_class rad = 0;
  if (x.rad() != 0 && root_lo > 0) {
    mpz_class err = x.rad();
    mpz_mul_2exp(err.get_mpz_t(), err.get_mpz_t(), 2 * p);
    mpz_class den = 3 * root_lo * root_lo;
    mpz_cdiv_q(rad.get_mpz_t(), err.get_mpz_t(), den.get_mpz_t());
  }
  return Real(mid, rad + 1, p);
}

// exp(q) for a rational q by Taylor series, squaring for |q| > 1/2.
inline Real exp(const mpq_class& q, long prec) {
  long work = prec + 32;
  int squarings = 0;
  mpq_class r = q;
  while (abs(r) > mpq_class(1, 2)) {
    r /= 2;
    ++squarings;
  }
  work += 2 * squarings;
  mpz_class one = 1;
  mpz_mul_2exp(one.get_mpz_t(), one.get_mpz_t(), work);
  mpz_class term = one, sum = one;
  long steps = 0;
  for (long k = 1;; ++k) {
    term *= r.get_num();
    mpz_class den = r.get_den() * k;
    mpz_tdiv_q(term.get_mpz_t(), term.get_mpz_t(), den.get_mpz_t());
    if (term == 0) break;
    sum += term;
    ++steps;
  }
  // Each truncated division loses < 1 ulp and earlier losses shrink by |r|/k <= 1/2,
  // so every term is off by < 2 ulps; the dropped tail is below 4 ulps.
  Real result(sum, mpz_class(2 * steps + 8), work);
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result.with_precision(prec);
}

// Machin: pi = 16 atan(1/5) - 4 atan(1/239).
inline Real pi(long prec) {
  long work = prec + 32;
  auto atan_inv = [work](long x) {
    mpz_class one = 1;
    mpz_mul_2exp(one.get_mpz_t(), one.get_mpz_t(), work);
    mpz_class power = one / x;  // 1/x^(2k+1)
    mpz_class sum = power;
    long x2 = x * x;
    long steps = 1;
    for (long k = 1;; ++k) {
      power /= x2;
      if (power == 0) break;
      mpz_class term = power / (2 * k + 1);
      if (k % 2) sum -= term; else sum += term;
      ++steps;
    }
    return Real(sum, mpz_class(2 * steps + 2), work);
  };
  Real result = atan_inv(5) * 16L - atan_inv(239) * 4L;
  return result.with_precision(prec);
}

// erf(x) = 2/sqrt(pi) sum_k (-1)^k x^(2k+1) / (k! (2k+1)), for |x| <= 2.
inline Real erf(const Real& x) {
  long prec = x.precision();
  if (std::abs(x.to_double()) > 2.0) throw std::domain_error("erf series used only for |x| <= 2");
  long work = prec + 48;
  Real xw = x.with_precision(work);
  Real x2 = xw * xw;
  Real power = xw;  // x^(2k+1) / k!
  Real sum = xw;
  mpq_class eps(1);
  mpz_class scale = 1;
  mpz_mul_2exp(scale.get_mpz_t(), scale.get_mpz_t(), work);
  eps /= mpq_class(scale);
  for (long k = 1; k < 100000; ++k) {
    power = power * x2 / k;
    Real term = power / (2 * k + 1);
    if (k % 2) sum = sum - term; else sum = sum + term;
    // alternating with decreasing terms once k > x^2: remainder <= next term
    if (k > 8 && abs(term.mid()) + term.rad() < 4) {
      Real next = power * x2 / (k + 1) / (2 * k + 3);
      mpq_class bound = abs(next.upper()) > abs(next.lower()) ? abs(next.upper()) : abs(next.lower());
      sum = sum.widened(bound);
      break;
    }
  }
  Real two_over_sqrt_pi = Real::from_int(2, work) / sqrt(pi(work));
  return (two_over_sqrt_pi * sum).with_precision(prec);
}

}  // namespace unfriendly
