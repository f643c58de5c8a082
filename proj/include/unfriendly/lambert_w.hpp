#pragma once

// Complex Lambert W on every branch: w e^w = z.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace unfriendly {

using Complex = std::complex<double>;

// Which side of a branch cut a real z is taken on. Reject refuses z on a cut.
enum class CutSide { Reject, Upper, Lower };

class BranchCutError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class LambertWError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline bool on_w_cut(int k, Complex z) {
  if (z.imag() != 0) return false;
  if (k == 0) return z.real() < -std::exp(-1.0);
  return z.real() <= 0;
}

inline Complex halley(Complex w, Complex z, int max_iter = 80) {
  for (int i = 0; i < max_iter; ++i) {
    Complex ew = std::exp(w);
    Complex f = w * ew - z;
    Complex wp1 = w + 1.0;
    Complex denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    Complex step = f / denom;
    if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) return {NAN, NAN};
    w -= step;
    if (std::abs(step) <= 4e-16 * (1 + std::abs(w))) return w;
  }
  return {NAN, NAN};
}

// Branch of a computed root. Off the real axis w + log w - log z = 2 pi i k
// identifies the branch; real roots below -1 come from the k = -1 branch on
// the upper side of the cut and from k = 1 on the lower side.
inline bool is_branch(int k, Complex w, Complex z) {
  if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) return false;
  const double tol = 1e-12 * std::abs(w);
  if (std::abs(w.imag()) <= tol && z.imag() == 0 && z.real() < 0) {
    if (w.real() >= -1) return k == 0;
    return std::signbit(z.imag()) ? k == 1 : k == -1;
  }
  Complex d = w + std::log(w) - std::log(z);
  return std::lround(d.imag() / (2 * std::numbers::pi)) == k;
}

}  // namespace detail

inline Complex lambert_w(int k, Complex z, CutSide side = CutSide::Reject) {
  using std::numbers::pi;
  const double inv_e = std::exp(-1.0);
  if (z == Complex(0)) {
    if (k == 0) return 0;
    throw std::domain_error("W_k(0) is unbounded for k != 0");
  }
  if (z.imag() == 0) {
    if (detail::on_w_cut(k, z) && side == CutSide::Reject)
      throw BranchCutError("z = " + std::to_string(z.real()) + " lies on the cut of branch " + std::to_string(k));
    z = Complex(z.real(), side == CutSide::Lower ? -0.0 : 0.0);
  }
  const bool lower = std::signbit(z.imag());

  std::vector<Complex> seeds;
  Complex p = std::sqrt(2.0 * (std::exp(1.0) * z + 1.0));
  bool near_branch_point = std::abs(z + inv_e) < 0.3;
  if (k == 0) {
    if (std::abs(z) < 0.3) seeds.push_back(z * (1.0 + z * (-1.0 + z * (1.5 + z * (-8.0 / 3 + z * (125.0 / 24))))));
    if (near_branch_point) seeds.push_back(-1.0 + p - p * p / 3.0 + 11.0 / 72 * p * p * p);
    if (std::abs(z) < 3) seeds.push_back(std::log(1.0 + z));
  } else if ((k == -1 && !lower) || (k == 1 && lower)) {
    if (near_branch_point) seeds.push_back(-1.0 - p - p * p / 3.0 - 11.0 / 72 * p * p * p);
    if (z.imag() == 0 && z.real() < 0 && z.real() > -inv_e) {
      double l = std::log(-z.real());
      seeds.emplace_back(l - std::log(-l), 0.0);
    }
  }
  Complex L1 = std::log(z) + Complex(0, 2 * pi * k);
  seeds.push_back(L1 - std::log(L1) + std::log(L1) / L1);
  seeds.push_back(L1 - std::log(L1));

  for (Complex seed : seeds) {
    Complex w = detail::halley(seed, z);
    if (detail::is_branch(k, w, z)) return w;
  }
  throw LambertWError("Lambert W iteration failed for branch " + std::to_string(k));
}

}  // namespace unfriendly
