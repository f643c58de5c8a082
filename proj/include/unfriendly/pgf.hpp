#pragma once

// Exact PGFs of the family laws via the first-seat recurrences, and exact
// moments/cumulants derived from them.

#include <stdexcept>
#include <vector>

#include "unfriendly/rational_poly.hpp"
#include "unfriendly/seat_model.hpp"

namespace unfriendly {

struct MomentReport {
  int n = 0;
  Rational mean, variance;
  Rational m3, m4;          // central moments
  Rational kappa3, kappa4;  // cumulants; kappa2 is the variance
};

// Memoized bottom-up engine. A, B and Y are computed jointly since each
// recurrence consumes the others. Negative indices mean the empty grid (law 1).
// Not thread-safe.
class PgfEngine {
 public:
  PgfEngine() {
    a_.push_back(RationalPoly(1));
    b_.push_back(RationalPoly::t());
    y_.push_back(RationalPoly(1));
    x_.push_back(RationalPoly(1));
    z_.push_back(RationalPoly(1));
  }

  const RationalPoly& pgf(FamilyTag tag, int n) {
    if (n < 0) throw std::invalid_argument("index must be nonnegative");
    switch (tag) {
      case FamilyTag::A: extend_aby(n); return a_[static_cast<std::size_t>(n)];
      case FamilyTag::B: extend_aby(n); return b_[static_cast<std::size_t>(n)];
      case FamilyTag::Y: extend_aby(n); return y_[static_cast<std::size_t>(n)];
      case FamilyTag::X: extend_x(n); return x_[static_cast<std::size_t>(n)];
      case FamilyTag::Z: extend_z(n); return z_[static_cast<std::size_t>(n)];
      case FamilyTag::Custom: break;
    }
    throw std::invalid_argument("pgf needs a named family");
  }

  ExactDistribution distribution(FamilyTag tag, int n) { return ExactDistribution::from_pgf(pgf(tag, n)); }

 private:
  static const RationalPoly& at(const std::vector<RationalPoly>& v, long i) {
    static const RationalPoly one(1);
    return i < 0 ? one : v[static_cast<std::size_t>(i)];
  }

  // Adds sum_{k=lo..hi} f[k+p] g[hi+lo-k+q] using the k <-> hi+lo-k symmetry
  // when f and g coincide.
  static void add_convolution(PolyAccumulator& acc, const std::vector<RationalPoly>& f, long p,
                              const std::vector<RationalPoly>& g, long q, long lo, long hi) {
    if (&f == &g && p == q) {
      for (long k = lo, j = hi; k <= j; ++k, --j)
        acc.add_product(at(f, k + p), at(g, j + q), k == j ? Rational(1) : Rational(2));
      return;
    }
    for (long k = lo; k <= hi; ++k) acc.add_product(at(f, k + p), at(g, hi + lo - k + q));
  }

  static RationalPoly finish(const PolyAccumulator& acc, long divisor) {
    return acc.result().shifted(1) * Rational(1, divisor);
  }

  void extend_aby(int n) {
    for (long m = static_cast<long>(a_.size()); m <= n; ++m) {
      PolyAccumulator a;  // A_m = (t/m) sum_{k=1..m} A_{k-2} B_{m-k}
      for (long k = 1; k <= m; ++k) a.add_product(at(a_, k - 2), at(b_, m - k));

      // B_m = (t/2m) (sum_{k=1..m-1} B_{k-1} B_{m-1-k} + sum_{k=1..m+1} A_{k-2} A_{m-k})
      PolyAccumulator b;
      add_convolution(b, b_, -1, b_, -1, 1, m - 1);
      add_convolution(b, a_, -2, a_, -2, 1, m + 1);

      // Y_m = (t/(2m-1)) (sum_{k=0..m-2} Y_k B_{m-2-k} + sum_{k=0..m-1} Y_k A_{m-2-k})
      PolyAccumulator y;
      for (long k = 0; k <= m - 2; ++k) y.add_product(at(y_, k), at(b_, m - 2 - k));
      for (long k = 0; k <= m - 1; ++k) y.add_product(at(y_, k), at(a_, m - 2 - k));

      // the A sum in B reaches A_{m-1} only, so all three can be finished together
      a_.push_back(finish(a, m));
      b_.push_back(finish(b, 2 * m));
      y_.push_back(finish(y, 2 * m - 1));
    }
  }

  void extend_x(int n) {
    if (n >= 1) extend_aby(n - 1);
    for (long m = static_cast<long>(x_.size()); m <= n; ++m) {
      PolyAccumulator x;  // X_m = (t/m) sum_{k=0..m-1} Y_k Y_{m-1-k}
      add_convolution(x, y_, 0, y_, 0, 0, m - 1);
      x_.push_back(finish(x, m));
    }
  }

  void extend_z(int n) {
    for (long m = static_cast<long>(z_.size()); m <= n; ++m) {
      PolyAccumulator z;  // Z_m = (t/m) sum_{k=1..m} Z_{k-2} Z_{m-k-1}
      add_convolution(z, z_, -2, z_, -2, 1, m);
      z_.push_back(finish(z, m));
    }
  }

  std::vector<RationalPoly> a_, b_, y_, x_, z_;
};

inline RationalPoly pgf(const Family& family) {
  PgfEngine engine;
  return engine.pgf(family.tag, family.n);
}

inline MomentReport moments_of(const ExactDistribution& d, int n) {
  MomentReport r;
  r.n = n;
  r.mean = d.mean();
  Rational m2 = 0, m3 = 0, m4 = 0;
  for (const auto& [k, p] : d.pmf()) {
    Rational dev = Rational(k) - r.mean;
    Rational sq = dev * dev;
    m2 += p * sq;
    m3 += p * sq * dev;
    m4 += p * sq * sq;
  }
  r.variance = m2;
  r.m3 = m3;
  r.m4 = m4;
  r.kappa3 = m3;
  r.kappa4 = m4 - 3 * m2 * m2;
  return r;
}

inline MomentReport moments(PgfEngine& engine, const Family& family) {
  return moments_of(engine.distribution(family.tag, family.n), family.n);
}

inline MomentReport moments(const Family& family) {
  PgfEngine engine;
  return moments(engine, family);
}

// Mean of the one-row law: sum_{0<=k<n} (n-k)(-2)^k/(k+1)!.
inline Rational one_row_mean(int n) {
  if (n < 0) throw std::invalid_argument("index must be nonnegative");
  Rational sum = 0;
  Integer power = 1, fact = 1;
  for (long k = 0; k < n; ++k) {
    fact *= k + 1;
    sum += Rational(Integer((n - k) * power), fact);
    power *= -2;
  }
  sum.canonicalize();
  return sum;
}

// Closed form of the one-row variance:
// C(n+1,2) - mu_n^2 - sum_{0<=k<=n-2} (-2)^k/(k+2)! C(n-k,2) (2^k(k-2) + k^2 + 4k + 6).
inline Rational page_variance(int n) {
  if (n < 0) throw std::invalid_argument("index must be nonnegative");
  Rational mu = one_row_mean(n);
  Rational v = Rational(Integer(n + 1) * n, 2) - mu * mu;
  Integer power = 1, fact = 2;  // (-2)^k, (k+2)!
  for (long k = 0; k <= n - 2; ++k) {
    Integer pair = Integer(n - k) * (n - k - 1) / 2;
    Integer two_k = 1;
    two_k <<= static_cast<mp_bitcnt_t>(k);
    Integer bracket = two_k * (k - 2) + k * k + 4 * k + 6;
    v -= Rational(power * pair * bracket, fact);
    power *= -2;
    fact *= k + 3;
  }
  v.canonicalize();
  return v;
}

}  // namespace unfriendly
