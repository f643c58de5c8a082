#pragma once

// The uniform ("hard-core") model: every maximal unfriendly arrangement is
// equally likely. Fibonacci counts, PGFs three ways, exhaustive enumeration,
// exact uniform sampling, and the limiting constants.

#include <array>
#include <map>
#include <stdexcept>
#include <vector>

#include "unfriendly/real.hpp"
#include "unfriendly/rng.hpp"
#include "unfriendly/seat_model.hpp"
#include "unfriendly/series.hpp"

namespace unfriendly {

// N_0 = N_1 = 1, N_n = N_{n-1} + N_{n-2}
inline Integer fib_count(int n) {
  if (n < 0) throw std::invalid_argument("index must be nonnegative");
  Integer a = 1, b = 1;
  for (int i = 1; i < n; ++i) {
    Integer c = a + b;
    a = b;
    b = c;
  }
  return b;
}

namespace detail {

inline void check_hardcore_family(FamilyTag tag, int n) {
  if (n < 0) throw std::invalid_argument("index must be nonnegative");
  if (tag != FamilyTag::X && tag != FamilyTag::Y) throw std::invalid_argument("hardcore model covers X and Y only");
}

}  // namespace detail

// Y_n = (t N_{n-1}/N_n) Y_{n-1} + (t N_{n-2}/N_n) Y_{n-2}, X_n = t Y_{n-1}
inline RationalPoly pgf_hardcore_recurrence(FamilyTag tag, int n) {
  detail::check_hardcore_family(tag, n);
  if (tag == FamilyTag::X) return n == 0 ? RationalPoly(1) : pgf_hardcore_recurrence(FamilyTag::Y, n - 1).shifted(1);
  RationalPoly prev(1), cur = RationalPoly::t();
  if (n == 0) return prev;
  Integer n2 = 1, n1 = 1;  // N_{m-2}, N_{m-1}
  for (int m = 2; m <= n; ++m) {
    Integer nm = n1 + n2;
    Rational w1(n1, nm), w2(n2, nm);
    w1.canonicalize();
    w2.canonicalize();
    RationalPoly next = (cur * w1 + prev * w2).shifted(1);
    prev = std::move(cur);
    cur = std::move(next);
    n2 = n1;
    n1 = nm;
  }
  return cur;
}

// X_n = (t/N_{n-1}) sum_{ceil((n-1)/2) <= j <= n-1} C(j, n-1-j) t^j
inline RationalPoly pgf_hardcore(FamilyTag tag, int n) {
  detail::check_hardcore_family(tag, n);
  if (tag == FamilyTag::Y) return pgf_hardcore(FamilyTag::X, n + 1).divided_by_t_power(1);
  if (n == 0) return RationalPoly(1);
  Integer total = fib_count(n - 1);
  std::vector<Rational> c(static_cast<std::size_t>(n + 1), Rational(0));
  for (int j = n / 2; j <= n - 1; ++j) {
    Rational q(detail::binomial(j, n - 1 - j), total);
    q.canonicalize();
    c[static_cast<std::size_t>(j + 1)] = q;
  }
  return RationalPoly::from_coefficients(c);
}

// ---------------------------------------------------------------------------
// Column transfer over an arbitrary two-row profile.
//
// State after a column: which of its seats are occupied, and which of its
// empty seats are still undominated (they need an occupied right neighbour).

class MaximalSetTransfer {
 public:
  explicit MaximalSetTransfer(std::vector<std::uint8_t> profile) : profile_(std::move(profile)) { build(); }
  explicit MaximalSetTransfer(const SeatGrid& grid) : MaximalSetTransfer(grid.profile()) {}

  // Coefficient k = number of maximal sets of size k.
  const std::vector<Integer>& size_counts() const { return sizes_; }

  Integer count() const {
    Integer s = 0;
    for (const auto& c : sizes_) s += c;
    return s;
  }

  ExactDistribution law() const {
    std::map<long, Rational> pmf;
    Integer total = count();
    for (std::size_t k = 0; k < sizes_.size(); ++k)
      if (sgn(sizes_[k]) != 0) {
        Rational q(sizes_[k], total);
        q.canonicalize();
        pmf.emplace(static_cast<long>(k), q);
      }
    return ExactDistribution(std::move(pmf));
  }

  // One maximal set uniformly at random, as occupied masks per column.
  std::vector<std::uint8_t> sample(SplitMix64& rng) const {
    std::vector<std::uint8_t> occ(profile_.size(), 0);
    State s{0, 0};
    for (std::size_t c = 0; c < profile_.size(); ++c) {
      const auto& options = moves(c, s);
      Integer total = 0;
      for (const State& nx : options) total += ways_[c + 1][key(nx)];
      Integer pick = uniform_below(total, rng);
      for (const State& nx : options) {
        const Integer& w = ways_[c + 1][key(nx)];
        if (pick < w) {
          s = nx;
          break;
        }
        pick -= w;
      }
      occ[c] = s.occ;
    }
    return occ;
  }

  static Integer uniform_below(const Integer& bound, SplitMix64& rng) {
    if (sgn(bound) <= 0) throw std::invalid_argument("empty range");
    std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
    for (;;) {
      Integer r = 0;
      for (std::size_t got = 0; got < bits; got += 64) {
        r <<= 64;
        Integer limb;
        std::uint64_t x = rng();
        mpz_import(limb.get_mpz_t(), 1, 1, sizeof x, 0, 0, &x);
        r += limb;
      }
      mpz_fdiv_r_2exp(r.get_mpz_t(), r.get_mpz_t(), bits);
      if (r < bound) return r;
    }
  }

 private:
  struct State {
    std::uint8_t occ, open;
  };
  static std::size_t key(State s) { return static_cast<std::size_t>(s.occ | (s.open << 2)); }

  // Successor states when column c follows a column in state s.
  std::vector<State> successors(std::size_t c, State s) const {
    std::vector<State> out;
    std::uint8_t present = profile_[c];
    for (std::uint8_t occ : {std::uint8_t(0), std::uint8_t(1), std::uint8_t(2)}) {
      if ((occ & present) != occ) continue;
      if (occ & s.occ) continue;                  // left/right neighbours
      if ((s.open & occ) != s.open) continue;     // open seats must be covered now
      std::uint8_t covered = occ | s.occ;         // same row, previous column
      if (occ) covered |= static_cast<std::uint8_t>(present & ~occ);  // opposite seat
      out.push_back({occ, static_cast<std::uint8_t>(present & ~covered)});
    }
    return out;
  }

  const std::vector<State>& moves(std::size_t c, State s) const { return moves_[c][key(s)]; }

  void build() {
    const std::size_t cols = profile_.size();
    moves_.assign(cols, {});
    // ways_[c][state] = completions of columns c..end given state of column c-1
    ways_.assign(cols + 1, std::array<Integer, 16>{});
    for (std::size_t k = 0; k < 16; ++k) ways_[cols][k] = (k >> 2) == 0 ? 1 : 0;
    for (std::size_t c = cols; c-- > 0;) {
      for (std::uint8_t occ = 0; occ < 4; ++occ)
        for (std::uint8_t open = 0; open < 4; ++open) {
          State s{occ, open};
          moves_[c][key(s)] = successors(c, s);
          Integer w = 0;
          for (const State& nx : moves_[c][key(s)]) w += ways_[c + 1][key(nx)];
          ways_[c][key(s)] = w;
        }
    }
    // sizes by a forward pass with polynomial weights
    std::map<std::size_t, std::vector<Integer>> layer{{key({0, 0}), {Integer(1)}}};
    for (std::size_t c = 0; c < cols; ++c) {
      std::map<std::size_t, std::vector<Integer>> next;
      for (const auto& [k, poly] : layer) {
        for (const State& nx : moves_[c][k]) {
          int add = nx.occ ? 1 : 0;
          auto& dst = next[key(nx)];
          if (dst.size() < poly.size() + 1) dst.resize(poly.size() + 1, 0);
          for (std::size_t i = 0; i < poly.size(); ++i) dst[i + static_cast<std::size_t>(add)] += poly[i];
        }
      }
      layer = std::move(next);
    }
    sizes_.clear();
    for (const auto& [k, poly] : layer) {
      if ((k >> 2) != 0) continue;
      if (sizes_.size() < poly.size()) sizes_.resize(poly.size(), 0);
      for (std::size_t i = 0; i < poly.size(); ++i) sizes_[i] += poly[i];
    }
    while (!sizes_.empty() && sgn(sizes_.back()) == 0) sizes_.pop_back();
  }

  std::vector<std::uint8_t> profile_;
  std::vector<std::array<std::vector<State>, 16>> moves_;
  std::vector<std::array<Integer, 16>> ways_;
  std::vector<Integer> sizes_;
};

inline RationalPoly pgf_hardcore_transfer(FamilyTag tag, int n) {
  detail::check_hardcore_family(tag, n);
  SeatGrid g = build_config({tag, n});
  if (g.empty()) return RationalPoly(1);
  return MaximalSetTransfer(g).law().to_pgf();
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration

struct Enumeration {
  Integer count = 0;
  std::map<long, Integer> by_size;
};

// All maximal independent sets of the seat graph, by backtracking over seats in
// order. A seat left empty must end up with an occupied neighbour.
inline Enumeration enumerate_maximal(const SeatGrid& grid) {
  const std::size_t m = grid.size();
  if (m > 64) throw OracleLimitExceeded(m, 64);
  std::vector<std::size_t> last_neighbor(m, 0);  // seats are decided in index order
  for (std::size_t i = 0; i < m; ++i) {
    last_neighbor[i] = i;
    for (std::size_t j : grid.neighbors(i)) last_neighbor[i] = std::max(last_neighbor[i], j);
  }
  Enumeration out;
  std::vector<char> in(m, 0);
  auto dominated = [&](std::size_t i) {
    for (std::size_t j : grid.neighbors(i))
      if (in[j]) return true;
    return false;
  };
  // seats whose last neighbour is decided at step i, and which are empty, must be dominated
  std::vector<std::vector<std::size_t>> closes(m);
  for (std::size_t i = 0; i < m; ++i) closes[last_neighbor[i]].push_back(i);
  auto settled = [&](std::size_t i) {
    for (std::size_t s : closes[i])
      if (!in[s] && !dominated(s)) return false;
    return true;
  };
  auto rec = [&](auto&& self, std::size_t i, long size) -> void {
    if (i == m) {
      out.count += 1;
      out.by_size[size] += 1;
      return;
    }
    if (!dominated(i)) {
      in[i] = 1;
      if (settled(i)) self(self, i + 1, size + 1);
      in[i] = 0;
    }
    if (settled(i)) self(self, i + 1, size);
  };
  if (m > 0) rec(rec, 0, 0);
  else {
    out.count = 1;
    out.by_size[0] = 1;
  }
  return out;
}

// Arrangements of the Y_n grid; must number N_n.
inline Enumeration enumerate_arrangements(int n) {
  if (n < 0 || n > 20) throw std::invalid_argument("full enumeration needs 0 <= n <= 20");
  return enumerate_maximal(build_config({FamilyTag::Y, n}));
}

// Occupied seats of one uniform arrangement of a family grid.
inline long sample_arrangement_size(FamilyTag tag, int n, SplitMix64& rng) {
  detail::check_hardcore_family(tag, n);
  SeatGrid g = build_config({tag, n});
  if (g.empty()) return 0;
  long size = 0;
  for (std::uint8_t occ : MaximalSetTransfer(g).sample(rng)) size += occ ? 1 : 0;
  return size;
}

// ---------------------------------------------------------------------------
// Constants

struct HardcoreConstants {
  Real two_row_density;          // 1/(5 - sqrt 5), per seat
  Real two_row_variance;         // per column, as confirmed by exact laws
  Real two_row_variance_printed; // 3(3 - sqrt 5)/(sqrt 5 (5 - sqrt 5)^2)
  Real alpha;                    // cbrt(100 + 12 sqrt 69)
  Real one_row_density;
  Real one_row_variance;
};

inline HardcoreConstants hardcore_constants(int digits) {
  if (digits < 10) throw std::invalid_argument("hardcore_constants needs at least 10 digits");
  const long prec = bits_for_digits(digits + 10);
  auto num = [prec](long v) { return Real::from_int(v, prec); };
  Real r5 = sqrt(num(5));
  Real d = num(5) - r5;
  HardcoreConstants h;
  h.two_row_density = num(1) / d;
  h.two_row_variance = (num(3) - r5) * 2L / (r5 * d * d);
  h.two_row_variance_printed = (num(3) - r5) * 3L / (r5 * d * d);
  Real a = cbrt(num(100) + sqrt(num(69)) * 12L);
  h.alpha = a;
  Real a2 = a * a, a3 = a2 * a, a4 = a3 * a;
  h.one_row_density = (a - num(2)) * (a + num(2)) * (a + num(2)) * (a3 - num(192)) / 4416L;
  Real top = a4 * 3L + a3 * 17L - a2 * 184L + a * 68L + num(48);
  Real bottom = a2 - a * 2L + num(4);
  h.one_row_variance = top * Rational(6, 529) / (bottom * bottom);
  return h;
}

// Density and variance per seat of a one-row uniform model, read off from the
// exact laws of two consecutive lengths (the increments converge geometrically).
struct OneRowEstimate {
  double density = 0, variance = 0;
};

inline OneRowEstimate one_row_transfer_estimate(int n = 200) {
  auto moments_at = [](int len) {
    ExactDistribution d = MaximalSetTransfer(std::vector<std::uint8_t>(static_cast<std::size_t>(len), 1)).law();
    Rational mean = d.mean(), m2 = 0;
    for (const auto& [k, p] : d.pmf()) m2 += p * (k - mean) * (k - mean);
    return std::pair{mean, m2};
  };
  auto [m0, v0] = moments_at(n);
  auto [m1, v1] = moments_at(n + 1);
  return {Rational(m1 - m0).get_d(), Rational(v1 - v0).get_d()};
}

}  // namespace unfriendly
