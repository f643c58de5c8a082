#pragma once

// First-order stochastic dominance between exact laws: the relation ladder
// behind the sandwich X_n between A_{n-1}-2 and A_{n+1}, and the subgraph
// counterexamples.

#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "unfriendly/pgf.hpp"
#include "unfriendly/seat_model.hpp"

namespace unfriendly {

// `holds` means shift + lhs >= rhs, i.e. P(lhs + shift <= x) <= P(rhs <= x) for all x.
// witness is the most violated x when it fails, else the tightest one;
// margin = P(rhs <= x) - P(lhs + shift <= x) there.
struct DominanceVerdict {
  std::string label;
  int n = 0;
  bool holds = true;
  long witness = 0;
  Rational margin = 0;
  bool asserted = true;  // false for probes that are only reported
};

inline DominanceVerdict sd_ge(const ExactDistribution& lhs, const ExactDistribution& rhs, long shift = 0) {
  std::set<long> points;
  for (const auto& [k, p] : lhs.pmf()) points.insert(k + shift);
  for (const auto& [k, p] : rhs.pmf()) points.insert(k);
  DominanceVerdict v;
  bool first = true;
  // both CDFs are step functions, so checking at the joint support suffices
  Rational cl = 0, cr = 0;
  auto li = lhs.pmf().begin();
  auto ri = rhs.pmf().begin();
  for (long x : points) {
    for (; li != lhs.pmf().end() && li->first + shift <= x; ++li) cl += li->second;
    for (; ri != rhs.pmf().end() && ri->first <= x; ++ri) cr += ri->second;
    Rational slack = cr - cl;
    if (first || slack < v.margin) {
      v.margin = slack;
      v.witness = x;
      first = false;
    }
  }
  v.margin.canonicalize();
  v.holds = sgn(v.margin) >= 0;
  return v;
}

namespace detail {

class LadderLaws {
 public:
  explicit LadderLaws(PgfEngine& engine) : engine_(engine) {}
  ExactDistribution operator()(FamilyTag tag, int n) {
    if (n < 0) return ExactDistribution::point_mass(0);
    return engine_.distribution(tag, n);
  }

 private:
  PgfEngine& engine_;
};

}  // namespace detail

inline std::string ladder_label(const std::string& tag, int n) { return tag + "@" + std::to_string(n); }

// The seventeen ladder relations, the sandwich, the composed forms, and the -1 probe for 1 <= n <= n_max.
inline std::vector<DominanceVerdict> verify_ladder(int n_max, PgfEngine* engine = nullptr) {
  if (n_max < 1) throw std::invalid_argument("n_max must be positive");
  PgfEngine local;
  detail::LadderLaws law(engine ? *engine : local);
  using F = FamilyTag;
  struct Rel {
    const char* label;
    long shift;
    F lhs;
    int lhs_off;
    F rhs;
    int rhs_off;
    bool asserted;
  };
  // shift + lhs_{n+lhs_off} >= rhs_{n+rhs_off}
  static const Rel rels[] = {
      {"ladder: 1+B_n >= A_n", 1, F::B, 0, F::A, 0, true},
      {"ladder: 1+A_n >= B_n", 1, F::A, 0, F::B, 0, true},
      {"ladder: A_n >= A_{n-1}", 0, F::A, 0, F::A, -1, true},
      {"ladder: B_n >= B_{n-1}", 0, F::B, 0, F::B, -1, true},
      {"ladder: Y_n >= Y_{n-1}", 0, F::Y, 0, F::Y, -1, true},
      {"ladder: A_n >= Y_n", 0, F::A, 0, F::Y, 0, true},
      {"ladder: B_n >= Y_n", 0, F::B, 0, F::Y, 0, true},
      {"ladder: Y_n >= X_{n-1}", 0, F::Y, 0, F::X, -1, true},
      {"ladder: 1+B_{n-1} >= A_n", 1, F::B, -1, F::A, 0, true},
      {"ladder: 1+A_{n-1} >= B_n", 1, F::A, -1, F::B, 0, true},
      {"ladder: 1+Y_{n-1} >= Y_n", 1, F::Y, -1, F::Y, 0, true},
      {"ladder: 1+A_{n-1} >= Y_n", 1, F::A, -1, F::Y, 0, true},
      {"ladder: 1+B_{n-1} >= Y_n", 1, F::B, -1, F::Y, 0, true},
      {"ladder: 1+Y_n >= X_n", 1, F::Y, 0, F::X, 0, true},
      {"ladder: 1+Y_n >= A_{n-1}", 1, F::Y, 0, F::A, -1, true},
      {"ladder: 1+Y_n >= B_{n-1}", 1, F::Y, 0, F::B, -1, true},
      {"ladder: 1+X_n >= Y_n", 1, F::X, 0, F::Y, 0, true},
      {"sandwich: A_{n+1} >= X_n", 0, F::A, 1, F::X, 0, true},
      {"sandwich: B_{n+1} >= X_n", 0, F::B, 1, F::X, 0, true},
      {"sandwich: X_n >= A_{n-1}-2", 2, F::X, 0, F::A, -1, true},
      {"sandwich: X_n >= B_{n-1}-2", 2, F::X, 0, F::B, -1, true},
      {"composed: A_n >= X_{n-1}", 0, F::A, 0, F::X, -1, true},
      {"composed: B_n >= X_{n-1}", 0, F::B, 0, F::X, -1, true},
      {"composed: 2+X_n >= A_{n-1}", 2, F::X, 0, F::A, -1, true},
      {"composed: 2+X_n >= B_{n-1}", 2, F::X, 0, F::B, -1, true},
      {"probe: X_n >= A_{n-1}-1", 1, F::X, 0, F::A, -1, false},
      {"probe: X_n >= B_{n-1}-1", 1, F::X, 0, F::B, -1, false},
  };
  std::vector<DominanceVerdict> out;
  for (int n = 1; n <= n_max; ++n) {
    for (const Rel& r : rels) {
      DominanceVerdict v = sd_ge(law(r.lhs, n + r.lhs_off), law(r.rhs, n + r.rhs_off), r.shift);
      v.label = r.label;
      v.n = n;
      v.asserted = r.asserted;
      out.push_back(std::move(v));
    }
  }
  return out;
}

inline bool all_hold(const std::vector<DominanceVerdict>& vs) {
  for (const auto& v : vs)
    if (v.asserted && !v.holds) return false;
  return true;
}

struct CounterexampleReport {
  struct Entry {
    std::string name;
    SeatGrid grid;
    ExactDistribution law;
    Rational mean;
  };
  std::vector<Entry> grids;           // H1, G1, H2, G2
  DominanceVerdict g1_over_h1, h1_over_g1, g2_over_h2;
  Rational h1_tail3, g1_tail3;        // P(X >= 3)
};

inline CounterexampleReport counterexample_report() {
  static const std::pair<const char*, const char*> shapes[] = {
      {"H1", ".O.\nOOO"}, {"G1", "OO.\nOOO"}, {"H2", "O.\n.O"}, {"G2", "O.\nOO"}};
  CounterexampleReport r;
  ExactOracle oracle;
  for (const auto& [name, text] : shapes) {
    SeatGrid g = SeatGrid::parse(text);
    ExactDistribution law = oracle.distribution(g);
    Rational m = law.mean();
    r.grids.push_back({name, g, law, m});
  }
  const auto& h1 = r.grids[0].law;
  const auto& g1 = r.grids[1].law;
  r.g1_over_h1 = sd_ge(g1, h1);
  r.g1_over_h1.label = "G1 >= H1";
  r.h1_over_g1 = sd_ge(h1, g1);
  r.h1_over_g1.label = "H1 >= G1";
  r.g2_over_h2 = sd_ge(r.grids[3].law, r.grids[2].law);
  r.g2_over_h2.label = "G2 >= H2";
  r.h1_tail3 = 1 - h1.cdf(2);
  r.g1_tail3 = 1 - g1.cdf(2);
  return r;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::ordered_json law_json(const ExactDistribution& d) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [k, p] : d.pmf()) j[std::to_string(k)] = to_string(p);
  return j;
}

inline nlohmann::ordered_json to_json(const DominanceVerdict& v) {
  return {{"relation", v.label}, {"n", v.n},          {"holds", v.holds},
          {"witness", v.witness}, {"margin", to_string(v.margin)}, {"asserted", v.asserted}};
}

inline nlohmann::ordered_json to_json(const std::vector<DominanceVerdict>& vs) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& v : vs) arr.push_back(to_json(v));
  return arr;
}

inline nlohmann::ordered_json to_json(const CounterexampleReport& r) {
  nlohmann::ordered_json j;
  for (const auto& e : r.grids)
    j["grids"][e.name] = {{"grid", e.grid.to_text()}, {"law", law_json(e.law)}, {"mean", to_string(e.mean)}};
  j["verdicts"] = to_json(std::vector<DominanceVerdict>{r.g1_over_h1, r.h1_over_g1, r.g2_over_h2});
  j["tail_at_3"] = {{"H1", to_string(r.h1_tail3)}, {"G1", to_string(r.g1_tail3)}};
  return j;
}

}  // namespace unfriendly
