#pragma once

// Command-line front end. run() takes the arguments after the program name and
// returns the exit code: 0 success, 1 computation failure (or a failed verify
// suite), 2 usage error.

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "unfriendly/asymptotics.hpp"
#include "unfriendly/dominance.hpp"
#include "unfriendly/hardcore.hpp"
#include "unfriendly/pgf.hpp"
#include "unfriendly/seat_model.hpp"
#include "unfriendly/series.hpp"
#include "unfriendly/spectral.hpp"
#include "unfriendly/stats.hpp"

namespace unfriendly::cli {

using Json = nlohmann::ordered_json;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Options {
  std::string family = "X";
  int n = 1;
  int nmax = 12;
  std::string engine = "recurrence";
  std::string t = "0.5,0";
  int k_range = 10;
  int digits = 30;
  std::uint64_t trials = 10000;
  std::uint64_t seed = 1;
  std::string format = "json";
  std::string suite = "all";
  std::string grid_file;
  std::string mode = "uniform";
};

inline Complex parse_complex(const std::string& text) {
  std::istringstream in(text);
  double re = 0, im = 0;
  char comma = 0;
  in >> re;
  if (!in) throw UsageError("--t expects \"re,im\"");
  if (in >> comma) {
    if (comma != ',' || !(in >> im)) throw UsageError("--t expects \"re,im\"");
  }
  return {re, im};
}

inline std::string dec(double x) {
  std::ostringstream s;
  s << std::setprecision(17) << x;
  return s.str();
}

inline Json complex_json(Complex z) { return Json::array({dec(z.real()), dec(z.imag())}); }

inline SeatGrid grid_for(const Options& o) {
  if (!o.grid_file.empty()) {
    std::ifstream in(o.grid_file);
    if (!in) throw UsageError("cannot read grid file " + o.grid_file);
    std::stringstream text;
    text << in.rdbuf();
    return SeatGrid::parse(text.str());
  }
  FamilyTag tag = parse_family(o.family);
  if (tag == FamilyTag::Custom) throw UsageError("CUSTOM needs --grid");
  return build_config({tag, o.n});
}

inline bool custom(const Options& o) { return !o.grid_file.empty() || o.family == "CUSTOM"; }

inline ExactDistribution exact_law(const Options& o) {
  if (custom(o) || o.engine == "oracle") return exact_distribution(grid_for(o));
  FamilyTag tag = parse_family(o.family);
  if (o.engine == "recurrence") return PgfEngine().distribution(tag, o.n);
  if (o.engine == "series") {
    auto N = static_cast<std::size_t>(o.n);
    switch (tag) {
      case FamilyTag::X: return ExactDistribution::from_pgf(x_pgf_via_series(N));
      case FamilyTag::Y: return ExactDistribution::from_pgf(series_GY(N)[N]);
      case FamilyTag::A: return ExactDistribution::from_pgf(series_GA(N)[N]);
      case FamilyTag::B: return ExactDistribution::from_pgf(series_GB(N)[N]);
      default: throw UsageError("the series engine covers X, Y, A, B");
    }
  }
  throw UsageError("engine must be oracle, recurrence or series here");
}

inline void emit(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

inline int cmd_dist(const Options& o, std::ostream& out) {
  if (o.engine == "spectral") {
    if (o.family != "X") throw UsageError("the spectral engine covers X only");
    if (o.n < 1) throw UsageError("--n must be positive");
    auto pmf = x_pmf_spectral(o.n, o.k_range);
    if (o.format == "csv") {
      out << "k,p\n";
      for (std::size_t k = 0; k < pmf.size(); ++k) out << k << ',' << dec(pmf[k]) << '\n';
      return 0;
    }
    Json j = Json::object();
    for (std::size_t k = 0; k < pmf.size(); ++k) j[std::to_string(k)] = dec(pmf[k]);
    emit(out, j);
    return 0;
  }
  ExactDistribution d = exact_law(o);
  if (o.format == "csv") {
    out << "k,p\n";
    for (const auto& [k, p] : d.pmf()) out << k << ',' << to_string(p) << '\n';
    return 0;
  }
  emit(out, law_json(d));
  return 0;
}

inline int cmd_moments(const Options& o, std::ostream& out) {
  MomentReport m = moments_of(exact_law(o), o.n);
  Json j = {{"family", custom(o) ? "CUSTOM" : o.family}, {"n", o.n}};
  for (const auto& [name, q] : {std::pair{"mean", m.mean}, {"variance", m.variance}, {"kappa3", m.kappa3},
                                {"kappa4", m.kappa4}})
    j[name] = {{"exact", to_string(q)}, {"approx", dec(q.get_d())}};
  emit(out, j);
  return 0;
}

inline int cmd_simulate(const Options& o, std::ostream& out) {
  SeatGrid g = grid_for(o);
  SelectionMode mode;
  if (o.mode == "uniform") mode = SelectionMode::UniformFree;
  else if (o.mode == "retry") mode = SelectionMode::Retry;
  else throw UsageError("--mode must be uniform or retry");
  SimulationResult r = simulate(g, o.trials, o.seed, mode);
  Json j = {{"trials", o.trials}, {"seed", o.seed}, {"mode", o.mode}, {"mean", dec(r.mean())}};
  Json h = Json::object();
  for (const auto& [k, c] : r.histogram) h[std::to_string(k)] = c;
  j["histogram"] = h;
  std::optional<ExactDistribution> law;
  if (custom(o) || g.size() <= ExactOracle::kDefaultSeatLimit) law = exact_distribution(g);
  else if (o.n <= 400) law = PgfEngine().distribution(parse_family(o.family), o.n);
  if (law) {
    ChiSquareResult c = chi_square_test(r.histogram, *law, o.trials);
    j["exact_mean"] = to_string(law->mean());
    j["chi_square"] = {{"statistic", dec(c.statistic)}, {"dof", c.dof}, {"p_value", dec(c.p_value)}};
  }
  emit(out, j);
  return 0;
}

inline int cmd_series(const Options& o, std::ostream& out) {
  auto N = static_cast<std::size_t>(o.n);
  ZSeries s;
  if (o.family == "X") s = series_GX(N);
  else if (o.family == "Y") s = series_GY(N);
  else if (o.family == "A") s = series_GA(N);
  else if (o.family == "B") s = series_GB(N);
  else if (o.family == "P") s = series_P(N);
  else if (o.family == "Q") s = series_Q(N);
  else throw UsageError("series family must be X, Y, A, B, P or Q");
  if (o.format == "csv") {
    s.write_csv(out);
    return 0;
  }
  Json coeffs = Json::array();
  for (std::size_t m = 0; m <= s.order(); ++m) {
    Json row = Json::array();
    for (int i = 0; i <= s[m].degree(); ++i) row.push_back(to_string(s[m].coefficient(static_cast<std::size_t>(i))));
    coeffs.push_back(row);
  }
  emit(out, {{"series", o.family}, {"order", s.order()}, {"coefficients", coeffs}});
  return 0;
}

inline int cmd_spectral(const Options& o, std::ostream& out, bool n_given) {
  Complex t = parse_complex(o.t);
  if (o.k_range < 0) throw UsageError("--k-range must be nonnegative");
  auto bs = branches(t, o.k_range, CutSide::Upper);
  if (o.format == "csv") {
    write_branch_csv(out, bs);
    return 0;
  }
  Json arr = Json::array();
  for (const auto& b : bs)
    arr.push_back({{"k", b.k}, {"rho", complex_json(b.rho)}, {"residue", complex_json(b.residue)},
                   {"defect", dec(b.defect)}});
  Json j = {{"t", complex_json(t)}, {"K", o.k_range}, {"branches", arr}};
  if (n_given) {
    if (std::abs(t + 1.0) < 1e-3) throw UsageError("the branch sums are not used near t = -1");
    SpectralSum x = xnt_spectral(o.n, t, bs);
    Complex exact = PgfEngine().pgf(FamilyTag::X, o.n).evaluate(t);
    j["xnt"] = {{"n", o.n},
                {"spectral", complex_json(x.value)},
                {"tail_estimate", dec(x.tail_estimate)},
                {"exact", complex_json(exact)},
                {"difference", dec(std::abs(x.value - exact))}};
  }
  emit(out, j);
  return 0;
}

inline int cmd_constants(const Options& o, std::ostream& out) {
  ConstantSet c = constants(o.digits);
  Json j = {{"digits", o.digits}};
  for (const auto& [name, v] : {std::pair<const char*, const Real*>{"mu", &c.mu}, {"sigma2", &c.sigma2},
                                {"phi", &c.phi}, {"c0", &c.c0}, {"c1", &c.c1}, {"c2", &c.c2}, {"c3", &c.c3},
                                {"c4", &c.c4}, {"jamming_2row", &c.jamming_2row}, {"jamming_1row", &c.jamming_1row}})
    j[name] = v->to_decimal(o.digits);
  emit(out, j);
  return 0;
}

inline int cmd_dominance(const Options& o, std::ostream& out) {
  auto vs = verify_ladder(o.nmax);
  emit(out, {{"nmax", o.nmax},
             {"all_hold", all_hold(vs)},
             {"ladder", to_json(vs)},
             {"counterexamples", to_json(counterexample_report())}});
  return 0;
}

inline int cmd_hardcore(const Options& o, std::ostream& out) {
  FamilyTag tag = parse_family(o.family);
  RationalPoly p = pgf_hardcore(tag, o.n);
  HardcoreConstants h = hardcore_constants(o.digits);
  Json j = {{"family", o.family}, {"n", o.n}, {"law", law_json(ExactDistribution::from_pgf(p))}};
  j["arrangements"] = MaximalSetTransfer(build_config({tag, o.n})).count().get_str();
  j["constants"] = {{"digits", o.digits},
                    {"two_row_density", h.two_row_density.to_decimal(o.digits)},
                    {"two_row_variance", h.two_row_variance.to_decimal(o.digits)},
                    {"two_row_variance_printed_formula", h.two_row_variance_printed.to_decimal(o.digits)},
                    {"one_row_density", h.one_row_density.to_decimal(o.digits)},
                    {"one_row_variance", h.one_row_variance.to_decimal(o.digits)}};
  emit(out, j);
  return 0;
}

// ---------------------------------------------------------------------------
// verify

struct Check {
  std::string name;
  bool passed;
  std::string detail;
};

inline std::vector<Check> suite_dominance(int nmax) {
  std::vector<Check> out;
  auto vs = verify_ladder(nmax);
  std::string first_failure;
  for (const auto& v : vs)
    if (v.asserted && !v.holds && first_failure.empty())
      first_failure = v.label + " at n=" + std::to_string(v.n) + ", x=" + std::to_string(v.witness);
  out.push_back({"ladder up to n=" + std::to_string(nmax), all_hold(vs), first_failure});
  auto r = counterexample_report();
  bool laws = r.grids[0].law.pmf() == std::map<long, Rational>{{1, Rational(1, 4)}, {3, Rational(3, 4)}} &&
              r.grids[1].law.pmf() == std::map<long, Rational>{{2, Rational(7, 15)}, {3, Rational(8, 15)}};
  out.push_back({"counterexample laws", laws, ""});
  out.push_back({"counterexample means", r.grids[2].mean == 2 && r.grids[3].mean == Rational(5, 3),
                 to_string(r.grids[2].mean) + " vs " + to_string(r.grids[3].mean)});
  return out;
}

inline std::vector<Check> suite_engines(int nmax) {
  std::vector<Check> out;
  PgfEngine engine;
  ExactOracle oracle;
  int top = std::min(nmax, 10);
  for (FamilyTag tag : {FamilyTag::X, FamilyTag::Y, FamilyTag::A, FamilyTag::B}) {
    bool ok = true;
    std::string where;
    for (int n = 0; n <= top && ok; ++n) {
      const RationalPoly& rec = engine.pgf(tag, n);
      RationalPoly orc = oracle.pgf(build_config({tag, n}));
      auto N = static_cast<std::size_t>(n);
      RationalPoly ser;
      switch (tag) {
        case FamilyTag::X: ser = x_pgf_via_series(N); break;
        case FamilyTag::Y: ser = series_GY(N)[N]; break;
        case FamilyTag::A: ser = series_GA(N)[N]; break;
        default: ser = series_GB(N)[N]; break;
      }
      if (!(rec == orc && rec == ser)) {
        ok = false;
        where = "n=" + std::to_string(n);
      }
    }
    out.push_back({std::string(family_name(tag)) + " oracle = recurrence = series, n <= " + std::to_string(top), ok, where});
  }
  return out;
}

inline std::vector<Check> suite_hardcore(int nmax) {
  std::vector<Check> out;
  bool counts = true;
  for (int n = 1; n <= std::min(nmax, 16); ++n) counts = counts && enumerate_arrangements(n).count == fib_count(n);
  out.push_back({"enumeration counts are Fibonacci", counts, ""});
  bool forms = true;
  for (int n = 0; n <= nmax; ++n)
    forms = forms && pgf_hardcore(FamilyTag::X, n) == pgf_hardcore_recurrence(FamilyTag::X, n);
  out.push_back({"closed form = recurrence, n <= " + std::to_string(nmax), forms, ""});
  return out;
}

inline std::vector<Check> suite_constants() {
  ConstantSet c = constants(30);
  auto starts = [](const Real& x, const std::string& printed) {
    return x.to_decimal(static_cast<int>(printed.size()) + 6).rfind(printed, 0) == 0;
  };
  return {{"c1", starts(c.c1, "0.335022706294844"), c.c1.to_decimal(20)},
          {"c2", starts(c.c2, "-0.156407503800915"), c.c2.to_decimal(20)},
          {"c3", starts(c.c3, "-0.016469973369929"), c.c3.to_decimal(20)},
          {"c4", starts(c.c4, "0.091221676624710"), c.c4.to_decimal(20)},
          {"jamming_2row", starts(c.jamming_2row, "0.408030"), c.jamming_2row.to_decimal(10)},
          {"jamming_1row", starts(c.jamming_1row, "0.432332"), c.jamming_1row.to_decimal(10)}};
}

inline std::vector<Check> suite_asymptotics(int nmax) {
  std::vector<Check> out;
  ConstantSet c = constants(40);
  PgfEngine engine;
  double worst = 0;
  for (int n = 8; n <= std::max(8, nmax); ++n) {
    Real err = Real::from_rational(moments(engine, {FamilyTag::X, n}).mean, c.mu.precision()) -
               c.mu * static_cast<long>(n) - c.c1;
    worst = std::max(worst, std::abs(err.to_double()));
  }
  out.push_back({"|E X_n - mu n - c1| < 1e-7 from n = 8", worst < 1e-7, dec(worst)});
  return out;
}

inline std::vector<Check> suite_spectral(int nmax) {
  std::vector<Check> out;
  Complex t = std::polar(1.0, std::numbers::pi / 3);
  auto bs = branches(t, 50, CutSide::Upper);
  PgfEngine engine;
  double worst = 0;
  // the truncation error falls like K^{-n}, so small n are left out
  const int lo = 10, hi = std::max(lo, nmax);
  for (int n = lo; n <= hi; ++n)
    worst = std::max(worst, std::abs(xnt_spectral(n, t, bs).value - engine.pgf(FamilyTag::X, n).evaluate(t)));
  out.push_back({"branch sum (K = 50) = X_n(e^{i pi/3}) for " + std::to_string(lo) + " <= n <= " + std::to_string(hi),
                 worst < 1e-8, dec(worst)});
  return out;
}

inline int cmd_verify(const Options& o, std::ostream& out) {
  std::vector<std::string> suites;
  if (o.suite == "all") suites = {"engines", "dominance", "hardcore", "constants", "asymptotics", "spectral"};
  else suites = {o.suite};
  Json j = Json::object();
  bool all = true;
  for (const auto& s : suites) {
    std::vector<Check> checks;
    if (s == "dominance") checks = suite_dominance(o.nmax);
    else if (s == "engines") checks = suite_engines(o.nmax);
    else if (s == "hardcore") checks = suite_hardcore(o.nmax);
    else if (s == "constants") checks = suite_constants();
    else if (s == "asymptotics") checks = suite_asymptotics(o.nmax);
    else if (s == "spectral") checks = suite_spectral(o.nmax);
    else throw UsageError("unknown suite " + s);
    Json arr = Json::array();
    for (const auto& c : checks) {
      all = all && c.passed;
      arr.push_back({{"check", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    }
    j[s] = arr;
  }
  j["passed"] = all;
  emit(out, j);
  return all ? 0 : 1;
}

// ---------------------------------------------------------------------------

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-row unfriendly seating laboratory"};
  app.require_subcommand(1);
  Options o;

  auto family = [&o](CLI::App* sub) { sub->add_option("--family", o.family, "X, Y, A, B, Z or CUSTOM"); };
  auto nopt = [&o](CLI::App* sub) { return sub->add_option("--n", o.n, "index")->check(CLI::NonNegativeNumber); };
  auto format = [&o](CLI::App* sub) {
    sub->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  };
  auto grid = [&o](CLI::App* sub) { sub->add_option("--grid", o.grid_file, "two-line grid file ('O' = seat)"); };

  auto* dist = app.add_subcommand("dist", "exact law");
  family(dist); nopt(dist); format(dist); grid(dist);
  dist->add_option("--engine", o.engine)->check(CLI::IsMember({"oracle", "recurrence", "series", "spectral"}));
  dist->add_option("--k-range", o.k_range, "branches -K..K for the spectral engine");

  auto* mom = app.add_subcommand("moments", "exact mean, variance and cumulants");
  family(mom); nopt(mom); grid(mom);
  mom->add_option("--engine", o.engine)->check(CLI::IsMember({"oracle", "recurrence", "series"}));

  auto* sim = app.add_subcommand("simulate", "Monte Carlo runs of the seating process");
  family(sim); nopt(sim); grid(sim);
  sim->add_option("--trials", o.trials)->check(CLI::PositiveNumber);
  sim->add_option("--seed", o.seed);
  sim->add_option("--mode", o.mode, "uniform or retry");

  auto* ser = app.add_subcommand("series", "generating-function coefficients up to order n");
  family(ser); nopt(ser); format(ser);

  auto* spec = app.add_subcommand("spectral", "poles and residues, and the branch sum for X_n(t)");
  format(spec);
  CLI::Option* spec_n = spec->add_option("--n", o.n)->check(CLI::PositiveNumber);
  spec->add_option("--t", o.t, "complex t as \"re,im\"");
  spec->add_option("--k-range", o.k_range, "branches -K..K");

  auto* cons = app.add_subcommand("constants", "asymptotic constants");
  cons->add_option("--digits", o.digits)->check(CLI::Range(10, 5000));

  auto* ver = app.add_subcommand("verify", "run an invariant suite; exit 1 if any check fails");
  ver->add_option("--suite", o.suite)->check(
      CLI::IsMember({"all", "engines", "dominance", "hardcore", "constants", "asymptotics", "spectral"}));
  ver->add_option("--nmax", o.nmax)->check(CLI::Range(1, 60));

  auto* dom = app.add_subcommand("dominance", "relation ladder and counterexamples");
  dom->add_option("--nmax", o.nmax)->check(CLI::Range(1, 200));

  auto* hard = app.add_subcommand("hardcore", "uniform model over maximal arrangements");
  family(hard); nopt(hard);
  hard->add_option("--digits", o.digits)->check(CLI::Range(10, 5000));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return 2;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    std::string name = sub->get_name();
    if (name == "dist") return cmd_dist(o, out);
    if (name == "moments") return cmd_moments(o, out);
    if (name == "simulate") return cmd_simulate(o, out);
    if (name == "series") return cmd_series(o, out);
    if (name == "spectral") return cmd_spectral(o, out, spec_n->count() > 0);
    if (name == "constants") return cmd_constants(o, out);
    if (name == "verify") return cmd_verify(o, out);
    if (name == "dominance") return cmd_dominance(o, out);
    if (name == "hardcore") return cmd_hardcore(o, out);
  } catch (const BranchCutError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace unfriendly::cli
