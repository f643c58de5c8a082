#pragma once

// Two-row seat grids, the sequential unfriendly seating process, a Monte
// Carlo simulator, and an exact memoized oracle for the law of the number of
// seated diners.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "unfriendly/rational_poly.hpp"
#include "unfriendly/rng.hpp"

namespace unfriendly {

enum class FamilyTag { X, Y, A, B, Z, Custom };

struct Family {
  FamilyTag tag = FamilyTag::X;
  int n = 0;
};

inline std::string_view family_name(FamilyTag tag) {
  switch (tag) {
    case FamilyTag::X: return "X";
    case FamilyTag::Y: return "Y";
    case FamilyTag::A: return "A";
    case FamilyTag::B: return "B";
    case FamilyTag::Z: return "Z";
    case FamilyTag::Custom: return "CUSTOM";
  }
  return "?";
}

inline FamilyTag parse_family(std::string_view name) {
  if (name == "X") return FamilyTag::X;
  if (name == "Y") return FamilyTag::Y;
  if (name == "A") return FamilyTag::A;
  if (name == "B") return FamilyTag::B;
  if (name == "Z") return FamilyTag::Z;
  if (name == "CUSTOM") return FamilyTag::Custom;
  throw std::invalid_argument("unknown family: " + std::string(name));
}

struct Seat {
  int row = 0;
  long col = 0;
  auto operator<=>(const Seat&) const = default;
};

enum class SeatState : std::uint8_t { Free, Occupied, Forbidden };

class OracleLimitExceeded : public std::runtime_error {
 public:
  OracleLimitExceeded(std::size_t seats, std::size_t limit)
      : std::runtime_error("exact oracle limit exceeded: grid has " + std::to_string(seats) +
                           " seats, limit is " + std::to_string(limit)) {}
};

class SeatGrid {
 public:
  SeatGrid() = default;

  // Seats in any order; all start FREE. Rejects overlapping seats and rows
  // other than 0/1.
  static SeatGrid from_seats(std::vector<Seat> seats) {
    for (const auto& s : seats)
      if (s.row != 0 && s.row != 1) throw std::invalid_argument("seat row must be 0 or 1");
    std::sort(seats.begin(), seats.end());
    if (std::adjacent_find(seats.begin(), seats.end()) != seats.end())
      throw std::invalid_argument("overlapping seats in grid");
    SeatGrid g;
    g.seats_ = std::move(seats);
    g.state_.assign(g.seats_.size(), SeatState::Free);
    g.build_adjacency();
    return g;
  }

  // Two lines over {'.', 'O'}; 'O' is a seat. Shorter line is padded with '.'.
  static SeatGrid parse(std::string_view text) {
    std::vector<std::string> lines;
    std::string line;
    std::istringstream in{std::string(text)};
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      lines.push_back(line);
    }
    if (lines.size() != 2) throw std::invalid_argument("grid text must have exactly two rows");
    std::vector<Seat> seats;
    for (int r = 0; r < 2; ++r) {
      for (std::size_t c = 0; c < lines[static_cast<std::size_t>(r)].size(); ++c) {
        char ch = lines[static_cast<std::size_t>(r)][c];
        if (ch == 'O') seats.push_back({r, static_cast<long>(c) + 1});
        else if (ch != '.') throw std::invalid_argument(std::string("invalid grid character '") + ch + "'");
      }
    }
    if (seats.empty()) throw std::invalid_argument("grid has no seats");
    return from_seats(std::move(seats)).translated_to_origin();
  }

  std::size_t size() const { return seats_.size(); }
  bool empty() const { return seats_.empty(); }
  const std::vector<Seat>& seats() const { return seats_; }
  const Seat& seat(std::size_t i) const { return seats_[i]; }
  SeatState state(std::size_t i) const { return state_[i]; }
  const std::vector<std::size_t>& neighbors(std::size_t i) const { return adjacency_[i]; }

  long min_col() const {
    long m = seats_.empty() ? 1 : seats_.front().col;
    for (const auto& s : seats_) m = std::min(m, s.col);
    return m;
  }
  long max_col() const {
    long m = seats_.empty() ? 0 : seats_.front().col;
    for (const auto& s : seats_) m = std::max(m, s.col);
    return m;
  }

  std::size_t count(SeatState st) const {
    return static_cast<std::size_t>(std::count(state_.begin(), state_.end(), st));
  }

  // Seat the diner at i (must be FREE); FREE neighbors become FORBIDDEN.
  void occupy(std::size_t i) {
    if (state_.at(i) != SeatState::Free) throw std::logic_error("seat is not free");
    state_[i] = SeatState::Occupied;
    for (std::size_t j : adjacency_[i])
      if (state_[j] == SeatState::Free) state_[j] = SeatState::Forbidden;
  }

  // Both state invariants: no two occupied neighbors, and FORBIDDEN seats are
  // exactly the non-occupied seats next to an occupied one.
  bool invariants_hold() const {
    for (std::size_t i = 0; i < size(); ++i) {
      bool next_to_occupied = false;
      for (std::size_t j : adjacency_[i]) next_to_occupied |= state_[j] == SeatState::Occupied;
      if (state_[i] == SeatState::Occupied && next_to_occupied) return false;
      if (state_[i] == SeatState::Forbidden && !next_to_occupied) return false;
      if (state_[i] == SeatState::Free && next_to_occupied) return false;
    }
    return true;
  }

  SeatGrid translated(long dc) const { return mapped([dc](Seat s) { return Seat{s.row, s.col + dc}; }); }
  SeatGrid translated_to_origin() const { return translated(1 - min_col()); }
  SeatGrid mirrored() const {
    long lo = min_col(), hi = max_col();
    return mapped([lo, hi](Seat s) { return Seat{s.row, lo + hi - s.col}; });
  }
  SeatGrid rows_swapped() const { return mapped([](Seat s) { return Seat{1 - s.row, s.col}; }); }

  // Column profile after translating to column 1: bit 0 = row 0, bit 1 = row 1.
  std::vector<std::uint8_t> profile() const {
    std::vector<std::uint8_t> p;
    if (seats_.empty()) return p;
    long lo = min_col();
    p.assign(static_cast<std::size_t>(max_col() - lo + 1), 0);
    for (const auto& s : seats_) p[static_cast<std::size_t>(s.col - lo)] |= static_cast<std::uint8_t>(1u << s.row);
    return p;
  }

  // Least of the four reflection images of the translated profile, as a key.
  std::string canonical_key() const;

  std::string to_text() const {
    std::string rows[2];
    long lo = min_col(), hi = max_col();
    for (int r = 0; r < 2; ++r) rows[r].assign(static_cast<std::size_t>(hi - lo + 1), '.');
    for (const auto& s : seats_) rows[s.row][static_cast<std::size_t>(s.col - lo)] = 'O';
    return rows[0] + "\n" + rows[1] + "\n";
  }

 private:
  template <class F>
  SeatGrid mapped(F f) const {
    std::vector<Seat> out;
    out.reserve(seats_.size());
    for (const auto& s : seats_) out.push_back(f(s));
    SeatGrid g = from_seats(std::move(out));
    // carry states across the (sorted) image
    for (std::size_t i = 0; i < seats_.size(); ++i) {
      Seat image = f(seats_[i]);
      auto it = std::lower_bound(g.seats_.begin(), g.seats_.end(), image);
      g.state_[static_cast<std::size_t>(it - g.seats_.begin())] = state_[i];
    }
    return g;
  }

  void build_adjacency() {
    adjacency_.assign(seats_.size(), {});
    auto find = [this](Seat s) -> long {
      auto it = std::lower_bound(seats_.begin(), seats_.end(), s);
      return (it != seats_.end() && *it == s) ? static_cast<long>(it - seats_.begin()) : -1;
    };
    for (std::size_t i = 0; i < seats_.size(); ++i) {
      const Seat& s = seats_[i];
      for (Seat n : {Seat{s.row, s.col - 1}, Seat{s.row, s.col + 1}, Seat{1 - s.row, s.col}}) {
        long j = find(n);
        if (j >= 0) adjacency_[i].push_back(static_cast<std::size_t>(j));
      }
    }
  }

  std::vector<Seat> seats_;
  std::vector<SeatState> state_;
  std::vector<std::vector<std::size_t>> adjacency_;
};

namespace detail {

using Profile = std::vector<std::uint8_t>;

inline Profile trimmed(Profile p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
  std::size_t lead = 0;
  while (lead < p.size() && p[lead] == 0) ++lead;
  p.erase(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(lead));
  return p;
}

inline std::string canonical_profile_key(const Profile& p) {
  auto key = [](const Profile& q) { return std::string(q.begin(), q.end()); };
  Profile rev(p.rbegin(), p.rend());
  auto swap_rows = [](Profile q) {
    for (auto& c : q) c = static_cast<std::uint8_t>(((c & 1u) << 1) | ((c >> 1) & 1u));
    return q;
  };
  return std::min({key(p), key(rev), key(swap_rows(p)), key(swap_rows(rev))});
}

// Connected components of the seats in a profile, each trimmed.
inline std::vector<Profile> components(const Profile& p) {
  std::vector<Profile> out;
  std::vector<std::uint8_t> seen(p.size(), 0);
  for (std::size_t c0 = 0; c0 < p.size(); ++c0) {
    for (unsigned r0 = 0; r0 < 2; ++r0) {
      if (!(p[c0] >> r0 & 1u) || (seen[c0] >> r0 & 1u)) continue;
      Profile comp(p.size(), 0);
      std::vector<std::pair<std::size_t, unsigned>> stack{{c0, r0}};
      seen[c0] |= static_cast<std::uint8_t>(1u << r0);
      while (!stack.empty()) {
        auto [c, r] = stack.back();
        stack.pop_back();
        comp[c] |= static_cast<std::uint8_t>(1u << r);
        auto visit = [&](std::size_t cc, unsigned rr) {
          if (cc >= p.size() || !(p[cc] >> rr & 1u) || (seen[cc] >> rr & 1u)) return;
          seen[cc] |= static_cast<std::uint8_t>(1u << rr);
          stack.emplace_back(cc, rr);
        };
        visit(c, 1 - r);
        if (c > 0) visit(c - 1, r);
        visit(c + 1, r);
      }
      out.push_back(trimmed(std::move(comp)));
    }
  }
  return out;
}

}  // namespace detail

inline std::string SeatGrid::canonical_key() const {
  detail::Profile p;
  if (!seats_.empty()) {
    long lo = min_col();
    p.assign(static_cast<std::size_t>(max_col() - lo + 1), 0);
    for (std::size_t i = 0; i < seats_.size(); ++i)
      p[static_cast<std::size_t>(seats_[i].col - lo)] |=
          static_cast<std::uint8_t>((1u << seats_[i].row) * (state_[i] == SeatState::Free ? 1u : 0u) |
                                    (state_[i] == SeatState::Free ? 0u : 4u << seats_[i].row));
  }
  return detail::canonical_profile_key(p);
}

// Family geometry, translated so the minimum column is 1.
inline SeatGrid build_config(const Family& family) {
  if (family.n < 0) throw std::invalid_argument("family index must be nonnegative");
  if (family.tag == FamilyTag::Custom) throw std::invalid_argument("CUSTOM grids are built from seats or text");
  const long n = family.n;
  std::vector<Seat> seats;
  auto row = [&seats](int r, long from, long to) {
    for (long c = from; c <= to; ++c) seats.push_back({r, c});
  };
  switch (family.tag) {
    case FamilyTag::X: row(0, 1, n); row(1, 1, n); break;
    case FamilyTag::Y: row(0, 1, n - 1); row(1, 1, n); break;
    case FamilyTag::A: row(0, 1, n); row(1, 2, n + 1); break;
    case FamilyTag::B: row(0, 2, n); row(1, 1, n + 1); break;
    case FamilyTag::Z: row(0, 1, n); break;
    case FamilyTag::Custom: break;
  }
  SeatGrid g = SeatGrid::from_seats(std::move(seats));
  return g.empty() ? g : g.translated_to_origin();
}

inline SeatGrid build_custom(std::vector<Seat> seats) {
  SeatGrid g = SeatGrid::from_seats(std::move(seats));
  return g.empty() ? g : g.translated_to_origin();
}

// ---------------------------------------------------------------------------
// Monte Carlo

enum class SelectionMode {
  UniformFree,  // draw uniformly among FREE seats
  Retry,        // draw uniformly among all seats, redraw until FREE
};

struct SimulationResult {
  std::vector<int> counts;                   // per trial
  std::map<long, std::uint64_t> histogram;   // outcome -> trials

  double mean() const {
    double s = 0;
    for (int c : counts) s += c;
    return counts.empty() ? 0.0 : s / static_cast<double>(counts.size());
  }
};

// One run of the process on `grid` (FREE seats only are eligible).
inline int run_trial(SeatGrid grid, SplitMix64& rng, SelectionMode mode) {
  const std::size_t n = grid.size();
  int seated = static_cast<int>(grid.count(SeatState::Occupied));
  if (mode == SelectionMode::UniformFree) {
    std::vector<std::size_t> free, pos(n, n);
    for (std::size_t i = 0; i < n; ++i)
      if (grid.state(i) == SeatState::Free) {
        pos[i] = free.size();
        free.push_back(i);
      }
    auto drop = [&](std::size_t i) {
      std::size_t p = pos[i];
      if (p == n) return;
      std::size_t last = free.back();
      free[p] = last;
      pos[last] = p;
      free.pop_back();
      pos[i] = n;
    };
    while (!free.empty()) {
      std::size_t i = free[rng.below(free.size())];
      grid.occupy(i);
      ++seated;
      drop(i);
      for (std::size_t j : grid.neighbors(i)) drop(j);
    }
  } else {
    std::size_t free_left = grid.count(SeatState::Free);
    while (free_left > 0) {
      std::size_t i = rng.below(n);
      if (grid.state(i) != SeatState::Free) continue;
      std::size_t before = 0;
      for (std::size_t j : grid.neighbors(i)) before += grid.state(j) == SeatState::Free;
      grid.occupy(i);
      ++seated;
      free_left -= 1 + before;
    }
  }
  return seated;
}

inline SimulationResult simulate(const SeatGrid& grid, std::uint64_t trials, std::uint64_t seed,
                                 SelectionMode mode = SelectionMode::UniformFree) {
  if (grid.empty()) throw std::invalid_argument("simulate needs at least one seat");
  if (trials == 0) throw std::invalid_argument("simulate needs at least one trial");
  SimulationResult out;
  out.counts.resize(trials);
  for (std::uint64_t k = 0; k < trials; ++k) {
    SplitMix64 rng = SplitMix64::for_stream(seed, k);
    out.counts[k] = run_trial(grid, rng, mode);
    ++out.histogram[out.counts[k]];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exact oracle

// Law of the final number of diners via conditioning on the first seat taken.
// Components of FREE seats evolve independently, so the memo is keyed on the
// canonical form of each component. Not thread-safe; use one per thread.
class ExactOracle {
 public:
  static constexpr std::size_t kDefaultSeatLimit = 24;

  explicit ExactOracle(std::size_t seat_limit = kDefaultSeatLimit) : limit_(seat_limit) {}

  std::size_t seat_limit() const { return limit_; }
  std::size_t memo_size() const { return memo_.size(); }

  // PGF of the total number of occupied seats at termination.
  RationalPoly pgf(const SeatGrid& grid) {
    if (grid.size() > limit_) throw OracleLimitExceeded(grid.size(), limit_);
    detail::Profile free_profile;
    if (!grid.empty()) {
      long lo = grid.min_col();
      free_profile.assign(static_cast<std::size_t>(grid.max_col() - lo + 1), 0);
      for (std::size_t i = 0; i < grid.size(); ++i)
        if (grid.state(i) == SeatState::Free)
          free_profile[static_cast<std::size_t>(grid.seat(i).col - lo)] |=
              static_cast<std::uint8_t>(1u << grid.seat(i).row);
    }
    RationalPoly result = RationalPoly::monomial(1, grid.count(SeatState::Occupied));
    for (const auto& comp : detail::components(free_profile)) result *= component_pgf(comp);
    return result;
  }

  ExactDistribution distribution(const SeatGrid& grid) { return ExactDistribution::from_pgf(pgf(grid)); }

 private:
  const RationalPoly& component_pgf(const detail::Profile& comp) {
    std::string key = detail::canonical_profile_key(comp);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    PolyAccumulator acc;
    std::size_t seats = 0;
    for (std::size_t c = 0; c < comp.size(); ++c) {
      for (unsigned r = 0; r < 2; ++r) {
        if (!(comp[c] >> r & 1u)) continue;
        ++seats;
        detail::Profile rest = comp;
        rest[c] = 0;  // the seat and the one opposite
        if (c > 0) rest[c - 1] &= static_cast<std::uint8_t>(~(1u << r));
        if (c + 1 < rest.size()) rest[c + 1] &= static_cast<std::uint8_t>(~(1u << r));
        RationalPoly law = RationalPoly::t();
        for (const auto& sub : detail::components(rest)) law *= component_pgf(sub);
        acc.add(law);
      }
    }
    RationalPoly value = acc.result() * Rational(1, static_cast<long>(seats));
    return memo_.emplace(std::move(key), std::move(value)).first->second;
  }

  std::size_t limit_;
  std::unordered_map<std::string, RationalPoly> memo_;
};

inline ExactDistribution exact_distribution(const SeatGrid& grid,
                                            std::size_t seat_limit = ExactOracle::kDefaultSeatLimit) {
  ExactOracle oracle(seat_limit);
  return oracle.distribution(grid);
}

}  // namespace unfriendly
