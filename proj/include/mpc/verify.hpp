#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "mpc/error.hpp"
#include "mpc/grid.hpp"
#include "mpc/packing.hpp"

namespace mpc {

inline constexpr std::uint64_t kDefaultVerifyCap = 1'000'000;

struct Counterexample {
  Position first;
  Position second;
  std::vector<std::uint64_t> first_values;
  std::vector<std::uint64_t> second_values;
};

/// Outcome of one exhaustive check. A failing report carries the
/// lexicographically smallest offending pair.
struct VerificationReport {
  std::string property;
  bool passed = false;
  std::optional<Counterexample> counterexample;
  std::uint64_t cells_examined = 0;
  double wall_seconds = 0.0;
};

inline nlohmann::json to_json(const VerificationReport& r) {
  nlohmann::json j{{"property", r.property},
                   {"passed", r.passed},
                   {"cells_examined", r.cells_examined},
                   {"wall_seconds", r.wall_seconds},
                   {"counterexample", nullptr}};
  if (r.counterexample) {
    const auto& c = *r.counterexample;
    j["counterexample"] = {{"first", c.first},
                           {"second", c.second},
                           {"first_values", c.first_values},
                           {"second_values", c.second_values}};
  }
  return j;
}

namespace detail {

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline void check_cap(std::uint64_t count, std::uint64_t cap,
                      const std::string& what) {
  if (count > cap)
    fail(ErrorKind::too_large, what + ": " + std::to_string(count) +
                                   " items exceed the verification cap of " +
                                   std::to_string(cap));
}

/// Smallest pair (i, j), i < j, of equal rows in a table of `count` rows of
/// `width` values each.
inline std::optional<std::pair<std::uint64_t, std::uint64_t>> first_duplicate(
    std::span<const std::uint64_t> table, std::uint64_t count,
    std::uint64_t width) {
  std::vector<std::uint64_t> order(count);
  std::iota(order.begin(), order.end(), 0);
  auto row = [&](std::uint64_t i) { return table.subspan(i * width, width); };
  std::sort(order.begin(), order.end(), [&](std::uint64_t a, std::uint64_t b) {
    const auto ra = row(a), rb = row(b);
    const auto cmp = std::lexicographical_compare_three_way(
        ra.begin(), ra.end(), rb.begin(), rb.end());
    return cmp != 0 ? cmp < 0 : a < b;
  });
  std::optional<std::pair<std::uint64_t, std::uint64_t>> best;
  for (std::uint64_t g = 1; g < count; ++g) {
    const auto prev = row(order[g - 1]), cur = row(order[g]);
    if (!std::equal(prev.begin(), prev.end(), cur.begin())) continue;
    // order[g-1] is the group's first member only when it starts the group.
    if (g >= 2) {
      const auto before = row(order[g - 2]);
      if (std::equal(before.begin(), before.end(), prev.begin())) continue;
    }
    const std::pair<std::uint64_t, std::uint64_t> cand{order[g - 1], order[g]};
    if (!best || cand < *best) best = cand;
  }
  return best;
}

inline unsigned resolve_workers(unsigned workers) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  return workers;
}

/// Runs body(begin, end) over [0, count) split into contiguous ranges.
template <typename Body>
void parallel_ranges(std::uint64_t count, unsigned workers, Body body) {
  workers = static_cast<unsigned>(
      std::min<std::uint64_t>(resolve_workers(workers), std::max<std::uint64_t>(count, 1)));
  if (workers <= 1) {
    body(std::uint64_t{0}, count);
    return;
  }
  std::vector<std::jthread> pool;
  const std::uint64_t chunk = (count + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t lo = std::min(count, w * chunk);
    const std::uint64_t hi = std::min(count, lo + chunk);
    if (lo < hi) pool.emplace_back([=] { body(lo, hi); });
  }
}

}  // namespace detail

/// Colour counts of every window, k values per corner, corners in row-major
/// order. Each line along the last axis starts from a full window count and
/// then slides by adding and removing one (d-1)-dimensional slab per step.
inline std::vector<std::uint64_t> all_window_counts(const GridColouring& G,
                                                    unsigned workers = 1) {
  const auto& p = G.params();
  const std::uint64_t n = p.n, m = p.m, d = p.d, k = p.k;
  const std::uint64_t lines = detail::checked_pow(n, d - 1);
  std::vector<std::uint64_t> table(p.cell_count() * k, 0);

  detail::parallel_ranges(lines, workers, [&](std::uint64_t lo, std::uint64_t hi) {
    std::vector<std::uint64_t> counts(k);
    std::vector<std::uint64_t> slab_c(d - 1);
    std::vector<std::int64_t> y(d);
    for (std::uint64_t line = lo; line < hi; ++line) {
      // Corner of the line: leading d-1 coordinates from `line`, last = 0.
      Position corner(d, 0);
      std::uint64_t rest = line;
      for (std::size_t j = d - 1; j-- > 0;) {
        corner[j] = rest % n;
        rest /= n;
      }
      const auto first = colour_multiset(G, std::span<const std::uint64_t>(corner));
      counts = first.counts;
      auto visit_slab = [&](std::int64_t last, bool add) {
        std::fill(slab_c.begin(), slab_c.end(), 0);
        do {
          for (std::size_t j = 0; j + 1 < d; ++j)
            y[j] = static_cast<std::int64_t>(corner[j] + slab_c[j]);
          y[d - 1] = last;
          auto& slot = counts[G.at(std::span<const std::int64_t>(y))];
          if (add) ++slot; else --slot;
        } while (detail::next_coords(slab_c, m));
      };
      for (std::uint64_t c = 0; c < n; ++c) {
        if (c > 0) {
          visit_slab(static_cast<std::int64_t>(c - 1), false);
          visit_slab(static_cast<std::int64_t>(c - 1 + m), true);
        }
        std::copy(counts.begin(), counts.end(),
                  table.begin() + static_cast<std::ptrdiff_t>((line * n + c) * k));
      }
    }
  });
  return table;
}

inline VerificationReport verify_packing_injectivity(
    const PackingMatrix& M, std::uint64_t cap = kDefaultVerifyCap) {
  detail::Stopwatch clock;
  detail::check_cap(M.width(), cap, "packing injectivity");
  VerificationReport r{"packing_injectivity", true, std::nullopt, 0, 0.0};
  const auto sums = all_window_sums(M);
  const std::uint64_t b = M.rows();
  r.cells_examined = M.width() * b;
  if (auto dup = detail::first_duplicate(sums, M.width(), b)) {
    r.passed = false;
    const auto [i, j] = *dup;
    r.counterexample = Counterexample{
        {i}, {j},
        {sums.begin() + static_cast<std::ptrdiff_t>(i * b),
         sums.begin() + static_cast<std::ptrdiff_t>((i + 1) * b)},
        {sums.begin() + static_cast<std::ptrdiff_t>(j * b),
         sums.begin() + static_cast<std::ptrdiff_t>((j + 1) * b)}};
  }
  r.wall_seconds = clock.seconds();
  return r;
}

namespace detail {

inline Counterexample window_pair(const GridColouring& G,
                                  std::span<const std::uint64_t> table,
                                  std::uint64_t a, std::uint64_t b,
                                  std::uint64_t k) {
  auto slice = [&](std::uint64_t i) {
    return std::vector<std::uint64_t>(table.begin() + static_cast<std::ptrdiff_t>(i * k),
                                      table.begin() + static_cast<std::ptrdiff_t>((i + 1) * k));
  };
  return {G.position_of(a), G.position_of(b), slice(a), slice(b)};
}

}  // namespace detail

/// Every window multiset is distinct (precomputed table variant).
inline VerificationReport verify_grid_uniqueness(
    const GridColouring& G, std::span<const std::uint64_t> table) {
  detail::Stopwatch clock;
  const auto& p = G.params();
  VerificationReport r{"grid_uniqueness", true, std::nullopt, 0, 0.0};
  r.cells_examined = p.cell_count();
  if (auto dup = detail::first_duplicate(table, p.cell_count(), p.k)) {
    r.passed = false;
    r.counterexample = detail::window_pair(G, table, dup->first, dup->second, p.k);
  }
  r.wall_seconds = clock.seconds();
  return r;
}

inline VerificationReport verify_grid_uniqueness(
    const GridColouring& G, std::uint64_t cap = kDefaultVerifyCap,
    unsigned workers = 1) {
  detail::Stopwatch clock;
  detail::check_cap(G.params().cell_count(), cap, "grid uniqueness");
  const auto table = all_window_counts(G, workers);
  auto r = verify_grid_uniqueness(G, table);
  r.wall_seconds = clock.seconds();
  return r;
}

/// A pigment-i cell keeps its colour under translation by m along any other
/// axis.
inline VerificationReport verify_quasi_periodicity(
    const GridColouring& G, std::uint64_t cap = kDefaultVerifyCap) {
  detail::Stopwatch clock;
  const auto& p = G.params();
  detail::check_cap(p.cell_count(), cap, "quasi-periodicity");
  VerificationReport r{"quasi_periodicity", true, std::nullopt, 0, 0.0};
  Position x(p.d, 0), y(p.d);
  do {
    ++r.cells_examined;
    const std::uint8_t c = G.at(std::span<const std::uint64_t>(x));
    if (c == p.blank()) continue;
    const std::uint64_t pigment = c % p.d;
    for (std::size_t j = 0; j < p.d && r.passed; ++j) {
      if (j == pigment) continue;
      y = x;
      y[j] = (x[j] + p.m) % p.n;
      const std::uint8_t shifted = G.at(std::span<const std::uint64_t>(y));
      if (shifted != c) {
        r.passed = false;
        r.counterexample = Counterexample{x, y, {c}, {shifted}};
      }
    }
    if (!r.passed) break;
  } while (detail::next_coords(x, p.n));
  r.wall_seconds = clock.seconds();
  return r;
}

namespace detail {

inline std::vector<std::uint64_t> pigment_counts(const CodeParams& p,
                                                 std::span<const std::uint64_t> row,
                                                 std::uint64_t pigment) {
  std::vector<std::uint64_t> out(p.b);
  for (std::uint64_t l = 0; l < p.b; ++l) out[l] = row[l * p.d + pigment];
  return out;
}

}  // namespace detail

/// The pigment-i part of each window multiset depends only on x_i. Each
/// window is compared with the window whose other coordinates are zero.
inline VerificationReport verify_consistency(const GridColouring& G,
                                             std::span<const std::uint64_t> table) {
  detail::Stopwatch clock;
  const auto& p = G.params();
  VerificationReport r{"anti_dimensional_consistency", true, std::nullopt, 0, 0.0};
  const std::uint64_t total = p.cell_count();
  for (std::uint64_t idx = 0; idx < total && r.passed; ++idx) {
    ++r.cells_examined;
    const Position x = G.position_of(idx);
    const auto row = table.subspan(idx * p.k, p.k);
    for (std::uint64_t i = 0; i < p.d; ++i) {
      Position base(p.d, 0);
      base[i] = x[i];
      const std::uint64_t bidx = G.index_of(std::span<const std::uint64_t>(base));
      const auto ref = detail::pigment_counts(p, table.subspan(bidx * p.k, p.k), i);
      const auto got = detail::pigment_counts(p, row, i);
      if (ref != got) {
        r.passed = false;
        r.counterexample = Counterexample{base, x, ref, got};
        break;
      }
    }
  }
  r.wall_seconds = clock.seconds();
  return r;
}

inline VerificationReport verify_consistency(const GridColouring& G,
                                             std::uint64_t cap = kDefaultVerifyCap,
                                             unsigned workers = 1) {
  detail::Stopwatch clock;
  detail::check_cap(G.params().cell_count(), cap, "anti-dimensional consistency");
  const auto table = all_window_counts(G, workers);
  auto r = verify_consistency(G, table);
  r.wall_seconds = clock.seconds();
  return r;
}

/// x_i -> pigment-i counts of the window at x_i e_i is injective on [0, n-1]
/// for every i.
inline VerificationReport verify_inconsistency(const GridColouring& G,
                                               std::uint64_t cap = kDefaultVerifyCap) {
  detail::Stopwatch clock;
  const auto& p = G.params();
  detail::check_cap(p.n * p.d, cap, "dimensional inconsistency");
  VerificationReport r{"dimensional_inconsistency", true, std::nullopt, 0, 0.0};
  for (std::uint64_t i = 0; i < p.d && r.passed; ++i) {
    std::vector<std::uint64_t> table(p.n * p.b);
    for (std::uint64_t v = 0; v < p.n; ++v) {
      Position x(p.d, 0);
      x[i] = v;
      const auto ms = colour_multiset(G, std::span<const std::uint64_t>(x));
      const auto pc = detail::pigment_counts(p, ms.counts, i);
      std::copy(pc.begin(), pc.end(), table.begin() + static_cast<std::ptrdiff_t>(v * p.b));
      r.cells_examined += p.window_cells();
    }
    if (auto dup = detail::first_duplicate(table, p.n, p.b)) {
      r.passed = false;
      Position a(p.d, 0), b(p.d, 0);
      a[i] = dup->first;
      b[i] = dup->second;
      auto slice = [&](std::uint64_t v) {
        return std::vector<std::uint64_t>(
            table.begin() + static_cast<std::ptrdiff_t>(v * p.b),
            table.begin() + static_cast<std::ptrdiff_t>((v + 1) * p.b));
      };
      r.counterexample = Counterexample{a, b, slice(dup->first), slice(dup->second)};
    }
  }
  r.wall_seconds = clock.seconds();
  return r;
}

/// Linear scan over all windows; first corner (row-major) whose multiset
/// equals `mult`.
inline std::optional<Position> oracle_localize(const GridColouring& G,
                                               const ColourMultiset& mult,
                                               std::uint64_t cap = kDefaultVerifyCap) {
  const auto& p = G.params();
  detail::check_cap(p.cell_count(), cap, "oracle localization");
  if (mult.counts.size() != p.k) return std::nullopt;
  Position x(p.d, 0);
  do {
    if (colour_multiset(G, std::span<const std::uint64_t>(x)) == mult) return x;
  } while (detail::next_coords(x, p.n));
  return std::nullopt;
}

/// All grid checks over one shared window table.
inline std::vector<VerificationReport> verify_all(const GridColouring& G,
                                                  std::uint64_t cap = kDefaultVerifyCap,
                                                  unsigned workers = 1) {
  const auto& p = G.params();
  detail::check_cap(p.cell_count(), cap, "grid verification");
  std::vector<VerificationReport> out;
  out.push_back(verify_packing_injectivity(build_matrix(p), cap));
  detail::Stopwatch clock;
  const auto table = all_window_counts(G, workers);
  const double table_seconds = clock.seconds();
  out.push_back(verify_grid_uniqueness(G, table));
  out.back().wall_seconds += table_seconds;
  out.push_back(verify_quasi_periodicity(G, cap));
  out.push_back(verify_consistency(G, table));
  out.push_back(verify_inconsistency(G, cap));
  return out;
}

}  // namespace mpc
