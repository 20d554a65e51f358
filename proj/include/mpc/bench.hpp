#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <random>
#include <vector>

#include "mpc/error.hpp"
#include "mpc/grid.hpp"
#include "mpc/packing.hpp"
#include "mpc/params.hpp"

namespace mpc {

/// `count` realizable window multisets, k counts each, stored back to back.
/// Each is assembled from packing window sums at uniformly random corners,
/// so no grid needs to be materialized.
inline std::vector<std::uint64_t> sample_multisets(const CodeParams& p,
                                                   std::size_t count,
                                                   std::uint64_t seed = 1) {
  const PackingMatrix M = build_matrix(p);
  const auto sums = all_window_sums(M);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> pick(0, p.n - 1);
  const std::uint64_t cells = p.window_cells();
  std::vector<std::uint64_t> out(count * p.k, 0);
  for (std::size_t s = 0; s < count; ++s) {
    auto* row = out.data() + s * p.k;
    std::uint64_t used = 0;
    for (std::uint64_t i = 0; i < p.d; ++i) {
      const std::uint64_t xi = pick(rng);
      for (std::uint64_t l = 0; l < p.b; ++l) {
        row[l * p.d + i] = sums[xi * p.b + l];
        used += sums[xi * p.b + l];
      }
    }
    row[p.blank()] = cells - used;
  }
  return out;
}

inline double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

/// Per-repetition mean decode latency in nanoseconds over `samples`.
/// `checksum` accumulates decoded coordinates so the work is observable.
inline std::vector<double> decode_latencies_ns(const CodeParams& p,
                                               const std::vector<std::uint64_t>& samples,
                                               std::size_t reps,
                                               std::uint64_t& checksum) {
  detail::require(reps >= 1, "reps must be >= 1");
  const std::size_t count = samples.size() / p.k;
  detail::require(count > 0, "no samples to decode");
  std::vector<std::uint64_t> x(p.d);
  std::vector<double> out;
  out.reserve(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    const auto start = std::chrono::steady_clock::now();
    for (std::size_t s = 0; s < count; ++s) {
      const std::span<const std::uint64_t> counts(samples.data() + s * p.k, p.k);
      if (!localize_into(counts, p, x))
        detail::fail(ErrorKind::internal, "sampled multiset failed to decode");
      checksum += x[0];
    }
    const auto stop = std::chrono::steady_clock::now();
    out.push_back(std::chrono::duration<double, std::nano>(stop - start).count() /
                  static_cast<double>(count));
  }
  return out;
}

/// Per-repetition grid construction time in seconds.
inline std::vector<double> build_seconds(const CodeParams& p, std::size_t reps) {
  detail::require(reps >= 1, "reps must be >= 1");
  std::vector<double> out;
  for (std::size_t r = 0; r < reps; ++r) {
    const auto start = std::chrono::steady_clock::now();
    const auto G = build_grid(p);
    const auto stop = std::chrono::steady_clock::now();
    if (G.cells().size() != p.cell_count())
      detail::fail(ErrorKind::internal, "grid size mismatch");
    out.push_back(std::chrono::duration<double>(stop - start).count());
  }
  return out;
}

}  // namespace mpc
