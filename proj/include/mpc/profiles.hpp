#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mpc/error.hpp"

namespace mpc {

/// Row generator for packing matrices. `T == 0` selects the base family,
/// whose m-dual lists every integer of [0, 2 m s_p - 1] exactly once; the
/// T >= 1 family has an m-dual made of runs of length m T or m T - 1.
struct Profile {
  std::vector<std::uint64_t> entries;
  std::uint64_t s_p = 0;
  std::uint64_t m = 0;
  std::uint64_t T = 0;

  std::size_t size() const { return entries.size(); }
};

namespace detail {

inline void check_profile_args(std::uint64_t s_p, std::uint64_t m) {
  require(s_p >= 1, "profile parameter s_p must be >= 1");
  require(m >= 2, "window size m must be >= 2");
}

inline void append_repeated(std::vector<std::uint64_t>& out,
                            std::uint64_t value, std::uint64_t count) {
  out.insert(out.end(), count, value);
}

}  // namespace detail

inline std::uint64_t profile_zero_length(std::uint64_t s_p, std::uint64_t m) {
  return 2 * m * s_p;
}

inline std::uint64_t profile_T_length(std::uint64_t s_p, std::uint64_t m,
                                      std::uint64_t T) {
  return m * ((2 * m * s_p + 1) * T - 2);
}

/// Two table rows of s_p blocks each: blocks of m copies of 2c, then blocks
/// (2s_p - 2c, ..., 2s_p - 2c, 2s_p - 2c - 1).
inline Profile profile_zero(std::uint64_t s_p, std::uint64_t m) {
  detail::check_profile_args(s_p, m);
  Profile p{{}, s_p, m, 0};
  p.entries.reserve(profile_zero_length(s_p, m));
  for (std::uint64_t c = 0; c < s_p; ++c)
    detail::append_repeated(p.entries, 2 * c, m);
  for (std::uint64_t c = 0; c < s_p; ++c) {
    const std::uint64_t v = 2 * s_p - 2 * c;
    detail::append_repeated(p.entries, v, m - 1);
    p.entries.push_back(v - 1);
  }
  return p;
}

/// Row-major expansion of the (2m + 1) x s_p cell table. Each cell is a
/// length-m motif repeated T times, except the three cells in column 0 of
/// rows m, m + 1 and 2m, which are one entry (or one motif) short.
inline Profile profile_T(std::uint64_t s_p, std::uint64_t m, std::uint64_t T) {
  detail::check_profile_args(s_p, m);
  detail::require(T >= 1, "profile_T needs T >= 1; use profile_zero for T = 0");
  const std::uint64_t top = 2 * s_p;
  Profile p{{}, s_p, m, T};
  auto& out = p.entries;
  out.reserve(profile_T_length(s_p, m, T));

  std::vector<std::uint64_t> motif(m);
  auto emit = [&](std::uint64_t reps) {
    for (std::uint64_t r = 0; r < reps; ++r)
      out.insert(out.end(), motif.begin(), motif.end());
  };

  // Rows 0..m-1: (m-1-r zeros, 2c, r copies of 2s).
  for (std::uint64_t r = 0; r < m; ++r) {
    for (std::uint64_t c = 0; c < s_p; ++c) {
      std::fill(motif.begin(), motif.end(), top);
      std::fill(motif.begin(), motif.begin() + (m - 1 - r), 0);
      motif[m - 1 - r] = 2 * c;
      emit(T);
    }
  }
  // Row m.
  detail::append_repeated(out, top, m * T - 1);
  for (std::uint64_t c = 1; c < s_p; ++c) {
    std::fill(motif.begin(), motif.end(), top);
    motif[0] = top - 2 * c + 1;
    emit(T);
  }
  // Rows m+1..2m-1: (1, m-1-r copies of 2s, 2s-2c, r-1 zeros).
  for (std::uint64_t r = 1; r < m; ++r) {
    for (std::uint64_t c = 0; c < s_p; ++c) {
      std::fill(motif.begin(), motif.end(), 0);
      motif[0] = 1;
      std::fill(motif.begin() + 1, motif.begin() + (m - r), top);
      motif[m - r] = top - 2 * c;
      emit(r == 1 && c == 0 ? T - 1 : T);
    }
  }
  // Row 2m: (1, 0, ..., 0)^(T-1) followed by (1).
  std::fill(motif.begin(), motif.end(), 0);
  motif[0] = 1;
  emit(T - 1);
  out.push_back(1);

  if (out.size() != profile_T_length(s_p, m, T))
    detail::fail(ErrorKind::internal, "profile_T length bookkeeping failed");
  return p;
}

/// Cyclic sums of m consecutive entries: out[i] = w[i] + ... + w[i+m-1].
inline std::vector<std::uint64_t> dual(std::span<const std::uint64_t> w,
                                       std::uint64_t m) {
  detail::require(!w.empty(), "dual of an empty sequence");
  detail::require(m >= 1, "window size must be >= 1");
  const std::size_t len = w.size();
  std::vector<std::uint64_t> out(len);
  std::uint64_t acc = 0;
  for (std::uint64_t j = 0; j < m; ++j) acc += w[j % len];
  for (std::size_t i = 0; i < len; ++i) {
    out[i] = acc;
    acc -= w[i];
    acc += w[(i + m) % len];
  }
  return out;
}

inline std::vector<std::uint64_t> dual(const Profile& p, std::uint64_t m) {
  return dual(std::span<const std::uint64_t>(p.entries), m);
}

/// Index of v in the m-dual of profile_zero(s_p, m).
inline std::uint64_t decode_zero(std::uint64_t v, std::uint64_t s_p,
                                 std::uint64_t m) {
  const std::uint64_t len = 2 * m * s_p;
  if (v >= len)
    detail::fail(ErrorKind::invalid_argument,
                 "dual value " + std::to_string(v) + " outside [0, " +
                     std::to_string(len - 1) + "]");
  return v % 2 == 0 ? v / 2 : len - 1 - (v - 1) / 2;
}

/// Smallest index of v in the m-dual of profile_T(s_p, m, T).
inline std::uint64_t decode_T(std::uint64_t v, std::uint64_t s_p,
                              std::uint64_t m, std::uint64_t T) {
  const std::uint64_t top = 2 * m * s_p;
  if (v > top)
    detail::fail(ErrorKind::invalid_argument,
                 "dual value " + std::to_string(v) + " outside [0, " +
                     std::to_string(top) + "]");
  if (T < 1) detail::fail(ErrorKind::invalid_argument, "decode_T needs T >= 1");
  const std::uint64_t run = m * T;
  if (v % 2 == 0) {
    const std::uint64_t r = v / (2 * s_p);
    const std::uint64_t c = (v / 2) % s_p;
    std::uint64_t idx = 0;
    if (r > 0) idx += r * run * s_p - r + 1;
    if (c > 0) idx += c * run - 1 + (r == 0 ? 1 : 0);
    return idx;
  }
  const std::uint64_t u = top - v + 1;
  const std::uint64_t r = u / (2 * s_p);
  const std::uint64_t c = (u / 2) % s_p;
  std::uint64_t idx = 1 + m * (run * s_p - 1);
  if (r > 0) idx += run * s_p * r - r;
  if (c > 0) idx += c * run - 1;
  return idx;
}

/// True iff v occurs m T - 1 times (rather than m T) in the m-dual of
/// profile_T: these are the values in column 0 of the dual table.
inline bool block_is_truncated(std::uint64_t v, std::uint64_t s_p) {
  const std::uint64_t r = v % (2 * s_p);
  return v != 0 && (r == 0 || r == 1);
}

}  // namespace mpc
