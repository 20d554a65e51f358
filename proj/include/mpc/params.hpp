#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "mpc/error.hpp"

namespace mpc {

using BigInt = boost::multiprecision::cpp_int;

/// Grid cells are one byte each, so the palette is capped at 255 colours.
inline constexpr std::uint64_t kMaxColours = 255;

/// Default ceiling on n^d, the number of grid cells an instance may allocate.
inline constexpr std::uint64_t kDefaultCellBudget = std::uint64_t{1} << 31;

/// Every derived quantity of one code instance.
///
/// The three free inputs are the dimension `d`, the shade count `b` and the
/// scale `t`. `s_max` is the largest coordinate of the packing vectors and
/// `s_p = s_max / 2` is the parameter handed to the profile generators.
struct CodeParams {
  std::uint64_t d = 0;
  std::uint64_t b = 0;
  std::uint64_t t = 0;
  std::uint64_t m = 0;
  std::uint64_t k = 0;
  std::uint64_t s_max = 0;
  std::uint64_t s_p = 0;
  std::vector<std::uint64_t> T;  // b + 1 entries, T[0] == 0
  std::uint64_t n = 0;

  std::uint64_t blank() const { return k - 1; }
  std::uint64_t colour(std::uint64_t pigment, std::uint64_t shade) const {
    return pigment + shade * d;
  }
  /// Number of cells in one window, m^d.
  std::uint64_t window_cells() const;
  /// Number of cells in the whole torus, n^d.
  std::uint64_t cell_count() const;

  friend bool operator==(const CodeParams&, const CodeParams&) = default;
};

namespace detail {

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out))
    fail(ErrorKind::too_large, "instance too large: 64-bit overflow");
  return out;
}

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_add_overflow(a, b, &out))
    fail(ErrorKind::too_large, "instance too large: 64-bit overflow");
  return out;
}

inline std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t out = 1;
  for (std::uint64_t i = 0; i < exp; ++i) out = checked_mul(out, base);
  return out;
}

}  // namespace detail

inline std::uint64_t CodeParams::window_cells() const {
  return detail::checked_pow(m, d);
}

inline std::uint64_t CodeParams::cell_count() const {
  return detail::checked_pow(n, d);
}

/// Repeat counts of the packing recursion: T[0] = 0, T[1] = 2 s_p,
/// T[j+1] = (2 m s_p + 1) T[j] - 2. The packing with b rows has width m T[b].
inline std::vector<std::uint64_t> repeat_sequence(std::uint64_t s_p,
                                                  std::uint64_t m,
                                                  std::uint64_t b) {
  detail::require(s_p >= 1, "s_p must be >= 1");
  detail::require(m >= 2, "m must be >= 2");
  detail::require(b >= 1, "b must be >= 1");
  std::vector<std::uint64_t> T(b + 1, 0);
  T[1] = detail::checked_mul(2, s_p);
  const std::uint64_t factor =
      detail::checked_add(detail::checked_mul(detail::checked_mul(2, m), s_p), 1);
  for (std::uint64_t j = 1; j < b; ++j)
    T[j + 1] = detail::checked_mul(factor, T[j]) - 2;
  return T;
}

/// Exact test of n = (2ms+1)^(b-1) (2ms - 1/s) + 1/s, cleared of denominators.
inline bool matches_closed_form(std::uint64_t n, std::uint64_t s_p,
                                std::uint64_t m, std::uint64_t b) {
  const BigInt s = s_p;
  const BigInt two_ms = BigInt(2) * m * s;
  const BigInt rhs =
      boost::multiprecision::pow(two_ms + 1, static_cast<unsigned>(b - 1)) *
          (two_ms * s - 1) +
      1;
  return BigInt(n) * s == rhs;
}

inline CodeParams derive_params(std::uint64_t d, std::uint64_t b,
                                std::uint64_t t,
                                std::uint64_t cell_budget = kDefaultCellBudget) {
  using detail::checked_mul;
  using detail::checked_pow;
  detail::require(d >= 2, "dimension d must be >= 2");
  detail::require(b >= 1, "shade count b must be >= 1");
  detail::require(t >= 1, "scale t must be >= 1");

  CodeParams p;
  p.d = d;
  p.b = b;
  p.t = t;
  if (b > (kMaxColours - 1) / d)
    detail::fail(ErrorKind::invalid_argument,
                 "colour byte overflow: k = b*d + 1 = " +
                     std::to_string(b * d + 1) + " exceeds 255");
  p.k = b * d + 1;
  const std::uint64_t bd = b * d;
  p.m = checked_mul(checked_mul(2, bd), t);
  const std::uint64_t slab = checked_pow(p.m, d - 1);
  if (slab % bd != 0 || (slab / bd) % 2 != 0)
    detail::fail(ErrorKind::internal, "m^(d-1) is not a multiple of 2bd");
  p.s_max = slab / bd;
  p.s_p = p.s_max / 2;
  if (p.s_p != checked_mul(checked_pow(2 * bd, d - 2), checked_pow(t, d - 1)))
    detail::fail(ErrorKind::internal, "profile parameter mismatch");

  p.T = repeat_sequence(p.s_p, p.m, b);
  p.n = checked_mul(p.m, p.T[b]);

  std::uint64_t cells = 1;
  for (std::uint64_t i = 0; i < d; ++i) {
    if (__builtin_mul_overflow(cells, p.n, &cells) || cells > cell_budget)
      detail::fail(ErrorKind::too_large,
                   "instance too large: n^d exceeds the cell budget of " +
                       std::to_string(cell_budget) + " (n = " +
                       std::to_string(p.n) + ", d = " + std::to_string(d) + ")");
  }
  if (!matches_closed_form(p.n, p.s_p, p.m, b))
    detail::fail(ErrorKind::internal, "grid side disagrees with closed form");
  return p;
}

/// Outcome of the counting bound n^d <= C(m^d + k - 1, k - 1).
struct BoundCheck {
  bool holds = false;
  BigInt windows;    // n^d
  BigInt multisets;  // C(m^d + k - 1, k - 1)

  BigInt margin() const { return multisets - windows; }
};

inline BigInt binomial(const BigInt& top, std::uint64_t choose) {
  BigInt out = 1;
  for (std::uint64_t i = 1; i <= choose; ++i) {
    out *= top - choose + i;
    out /= i;
  }
  return out;
}

inline BoundCheck bound_check(std::uint64_t n, std::uint64_t d,
                              std::uint64_t m, std::uint64_t k) {
  BoundCheck out;
  const BigInt cells = boost::multiprecision::pow(BigInt(m), static_cast<unsigned>(d));
  out.windows = boost::multiprecision::pow(BigInt(n), static_cast<unsigned>(d));
  out.multisets = binomial(cells + k - 1, k - 1);
  out.holds = out.windows <= out.multisets;
  return out;
}

inline BoundCheck bound_check(const CodeParams& p) {
  return bound_check(p.n, p.d, p.m, p.k);
}

/// Measured n / m^(k-1).
inline double size_ratio(const CodeParams& p) {
  return static_cast<double>(p.n) /
         std::pow(static_cast<double>(p.m), static_cast<double>(p.k - 1));
}

/// The constant C_k^(1/d) with C_k = (2/(k-1))^(k-1), as stated for the
/// asymptotic grid size. Reported alongside size_ratio, never enforced.
inline double stated_size_constant(std::uint64_t k, std::uint64_t d) {
  const double km1 = static_cast<double>(k - 1);
  return std::pow(std::pow(2.0 / km1, km1), 1.0 / static_cast<double>(d));
}

}  // namespace mpc
