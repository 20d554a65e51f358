#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mpc/error.hpp"
#include "mpc/params.hpp"
#include "mpc/profiles.hpp"

namespace mpc {

/// Coordinatewise sum of m consecutive packing columns.
using WindowSumVector = std::vector<std::uint64_t>;

/// A b x n matrix whose columns z_0 ... z_{n-1} form a vector sum packing:
/// the n cyclic window sums of m consecutive columns are pairwise distinct.
/// Row b - 1 is the "bottom" row that selects among the blocks above it.
class PackingMatrix {
 public:
  PackingMatrix() = default;

  /// Wraps explicit rows; all rows must share one width. `s_p` is 0 when the
  /// matrix does not come from the profile construction.
  PackingMatrix(std::vector<std::vector<std::uint64_t>> rows, std::uint64_t m,
                std::uint64_t s_p = 0)
      : m_(m), s_p_(s_p) {
    detail::require(!rows.empty(), "packing needs at least one row");
    detail::require(m >= 1, "window size must be >= 1");
    height_ = rows.size();
    width_ = rows.front().size();
    detail::require(width_ > 0, "packing rows must be non-empty");
    data_.reserve(height_ * width_);
    for (const auto& row : rows) {
      detail::require(row.size() == width_, "packing rows differ in length");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  std::size_t rows() const { return height_; }
  std::size_t width() const { return width_; }
  std::uint64_t window() const { return m_; }
  std::uint64_t profile_parameter() const { return s_p_; }

  std::span<const std::uint64_t> row(std::size_t j) const {
    return {data_.data() + j * width_, width_};
  }
  std::uint64_t at(std::size_t j, std::size_t col) const {
    return data_[j * width_ + col];
  }

 private:
  std::vector<std::uint64_t> data_;  // row-major
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::uint64_t m_ = 0;
  std::uint64_t s_p_ = 0;
};

namespace detail {

/// Dual values in the order they appear along the bottom row: even values
/// ascending to 2ms, then odd values descending to 1.
inline std::vector<std::uint64_t> block_order(std::uint64_t s_p,
                                              std::uint64_t m) {
  const std::uint64_t top = 2 * m * s_p;
  std::vector<std::uint64_t> order;
  order.reserve(top + 1);
  for (std::uint64_t v = 0; v <= top; v += 2) order.push_back(v);
  for (std::uint64_t v = top - 1;; v -= 2) {
    order.push_back(v);
    if (v == 1) break;
  }
  return order;
}

inline std::vector<std::vector<std::uint64_t>> build_rows(std::uint64_t s_p,
                                                          std::uint64_t m,
                                                          std::uint64_t b,
                                                          const std::vector<std::uint64_t>& T) {
  if (b == 1) return {profile_zero(s_p, m).entries};

  const auto below = build_rows(s_p, m, b - 1, T);
  const std::size_t sub_width = below.front().size();
  const std::uint64_t width = m * T[b];

  std::vector<std::vector<std::uint64_t>> rows(b);
  for (auto& r : rows) r.reserve(width);
  for (std::uint64_t v : block_order(s_p, m)) {
    const std::size_t skip = block_is_truncated(v, s_p) ? 1 : 0;
    for (std::size_t j = 0; j + 1 < b; ++j)
      rows[j].insert(rows[j].end(), below[j].begin() + skip, below[j].end());
  }
  rows[b - 1] = profile_T(s_p, m, T[b - 1]).entries;

  for (std::size_t j = 0; j < b; ++j)
    if (rows[j].size() != width)
      fail(ErrorKind::internal,
           "packing width bookkeeping failed at b = " + std::to_string(b) +
               ": row " + std::to_string(j) + " has " +
               std::to_string(rows[j].size()) + " columns, expected " +
               std::to_string(width) + " (block width " +
               std::to_string(sub_width) + ")");
  return rows;
}

}  // namespace detail

/// Recursive construction: the bottom row is profile_T(s_p, m, T[b-1]) and the
/// rows above it are 2ms + 1 copies of the (b-1)-row matrix, one per dual value
/// of the bottom row, with the first column dropped where that value's run is
/// one short.
inline PackingMatrix build_matrix(std::uint64_t s_p, std::uint64_t m,
                                  std::uint64_t b) {
  const auto T = repeat_sequence(s_p, m, b);
  return PackingMatrix(detail::build_rows(s_p, m, b, T), m, s_p);
}

inline PackingMatrix build_matrix(const CodeParams& p) {
  return build_matrix(p.s_p, p.m, p.b);
}

inline WindowSumVector window_sum(const PackingMatrix& M, std::int64_t i) {
  const auto n = static_cast<std::int64_t>(M.width());
  const std::uint64_t start = static_cast<std::uint64_t>(((i % n) + n) % n);
  WindowSumVector out(M.rows(), 0);
  for (std::size_t j = 0; j < M.rows(); ++j) {
    const auto row = M.row(j);
    for (std::uint64_t c = 0; c < M.window(); ++c)
      out[j] += row[(start + c) % M.width()];
  }
  return out;
}

/// All n window sums, column-major: entry [i * rows + j] is component j of
/// the window starting at column i.
inline std::vector<std::uint64_t> all_window_sums(const PackingMatrix& M) {
  const std::size_t b = M.rows();
  std::vector<std::uint64_t> out(M.width() * b);
  for (std::size_t j = 0; j < b; ++j) {
    const auto d = dual(M.row(j), M.window());
    for (std::size_t i = 0; i < d.size(); ++i) out[i * b + j] = d[i];
  }
  return out;
}

/// Decodes a window-sum vector to its starting column using only the closed
/// forms of the profile decoders, one level per row. `T` is the repeat
/// sequence of the instance (see repeat_sequence). Returns nullopt when a
/// component is out of range; the result is not re-verified.
inline std::optional<std::uint64_t> decode_vector(
    std::span<const std::uint64_t> x, std::uint64_t s_p, std::uint64_t m,
    std::span<const std::uint64_t> T, bool truncated = false) {
  const std::size_t b = x.size();
  if (b == 0 || T.size() < b + 1) return std::nullopt;
  const std::uint64_t top = 2 * m * s_p;
  std::int64_t index = 0;
  bool shifted = truncated;
  for (std::size_t level = b; level >= 2; --level) {
    const std::uint64_t v = x[level - 1];
    if (v > top) return std::nullopt;
    index += static_cast<std::int64_t>(decode_T(v, s_p, m, T[level - 1])) -
             (shifted ? 1 : 0);
    shifted = block_is_truncated(v, s_p);
  }
  if (x[0] >= top) return std::nullopt;
  index += static_cast<std::int64_t>(decode_zero(x[0], s_p, m)) -
           (shifted ? 1 : 0);
  const std::int64_t n = static_cast<std::int64_t>(m * T[b]) - (truncated ? 1 : 0);
  if (index < 0 || index >= n) return std::nullopt;
  return static_cast<std::uint64_t>(index);
}

inline std::optional<std::uint64_t> decode_vector(
    std::span<const std::uint64_t> x, std::uint64_t s_p, std::uint64_t m,
    bool truncated = false) {
  if (x.empty()) return std::nullopt;
  const auto T = repeat_sequence(s_p, m, x.size());
  return decode_vector(x, s_p, m, T, truncated);
}

/// decode_vector followed by one window_sum evaluation to confirm the answer.
inline std::optional<std::uint64_t> decode_vector_checked(
    const PackingMatrix& M, std::span<const std::uint64_t> x) {
  if (x.size() != M.rows() || M.profile_parameter() == 0) return std::nullopt;
  const auto idx = decode_vector(x, M.profile_parameter(), M.window());
  if (!idx) return std::nullopt;
  const auto back = window_sum(M, static_cast<std::int64_t>(*idx));
  if (!std::equal(back.begin(), back.end(), x.begin())) return std::nullopt;
  return idx;
}

}  // namespace mpc
