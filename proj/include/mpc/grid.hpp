#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mpc/error.hpp"
#include "mpc/packing.hpp"
#include "mpc/params.hpp"

namespace mpc {

/// Canonical window corner, every coordinate in [0, n-1].
using Position = std::vector<std::uint64_t>;

/// Colour counts over one window, indexed by colour.
struct ColourMultiset {
  std::vector<std::uint64_t> counts;

  std::uint64_t total() const {
    std::uint64_t sum = 0;
    for (auto c : counts) sum += c;
    return sum;
  }
  friend bool operator==(const ColourMultiset&, const ColourMultiset&) = default;
};

/// d-dimensional periodic array of colour indices, one byte per cell,
/// row-major with the last coordinate fastest.
///
/// Colour `pigment + shade * d` belongs to dimension `pigment`; colour
/// k - 1 is blank.
class GridColouring {
 public:
  GridColouring() = default;
  GridColouring(CodeParams params, std::vector<std::uint8_t> cells)
      : params_(std::move(params)), cells_(std::move(cells)) {
    if (cells_.size() != params_.cell_count())
      detail::fail(ErrorKind::invalid_argument,
                   "grid payload has " + std::to_string(cells_.size()) +
                       " cells, expected " +
                       std::to_string(params_.cell_count()));
  }

  const CodeParams& params() const { return params_; }
  std::uint64_t side() const { return params_.n; }
  std::uint64_t dimension() const { return params_.d; }
  std::span<const std::uint8_t> cells() const { return cells_; }
  std::span<std::uint8_t> mutable_cells() { return cells_; }

  /// Linear index of the cell at the given coordinates, reduced mod n.
  std::uint64_t index_of(std::span<const std::int64_t> x) const {
    const auto n = static_cast<std::int64_t>(params_.n);
    std::uint64_t idx = 0;
    for (std::size_t j = 0; j < params_.d; ++j)
      idx = idx * params_.n + static_cast<std::uint64_t>(((x[j] % n) + n) % n);
    return idx;
  }
  std::uint64_t index_of(std::span<const std::uint64_t> x) const {
    std::uint64_t idx = 0;
    for (std::size_t j = 0; j < params_.d; ++j)
      idx = idx * params_.n + x[j] % params_.n;
    return idx;
  }
  Position position_of(std::uint64_t idx) const {
    Position x(params_.d);
    for (std::size_t j = params_.d; j-- > 0;) {
      x[j] = idx % params_.n;
      idx /= params_.n;
    }
    return x;
  }

  std::uint8_t at(std::span<const std::int64_t> x) const {
    return cells_[index_of(x)];
  }
  std::uint8_t at(std::span<const std::uint64_t> x) const {
    return cells_[index_of(x)];
  }
  std::uint8_t at(std::initializer_list<std::uint64_t> x) const {
    return at(std::span<const std::uint64_t>(x.begin(), x.size()));
  }

  friend bool operator==(const GridColouring&, const GridColouring&) = default;

 private:
  CodeParams params_;
  std::vector<std::uint8_t> cells_;
};

/// How far the construction has progressed. Erasure is applied for
/// dimensions [0, erased_dimensions); for the last of them, `replicate_last`
/// selects whether the base-block erasure has been propagated across the
/// torus yet. The finished grid is {d, true}.
struct ConstructionStage {
  std::uint64_t erased_dimensions = 0;
  bool replicate_last = true;
};

namespace detail {

/// Advances a mixed-radix counter with the last digit fastest.
inline bool next_coords(std::span<std::uint64_t> x, std::uint64_t radix) {
  for (std::size_t j = x.size(); j-- > 0;) {
    if (++x[j] < radix) return true;
    x[j] = 0;
  }
  return false;
}

/// Offset of x within its base block for dimension i: the coordinates other
/// than i, each reduced mod m, read in lexicographic order.
inline std::uint64_t base_offset(std::span<const std::uint64_t> x,
                                 std::size_t i, std::uint64_t m) {
  std::uint64_t off = 0;
  for (std::size_t l = 0; l < x.size(); ++l)
    if (l != i) off = off * m + x[l] % m;
  return off;
}

/// keep[(i * n + j) * slab + off] is 1 when the base-block cell survives the
/// erasure for dimension i, slab j. Cells are visited lexicographically and
/// the first z_j[shade] cells of each pigment-i shade are kept.
inline std::vector<std::uint8_t> keep_masks(const CodeParams& p,
                                            const PackingMatrix& M) {
  const std::uint64_t d = p.d, n = p.n, m = p.m, bd = p.b * p.d;
  const std::uint64_t slab = checked_pow(m, d - 1);
  std::vector<std::uint8_t> keep(d * n * slab, 0);
  std::vector<std::uint64_t> other(d - 1);
  std::vector<std::uint64_t> kept(p.b);
  for (std::uint64_t i = 0; i < d; ++i) {
    for (std::uint64_t j = 0; j < n; ++j) {
      std::fill(other.begin(), other.end(), 0);
      std::fill(kept.begin(), kept.end(), 0);
      std::uint64_t off = 0;
      do {
        std::uint64_t sum = j;
        for (auto c : other) sum += c;
        const std::uint64_t v = sum % bd;
        if (v % d == i) {
          const std::uint64_t shade = v / d;
          if (kept[shade] < M.at(shade, j)) {
            keep[(i * n + j) * slab + off] = 1;
            ++kept[shade];
          }
        }
        ++off;
      } while (next_coords(other, m));
    }
  }
  return keep;
}

}  // namespace detail

/// Colouring before any erasure: cell x gets colour (sum of x_j) mod bd.
inline std::uint8_t initial_colour(const CodeParams& p,
                                   std::span<const std::uint64_t> x) {
  std::uint64_t sum = 0;
  for (auto c : x) sum += c;
  return static_cast<std::uint8_t>(sum % (p.b * p.d));
}

inline GridColouring build_grid(const CodeParams& p, ConstructionStage stage) {
  detail::require(stage.erased_dimensions <= p.d,
                  "construction stage beyond the grid dimension");
  const std::uint64_t d = p.d, n = p.n, m = p.m;
  const std::uint64_t slab = detail::checked_pow(m, d - 1);
  const std::uint8_t blank = static_cast<std::uint8_t>(p.blank());
  const PackingMatrix M = build_matrix(p);
  const auto keep = detail::keep_masks(p, M);

  std::vector<std::uint8_t> cells(p.cell_count());
  Position x(d, 0);
  std::uint64_t idx = 0;
  do {
    const std::uint8_t v = initial_colour(p, x);
    const std::uint64_t i = v % d;
    std::uint8_t out = v;
    if (i < stage.erased_dimensions) {
      bool in_base = true;
      if (i + 1 == stage.erased_dimensions && !stage.replicate_last)
        for (std::size_t l = 0; l < d; ++l)
          if (l != i && x[l] >= m) in_base = false;
      if (in_base &&
          !keep[(i * n + x[i]) * slab + detail::base_offset(x, i, m)])
        out = blank;
    }
    cells[idx++] = out;
  } while (detail::next_coords(x, n));
  return GridColouring(p, std::move(cells));
}

inline GridColouring build_grid(const CodeParams& p) {
  return build_grid(p, ConstructionStage{p.d, true});
}

/// Colour counts over the window {x + c : c in [0, m-1]^d}, taken cyclically.
inline ColourMultiset colour_multiset(const GridColouring& G,
                                      std::span<const std::int64_t> x) {
  const auto& p = G.params();
  ColourMultiset out{std::vector<std::uint64_t>(p.k, 0)};
  std::vector<std::uint64_t> c(p.d, 0);
  std::vector<std::int64_t> y(p.d);
  do {
    for (std::size_t j = 0; j < p.d; ++j)
      y[j] = x[j] + static_cast<std::int64_t>(c[j]);
    ++out.counts[G.at(std::span<const std::int64_t>(y))];
  } while (detail::next_coords(c, p.m));
  return out;
}

inline ColourMultiset colour_multiset(const GridColouring& G,
                                      std::span<const std::uint64_t> x) {
  std::vector<std::int64_t> y(x.begin(), x.end());
  return colour_multiset(G, std::span<const std::int64_t>(y));
}

inline ColourMultiset colour_multiset(const GridColouring& G,
                                      std::initializer_list<std::int64_t> x) {
  return colour_multiset(G, std::span<const std::int64_t>(x.begin(), x.size()));
}

/// Allocation-free core of localization: writes the corner into `out`
/// (d entries) and returns false if the counts cannot come from any window.
/// The answer is not re-verified.
inline bool localize_into(std::span<const std::uint64_t> counts,
                          const CodeParams& p, std::span<std::uint64_t> out) {
  if (counts.size() != p.k || out.size() < p.d) return false;
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (total != p.window_cells()) return false;
  std::array<std::uint64_t, kMaxColours> shades;
  for (std::uint64_t i = 0; i < p.d; ++i) {
    for (std::uint64_t l = 0; l < p.b; ++l) shades[l] = counts[l * p.d + i];
    const auto xi = decode_vector(std::span<const std::uint64_t>(shades.data(), p.b),
                                  p.s_p, p.m, p.T);
    if (!xi) return false;
    out[i] = *xi;
  }
  return true;
}

inline std::optional<Position> try_localize(const ColourMultiset& mult,
                                            const CodeParams& p) {
  Position x(p.d);
  if (!localize_into(mult.counts, p, x)) return std::nullopt;
  return x;
}

inline Position localize(const ColourMultiset& mult, const CodeParams& p) {
  if (mult.counts.size() != p.k)
    detail::fail(ErrorKind::invalid_argument,
                 "multiset has " + std::to_string(mult.counts.size()) +
                     " colours, expected " + std::to_string(p.k));
  if (mult.total() != p.window_cells())
    detail::fail(ErrorKind::invalid_argument,
                 "inconsistent total: counts sum to " +
                     std::to_string(mult.total()) + ", expected m^d = " +
                     std::to_string(p.window_cells()));
  auto x = try_localize(mult, p);
  if (!x) detail::fail(ErrorKind::no_such_window, "no such window");
  return *x;
}

/// localize, then one colour_multiset evaluation on G to confirm the answer.
inline Position localize_checked(const ColourMultiset& mult,
                                 const GridColouring& G) {
  auto x = localize(mult, G.params());
  if (colour_multiset(G, std::span<const std::uint64_t>(x)) != mult)
    detail::fail(ErrorKind::no_such_window, "no such window");
  return x;
}

}  // namespace mpc
