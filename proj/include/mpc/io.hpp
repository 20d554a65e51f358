#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mpc/error.hpp"
#include "mpc/grid.hpp"
#include "mpc/params.hpp"

namespace mpc {

// Grid file layout: a text header of "key value" lines closed by "end",
// immediately followed by n^d raw colour bytes (row-major, last coordinate
// fastest).
//
//   mpc-grid
//   version 1
//   d 2
//   b 1
//   t 1
//   m 4
//   k 3
//   s_max 2
//   n 8
//   colour-encoding pigment+shade*d;blank=k-1
//   erasure-rule lex-keep-first
//   payload 64
//   end
inline constexpr std::string_view kGridMagic = "mpc-grid";
inline constexpr int kGridVersion = 1;
inline constexpr std::string_view kColourEncoding = "pigment+shade*d;blank=k-1";
inline constexpr std::string_view kErasureRule = "lex-keep-first";

inline void write_grid(const GridColouring& G, std::ostream& out) {
  const auto& p = G.params();
  out << kGridMagic << '\n'
      << "version " << kGridVersion << '\n'
      << "d " << p.d << '\n'
      << "b " << p.b << '\n'
      << "t " << p.t << '\n'
      << "m " << p.m << '\n'
      << "k " << p.k << '\n'
      << "s_max " << p.s_max << '\n'
      << "n " << p.n << '\n'
      << "colour-encoding " << kColourEncoding << '\n'
      << "erasure-rule " << kErasureRule << '\n'
      << "payload " << G.cells().size() << '\n'
      << "end\n";
  out.write(reinterpret_cast<const char*>(G.cells().data()),
            static_cast<std::streamsize>(G.cells().size()));
  if (!out) detail::fail(ErrorKind::format, "failed writing grid payload");
}

inline void write_grid(const GridColouring& G, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) detail::fail(ErrorKind::format, "cannot open " + path.string());
  write_grid(G, out);
}

namespace detail {

inline std::uint64_t header_uint(const std::map<std::string, std::string>& h,
                                 const std::string& key) {
  const auto it = h.find(key);
  if (it == h.end()) fail(ErrorKind::format, "grid header lacks '" + key + "'");
  try {
    std::size_t used = 0;
    const auto v = std::stoull(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::logic_error&) {
    fail(ErrorKind::format, "grid header field '" + key + "' is not an integer");
  }
}

}  // namespace detail

inline GridColouring read_grid(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kGridMagic)
    detail::fail(ErrorKind::format, "not a grid file (bad magic)");
  std::map<std::string, std::string> header;
  bool closed = false;
  while (std::getline(in, line)) {
    if (line == "end") {
      closed = true;
      break;
    }
    const auto space = line.find(' ');
    if (space == std::string::npos)
      detail::fail(ErrorKind::format, "malformed grid header line: " + line);
    header[line.substr(0, space)] = line.substr(space + 1);
  }
  if (!closed) detail::fail(ErrorKind::format, "grid header is not terminated");

  const auto version = detail::header_uint(header, "version");
  if (version != kGridVersion)
    detail::fail(ErrorKind::format, "version mismatch: file has " +
                                        std::to_string(version) + ", expected " +
                                        std::to_string(kGridVersion));
  if (header["colour-encoding"] != kColourEncoding)
    detail::fail(ErrorKind::format, "unknown colour encoding");
  if (header["erasure-rule"] != kErasureRule)
    detail::fail(ErrorKind::format, "unknown erasure rule");

  const auto p = derive_params(detail::header_uint(header, "d"),
                               detail::header_uint(header, "b"),
                               detail::header_uint(header, "t"));
  for (const auto& [key, want] : {std::pair<std::string, std::uint64_t>{"m", p.m},
                                  {"k", p.k},
                                  {"s_max", p.s_max},
                                  {"n", p.n}})
    if (detail::header_uint(header, key) != want)
      detail::fail(ErrorKind::format, "header field '" + key +
                                          "' disagrees with derived parameters");

  const std::uint64_t expected = p.cell_count();
  if (detail::header_uint(header, "payload") != expected)
    detail::fail(ErrorKind::format, "length mismatch: header declares " +
                                        header["payload"] + " cells, expected " +
                                        std::to_string(expected));
  std::vector<std::uint8_t> cells(expected);
  in.read(reinterpret_cast<char*>(cells.data()),
          static_cast<std::streamsize>(expected));
  const auto got = static_cast<std::uint64_t>(in.gcount());
  if (got != expected)
    detail::fail(ErrorKind::format, "length mismatch: payload has " +
                                        std::to_string(got) + " bytes, expected " +
                                        std::to_string(expected));
  if (in.peek() != std::char_traits<char>::eof())
    detail::fail(ErrorKind::format, "length mismatch: trailing bytes after payload");
  for (std::uint64_t i = 0; i < expected; ++i)
    if (cells[i] >= p.k)
      detail::fail(ErrorKind::format, "colour byte " + std::to_string(cells[i]) +
                                          " at cell " + std::to_string(i) +
                                          " is >= k = " + std::to_string(p.k));
  return GridColouring(p, std::move(cells));
}

inline GridColouring read_grid(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) detail::fail(ErrorKind::format, "cannot open " + path.string());
  return read_grid(in);
}

// Multiset files hold a JSON array of k non-negative counts, e.g. [5,3,8].

inline std::string format_multiset(const ColourMultiset& ms) {
  return nlohmann::json(ms.counts).dump();
}

/// Accepts a count array ("5,3,8" or "[5,3,8]") or colour:count pairs
/// ("0:5,1:3,2:8"). Pair form needs k; unlisted colours count zero.
inline ColourMultiset parse_multiset(std::string text,
                                     std::optional<std::uint64_t> k = std::nullopt) {
  for (char& c : text)
    if (c == '[' || c == ']') c = ' ';
  ColourMultiset out;
  const bool pairs = text.find(':') != std::string::npos;
  if (pairs) {
    if (!k) detail::fail(ErrorKind::invalid_argument,
                         "colour:count pairs need the colour count k");
    out.counts.assign(*k, 0);
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) continue;
    item = item.substr(first, item.find_last_not_of(" \t\r\n") - first + 1);
    try {
      if (pairs) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw std::invalid_argument(item);
        const auto colour = std::stoull(item.substr(0, colon));
        const auto count = std::stoull(item.substr(colon + 1));
        if (colour >= *k) detail::fail(ErrorKind::invalid_argument,
                                       "colour " + std::to_string(colour) + " >= k");
        out.counts[colour] += count;
      } else {
        if (item.front() == '-') throw std::invalid_argument(item);
        std::size_t used = 0;
        out.counts.push_back(std::stoull(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      }
    } catch (const std::logic_error&) {
      detail::fail(ErrorKind::invalid_argument, "malformed multiset entry '" + item + "'");
    }
  }
  if (k && out.counts.size() != *k)
    detail::fail(ErrorKind::invalid_argument,
                 "multiset has " + std::to_string(out.counts.size()) +
                     " counts, expected k = " + std::to_string(*k));
  return out;
}

inline void write_multiset(const ColourMultiset& ms, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) detail::fail(ErrorKind::format, "cannot open " + path.string());
  out << format_multiset(ms) << '\n';
}

inline ColourMultiset read_multiset(const std::filesystem::path& path,
                                    std::optional<std::uint64_t> k = std::nullopt) {
  std::ifstream in(path);
  if (!in) detail::fail(ErrorKind::format, "cannot open " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_multiset(text, k);
}

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Pigment i lights channel i at 255 - shade * floor(128 / b); blank is white.
inline Rgb palette_colour(const CodeParams& p, std::uint8_t colour) {
  if (colour == p.blank()) return {255, 255, 255};
  const std::uint64_t pigment = colour % p.d;
  const std::uint64_t shade = colour / p.d;
  if (pigment >= 3)
    detail::fail(ErrorKind::invalid_argument, "image export supports at most 3 pigments");
  const auto level = static_cast<std::uint8_t>(255 - shade * (128 / p.b));
  Rgb out;
  (pigment == 0 ? out.r : pigment == 1 ? out.g : out.b) = level;
  return out;
}

/// Binary PPM (P6, maxval 255), one pixel per cell; image row = x_0.
inline void export_image(const GridColouring& G, std::ostream& out) {
  const auto& p = G.params();
  if (p.d != 2)
    detail::fail(ErrorKind::invalid_argument,
                 "image export needs a 2-dimensional grid, got d = " + std::to_string(p.d));
  out << "P6\n" << p.n << ' ' << p.n << "\n255\n";
  std::vector<char> pixels;
  pixels.reserve(G.cells().size() * 3);
  for (auto c : G.cells()) {
    const Rgb px = palette_colour(p, c);
    pixels.push_back(static_cast<char>(px.r));
    pixels.push_back(static_cast<char>(px.g));
    pixels.push_back(static_cast<char>(px.b));
  }
  out.write(pixels.data(), static_cast<std::streamsize>(pixels.size()));
}

inline void export_image(const GridColouring& G, const std::filesystem::path& path) {
  if (G.params().d != 2)
    detail::fail(ErrorKind::invalid_argument,
                 "image export needs a 2-dimensional grid, got d = " +
                     std::to_string(G.params().d));
  std::ofstream out(path, std::ios::binary);
  if (!out) detail::fail(ErrorKind::format, "cannot open " + path.string());
  export_image(G, out);
}

}  // namespace mpc
