#pragma once

// Command logic for the `mpc` tool, kept in a header so tests can drive it
// without spawning processes.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mpc/bench.hpp"
#include "mpc/mpc.hpp"

namespace mpc::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kVerificationFailed = 2,
  kResourceCap = 3,
};

struct CliConfig {
  std::string subcommand;
  std::uint64_t d = 2, b = 1, t = 1;
  std::string in, out;
  std::string format;
  std::uint64_t cap = kDefaultVerifyCap;
  unsigned workers = 1;
  bool verify_on_decode = true;
  bool oracle_check = false;
  std::string at;
  std::string multiset;
  std::string multiset_file;
  std::size_t reps = 5;
  std::size_t samples = 1'000'000;
  std::uint64_t seed = 1;
  std::uint64_t s = 1, m = 2, T = 0;
  std::string what;
};

namespace detail {

inline std::vector<std::int64_t> parse_position(const std::string& text, std::uint64_t d) {
  std::vector<std::int64_t> x;
  std::string s = text;
  for (char& c : s)
    if (c == '[' || c == ']' || c == '(' || c == ')') c = ' ';
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      x.push_back(std::stoll(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos)
        throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      mpc::detail::fail(ErrorKind::invalid_argument, "malformed position '" + text + "'");
    }
  }
  if (x.size() != d)
    mpc::detail::fail(ErrorKind::invalid_argument,
                      "position needs " + std::to_string(d) + " coordinates");
  return x;
}

inline nlohmann::json params_json(const CodeParams& p) {
  const auto bc = bound_check(p);
  return {{"d", p.d},          {"b", p.b},
          {"t", p.t},          {"m", p.m},
          {"k", p.k},          {"s_max", p.s_max},
          {"s_p", p.s_p},      {"n", p.n},
          {"cells", p.cell_count()},
          {"bound_holds", bc.holds},
          {"bound_windows", bc.windows.str()},
          {"bound_multisets", bc.multisets.str()},
          {"bound_margin", bc.margin().str()}};
}

template <typename Seq>
std::string csv_line(const Seq& values) {
  std::string out;
  bool first = true;
  for (auto v : values) {
    if (!first) out += ',';
    out += std::to_string(v);
    first = false;
  }
  return out;
}

inline std::string position_json(std::span<const std::uint64_t> x) {
  return nlohmann::json(std::vector<std::uint64_t>(x.begin(), x.end())).dump();
}

}  // namespace detail

/// Grid named by --in, otherwise built from -d/-b/-t.
inline GridColouring load_or_build(const CliConfig& c) {
  if (!c.in.empty()) return read_grid(std::filesystem::path(c.in));
  return build_grid(derive_params(c.d, c.b, c.t));
}

inline int cmd_build(const CliConfig& c, std::ostream& out) {
  const auto p = derive_params(c.d, c.b, c.t);
  const auto G = build_grid(p);
  const std::string fmt = c.format.empty() ? "bin" : c.format;
  if (!c.out.empty()) {
    if (fmt == "ppm")
      export_image(G, std::filesystem::path(c.out));
    else if (fmt == "bin")
      write_grid(G, std::filesystem::path(c.out));
    else
      mpc::detail::fail(ErrorKind::invalid_argument, "build writes --format bin or ppm");
  }
  out << detail::params_json(p).dump(2) << '\n';
  return kOk;
}

inline int cmd_sample(const CliConfig& c, std::ostream& out) {
  const auto G = load_or_build(c);
  const auto x = detail::parse_position(c.at, G.dimension());
  const auto ms = colour_multiset(G, std::span<const std::int64_t>(x));
  if (c.out.empty())
    out << format_multiset(ms) << '\n';
  else
    write_multiset(ms, std::filesystem::path(c.out));
  return kOk;
}

/// Confirms x against the packing: pigment-i counts must equal the window
/// sum of the packing at x_i. No grid needed.
inline bool confirm_by_packing(const ColourMultiset& ms, const CodeParams& p,
                               std::span<const std::uint64_t> x) {
  const auto M = build_matrix(p);
  for (std::uint64_t i = 0; i < p.d; ++i) {
    const auto sums = window_sum(M, static_cast<std::int64_t>(x[i]));
    for (std::uint64_t l = 0; l < p.b; ++l)
      if (sums[l] != ms.counts[l * p.d + i]) return false;
  }
  return true;
}

inline int cmd_locate(const CliConfig& c, std::ostream& out, std::ostream& err) {
  std::optional<GridColouring> grid;
  if (!c.in.empty()) grid = read_grid(std::filesystem::path(c.in));
  const CodeParams p = grid ? grid->params() : derive_params(c.d, c.b, c.t);
  if (c.multiset.empty() == c.multiset_file.empty())
    mpc::detail::fail(ErrorKind::invalid_argument,
                      "give exactly one of --multiset or --multiset-file");
  const auto ms = c.multiset.empty()
                      ? read_multiset(std::filesystem::path(c.multiset_file), p.k)
                      : parse_multiset(c.multiset, p.k);
  const auto x = localize(ms, p);
  if (c.verify_on_decode) {
    const bool ok = grid ? colour_multiset(*grid, std::span<const std::uint64_t>(x)) == ms
                         : confirm_by_packing(ms, p, x);
    if (!ok) mpc::detail::fail(ErrorKind::no_such_window, "no such window");
  }
  if (c.oracle_check) {
    const auto G = grid ? *grid : build_grid(p);
    const auto o = oracle_localize(G, ms, c.cap);
    if (o != x) {
      err << "oracle disagrees: fast path " << detail::position_json(x) << ", oracle "
          << (o ? detail::position_json(*o) : std::string("none")) << '\n';
      return kVerificationFailed;
    }
  }
  out << detail::position_json(x) << '\n';
  return kOk;
}

inline int cmd_verify(const CliConfig& c, std::ostream& out) {
  const auto G = load_or_build(c);
  const auto reports = verify_all(G, c.cap, c.workers);
  bool ok = true;
  for (const auto& r : reports) ok = ok && r.passed;
  const std::string fmt = c.format.empty() ? "json" : c.format;
  std::string text;
  if (fmt == "json") {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : reports) j.push_back(to_json(r));
    text = j.dump(2) + "\n";
  } else if (fmt == "csv") {
    text = "property,passed,cells_examined,wall_seconds,first,second\n";
    for (const auto& r : reports) {
      text += r.property + (r.passed ? ",true," : ",false,") +
              std::to_string(r.cells_examined) + "," + std::to_string(r.wall_seconds);
      if (r.counterexample)
        text += ",\"" + detail::csv_line(r.counterexample->first) + "\",\"" +
                detail::csv_line(r.counterexample->second) + "\"";
      else
        text += ",,";
      text += '\n';
    }
  } else {
    mpc::detail::fail(ErrorKind::invalid_argument, "verify writes --format json or csv");
  }
  if (c.out.empty()) {
    out << text;
  } else {
    std::ofstream f(c.out);
    if (!f) mpc::detail::fail(ErrorKind::format, "cannot open " + c.out);
    f << text;
  }
  return ok ? kOk : kVerificationFailed;
}

inline int cmd_export(const CliConfig& c) {
  if (c.out.empty()) mpc::detail::fail(ErrorKind::invalid_argument, "export needs --out");
  const auto G = load_or_build(c);
  const std::string fmt = c.format.empty() ? "ppm" : c.format;
  if (fmt == "ppm")
    export_image(G, std::filesystem::path(c.out));
  else if (fmt == "bin")
    write_grid(G, std::filesystem::path(c.out));
  else
    mpc::detail::fail(ErrorKind::invalid_argument, "export writes --format ppm or bin");
  return kOk;
}

inline int cmd_bench(const CliConfig& c, std::ostream& out) {
  mpc::detail::require(c.reps >= 1, "reps must be >= 1");
  mpc::detail::require(c.samples >= 1, "samples must be >= 1");
  const auto p = derive_params(c.d, c.b, c.t);
  const auto build = build_seconds(p, c.reps);
  const auto samples = sample_multisets(p, c.samples, c.seed);
  std::uint64_t checksum = 0;
  const auto decode = decode_latencies_ns(p, samples, c.reps, checksum);
  const double build_median = median(build);
  nlohmann::json j{{"d", p.d},
                   {"b", p.b},
                   {"t", p.t},
                   {"n", p.n},
                   {"cells", p.cell_count()},
                   {"reps", c.reps},
                   {"samples", c.samples},
                   {"build_seconds_median", build_median},
                   {"build_cells_per_second",
                    build_median > 0 ? static_cast<double>(p.cell_count()) / build_median : 0.0},
                   {"decode_ns_median", median(decode)},
                   {"checksum", checksum}};
  out << j.dump(2) << '\n';
  return kOk;
}

inline int cmd_profile(const CliConfig& c, std::ostream& out) {
  mpc::detail::require(c.s >= 1 && c.m >= 1, "profile needs s >= 1 and m >= 1");
  const auto P = c.T == 0 ? profile_zero(c.s, c.m) : profile_T(c.s, c.m, c.T);
  const std::string what = c.what.empty() ? "entries" : c.what;
  if (what == "entries")
    out << detail::csv_line(P.entries) << '\n';
  else if (what == "dual")
    out << detail::csv_line(dual(P, c.m)) << '\n';
  else
    mpc::detail::fail(ErrorKind::invalid_argument, "profile --what is entries or dual");
  return kOk;
}

inline int cmd_packing(const CliConfig& c, std::ostream& out) {
  const auto p = derive_params(c.d, c.b, c.t);
  const auto M = build_matrix(p);
  const std::string what = c.what.empty() ? "rows" : c.what;
  if (what == "rows") {
    for (std::size_t j = 0; j < M.rows(); ++j) out << detail::csv_line(M.row(j)) << '\n';
  } else if (what == "duals") {
    for (std::size_t j = 0; j < M.rows(); ++j)
      out << detail::csv_line(dual(M.row(j), M.window())) << '\n';
  } else if (what == "sums") {
    const auto sums = all_window_sums(M);
    out << "index";
    for (std::size_t j = 0; j < M.rows(); ++j) out << ",z" << j;
    out << '\n';
    for (std::size_t i = 0; i < M.width(); ++i) {
      out << i;
      for (std::size_t j = 0; j < M.rows(); ++j) out << ',' << sums[i * M.rows() + j];
      out << '\n';
    }
  } else {
    mpc::detail::fail(ErrorKind::invalid_argument, "packing --what is rows, duals or sums");
  }
  return kOk;
}

inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::no_such_window: return kVerificationFailed;
    case ErrorKind::too_large: return kResourceCap;
    default: return kUsage;
  }
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CliConfig c;
  CLI::App app{"Multiset positioning codes: build, decode and verify grid colourings"};
  app.require_subcommand(1);

  auto params = [&](CLI::App* sub) {
    sub->add_option("-d", c.d, "grid dimension (>= 2)");
    sub->add_option("-b", c.b, "shades per pigment (>= 1)");
    sub->add_option("-t", c.t, "size parameter (>= 1)");
  };
  auto grid_in = [&](CLI::App* sub) {
    params(sub);
    sub->add_option("--in", c.in, "grid file; overrides -d/-b/-t");
  };

  auto* build = app.add_subcommand("build", "build a grid, print its parameters");
  params(build);
  build->add_option("--out", c.out, "output file");
  build->add_option("--format", c.format, "bin or ppm")->check(CLI::IsMember({"bin", "ppm"}));

  auto* sample = app.add_subcommand("sample", "print the multiset of one window");
  grid_in(sample);
  sample->add_option("--at", c.at, "window corner, e.g. 3,1")->required();
  sample->add_option("--out", c.out, "multiset file");

  auto* locate = app.add_subcommand("locate", "decode a multiset to its window corner");
  grid_in(locate);
  locate->add_option("--multiset", c.multiset, "counts: 5,3,8 or 0:5,1:3,2:8");
  locate->add_option("--multiset-file", c.multiset_file, "file holding the counts");
  locate->add_flag("--verify-on-decode,!--no-verify-on-decode", c.verify_on_decode,
                   "confirm the decoded corner (default on)");
  locate->add_flag("--oracle-check", c.oracle_check, "cross-check with a linear scan");
  locate->add_option("--cap", c.cap, "window cap for the oracle");

  auto* verify = app.add_subcommand("verify", "run every property check");
  grid_in(verify);
  verify->add_option("--cap", c.cap, "maximum windows examined");
  verify->add_option("--workers", c.workers, "worker threads (0 = all cores)");
  verify->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  verify->add_option("--out", c.out, "report file");

  auto* exp = app.add_subcommand("export", "write a grid as an image or grid file");
  grid_in(exp);
  exp->add_option("--out", c.out, "output file")->required();
  exp->add_option("--format", c.format, "ppm or bin")->check(CLI::IsMember({"ppm", "bin"}));

  auto* bench = app.add_subcommand("bench", "time construction and decoding");
  params(bench);
  bench->add_option("--reps", c.reps, "repetitions");
  bench->add_option("--samples", c.samples, "decoded multisets per repetition");
  bench->add_option("--seed", c.seed, "sampling seed");

  auto* profile = app.add_subcommand("profile", "print a profile sequence as CSV");
  profile->add_option("--s", c.s, "profile parameter s");
  profile->add_option("--m", c.m, "window length m");
  profile->add_option("--T", c.T, "repeat count (0 = base profile)");
  profile->add_option("--what", c.what, "entries or dual");
  profile->add_option("--format", c.format, "csv")->check(CLI::IsMember({"csv"}));

  auto* packing = app.add_subcommand("packing", "print the packing matrix as CSV");
  params(packing);
  packing->add_option("--what", c.what, "rows, duals or sums");
  packing->add_option("--format", c.format, "csv")->check(CLI::IsMember({"csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  c.subcommand = app.get_subcommands().front()->get_name();

  try {
    if (*build) return cmd_build(c, out);
    if (*sample) return cmd_sample(c, out);
    if (*locate) return cmd_locate(c, out, err);
    if (*verify) return cmd_verify(c, out);
    if (*exp) return cmd_export(c);
    if (*bench) return cmd_bench(c, out);
    if (*profile) return cmd_profile(c, out);
    if (*packing) return cmd_packing(c, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace mpc::cli
