// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// gating criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "reference_grids.hpp"
#include "mpc/bench.hpp"
#include "mpc/mpc.hpp"
#include "oracles.hpp"

namespace {

using namespace mpc;
using Seq = std::vector<std::uint64_t>;

struct Outcome {
  bool passed;
  std::string detail;
};

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since)
      .count();
}

Outcome golden_profiles() {
  const auto start = std::chrono::steady_clock::now();
  const bool ok = profile_zero(1, 3).entries == Seq{0, 0, 0, 2, 2, 1} &&
                  profile_zero(2, 2).entries == Seq{0, 0, 2, 2, 4, 3, 2, 1} &&
                  profile_T(1, 2, 2).entries ==
                      Seq{0, 0, 0, 0, 0, 2, 0, 2, 2, 2, 2, 1, 2, 1, 0, 1};
  const double ms = elapsed_ms(start);
  return {ok && ms < 1.0, "exact match, " + std::to_string(ms) + " ms"};
}

Outcome golden_duals() {
  const auto start = std::chrono::steady_clock::now();
  const bool ok = dual(profile_zero(2, 2), 2) == Seq{0, 2, 4, 6, 7, 5, 3, 1} &&
                  dual(profile_T(1, 2, 2), 2) ==
                      Seq{0, 0, 0, 0, 2, 2, 2, 4, 4, 4, 3, 3, 3, 1, 1, 1};
  const double ms = elapsed_ms(start);
  return {ok && ms < 1.0, "exact match, " + std::to_string(ms) + " ms"};
}

Outcome golden_matrix() {
  const auto M = build_matrix(1, 2, 2);
  const std::vector<Seq> want{{0, 0, 2, 1, 0, 2, 1, 0, 2, 1, 0, 2, 1, 0, 2, 1},
                              {0, 0, 0, 0, 0, 2, 0, 2, 2, 2, 2, 1, 2, 1, 0, 1}};
  bool ok = M.rows() == 2 && M.width() == 16;
  for (std::size_t j = 0; ok && j < 2; ++j)
    ok = Seq(M.row(j).begin(), M.row(j).end()) == want[j];
  return {ok, "2x16 matrix"};
}

Outcome golden_grid() {
  const auto p = derive_params(2, 1, 1);
  const std::vector<std::pair<ConstructionStage, const mpc::testing::StageRows*>> stages{
      {{0, true}, &mpc::testing::kStageA},  {{1, false}, &mpc::testing::kStageB},
      {{1, true}, &mpc::testing::kStageC},  {{2, false}, &mpc::testing::kStageD},
      {{2, true}, &mpc::testing::kStageE}};
  int matched = 0;
  for (const auto& [stage, rows] : stages) {
    const auto G = build_grid(p, stage);
    bool same = true;
    for (std::uint64_t r = 0; r < 8; ++r)
      for (std::uint64_t c = 0; c < 8; ++c)
        same = same && G.at({r, c}) == static_cast<std::uint8_t>((*rows)[r][c] - '0');
    matched += same;
  }
  return {matched == 5, std::to_string(matched) + "/5 stages match cell for cell"};
}

Outcome walkthrough() {
  const auto G = build_grid(derive_params(2, 1, 1));
  const bool a = localize(ColourMultiset{{5, 3, 8}}, G.params()) == Position{5, 6};
  const bool b = colour_multiset(G, {3, 1}) == ColourMultiset{{6, 2, 8}};
  const bool c = colour_multiset(G, {6, 5}) == ColourMultiset{{3, 5, 8}};
  return {a && b && c, std::string("localize ") + (a ? "ok" : "wrong") + ", multisets " +
                           (b && c ? "ok" : "wrong")};
}

Outcome side256_instance() {
  const auto p = derive_params(2, 2, 1);
  const bool params_ok = p.n == 256 && p.m == 8 && p.k == 5;
  const auto start = std::chrono::steady_clock::now();
  const auto r = verify_grid_uniqueness(build_grid(p), kDefaultVerifyCap, 1);
  const double s = elapsed_ms(start) / 1000.0;
  return {params_ok && r.passed && r.cells_examined == 65536 && s < 10.0,
          "n=" + std::to_string(p.n) + " m=" + std::to_string(p.m) + " k=" +
              std::to_string(p.k) + ", " + std::to_string(r.cells_examined) +
              " windows distinct, " + std::to_string(s) + " s"};
}

const std::vector<std::tuple<int, int, int>> kMatrix{
    {2, 1, 1}, {2, 1, 2}, {2, 1, 3}, {2, 2, 1}, {3, 1, 1}};

Outcome round_trips() {
  std::uint64_t failures = 0, checked = 0;
  for (auto [d, b, t] : kMatrix) {
    const auto p = derive_params(d, b, t);
    const auto M = build_matrix(p);
    const auto sums = all_window_sums(M);
    for (std::uint64_t i = 0; i < p.n; ++i) {
      ++checked;
      const auto got = decode_vector(std::span<const std::uint64_t>(sums).subspan(i * p.b, p.b),
                                     p.s_p, p.m, p.T);
      failures += !(got && *got == i);
    }
    const auto G = build_grid(p);
    const std::uint64_t total = p.cell_count();
    std::vector<std::uint64_t> x(p.d);
    auto check = [&](std::span<const std::uint64_t> counts, std::uint64_t idx) {
      ++checked;
      failures += !(localize_into(counts, p, x) &&
                    G.index_of(std::span<const std::uint64_t>(x)) == idx);
    };
    if (total <= 1'000'000) {
      const auto table = all_window_counts(G, 0);
      for (std::uint64_t idx = 0; idx < total; ++idx)
        check(std::span<const std::uint64_t>(table).subspan(idx * p.k, p.k), idx);
    } else {
      std::mt19937_64 rng(11);
      std::uniform_int_distribution<std::uint64_t> pick(0, total - 1);
      for (int s = 0; s < 10000; ++s) {
        const std::uint64_t idx = pick(rng);
        const auto pos = G.position_of(idx);
        check(colour_multiset(G, std::span<const std::uint64_t>(pos)).counts, idx);
      }
    }
  }
  return {failures == 0, std::to_string(checked) + " round trips, " +
                             std::to_string(failures) + " failures"};
}

Outcome decoder_oracles() {
  std::uint64_t failures = 0, checked = 0;
  for (std::uint64_t s = 1; s <= 6; ++s)
    for (std::uint64_t m = 2; m <= 8; ++m) {
      const auto dz = mpc::testing::naive_dual(profile_zero(s, m).entries, m);
      for (std::uint64_t v = 0; v < 2 * m * s; ++v, ++checked)
        failures += decode_zero(v, s, m) != mpc::testing::first_index(dz, v);
      for (std::uint64_t T = 1; T <= 4; ++T) {
        const auto dt = mpc::testing::naive_dual(profile_T(s, m, T).entries, m);
        for (std::uint64_t v = 0; v <= 2 * m * s; ++v, ++checked) {
          failures += decode_T(v, s, m, T) != mpc::testing::first_index(dt, v);
          const bool short_run = mpc::testing::multiplicity(dt, v) == m * T - 1;
          failures += block_is_truncated(v, s) != short_run;
        }
      }
    }
  return {failures == 0, std::to_string(checked) + " values, " + std::to_string(failures) +
                             " failures"};
}

Outcome counting_bound() {
  bool ok = true;
  std::string margins;
  for (auto [d, b, t] : kMatrix) {
    const auto bc = bound_check(derive_params(d, b, t));
    ok = ok && bc.holds;
    margins += " (" + std::to_string(d) + "," + std::to_string(b) + "," + std::to_string(t) +
               "):" + bc.margin().str();
  }
  return {ok, "margins" + margins};
}

Outcome constant_time_decode() {
  std::vector<double> medians;
  std::uint64_t checksum = 0;
  for (std::uint64_t t : {8u, 64u}) {
    const auto p = derive_params(2, 1, t);
    const auto samples = sample_multisets(p, 1'000'000, 5);
    decode_latencies_ns(p, samples, 1, checksum);  // warm-up
    medians.push_back(median(decode_latencies_ns(p, samples, 7, checksum)));
  }
  const double ratio = std::max(medians[0], medians[1]) / std::min(medians[0], medians[1]);
  std::ostringstream os;
  os << "t=8: " << medians[0] << " ns, t=64: " << medians[1] << " ns, ratio " << ratio
     << " (checksum " << checksum << ")";
  return {ratio < 2.0, os.str()};
}

std::string asymptotics() {
  std::ostringstream os;
  for (std::uint64_t t : {1u, 2u, 4u, 8u, 16u}) {
    const auto p = derive_params(2, 1, t);
    os << " t=" << t << ":" << size_ratio(p);
  }
  os << "; C_k^(1/d) for k=3,d=2: " << stated_size_constant(3, 2);
  return "n/m^2" + os.str();
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 golden profiles", golden_profiles},
      {"2 golden duals", golden_duals},
      {"3 golden matrix", golden_matrix},
      {"4 golden grid and stages", golden_grid},
      {"5 localization walkthrough", walkthrough},
      {"6 256x256 instance uniqueness", side256_instance},
      {"7 exhaustive round trips", round_trips},
      {"8 decoder/oracle equivalence", decoder_oracles},
      {"9 counting bound", counting_bound},
      {"10 constant-time decoding", constant_time_decode},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o{false, ""};
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.passed;
    std::printf("%s [%s] %s\n", o.passed ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
  }
  std::printf("INFO [11 asymptotics report] %s\n", asymptotics().c_str());
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
