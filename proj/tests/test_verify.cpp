#include <gtest/gtest.h>

#include "mpc/verify.hpp"
#include "oracles.hpp"

namespace mpc {
namespace {

TEST(VerifyPacking, Examples) {
  const auto good = verify_packing_injectivity(build_matrix(1, 2, 2));
  EXPECT_TRUE(good.passed);
  EXPECT_EQ(good.cells_examined, 32u);

  EXPECT_TRUE(verify_packing_injectivity(PackingMatrix({{0, 0, 0, 2, 2, 2, 1}}, 3)).passed);

  const auto bad = verify_packing_injectivity(PackingMatrix({{0, 0}}, 1));
  EXPECT_FALSE(bad.passed);
  ASSERT_TRUE(bad.counterexample);
  EXPECT_EQ(bad.counterexample->first, (Position{0}));
  EXPECT_EQ(bad.counterexample->second, (Position{1}));
}

TEST(VerifyPacking, SmallestPairAndCap) {
  // Sums (m = 1) are the entries: 5 5 1 1 at indices 2,3 and 0,1... smallest is (0, 1).
  const auto r = verify_packing_injectivity(PackingMatrix({{1, 5, 5, 1, 5}}, 1));
  ASSERT_TRUE(r.counterexample);
  EXPECT_EQ(r.counterexample->first, (Position{0}));
  EXPECT_EQ(r.counterexample->second, (Position{3}));
  EXPECT_EQ(r.counterexample->first_values, (std::vector<std::uint64_t>{1}));
  EXPECT_THROW(verify_packing_injectivity(build_matrix(1, 2, 2), 10), Error);
}

TEST(VerifyGrid, ExampleGridPassesEverything) {
  const auto G = build_grid(derive_params(2, 1, 1));
  const auto u = verify_grid_uniqueness(G);
  EXPECT_TRUE(u.passed);
  EXPECT_EQ(u.cells_examined, 64u);
  EXPECT_TRUE(verify_quasi_periodicity(G).passed);
  EXPECT_TRUE(verify_consistency(G).passed);
  EXPECT_TRUE(verify_inconsistency(G).passed);
  for (const auto& r : verify_all(G)) EXPECT_TRUE(r.passed) << r.property;
}

TEST(VerifyGrid, ConstantGridFails) {
  const auto p = derive_params(2, 1, 1);
  const GridColouring blank(p, std::vector<std::uint8_t>(64, 2));
  const auto r = verify_grid_uniqueness(blank);
  EXPECT_FALSE(r.passed);
  ASSERT_TRUE(r.counterexample);
  EXPECT_EQ(r.counterexample->first, (Position{0, 0}));
  EXPECT_EQ(r.counterexample->second, (Position{0, 1}));
}

TEST(VerifyGrid, PerturbedCellBreaksQuasiPeriodicity) {
  auto G = build_grid(derive_params(2, 1, 1));
  G.mutable_cells()[0] = 0;
  const auto r = verify_quasi_periodicity(G);
  EXPECT_FALSE(r.passed);
  ASSERT_TRUE(r.counterexample);
  EXPECT_EQ(r.counterexample->first, (Position{0, 0}));
  EXPECT_EQ(r.counterexample->second, (Position{0, 4}));
}

TEST(VerifyGrid, InitialColouringIsQuasiPeriodicButNotInconsistent) {
  const auto G = build_grid(derive_params(2, 1, 1), {0, true});
  EXPECT_TRUE(verify_quasi_periodicity(G).passed);
  EXPECT_FALSE(verify_inconsistency(G).passed);
  EXPECT_FALSE(verify_grid_uniqueness(G).passed);
}

TEST(VerifyGrid, Side256Instance) {
  const auto G = build_grid(derive_params(2, 2, 1));
  const auto r = verify_grid_uniqueness(G);
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.cells_examined, 65536u);
}

TEST(VerifyGrid, WorkerCountDoesNotChangeResults) {
  const auto G = build_grid(derive_params(2, 2, 1));
  EXPECT_EQ(all_window_counts(G, 1), all_window_counts(G, 4));
  const auto blank = GridColouring(G.params(), std::vector<std::uint8_t>(G.cells().size(), 4));
  const auto a = verify_grid_uniqueness(blank, kDefaultVerifyCap, 1);
  const auto b = verify_grid_uniqueness(blank, kDefaultVerifyCap, 3);
  EXPECT_EQ(a.counterexample->first, b.counterexample->first);
  EXPECT_EQ(a.counterexample->second, b.counterexample->second);
}

TEST(VerifyGrid, WindowTableMatchesDirectCounts) {
  const auto G = build_grid(derive_params(3, 1, 1));
  const auto table = all_window_counts(G, 2);
  const auto& p = G.params();
  for (std::uint64_t idx = 0; idx < p.cell_count(); idx += 97) {
    const auto x = G.position_of(idx);
    const auto ms = colour_multiset(G, std::span<const std::uint64_t>(x));
    for (std::uint64_t c = 0; c < p.k; ++c) ASSERT_EQ(table[idx * p.k + c], ms.counts[c]);
  }
}

TEST(OracleLocalize, Examples) {
  const auto G = build_grid(derive_params(2, 1, 1));
  EXPECT_EQ(oracle_localize(G, {{5, 3, 8}}), (Position{5, 6}));
  EXPECT_EQ(oracle_localize(G, {{6, 2, 8}}), (Position{3, 1}));
  EXPECT_EQ(oracle_localize(G, {{16, 0, 0}}), std::nullopt);
}

TEST(OracleLocalize, AgreesWithFastPath) {
  const auto G = build_grid(derive_params(2, 1, 2));
  const auto& p = G.params();
  for (std::uint64_t idx = 0; idx < p.cell_count(); idx += 13) {
    const auto x = G.position_of(idx);
    const auto ms = colour_multiset(G, std::span<const std::uint64_t>(x));
    EXPECT_EQ(oracle_localize(G, ms), localize(ms, p));
  }
}

TEST(Report, Json) {
  const auto r = verify_packing_injectivity(PackingMatrix({{0, 0}}, 1));
  const auto j = to_json(r);
  EXPECT_EQ(j["property"], "packing_injectivity");
  EXPECT_EQ(j["passed"], false);
  EXPECT_EQ(j["counterexample"]["first"], nlohmann::json::array({0}));
  EXPECT_EQ(j["counterexample"]["second"], nlohmann::json::array({1}));
}

}  // namespace
}  // namespace mpc
