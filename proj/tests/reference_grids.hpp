#pragma once

#include <array>
#include <string_view>

// The 8x8 example grid (d = 2, b = 1, t = 1) at each construction stage,
// one string per row, x_0 = row index.
namespace mpc::testing {

using StageRows = std::array<std::string_view, 8>;

// Initial colouring.
inline constexpr StageRows kStageA = {"01010101", "10101010", "01010101", "10101010",
                                   "01010101", "10101010", "01010101", "10101010"};
// Red erased in the base columns only.
inline constexpr StageRows kStageB = {"21210101", "12121010", "21210101", "12121010",
                                   "01010101", "10101010", "01010101", "10121010"};
// Red erasure replicated.
inline constexpr StageRows kStageC = {"21212121", "12121212", "21212121", "12121212",
                                   "01010101", "10101010", "01010101", "10121012"};
// Green erased in the base rows only.
inline constexpr StageRows kStageD = {"22222121", "22221212", "22222122", "22221212",
                                   "01010101", "10101010", "01010101", "10121012"};
// Finished grid.
inline constexpr StageRows kStageE = {"22222121", "22221212", "22222122", "22221212",
                                   "02020101", "20201010", "02020102", "20221012"};

}  // namespace mpc::testing
