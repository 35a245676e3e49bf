// Copyright 2026 The mcar_avg Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MCAR_AVG_TESTS_FIXTURES_HPP
#define MCAR_AVG_TESTS_FIXTURES_HPP

#include <algorithm>
#include <array>
#include <limits>
#include <random>

#include "mcar_avg/data.hpp"

namespace fixtures {

using mcar::Index;

// Block layout with four row blocks and five column blocks:
//
//   X11 X12 X13 X14 X15
//   X21  .   .  X24 X25
//   X31 X32 X33  .  X35
//   X41 X42  .   .   .
//
// Row blocks hold 7, 3, 3 and 3 rows; each column block is one column
// unless `wide_second_block` is set, in which case block 2 spans two
// columns.
struct BlockExample {
  std::array<Index, 4> block_rows = {7, 3, 3, 3};
  static constexpr bool kObserved[4][5] = {
      {true, true, true, true, true},
      {true, false, false, true, true},
      {true, true, true, false, true},
      {true, true, false, false, false},
  };
};

inline Index row_block_of(Index i) {
  const BlockExample ex;
  Index start = 0;
  for (Index b = 0; b < 4; ++b) {
    if (i < start + ex.block_rows[static_cast<std::size_t>(b)]) return b;
    start += ex.block_rows[static_cast<std::size_t>(b)];
  }
  return 3;
}

inline mcar::ObservedDataset block_example(bool wide_second_block = false, std::uint64_t seed = 7) {
  const BlockExample ex;
  const Index n = 16;
  const Index k = wide_second_block ? 6 : 5;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::bernoulli_distribution coin(0.5);
  mcar::Matrix x(n, k);
  mcar::Mask mask(n, k);
  mcar::Vector y(n);
  for (Index i = 0; i < n; ++i) {
    y(i) = coin(rng) ? 1.0 : 0.0;
    for (Index j = 0; j < k; ++j) {
      const Index col_block = wide_second_block ? (j <= 2 ? std::min<Index>(j, 1) : j - 1) : j;
      mask(i, j) = BlockExample::kObserved[row_block_of(i)][col_block];
      x(i, j) = mask(i, j) ? nd(rng) : std::numeric_limits<double>::quiet_NaN();
    }
  }
  return mcar::ObservedDataset(std::move(y), std::move(x), std::move(mask));
}

}  // namespace fixtures

#endif  // MCAR_AVG_TESTS_FIXTURES_HPP
