// Copyright 2026 The lrfanout Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "expect_error.hpp"
#include "lrfanout/lattice.hpp"

namespace lrf = lrfanout;

TEST(Lattice, ChainOfFour) {
  const auto l = lrf::build_lattice(1, {4});
  ASSERT_EQ(l.size(), 4u);
  for (lrf::SiteIndex s = 0; s < 4; ++s) EXPECT_EQ(l.coordinate(s)[0], static_cast<std::int64_t>(s));
  EXPECT_DOUBLE_EQ(l.diameter(), 3.0);
}

TEST(Lattice, SquareAndCube) {
  const auto sq = lrf::build_lattice(2, {2, 2});
  EXPECT_EQ(sq.size(), 4u);
  double widest = 0.0;
  for (lrf::SiteIndex i = 0; i < 4; ++i) {
    for (lrf::SiteIndex j = 0; j < 4; ++j) widest = std::max(widest, sq.distance(i, j));
  }
  EXPECT_DOUBLE_EQ(widest, std::sqrt(2.0));

  const auto cube = lrf::build_lattice(3, {2, 2, 2});
  EXPECT_EQ(cube.size(), 8u);
  EXPECT_DOUBLE_EQ(cube.diameter(), std::sqrt(3.0));
}

TEST(Lattice, RowMajorOrder) {
  const auto l = lrf::build_lattice(2, {3, 4});
  EXPECT_EQ(l.index_of({1, 2, 0}), 6u);
  const auto c = l.coordinate(7);
  EXPECT_EQ(c[0], 1);
  EXPECT_EQ(c[1], 3);
  for (lrf::SiteIndex s = 0; s < l.size(); ++s) EXPECT_EQ(l.index_of(l.coordinate(s)), s);
}

TEST(Lattice, InvalidGeometry) {
  EXPECT_LRF_ERROR(lrf::build_lattice(0, {}), lrf::ErrorCode::kInvalidGeometry);
  EXPECT_LRF_ERROR(lrf::build_lattice(4, {1, 1, 1, 1}), lrf::ErrorCode::kInvalidGeometry);
  EXPECT_LRF_ERROR(lrf::build_lattice(2, {3}), lrf::ErrorCode::kInvalidGeometry);
  EXPECT_LRF_ERROR(lrf::build_lattice(1, {0}), lrf::ErrorCode::kInvalidGeometry);
  EXPECT_LRF_ERROR(lrf::build_lattice(1, {-2}), lrf::ErrorCode::kInvalidGeometry);
  EXPECT_LRF_ERROR(lrf::build_lattice(2, {1 << 13, 1 << 13}), lrf::ErrorCode::kCapacity);
}

TEST(Distance, Examples) {
  const auto chain = lrf::build_lattice(1, {4});
  EXPECT_DOUBLE_EQ(lrf::distance(chain, 0, 3), 3.0);
  EXPECT_DOUBLE_EQ(lrf::distance(chain, 2, 2), 0.0);
  const auto sq = lrf::build_lattice(2, {2, 2});
  EXPECT_DOUBLE_EQ(lrf::distance(sq, sq.index_of({0, 0, 0}), sq.index_of({1, 1, 0})), std::sqrt(2.0));
  EXPECT_LRF_ERROR(lrf::distance(chain, 0, 4), lrf::ErrorCode::kIndex);
}

TEST(Distance, MetricAxiomsExhaustive) {
  const std::vector<lrf::LatticeLayout> layouts = {
      lrf::build_lattice(1, {64}), lrf::build_lattice(2, {8, 8}), lrf::build_lattice(2, {4, 16}),
      lrf::build_lattice(3, {4, 4, 4}), lrf::build_lattice(3, {2, 4, 8})};
  for (const auto& l : layouts) {
    const auto n = l.size();
    for (lrf::SiteIndex i = 0; i < n; ++i) {
      for (lrf::SiteIndex j = 0; j < n; ++j) {
        const double dij = l.distance(i, j);
        ASSERT_EQ(dij, l.distance(j, i));
        for (lrf::SiteIndex k = 0; k < n; ++k) {
          ASSERT_LE(l.distance(i, k), dij + l.distance(j, k) + 1e-12) << l.describe();
        }
      }
    }
  }
}

TEST(Assignment, CanonicalChain) {
  const auto a = lrf::assign_qubits(lrf::build_lattice(1, {4}), 4, lrf::Placement::kCanonical);
  EXPECT_EQ(a.data_sites(), (std::vector<lrf::SiteIndex>{0, 1, 2, 3}));
  EXPECT_FALSE(a.has_ancillae());
}

TEST(Assignment, InterleavedChain) {
  const auto a = lrf::assign_qubits(lrf::build_lattice(1, {4}), 4, lrf::Placement::kInterleaved);
  // Chain order q1, q4, q2, q3: logical qubit at each position.
  std::vector<std::size_t> along_chain(4);
  for (std::size_t k = 0; k < 4; ++k) along_chain[a.data_site(k)] = k + 1;
  EXPECT_EQ(along_chain, (std::vector<std::size_t>{1, 4, 2, 3}));
}

TEST(Assignment, FanoutPairsAdjacent) {
  const auto a = lrf::assign_qubits(lrf::build_lattice(1, {8}), 4, lrf::Placement::kCanonical,
                                    lrf::Register::kWithAncillae);
  EXPECT_EQ(a.data_sites(), (std::vector<lrf::SiteIndex>{0, 2, 4, 6}));
  EXPECT_EQ(a.ancilla_sites(), (std::vector<lrf::SiteIndex>{1, 3, 5, 7}));
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_DOUBLE_EQ(a.layout().distance(a.data_site(k), a.ancilla_site(k)), 1.0);
    EXPECT_EQ(a.role(a.ancilla_site(k)).kind, lrf::SiteRole::Kind::kAncilla);
    EXPECT_EQ(a.role(a.ancilla_site(k)).index, k);
  }
}

TEST(Assignment, FanoutPairDistanceIsOneInEveryDimension) {
  for (int d = 1; d <= 3; ++d) {
    for (std::size_t n : {2u, 5u, 27u, 64u}) {
      const auto a = lrf::assign_qubits(lrf::fanout_layout(d, n), n, lrf::Placement::kCanonical,
                                        lrf::Register::kWithAncillae);
      double lo = 1e9, hi = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const double r = a.layout().distance(a.data_site(k), a.ancilla_site(k));
        lo = std::min(lo, r);
        hi = std::max(hi, r);
      }
      EXPECT_EQ(lo, 1.0);
      EXPECT_EQ(hi, 1.0);
    }
  }
}

TEST(Assignment, InterleavedIsBijective) {
  for (std::size_t n = 1; n <= 1024; ++n) {
    const auto a = lrf::assign_qubits(lrf::build_lattice(1, {static_cast<std::int64_t>(n)}), n,
                                      lrf::Placement::kInterleaved);
    std::set<lrf::SiteIndex> seen(a.data_sites().begin(), a.data_sites().end());
    ASSERT_EQ(seen.size(), n);
    ASSERT_EQ(*seen.rbegin(), n - 1);
    for (std::size_t k = 0; k < n; ++k) ASSERT_EQ(a.role(a.data_site(k)).index, k);
  }
}

TEST(Assignment, Errors) {
  const auto chain = lrf::build_lattice(1, {4});
  EXPECT_LRF_ERROR(lrf::assign_qubits(chain, 5, lrf::Placement::kCanonical), lrf::ErrorCode::kCapacity);
  EXPECT_LRF_ERROR(lrf::assign_qubits(chain, 3, lrf::Placement::kCanonical, lrf::Register::kWithAncillae),
                   lrf::ErrorCode::kCapacity);
  EXPECT_LRF_ERROR(lrf::assign_qubits(lrf::build_lattice(2, {2, 2}), 4, lrf::Placement::kInterleaved),
                   lrf::ErrorCode::kUnsupportedStrategy);
  EXPECT_LRF_ERROR(lrf::parse_placement("zigzag"), lrf::ErrorCode::kParameter);
}

TEST(Layouts, NearCubic) {
  EXPECT_EQ(lrf::integer_root_ceil(1000, 3), 10);
  EXPECT_EQ(lrf::integer_root_ceil(1001, 3), 11);
  EXPECT_EQ(lrf::fanout_layout(2, 10).extents(), (std::vector<std::int64_t>{8, 4}));
  EXPECT_EQ(lrf::data_layout(1, 7).describe(), "1D[7]");
}
