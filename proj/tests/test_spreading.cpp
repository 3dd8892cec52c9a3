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
#include <random>

#include "expect_error.hpp"
#include "lrfanout/qft.hpp"
#include "lrfanout/spreading.hpp"
#include "oracles.hpp"

namespace lrf = lrfanout;
using Complex = std::complex<double>;

TEST(PauliString, MatrixMatchesKron) {
  for (const auto& s : oracle::all_strings(3)) {
    EXPECT_LT((lrf::PauliString::parse(s).matrix() - oracle::pauli_string(s)).norm(), 1e-15) << s;
    EXPECT_EQ(lrf::PauliString::parse(s).str(), s);
  }
  EXPECT_LRF_ERROR(lrf::PauliString::parse("XQ"), lrf::ErrorCode::kParse);
}

TEST(Decompose, BasisElement) {
  const auto d = lrf::decompose(oracle::pauli_string("ZI"), 2);
  ASSERT_EQ(d.terms().size(), 1u);
  EXPECT_EQ(d.terms().begin()->first.str(), "ZI");
  EXPECT_NEAR(std::abs(d.terms().begin()->second - Complex(1.0)), 0.0, 1e-15);
}

TEST(Decompose, Cnot) {
  Eigen::MatrixXcd cnot = Eigen::MatrixXcd::Zero(4, 4);
  cnot(0, 0) = cnot(1, 1) = cnot(3, 2) = cnot(2, 3) = 1.0;
  const auto d = lrf::decompose(cnot, 2);
  EXPECT_EQ(d.terms().size(), 4u);
  for (const auto& [s, c] : std::vector<std::pair<std::string, double>>{
           {"II", 0.5}, {"ZI", 0.5}, {"IX", 0.5}, {"ZX", -0.5}}) {
    EXPECT_NEAR(std::abs(d.coefficient(lrf::PauliString::parse(s)) - c), 0.0, 1e-15) << s;
    EXPECT_NEAR(std::abs(oracle::coefficient(cnot, s) - c), 0.0, 1e-15) << s;
  }
}

TEST(Decompose, RoundTripAndParseval) {
  for (int n = 1; n <= 6; ++n) {
    for (int trial = 0; trial < 50 / 6 + 1; ++trial) {
      const Eigen::MatrixXcd m = oracle::random_matrix(n, std::uint64_t(100 * n + trial));
      const Eigen::MatrixXcd herm = (m + m.adjoint()) / 2.0;
      for (const auto& op : {m, herm}) {
        const auto d = lrf::decompose(op, n);
        EXPECT_LT((d.reconstruct() - op).cwiseAbs().maxCoeff(), 1e-10);
        EXPECT_NEAR(d.squared_norm(), lrf::frobenius_weight(op, n), 1e-10);
      }
    }
  }
}

TEST(Decompose, AgreesWithTraceOracle) {
  const Eigen::MatrixXcd m = oracle::random_matrix(3, 77);
  const auto d = lrf::decompose(m, 3);
  for (const auto& s : oracle::all_strings(3)) {
    EXPECT_NEAR(std::abs(d.coefficient(lrf::PauliString::parse(s)) - oracle::coefficient(m, s)), 0.0, 1e-12);
  }
  EXPECT_LRF_ERROR(lrf::decompose(Eigen::MatrixXcd::Identity(512, 512), 9), lrf::ErrorCode::kCapacity);
  EXPECT_LRF_ERROR(lrf::decompose(Eigen::MatrixXcd::Identity(4, 4), 3), lrf::ErrorCode::kShape);
}

TEST(FrobeniusWeight, Examples) {
  for (const auto& s : oracle::all_strings(3)) {
    EXPECT_NEAR(lrf::frobenius_weight(oracle::pauli_string(s), 3), 1.0, 1e-15);
  }
  EXPECT_EQ(lrf::frobenius_weight(Eigen::MatrixXcd::Zero(8, 8), 3), 0.0);
  const auto u = oracle::dft(4);
  EXPECT_NEAR(lrf::frobenius_weight(u.adjoint() * oracle::on_qubit(4, 0, oracle::pauli('Z')) * u, 4), 1.0,
              1e-12);
}

TEST(QrWeight, Examples) {
  const int n = 4;
  const auto far = lrf::Region::of({3});
  EXPECT_NEAR(lrf::qr_weight(lrf::single_pauli(n, 0, 'Z'), n, far), 0.0, 1e-15);
  EXPECT_NEAR(lrf::qr_weight(lrf::single_pauli(n, 3, 'X'), n, far), 1.0, 1e-15);
  EXPECT_NEAR(lrf::qr_weight(lrf::z1prime_matrix(n), n, far), 1.0, 1e-12);
  EXPECT_LRF_ERROR(lrf::qr_weight(lrf::single_pauli(n, 0, 'Z'), n, lrf::Region{}), lrf::ErrorCode::kParameter);
  EXPECT_LRF_ERROR(lrf::qr_weight(lrf::single_pauli(n, 0, 'Z'), n, lrf::Region::of({4})), lrf::ErrorCode::kIndex);
}

TEST(QrWeight, MethodsAgreeWithBruteForce) {
  std::mt19937_64 rng(4);
  int checked = 0;
  for (int n = 1; n <= 6; ++n) {
    for (int trial = 0; trial < 10; ++trial) {
      const Eigen::MatrixXcd m = oracle::random_matrix(n, rng());
      std::vector<std::size_t> region;
      std::vector<int> oregion;
      for (int q = 0; q < n; ++q) {
        if (rng() & 1) {
          region.push_back(std::size_t(q));
          oregion.push_back(q);
        }
      }
      if (region.empty()) {
        region.push_back(std::size_t(n - 1));
        oregion.push_back(n - 1);
      }
      const auto r = lrf::Region::of(region);
      const double pt = lrf::qr_weight(m, n, r, lrf::WeightMethod::kPartialTrace);
      const double en = lrf::qr_weight(m, n, r, lrf::WeightMethod::kEnumeration);
      EXPECT_NEAR(pt, en, 1e-10);
      if (n <= 4) EXPECT_NEAR(pt, oracle::region_weight(m, n, oregion), 1e-10);
      EXPECT_NEAR(pt + lrf::trivial_weight(m, n, r), lrf::frobenius_weight(m, n), 1e-10);
      ++checked;
    }
    const auto z = lrf::z1prime_matrix(n);
    const auto far = lrf::Region::of({std::size_t(n - 1)});
    EXPECT_NEAR(lrf::qr_weight(z, n, far, lrf::WeightMethod::kPartialTrace),
                lrf::qr_weight(z, n, far, lrf::WeightMethod::kEnumeration), 1e-10);
  }
  EXPECT_GE(checked, 50);
}

TEST(QrWeight, MonotoneInRegion) {
  std::mt19937_64 rng(8);
  for (int n = 2; n <= 6; ++n) {
    const Eigen::MatrixXcd m = oracle::random_matrix(n, rng());
    std::vector<std::size_t> grow;
    double prev = 0.0;
    for (int q = n - 1; q >= 0; --q) {
      grow.push_back(std::size_t(q));
      const double w = lrf::qr_weight(m, n, lrf::Region::of(grow));
      EXPECT_GE(w, prev - 1e-12);
      prev = w;
    }
  }
}

TEST(Region, BeyondRadius) {
  const auto a = lrf::assign_qubits(lrf::build_lattice(1, {6}), 6, lrf::Placement::kCanonical);
  EXPECT_EQ(lrf::Region::beyond(a, 0, 4.0).qubits, (std::vector<std::size_t>{4, 5}));
  EXPECT_EQ(lrf::Region::beyond(a, 0, 5.0).qubits, (std::vector<std::size_t>{5}));
}

TEST(Lemma, ExactWeightOnFarQubit) {
  for (int n = 1; n <= 8; ++n) {
    const auto r = lrf::verify_lemma(n);
    EXPECT_NEAR(r.weight, 1.0, 1e-12) << n;
    EXPECT_TRUE(r.pass);
  }
  EXPECT_LRF_ERROR(lrf::verify_lemma(9), lrf::ErrorCode::kCapacity);
}

TEST(Lemma, IndependentOracleAtSmallN) {
  for (int n = 2; n <= 4; ++n) {
    const auto u = oracle::dft(n);
    const Eigen::MatrixXcd z = u.adjoint() * oracle::on_qubit(n, 0, oracle::pauli('Z')) * u;
    EXPECT_NEAR(oracle::region_weight(z, n, {n - 1}), 1.0, 1e-12);
  }
}

TEST(Aqft, SpreadingAboveBound) {
  for (int n = 2; n <= 8; ++n) {
    for (int k = 1; k <= n; ++k) {
      const auto r = lrf::aqft_spread(n, k);
      EXPECT_GE(r.weight, 1 - 2 * r.epsilon - 1e-10) << "n=" << n << " k=" << k;
      EXPECT_TRUE(r.pass);
      if (k == n) {
        EXPECT_LE(r.epsilon, 1e-10);
        EXPECT_NEAR(r.weight, 1.0, 1e-10);
      }
    }
  }
}

TEST(Fanout, XSpreadsToEveryQubit) {
  for (int n = 2; n <= 8; ++n) {
    const auto r = lrf::fanout_spread(n);
    EXPECT_NEAR(r.weight, 1.0, 1e-12);
    const auto f = lrf::ideal_fanout(n);
    const Eigen::MatrixXcd conj = f.adjoint() * lrf::single_pauli(n, 0, 'X') * f;
    EXPECT_LT((conj - oracle::pauli_string(std::string(std::size_t(n), 'X'))).norm(), 1e-14);
  }
}

TEST(Correlation, CanonicalZerosInput) {
  std::mt19937_64 rng(1);
  const auto in = lrf::product_input(6, lrf::ProductInput::kZeros, rng);
  for (const auto& p : lrf::placement_correlation(6, lrf::Placement::kCanonical, in).points) {
    EXPECT_LT(p.correlation, 1e-12);
  }
}

TEST(Correlation, InterleavedPlusInput) {
  std::mt19937_64 rng(1);
  const auto in = lrf::product_input(6, lrf::ProductInput::kPlus, rng);
  const auto profile = lrf::placement_correlation(6, lrf::Placement::kInterleaved, in);
  EXPECT_EQ(profile.points.size(), 5u);
  for (const auto& p : profile.points) EXPECT_LT(p.correlation, 1e-12);
}

TEST(Correlation, RandomInputProfile) {
  std::mt19937_64 rng(42);
  const auto in = lrf::product_input(10, lrf::ProductInput::kRandom, rng);
  const auto profile = lrf::placement_correlation(10, lrf::Placement::kInterleaved, in);
  ASSERT_EQ(profile.points.size(), 9u);
  ASSERT_TRUE(profile.fit.has_value());
  EXPECT_TRUE(std::isfinite(profile.fit->rate));
  EXPECT_TRUE(std::isfinite(profile.fit->residual));

  // Brute-force check of one pair through dense expectation values.
  const auto out = lrf::apply_qft(lrf::StateVector::product(in));
  const Eigen::VectorXcd direct = oracle::dft(10) * lrf::StateVector::product(in).amplitudes();
  EXPECT_LT((out.amplitudes() - direct).norm(), 1e-10);
}
