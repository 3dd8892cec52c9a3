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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "expect_error.hpp"
#include "lrfanout/protocols.hpp"
#include "lrfanout/simulator.hpp"
#include "oracles.hpp"

namespace lrf = lrfanout;
using std::numbers::pi;
using Complex = std::complex<double>;

namespace {

lrf::LatticeLayout chain(std::int64_t n) { return lrf::build_lattice(1, {n}); }

lrf::QubitAssignment fanout_assignment(int d, std::size_t n) {
  return lrf::assign_qubits(lrf::fanout_layout(d, n), n, lrf::Placement::kCanonical,
                            lrf::Register::kWithAncillae);
}

}  // namespace

TEST(Pulse, CompletedCnotTruthTable) {
  const auto p = lrf::cnot_pulse(0, 1, chain(2), 1.0);
  const auto on = lrf::apply_pulse(lrf::StateVector::basis(2, 0b10), p);
  EXPECT_NEAR(std::abs(on[0b11] - Complex(1.0)), 0.0, 1e-15);
  const auto off = lrf::apply_pulse(lrf::StateVector::basis(2, 0b00), p);
  EXPECT_NEAR(std::abs(off[0b00] - Complex(1.0)), 0.0, 1e-15);
}

TEST(Pulse, HalfDurationMatchesMatrixExponential) {
  auto p = lrf::cnot_pulse(0, 1, chain(2), 1.0);
  p.duration /= 2;
  p.phase_correction = false;
  const auto out = lrf::apply_pulse(lrf::StateVector::basis(2, 0b10), p);
  const double s = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(out[0b10] - Complex(s, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(out[0b11] - Complex(0, -s)), 0.0, 1e-15);

  const auto u = oracle::expm_hermitian(oracle::controlled_x_hamiltonian(2, {0}, {1.0}, 1), p.duration);
  Eigen::VectorXcd in = Eigen::VectorXcd::Zero(4);
  in(2) = 1.0;
  EXPECT_LT((u * in - out.amplitudes()).norm(), 1e-14);
}

TEST(Pulse, MulticontrolAgainstDenseExponential) {
  std::mt19937_64 rng(11);
  const auto l = lrf::build_lattice(2, {2, 3});
  for (double alpha : {0.0, 1.0, 2.5}) {
    for (lrf::SiteIndex target = 0; target < 6; ++target) {
      std::vector<lrf::SiteIndex> controls;
      for (lrf::SiteIndex c = 0; c < 6; ++c) {
        if (c != target && (rng() & 1)) controls.push_back(c);
      }
      if (controls.empty()) controls.push_back((target + 1) % 6);
      auto p = lrf::multicontrol_pulse(controls, target, l, alpha);
      p.phase_correction = false;
      std::vector<int> ci;
      std::vector<double> hs;
      for (const auto& c : p.controls) {
        ci.push_back(int(c.site));
        hs.push_back(c.strength);
      }
      const auto u = oracle::expm_hermitian(oracle::controlled_x_hamiltonian(6, ci, hs, int(target)), p.duration);
      const auto psi = lrf::random_state(6, rng);
      EXPECT_LT((u * psi.amplitudes() - lrf::apply_pulse(psi, p).amplitudes()).norm(), 1e-12);
    }
  }
}

TEST(Pulse, LocalPulseIsX) {
  const auto out = lrf::apply_pulse(lrf::StateVector::basis(3, 0b000), lrf::local_pulse(1));
  EXPECT_NEAR(std::abs(out[0b010] - Complex(1.0)), 0.0, 1e-15);
}

TEST(Pulse, SiteOutsideState) {
  const auto p = lrf::cnot_pulse(0, 5, chain(8), 1.0);
  EXPECT_LRF_ERROR(lrf::apply_pulse(lrf::StateVector::basis(3), p), lrf::ErrorCode::kIndex);
}

TEST(Schedule, SingleCnotUnitary) {
  lrf::ProtocolSchedule s;
  s.add_layer(lrf::ScheduleLayer({lrf::cnot_pulse(0, 1, chain(2), 2.0)}));
  Eigen::MatrixXcd cnot = Eigen::MatrixXcd::Zero(4, 4);
  cnot(0, 0) = cnot(1, 1) = cnot(3, 2) = cnot(2, 3) = 1.0;
  EXPECT_LT((lrf::schedule_unitary(s, 2) - cnot).norm(), 1e-15);
}

TEST(Schedule, EmptyIsIdentity) {
  EXPECT_LT((lrf::schedule_unitary({}, 3) - Eigen::MatrixXcd::Identity(8, 8)).norm(), 1e-15);
}

TEST(Schedule, FollowedByReverseIsIdentityOnCleanAncillae) {
  for (double alpha : {0.0, 1.0, 3.0}) {
    const auto a = fanout_assignment(1, 3);
    const auto s = lrf::plan_fanout(a, alpha);
    auto both = s;
    both.append(lrf::reverse_schedule(s));
    const auto block = lrf::FanoutHarness(a).data_block(both);
    EXPECT_LT(oracle::distance_up_to_phase(block, Eigen::MatrixXcd::Identity(8, 8)), 1e-10);
  }
}

TEST(Schedule, ReverseUndoesBroadcastOfRootState) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (std::size_t n = 2; n <= 10; ++n) {
    const auto a = lrf::assign_qubits(chain(std::int64_t(n)), n, lrf::Placement::kCanonical);
    const auto s = lrf::plan_broadcast(a, 1.0).schedule;
    std::vector<Eigen::Vector2cd> f(n, Eigen::Vector2cd(1.0, 0.0));
    f[a.data_site(0)] = Eigen::Vector2cd(Complex(g(rng), g(rng)), Complex(g(rng), g(rng))).normalized();
    const auto psi = lrf::StateVector::product(f);
    const auto spread = lrf::run_schedule(psi, s);
    EXPECT_LT(lrf::state_fidelity(spread, psi), 1.0 - 1e-6);
    const auto back = lrf::run_schedule(spread, lrf::reverse_schedule(s));
    EXPECT_GE(lrf::state_fidelity(back, psi), 1 - 1e-10);
  }
}

TEST(Schedule, NormPreserved) {
  std::mt19937_64 rng(9);
  for (std::size_t n = 2; n <= 5; ++n) {
    const auto a = fanout_assignment(1, n);
    for (double alpha : {0.5, 2.0}) {
      const auto s = lrf::plan_fanout(a, alpha);
      const auto psi = lrf::random_state(int(2 * n), rng);
      EXPECT_NEAR(lrf::run_schedule(psi, s).norm(), 1.0, 1e-10);
    }
  }
}

TEST(Schedule, LayerOrderIndependence) {
  std::mt19937_64 rng(3);
  const auto a = fanout_assignment(1, 5);
  const auto s = lrf::plan_fanout(a, 1.0);
  lrf::ProtocolSchedule shuffled(s.metadata());
  for (const auto& layer : s.layers()) {
    auto pulses = layer.pulses();
    std::shuffle(pulses.begin(), pulses.end(), rng);
    shuffled.add_layer(lrf::ScheduleLayer(pulses, layer.local()));
  }
  const auto psi = lrf::random_state(10, rng);
  EXPECT_LE((lrf::run_schedule(psi, s).amplitudes() - lrf::run_schedule(psi, shuffled).amplitudes()).norm(),
            1e-12);
}

TEST(Broadcast, MapsAmplitudesOntoCorrelatedState) {
  std::mt19937_64 rng(17);
  for (std::size_t n = 2; n <= 10; ++n) {
    const auto a = lrf::assign_qubits(chain(std::int64_t(n)), n, lrf::Placement::kCanonical);
    for (double alpha : {0.0, 1.0, 4.0}) {
      const auto s = lrf::plan_broadcast(a, alpha).schedule;
      for (int trial = 0; trial < 20; ++trial) {
        const auto q = lrf::random_qubit(rng);
        std::vector<Eigen::Vector2cd> f(n, Eigen::Vector2cd(1, 0));
        f[0] = q;
        const auto out = lrf::run_schedule(lrf::StateVector::product(f), s);
        EXPECT_GE(oracle::fidelity(out.amplitudes(), oracle::ghz_like(int(n), q(0), q(1))), 1 - 1e-10);
      }
    }
  }
}

TEST(Fanout, BasisStateOne) {
  const auto a = fanout_assignment(1, 4);
  const auto s = lrf::plan_fanout(a, 1.0);
  const lrf::FanoutHarness h(a);
  const auto out = lrf::run_schedule(lrf::StateVector::basis(h.sites(), h.embed(0b1000)), s);
  EXPECT_NEAR(std::norm(out[h.embed(0b1111)]), 1.0, 1e-10);
  EXPECT_NEAR(h.ancilla_return_fidelity(out), 1.0, 1e-10);
}

TEST(Fanout, MatchesIdealUpToPhase) {
  for (int d = 1; d <= 2; ++d) {
    for (std::size_t n = 2; n <= 4; ++n) {
      const auto a = fanout_assignment(d, n);
      if (a.layout().size() > 12) continue;
      for (double alpha : {0.0, 1.0, 2.0, 3.5}) {
        const lrf::FanoutHarness h(a);
        const auto block = h.data_block(lrf::plan_fanout(a, alpha));
        EXPECT_LT(oracle::distance_up_to_phase(block, lrf::ideal_fanout(int(n))), 1e-10)
            << "D=" << d << " n=" << n << " alpha=" << alpha;
      }
    }
  }
}

TEST(Fanout, SixQubitsThroughFullUnitary) {
  const auto a = fanout_assignment(1, 3);
  const auto u = lrf::schedule_unitary(lrf::plan_fanout(a, 1.0), 6);
  // Restrict to ancillae |000> (sites 1, 3, 5) on both sides.
  Eigen::MatrixXcd block(8, 8);
  const lrf::FanoutHarness h(a);
  for (int x = 0; x < 8; ++x) {
    for (int y = 0; y < 8; ++y) block(y, x) = u(Eigen::Index(h.embed(y)), Eigen::Index(h.embed(x)));
  }
  EXPECT_LT(oracle::distance_up_to_phase(block, lrf::ideal_fanout(3)), 1e-10);
}

TEST(Fanout, AncillaeReturnOnProductInputs) {
  std::mt19937_64 rng(23);
  for (std::size_t n = 2; n <= 6; ++n) {
    const auto a = fanout_assignment(1, n);
    const auto s = lrf::plan_fanout(a, 1.5);
    const lrf::FanoutHarness h(a);
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<Eigen::Vector2cd> f;
      for (std::size_t q = 0; q < n; ++q) f.push_back(lrf::random_qubit(rng));
      EXPECT_GE(h.ancilla_return_fidelity(lrf::run_schedule(h.embed(f), s)), 1 - 1e-10);
    }
  }
}

TEST(IdealFanout, Examples) {
  const auto f = lrf::ideal_fanout(3);
  EXPECT_EQ(f(0b111, 0b100), Complex(1.0));
  EXPECT_EQ(f(0b001, 0b001), Complex(1.0));
  Eigen::VectorXcd plus = Eigen::VectorXcd::Zero(8);
  plus(0b000) = plus(0b100) = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(oracle::fidelity(f * plus, oracle::ghz_like(3, 1.0, 1.0)), 1.0, 1e-15);
}

TEST(Fidelity, Examples) {
  std::mt19937_64 rng(1);
  const auto psi = lrf::random_state(4, rng);
  EXPECT_NEAR(lrf::state_fidelity(psi, psi), 1.0, 1e-14);
  EXPECT_EQ(lrf::state_fidelity(lrf::StateVector::basis(2, 0), lrf::StateVector::basis(2, 3)), 0.0);
  auto phased = psi;
  phased.amplitudes() *= std::polar(1.0, 0.7);
  EXPECT_NEAR(lrf::state_fidelity(phased, psi), 1.0, 1e-14);
  EXPECT_LRF_ERROR(lrf::state_fidelity(psi, lrf::StateVector::basis(3)), lrf::ErrorCode::kShape);
}

TEST(Capacity, Limits) {
  EXPECT_LRF_ERROR(lrf::StateVector::basis(25), lrf::ErrorCode::kCapacity);
  EXPECT_LRF_ERROR(lrf::ideal_fanout(13), lrf::ErrorCode::kCapacity);
  EXPECT_LRF_ERROR(lrf::StateVector::basis(2, 4), lrf::ErrorCode::kIndex);
}

TEST(Dump, Formats) {
  std::ostringstream os;
  lrf::write_state(os, lrf::StateVector::basis(1, 1));
  EXPECT_EQ(os.str(), "0 0 0\n1 1 0\n");
}
