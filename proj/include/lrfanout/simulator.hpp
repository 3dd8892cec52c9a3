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

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "lrfanout/error.hpp"
#include "lrfanout/lattice.hpp"
#include "lrfanout/schedule.hpp"

namespace lrfanout {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr int kMaxStateQubits = 24;
inline constexpr int kMaxUnitaryQubits = 12;
inline constexpr Complex kI{0.0, 1.0};

/// Basis-index bit of `qubit`; qubit 0 is the most significant bit.
inline std::uint64_t qubit_mask(int qubits, std::size_t qubit) {
  return std::uint64_t{1} << (qubits - 1 - static_cast<int>(qubit));
}

inline void check_unitary_cap(int qubits) {
  if (qubits < 1 || qubits > kMaxUnitaryQubits) {
    throw Error(ErrorCode::kCapacity, "dense matrices support 1.." +
                                          std::to_string(kMaxUnitaryQubits) + " qubits, got " +
                                          std::to_string(qubits));
  }
}

class StateVector {
 public:
  StateVector() = default;

  /// |index> on `qubits` qubits.
  static StateVector basis(int qubits, std::uint64_t index = 0) {
    StateVector s(qubits);
    if (index >= static_cast<std::uint64_t>(s.amps_.size())) {
      throw Error(ErrorCode::kIndex, "basis index out of range");
    }
    s.amps_[static_cast<Eigen::Index>(index)] = 1.0;
    return s;
  }

  static StateVector from_amplitudes(int qubits, Vector amplitudes) {
    StateVector s(qubits);
    if (amplitudes.size() != s.amps_.size()) {
      throw Error(ErrorCode::kShape, "expected " + std::to_string(s.amps_.size()) +
                                         " amplitudes, got " + std::to_string(amplitudes.size()));
    }
    s.amps_ = std::move(amplitudes);
    return s;
  }

  /// Tensor product of single-qubit states, qubit 0 first.
  static StateVector product(std::span<const Eigen::Vector2cd> factors) {
    StateVector s(static_cast<int>(factors.size()));
    s.amps_.setZero();
    const auto dim = s.amps_.size();
    for (Eigen::Index idx = 0; idx < dim; ++idx) {
      Complex a = 1.0;
      for (std::size_t q = 0; q < factors.size(); ++q) {
        const bool bit = (static_cast<std::uint64_t>(idx) & qubit_mask(s.qubits_, q)) != 0;
        a *= factors[q](bit ? 1 : 0);
      }
      s.amps_[idx] = a;
    }
    return s;
  }

  int qubits() const noexcept { return qubits_; }
  const Vector& amplitudes() const noexcept { return amps_; }
  Vector& amplitudes() noexcept { return amps_; }
  Complex operator[](std::uint64_t index) const { return amps_[static_cast<Eigen::Index>(index)]; }
  double norm() const { return amps_.norm(); }

 private:
  explicit StateVector(int qubits) : qubits_(qubits) {
    if (qubits < 1 || qubits > kMaxStateQubits) {
      throw Error(ErrorCode::kCapacity, "state vectors support 1.." +
                                            std::to_string(kMaxStateQubits) + " qubits, got " +
                                            std::to_string(qubits));
    }
    amps_ = Vector::Zero(Eigen::Index{1} << qubits);
  }

  int qubits_ = 0;
  Vector amps_;
};

/// Haar-random single-qubit state.
template <class Rng>
Eigen::Vector2cd random_qubit(Rng& rng) {
  std::normal_distribution<double> g;
  Eigen::Vector2cd v(Complex(g(rng), g(rng)), Complex(g(rng), g(rng)));
  return v / v.norm();
}

template <class Rng>
StateVector random_state(int qubits, Rng& rng) {
  std::normal_distribution<double> g;
  Vector v(Eigen::Index{1} << qubits);
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = Complex(g(rng), g(rng));
  return StateVector::from_amplitudes(qubits, v / v.norm());
}

namespace detail {
inline void check_site(const StateVector& state, SiteIndex site) {
  if (site >= static_cast<SiteIndex>(state.qubits())) {
    throw Error(ErrorCode::kIndex, "pulse site " + std::to_string(site) + " outside a " +
                                       std::to_string(state.qubits()) + "-qubit state");
  }
}
}  // namespace detail

/// Applies exp(-i t sum_i h_i |1><1|_i (x) X_target) exactly: for each control
/// pattern b the target turns by theta(b) = t sum_i h_i b_i about X. With the
/// correction flag, diag(1, i) then acts on the first control.
inline void apply_pulse_inplace(StateVector& state, const Pulse& pulse) {
  const int n = state.qubits();
  detail::check_site(state, pulse.target);
  auto& amps = state.amplitudes();
  const auto dim = static_cast<std::uint64_t>(amps.size());
  const auto tmask = qubit_mask(n, pulse.target);

  if (pulse.kind == PulseKind::kLocal) {
    const double c = std::cos(pulse.duration);
    const double s = std::sin(pulse.duration);
    for (std::uint64_t idx = 0; idx < dim; ++idx) {
      if (idx & tmask) continue;
      const auto i0 = static_cast<Eigen::Index>(idx);
      const auto i1 = static_cast<Eigen::Index>(idx | tmask);
      const Complex a0 = amps[i0], a1 = amps[i1];
      amps[i0] = c * a0 - kI * s * a1;
      amps[i1] = -kI * s * a0 + c * a1;
    }
    if (pulse.phase_correction) amps *= kI;
    return;
  }

  std::vector<std::pair<std::uint64_t, double>> controls;
  controls.reserve(pulse.controls.size());
  for (const auto& c : pulse.controls) {
    detail::check_site(state, c.site);
    controls.emplace_back(qubit_mask(n, c.site), c.strength);
  }
  for (std::uint64_t idx = 0; idx < dim; ++idx) {
    if (idx & tmask) continue;
    double strength = 0.0;
    for (const auto& [mask, h] : controls) {
      if (idx & mask) strength += h;
    }
    if (strength == 0.0) continue;
    const double theta = pulse.duration * strength;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const auto i0 = static_cast<Eigen::Index>(idx);
    const auto i1 = static_cast<Eigen::Index>(idx | tmask);
    const Complex a0 = amps[i0], a1 = amps[i1];
    amps[i0] = c * a0 - kI * s * a1;
    amps[i1] = -kI * s * a0 + c * a1;
  }
  if (pulse.phase_correction && !controls.empty()) {
    const auto rep = controls.front().first;
    for (std::uint64_t idx = 0; idx < dim; ++idx) {
      if (idx & rep) amps[static_cast<Eigen::Index>(idx)] *= kI;
    }
  }
}

inline StateVector apply_pulse(StateVector state, const Pulse& pulse) {
  apply_pulse_inplace(state, pulse);
  return state;
}

inline void run_schedule_inplace(StateVector& state, const ProtocolSchedule& schedule) {
  for (const auto& layer : schedule.layers()) {
    for (const auto& p : layer.pulses()) apply_pulse_inplace(state, p);
  }
}

inline StateVector run_schedule(StateVector state, const ProtocolSchedule& schedule) {
  run_schedule_inplace(state, schedule);
  return state;
}

/// Dense unitary of a schedule on `qubits` qubits, one basis column at a time.
inline Matrix schedule_unitary(const ProtocolSchedule& schedule, int qubits) {
  check_unitary_cap(qubits);
  const Eigen::Index dim = Eigen::Index{1} << qubits;
  Matrix u(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    u.col(col) =
        run_schedule(StateVector::basis(qubits, static_cast<std::uint64_t>(col)), schedule)
            .amplitudes();
  }
  return u;
}

/// |x>|y1>|y2>... -> |x>|y1^x>|y2^x>... with qubit 0 as control.
inline Matrix ideal_fanout(int qubits) {
  check_unitary_cap(qubits);
  const Eigen::Index dim = Eigen::Index{1} << qubits;
  const auto control = qubit_mask(qubits, 0);
  const auto targets = control - 1;
  Matrix f = Matrix::Zero(dim, dim);
  for (Eigen::Index x = 0; x < dim; ++x) {
    const auto ux = static_cast<std::uint64_t>(x);
    const auto y = (ux & control) ? ux ^ targets : ux;
    f(static_cast<Eigen::Index>(y), x) = 1.0;
  }
  return f;
}

inline double state_fidelity(const StateVector& a, const StateVector& b) {
  if (a.qubits() != b.qubits()) {
    throw Error(ErrorCode::kShape, "fidelity of states with " + std::to_string(a.qubits()) +
                                       " and " + std::to_string(b.qubits()) + " qubits");
  }
  return std::norm(a.amplitudes().dot(b.amplitudes()));
}

/// Largest singular value.
inline double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

/// min over phi of ||a - e^{i phi} b|| (operator norm), with phi taken from
/// arg Tr(b^dagger a).
inline double phase_aligned_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::kShape, "matrix shapes differ");
  }
  const Complex overlap = (b.adjoint() * a).trace();
  const Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex(1.0);
  return operator_norm(a - phase * b);
}

inline double unitarity_error(const Matrix& u) {
  return operator_norm(u.adjoint() * u - Matrix::Identity(u.rows(), u.cols()));
}

// Dump formats: "index real imag" per amplitude, "row col real imag" per
// matrix entry; 17 significant digits, most-significant-qubit-first indices.

inline void write_state(std::ostream& os, const StateVector& state) {
  for (Eigen::Index i = 0; i < state.amplitudes().size(); ++i) {
    const auto a = state.amplitudes()[i];
    os << i << ' ' << format_double(a.real()) << ' ' << format_double(a.imag()) << '\n';
  }
}

inline void write_matrix(std::ostream& os, const Matrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      os << r << ' ' << c << ' ' << format_double(m(r, c).real()) << ' '
         << format_double(m(r, c).imag()) << '\n';
    }
  }
}

/// Simulation of a fanout schedule over every lattice site (one qubit each).
class FanoutHarness {
 public:
  explicit FanoutHarness(const QubitAssignment& assignment) : assignment_(assignment) {
    sites_ = static_cast<int>(assignment.layout().size());
    if (sites_ > kMaxStateQubits) {
      throw Error(ErrorCode::kCapacity, "layout has " + std::to_string(sites_) +
                                            " sites; simulation cap is " +
                                            std::to_string(kMaxStateQubits));
    }
  }

  int sites() const noexcept { return sites_; }

  /// Full-register basis index for a data pattern (data qubit 0 is the MSB of
  /// `data`), with ancillae and unused sites in |0>.
  std::uint64_t embed(std::uint64_t data) const {
    const auto n = assignment_.qubits();
    std::uint64_t idx = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (data & (std::uint64_t{1} << (n - 1 - k))) idx |= qubit_mask(sites_, assignment_.data_site(k));
    }
    return idx;
  }

  StateVector embed(std::span<const Eigen::Vector2cd> data_factors) const {
    std::vector<Eigen::Vector2cd> factors(static_cast<std::size_t>(sites_), Eigen::Vector2cd(1.0, 0.0));
    for (std::size_t k = 0; k < data_factors.size(); ++k) {
      factors[assignment_.data_site(k)] = data_factors[k];
    }
    return StateVector::product(factors);
  }

  /// Block of the schedule unitary with every non-data site in |0> on both
  /// sides, indexed by data patterns.
  Matrix data_block(const ProtocolSchedule& schedule) const {
    const auto n = assignment_.qubits();
    const Eigen::Index dim = Eigen::Index{1} << n;
    Matrix block(dim, dim);
    for (Eigen::Index x = 0; x < dim; ++x) {
      const auto out = run_schedule(StateVector::basis(sites_, embed(static_cast<std::uint64_t>(x))), schedule);
      for (Eigen::Index y = 0; y < dim; ++y) block(y, x) = out[embed(static_cast<std::uint64_t>(y))];
    }
    return block;
  }

  /// Probability that every ancilla reads 0.
  double ancilla_return_fidelity(const StateVector& output) const {
    std::uint64_t mask = 0;
    for (auto a : assignment_.ancilla_sites()) mask |= qubit_mask(sites_, a);
    double p = 0.0;
    for (Eigen::Index i = 0; i < output.amplitudes().size(); ++i) {
      if ((static_cast<std::uint64_t>(i) & mask) == 0) p += std::norm(output.amplitudes()[i]);
    }
    return p;
  }

 private:
  QubitAssignment assignment_;
  int sites_ = 0;
};

}  // namespace lrfanout
