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

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "lrfanout/error.hpp"
#include "lrfanout/simulator.hpp"

namespace lrfanout {

/// omega = exp(2 pi i / 2^n) together with an approximation band k: the band-k
/// circuit keeps controlled rotations by 2 pi / 2^d only for d <= k.
struct PhasedFourierSpec {
  int qubits = 1;
  int band = 1;

  PhasedFourierSpec(int n, int k) : qubits(n), band(k) {
    check_unitary_cap(n);
    if (k < 1 || k > n) {
      throw Error(ErrorCode::kParameter,
                  "band must be in 1.." + std::to_string(n) + ", got " + std::to_string(k));
    }
  }

  std::uint64_t dimension() const { return std::uint64_t{1} << qubits; }
  bool exact() const { return band == qubits; }

  /// omega^power, reduced modulo 2^n before evaluating the exponential.
  Complex omega_pow(std::int64_t power) const {
    const auto dim = static_cast<std::int64_t>(dimension());
    auto r = power % dim;
    if (r < 0) r += dim;
    return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(dim));
  }

  Complex omega() const { return omega_pow(1); }
};

/// Entry (y, z) = omega^{yz} / sqrt(2^n); bit strings read most-significant first.
inline Matrix qft_unitary(int qubits) {
  const PhasedFourierSpec spec(qubits, qubits);
  const auto dim = static_cast<Eigen::Index>(spec.dimension());
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  Matrix u(dim, dim);
  for (Eigen::Index y = 0; y < dim; ++y) {
    for (Eigen::Index z = 0; z < dim; ++z) {
      u(y, z) = spec.omega_pow(static_cast<std::int64_t>(y) * z) * scale;
    }
  }
  return u;
}

/// The omega -> omega^-1 construction.
inline Matrix inverse_qft_unitary(int qubits) {
  const PhasedFourierSpec spec(qubits, qubits);
  const auto dim = static_cast<Eigen::Index>(spec.dimension());
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  Matrix u(dim, dim);
  for (Eigen::Index y = 0; y < dim; ++y) {
    for (Eigen::Index z = 0; z < dim; ++z) {
      u(y, z) = spec.omega_pow(-static_cast<std::int64_t>(y) * z) * scale;
    }
  }
  return u;
}

struct CircuitGate {
  enum class Kind { kHadamard, kControlledPhase, kSwap };
  Kind kind = Kind::kHadamard;
  int a = 0;  // target (Hadamard, phase) or first swap qubit
  int b = 0;  // control (phase) or second swap qubit
  double angle = 0.0;
};

/// Textbook QFT circuit with final qubit-reversal swaps. Rotations by
/// 2 pi / 2^d with d > band are dropped.
inline std::vector<CircuitGate> qft_circuit(const PhasedFourierSpec& spec) {
  const int n = spec.qubits;
  std::vector<CircuitGate> gates;
  for (int j = 0; j < n; ++j) {
    gates.push_back({CircuitGate::Kind::kHadamard, j, j, 0.0});
    for (int m = j + 1; m < n; ++m) {
      const int d = m - j + 1;
      if (d > spec.band) continue;
      gates.push_back({CircuitGate::Kind::kControlledPhase, j, m,
                       2.0 * std::numbers::pi / static_cast<double>(std::uint64_t{1} << d)});
    }
  }
  for (int j = 0; j < n / 2; ++j) gates.push_back({CircuitGate::Kind::kSwap, j, n - 1 - j, 0.0});
  return gates;
}

/// Left-multiplies `m` (2^n rows) by one circuit gate.
inline void apply_gate_rows(Matrix& m, int qubits, const CircuitGate& g) {
  const auto dim = static_cast<std::uint64_t>(m.rows());
  const auto ma = qubit_mask(qubits, static_cast<std::size_t>(g.a));
  const auto mb = qubit_mask(qubits, static_cast<std::size_t>(g.b));
  switch (g.kind) {
    case CircuitGate::Kind::kHadamard: {
      const double s = 1.0 / std::sqrt(2.0);
      for (std::uint64_t i = 0; i < dim; ++i) {
        if (i & ma) continue;
        const auto r0 = static_cast<Eigen::Index>(i);
        const auto r1 = static_cast<Eigen::Index>(i | ma);
        const Eigen::RowVectorXcd top = m.row(r0);
        const Eigen::RowVectorXcd bottom = m.row(r1);
        m.row(r0) = s * (top + bottom);
        m.row(r1) = s * (top - bottom);
      }
      break;
    }
    case CircuitGate::Kind::kControlledPhase: {
      const Complex phase = std::polar(1.0, g.angle);
      for (std::uint64_t i = 0; i < dim; ++i) {
        if ((i & ma) && (i & mb)) m.row(static_cast<Eigen::Index>(i)) *= phase;
      }
      break;
    }
    case CircuitGate::Kind::kSwap: {
      for (std::uint64_t i = 0; i < dim; ++i) {
        if ((i & ma) && !(i & mb)) {
          m.row(static_cast<Eigen::Index>(i)).swap(m.row(static_cast<Eigen::Index>((i ^ ma) | mb)));
        }
      }
      break;
    }
  }
}

inline Matrix circuit_unitary(const std::vector<CircuitGate>& gates, int qubits) {
  check_unitary_cap(qubits);
  const Eigen::Index dim = Eigen::Index{1} << qubits;
  Matrix u = Matrix::Identity(dim, dim);
  for (const auto& g : gates) apply_gate_rows(u, qubits, g);
  return u;
}

struct AqftResult {
  Matrix unitary;
  /// Realized operator-norm error ||U_QFT - U_band||.
  double epsilon = 0.0;
};

inline AqftResult aqft_unitary(int qubits, int band) {
  const PhasedFourierSpec spec(qubits, band);
  AqftResult r;
  r.unitary = circuit_unitary(qft_circuit(spec), qubits);
  r.epsilon = operator_norm(qft_unitary(qubits) - r.unitary);
  return r;
}

/// Closed form of U_QFT^dagger Z_1 U_QFT at (z, x): zero unless x - z is odd,
/// otherwise 2^{-(n-2)} / (1 - omega^{x-z}).
inline Complex z1prime_element(int qubits, std::uint64_t z, std::uint64_t x) {
  const PhasedFourierSpec spec(qubits, qubits);
  if (z >= spec.dimension() || x >= spec.dimension()) {
    throw Error(ErrorCode::kIndex, "matrix index outside 2^" + std::to_string(qubits));
  }
  const auto diff = static_cast<std::int64_t>(x) - static_cast<std::int64_t>(z);
  if (diff == 0 || diff % 2 == 0) return 0.0;
  return std::ldexp(1.0, 2 - qubits) / (1.0 - spec.omega_pow(diff));
}

inline Matrix z1prime_matrix(int qubits) {
  check_unitary_cap(qubits);
  const Eigen::Index dim = Eigen::Index{1} << qubits;
  Matrix m(dim, dim);
  for (Eigen::Index z = 0; z < dim; ++z) {
    for (Eigen::Index x = 0; x < dim; ++x) {
      m(z, x) = z1prime_element(qubits, static_cast<std::uint64_t>(z), static_cast<std::uint64_t>(x));
    }
  }
  return m;
}

inline Matrix hadamard_all(int qubits) {
  check_unitary_cap(qubits);
  const Eigen::Index dim = Eigen::Index{1} << qubits;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  Matrix h(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      const int parity = std::popcount(static_cast<std::uint64_t>(i & j)) & 1;
      h(i, j) = parity ? -scale : scale;
    }
  }
  return h;
}

/// V = H^{(x)n} U_QFT, which maps |psi>|0...0> to |0...0>|psi>.
inline Matrix state_transfer_unitary(int qubits) {
  return hadamard_all(qubits) * qft_unitary(qubits);
}

}  // namespace lrfanout
