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

#include <algorithm>
#include <bit>
#include <cmath>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lrfanout/error.hpp"
#include "lrfanout/lattice.hpp"
#include "lrfanout/qft.hpp"
#include "lrfanout/simulator.hpp"

namespace lrfanout {

inline constexpr int kMaxPauliEnumerationQubits = 8;

/// n-qubit Pauli string in symplectic form. Bit qubit_mask(n, q) of `x` / `z`
/// marks an X / Z factor on qubit q; both set means Y.
class PauliString {
 public:
  PauliString() = default;
  PauliString(int qubits, std::uint64_t x, std::uint64_t z) : qubits_(qubits), x_(x), z_(z) {
    if (qubits < 1 || qubits > 63) throw Error(ErrorCode::kParameter, "pauli length out of range");
    const auto full = (std::uint64_t{1} << qubits) - 1;
    if ((x & ~full) || (z & ~full)) throw Error(ErrorCode::kParameter, "pauli mask too wide");
  }

  static PauliString identity(int qubits) { return {qubits, 0, 0}; }

  /// Single-letter factor on one qubit.
  static PauliString single(int qubits, std::size_t qubit, char letter) {
    const auto m = qubit_mask(qubits, qubit);
    switch (letter) {
      case 'I': return {qubits, 0, 0};
      case 'X': return {qubits, m, 0};
      case 'Y': return {qubits, m, m};
      case 'Z': return {qubits, 0, m};
      default: throw Error(ErrorCode::kParse, std::string("bad pauli letter '") + letter + "'");
    }
  }

  /// "XIZ" reads qubit 0 first.
  static PauliString parse(std::string_view s) {
    const int n = static_cast<int>(s.size());
    PauliString p(n, 0, 0);
    for (std::size_t q = 0; q < s.size(); ++q) {
      const auto f = single(n, q, s[q]);
      p.x_ |= f.x_;
      p.z_ |= f.z_;
    }
    return p;
  }

  int qubits() const noexcept { return qubits_; }
  std::uint64_t x_mask() const noexcept { return x_; }
  std::uint64_t z_mask() const noexcept { return z_; }
  std::uint64_t support() const noexcept { return x_ | z_; }
  bool is_identity() const noexcept { return support() == 0; }

  char letter(std::size_t qubit) const {
    const auto m = qubit_mask(qubits_, qubit);
    const bool x = x_ & m, z = z_ & m;
    return x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
  }

  std::string str() const {
    std::string s;
    for (int q = 0; q < qubits_; ++q) s += letter(static_cast<std::size_t>(q));
    return s;
  }

  /// P|b> = phase(b) |b ^ x_mask>.
  Complex phase(std::uint64_t basis) const {
    static constexpr Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const int ny = std::popcount(x_ & z_);
    const int sign = std::popcount(basis & z_) & 1;
    const Complex p = kIPow[ny & 3];
    return sign ? -p : p;
  }

  Matrix matrix() const {
    const Eigen::Index dim = Eigen::Index{1} << qubits_;
    Matrix m = Matrix::Zero(dim, dim);
    for (Eigen::Index b = 0; b < dim; ++b) {
      const auto ub = static_cast<std::uint64_t>(b);
      m(static_cast<Eigen::Index>(ub ^ x_), b) = phase(ub);
    }
    return m;
  }

  friend bool operator==(const PauliString&, const PauliString&) = default;
  friend auto operator<=>(const PauliString&, const PauliString&) = default;

 private:
  int qubits_ = 1;
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
};

namespace detail {
inline int check_operator(const Matrix& op, int qubits, int cap) {
  if (op.rows() != op.cols()) throw Error(ErrorCode::kShape, "operator is not square");
  if (qubits < 1 || qubits > cap) {
    throw Error(ErrorCode::kCapacity, "operator analysis supports 1.." + std::to_string(cap) +
                                          " qubits, got " + std::to_string(qubits));
  }
  if (op.rows() != (Eigen::Index{1} << qubits)) {
    throw Error(ErrorCode::kShape, "operator dimension " + std::to_string(op.rows()) +
                                       " does not match " + std::to_string(qubits) + " qubits");
  }
  return qubits;
}
}  // namespace detail

/// Coefficient Tr(P^dagger O) / 2^n.
inline Complex pauli_coefficient(const Matrix& op, const PauliString& p) {
  const Eigen::Index dim = op.rows();
  Complex acc = 0.0;
  for (Eigen::Index b = 0; b < dim; ++b) {
    const auto ub = static_cast<std::uint64_t>(b);
    acc += std::conj(p.phase(ub)) * op(static_cast<Eigen::Index>(ub ^ p.x_mask()), b);
  }
  return acc / static_cast<double>(dim);
}

class PauliDecomposition {
 public:
  explicit PauliDecomposition(int qubits) : qubits_(qubits) {}

  int qubits() const noexcept { return qubits_; }
  const std::map<PauliString, Complex>& terms() const noexcept { return terms_; }
  std::map<PauliString, Complex>& terms() noexcept { return terms_; }

  Complex coefficient(const PauliString& p) const {
    const auto it = terms_.find(p);
    return it == terms_.end() ? Complex(0.0) : it->second;
  }

  /// Sum of |c_P|^2; equals the normalized Frobenius weight of the operator.
  double squared_norm() const {
    double s = 0.0;
    for (const auto& [p, c] : terms_) s += std::norm(c);
    return s;
  }

  /// Sum of |c_P|^2 over strings acting nontrivially somewhere in `mask`.
  double weight_on(std::uint64_t mask) const {
    double s = 0.0;
    for (const auto& [p, c] : terms_) {
      if (p.support() & mask) s += std::norm(c);
    }
    return s;
  }

  Matrix reconstruct() const {
    const Eigen::Index dim = Eigen::Index{1} << qubits_;
    Matrix m = Matrix::Zero(dim, dim);
    for (const auto& [p, c] : terms_) {
      for (Eigen::Index b = 0; b < dim; ++b) {
        const auto ub = static_cast<std::uint64_t>(b);
        m(static_cast<Eigen::Index>(ub ^ p.x_mask()), b) += c * p.phase(ub);
      }
    }
    return m;
  }

 private:
  int qubits_;
  std::map<PauliString, Complex> terms_;
};

inline constexpr double kPauliDropTolerance = 1e-14;

/// Full 4^n expansion; coefficients with magnitude below 1e-14 are dropped.
inline PauliDecomposition decompose(const Matrix& op, int qubits) {
  detail::check_operator(op, qubits, kMaxPauliEnumerationQubits);
  PauliDecomposition d(qubits);
  const std::uint64_t dim = std::uint64_t{1} << qubits;
  for (std::uint64_t x = 0; x < dim; ++x) {
    for (std::uint64_t z = 0; z < dim; ++z) {
      const PauliString p(qubits, x, z);
      const auto c = pauli_coefficient(op, p);
      if (std::abs(c) > kPauliDropTolerance) d.terms().emplace(p, c);
    }
  }
  return d;
}

/// Normalized Frobenius weight Tr(O^dagger O) / 2^n.
inline double frobenius_weight(const Matrix& op, int qubits) {
  detail::check_operator(op, qubits, kMaxStateQubits);
  return op.squaredNorm() / static_cast<double>(op.rows());
}

/// Qubits at distance >= radius from a reference qubit.
struct Region {
  std::vector<std::size_t> qubits;
  double radius = 0.0;
  std::size_t reference = 0;

  /// Explicit qubit set.
  static Region of(std::vector<std::size_t> qubits) {
    Region r;
    r.qubits = std::move(qubits);
    std::sort(r.qubits.begin(), r.qubits.end());
    r.qubits.erase(std::unique(r.qubits.begin(), r.qubits.end()), r.qubits.end());
    return r;
  }

  /// Data qubits of `assignment` whose sites lie at distance >= radius from
  /// the site of logical qubit `reference`.
  static Region beyond(const QubitAssignment& assignment, std::size_t reference, double radius) {
    Region r;
    r.radius = radius;
    r.reference = reference;
    const auto& layout = assignment.layout();
    const auto ref_site = assignment.data_site(reference);
    for (std::size_t k = 0; k < assignment.qubits(); ++k) {
      if (layout.distance(ref_site, assignment.data_site(k)) >= radius - 1e-12) r.qubits.push_back(k);
    }
    return r;
  }

  std::uint64_t mask(int n) const {
    std::uint64_t m = 0;
    for (auto q : qubits) {
      if (q >= static_cast<std::size_t>(n)) {
        throw Error(ErrorCode::kIndex, "region qubit " + std::to_string(q) + " outside " +
                                           std::to_string(n) + " qubits");
      }
      m |= qubit_mask(n, q);
    }
    return m;
  }
};

enum class WeightMethod { kPartialTrace, kEnumeration };

/// Normalized Frobenius weight of (Tr_B O (x) I_B) / 2^|B|, the part of O that
/// acts trivially on region B.
inline double trivial_weight(const Matrix& op, int qubits, const Region& region) {
  detail::check_operator(op, qubits, kMaxUnitaryQubits);
  const auto bmask = region.mask(qubits);
  const int nb = std::popcount(bmask);
  const int na = qubits - nb;
  const std::uint64_t dim = std::uint64_t{1} << qubits;
  std::vector<std::uint64_t> compress(dim);
  for (std::uint64_t idx = 0; idx < dim; ++idx) {
    std::uint64_t out = 0;
    int bit = 0;
    for (int q = qubits - 1; q >= 0; --q) {
      const auto m = std::uint64_t{1} << (qubits - 1 - q);
      if (bmask & m) continue;
      if (idx & m) out |= std::uint64_t{1} << bit;
      ++bit;
    }
    compress[idx] = out;
  }
  const Eigen::Index adim = Eigen::Index{1} << na;
  Matrix reduced = Matrix::Zero(adim, adim);
  for (std::uint64_t r = 0; r < dim; ++r) {
    for (std::uint64_t c = 0; c < dim; ++c) {
      if ((r & bmask) != (c & bmask)) continue;
      reduced(static_cast<Eigen::Index>(compress[r]), static_cast<Eigen::Index>(compress[c])) +=
          op(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
  return reduced.squaredNorm() / (std::ldexp(1.0, nb) * static_cast<double>(dim));
}

/// ||Q_r O||_F^2: weight on Pauli strings acting nontrivially inside the region.
inline double qr_weight(const Matrix& op, int qubits, const Region& region,
                        WeightMethod method = WeightMethod::kPartialTrace) {
  if (region.qubits.empty()) throw Error(ErrorCode::kParameter, "empty region");
  if (method == WeightMethod::kEnumeration) {
    return decompose(op, qubits).weight_on(region.mask(qubits));
  }
  return frobenius_weight(op, qubits) - trivial_weight(op, qubits, region);
}

/// Z (or X) on one qubit of an n-qubit register.
inline Matrix single_pauli(int qubits, std::size_t qubit, char letter) {
  return PauliString::single(qubits, qubit, letter).matrix();
}

struct SpreadingReport {
  std::string label;
  int n = 0;
  int band = 0;
  double region_r = 0.0;
  double weight = 0.0;
  double epsilon = 0.0;
  double bound = 1.0;
  bool pass = false;
};

inline constexpr double kSpreadingTolerance = 1e-10;

namespace detail {
inline Region far_end_region(int n) {
  const auto assignment = assign_qubits(build_lattice(1, {n}), static_cast<std::size_t>(n),
                                        Placement::kCanonical);
  const double r = assignment.layout().distance(assignment.data_site(0),
                                                assignment.data_site(static_cast<std::size_t>(n - 1)));
  return Region::beyond(assignment, 0, r);
}

inline void check_lemma_size(int n) {
  if (n < 1 || n > kMaxPauliEnumerationQubits) {
    throw Error(ErrorCode::kCapacity, "spreading checks support n in 1..8, got " + std::to_string(n));
  }
}
}  // namespace detail

/// Weight of U_QFT^dagger Z_1 U_QFT on the qubits farthest from qubit 1 of
/// the layout (canonical placement). The 1D chain puts only qubit n there.
inline SpreadingReport verify_lemma(int n, const LatticeLayout& layout) {
  detail::check_lemma_size(n);
  const auto assignment = assign_qubits(layout, static_cast<std::size_t>(n), Placement::kCanonical);
  const double r = layout.distance(assignment.data_site(0),
                                   assignment.data_site(static_cast<std::size_t>(n - 1)));
  const auto region = Region::beyond(assignment, 0, r);
  const Matrix u = qft_unitary(n);
  const Matrix conj = u.adjoint() * single_pauli(n, 0, 'Z') * u;
  SpreadingReport rep;
  rep.label = "qft";
  rep.n = n;
  rep.band = n;
  rep.region_r = r;
  rep.weight = qr_weight(conj, n, region);
  rep.bound = 1.0;
  rep.pass = rep.weight >= 1.0 - kSpreadingTolerance;
  return rep;
}

inline SpreadingReport verify_lemma(int n) {
  detail::check_lemma_size(n);
  return verify_lemma(n, build_lattice(1, {n}));
}

/// Spreading of Z_1 under the band-k approximate QFT; the weight must stay
/// above 1 - 2 eps with eps the realized operator-norm error.
inline SpreadingReport aqft_spread(int n, int band) {
  detail::check_lemma_size(n);
  const auto aqft = aqft_unitary(n, band);
  const Matrix conj = aqft.unitary.adjoint() * single_pauli(n, 0, 'Z') * aqft.unitary;
  const auto region = detail::far_end_region(n);
  SpreadingReport rep;
  rep.label = "aqft";
  rep.n = n;
  rep.band = band;
  rep.region_r = region.radius;
  rep.epsilon = aqft.epsilon;
  rep.weight = qr_weight(conj, n, region);
  rep.bound = 1.0 - 2.0 * aqft.epsilon;
  rep.pass = rep.weight >= rep.bound - kSpreadingTolerance;
  return rep;
}

/// F^dagger X_1 F = X_1 X_2 ... X_n for the ideal fanout F.
inline SpreadingReport fanout_spread(int n) {
  detail::check_lemma_size(n);
  const Matrix f = ideal_fanout(n);
  const Matrix conj = f.adjoint() * single_pauli(n, 0, 'X') * f;
  const auto region = detail::far_end_region(n);
  SpreadingReport rep;
  rep.label = "fanout";
  rep.n = n;
  rep.band = 0;
  rep.region_r = region.radius;
  rep.weight = qr_weight(conj, n, region);
  rep.bound = 1.0;
  rep.pass = rep.weight >= 1.0 - kSpreadingTolerance;
  return rep;
}

struct CorrelationPoint {
  std::int64_t distance = 0;
  double correlation = 0.0;
};

struct DecayFit {
  double rate = 0.0;  // correlation ~ exp(-rate * distance)
  double intercept = 0.0;
  double residual = 0.0;
  std::size_t points = 0;
};

struct CorrelationProfile {
  std::vector<CorrelationPoint> points;
  std::optional<DecayFit> fit;
};

/// Correlations below this floor are excluded from the log-linear fit.
inline constexpr double kCorrelationFloor = 1e-14;

inline StateVector apply_qft(const StateVector& input) {
  const int n = input.qubits();
  const PhasedFourierSpec spec(n, n);
  Matrix column = input.amplitudes();
  for (const auto& g : qft_circuit(spec)) apply_gate_rows(column, n, g);
  return StateVector::from_amplitudes(n, column.col(0));
}

/// Connected ZZ correlator |<Z_i Z_j> - <Z_i><Z_j>| of U_QFT |input> for
/// every pair of logical qubits, grouped by chain distance under the
/// placement (maximum at each distance).
inline CorrelationProfile placement_correlation(int n, Placement placement,
                                                std::span<const Eigen::Vector2cd> input) {
  check_unitary_cap(n);
  if (static_cast<int>(input.size()) != n) {
    throw Error(ErrorCode::kShape, "expected " + std::to_string(n) + " single-qubit factors");
  }
  const auto assignment =
      assign_qubits(build_lattice(1, {n}), static_cast<std::size_t>(n), placement);
  const auto out = apply_qft(StateVector::product(input));
  const auto& amps = out.amplitudes();
  const auto dim = static_cast<std::uint64_t>(amps.size());

  std::vector<double> z(static_cast<std::size_t>(n), 0.0);
  std::vector<double> zz(static_cast<std::size_t>(n * n), 0.0);
  for (std::uint64_t idx = 0; idx < dim; ++idx) {
    const double p = std::norm(amps[static_cast<Eigen::Index>(idx)]);
    if (p == 0.0) continue;
    for (int i = 0; i < n; ++i) {
      const double si = (idx & qubit_mask(n, static_cast<std::size_t>(i))) ? -1.0 : 1.0;
      z[static_cast<std::size_t>(i)] += p * si;
      for (int j = i + 1; j < n; ++j) {
        const double sj = (idx & qubit_mask(n, static_cast<std::size_t>(j))) ? -1.0 : 1.0;
        zz[static_cast<std::size_t>(i * n + j)] += p * si * sj;
      }
    }
  }

  std::map<std::int64_t, double> by_distance;
  for (int d = 1; d < n; ++d) by_distance[d] = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const auto pi = static_cast<std::int64_t>(assignment.data_site(static_cast<std::size_t>(i)));
      const auto pj = static_cast<std::int64_t>(assignment.data_site(static_cast<std::size_t>(j)));
      const auto d = pi > pj ? pi - pj : pj - pi;
      const double c = std::fabs(zz[static_cast<std::size_t>(i * n + j)] -
                                 z[static_cast<std::size_t>(i)] * z[static_cast<std::size_t>(j)]);
      by_distance[d] = std::max(by_distance[d], c);
    }
  }

  CorrelationProfile profile;
  std::vector<double> xs, ys;
  for (const auto& [d, c] : by_distance) {
    profile.points.push_back({d, c});
    if (c > kCorrelationFloor) {
      xs.push_back(static_cast<double>(d));
      ys.push_back(std::log(c));
    }
  }
  if (xs.size() >= 2) {
    const auto m = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i] / m;
      my += ys[i] / m;
    }
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxx += (xs[i] - mx) * (xs[i] - mx);
      sxy += (xs[i] - mx) * (ys[i] - my);
    }
    DecayFit fit;
    const double slope = sxy / sxx;
    fit.rate = -slope;
    fit.intercept = my - slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double e = ys[i] - (fit.intercept + slope * xs[i]);
      ss += e * e;
    }
    fit.residual = std::sqrt(ss / m);
    fit.points = xs.size();
    profile.fit = fit;
  }
  return profile;
}

enum class ProductInput { kZeros, kPlus, kRandom };

inline ProductInput parse_product_input(std::string_view s) {
  if (s == "zeros") return ProductInput::kZeros;
  if (s == "plus") return ProductInput::kPlus;
  if (s == "random") return ProductInput::kRandom;
  throw Error(ErrorCode::kParameter, "unknown product input '" + std::string(s) + "'");
}

template <class Rng>
std::vector<Eigen::Vector2cd> product_input(int n, ProductInput kind, Rng& rng) {
  std::vector<Eigen::Vector2cd> f;
  const double s = 1.0 / std::sqrt(2.0);
  for (int q = 0; q < n; ++q) {
    switch (kind) {
      case ProductInput::kZeros: f.emplace_back(1.0, 0.0); break;
      case ProductInput::kPlus: f.emplace_back(s, s); break;
      case ProductInput::kRandom: f.push_back(random_qubit(rng)); break;
    }
  }
  return f;
}

}  // namespace lrfanout
