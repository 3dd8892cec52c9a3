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
#include <cmath>
#include <compare>
#include <cstdint>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "lrfanout/error.hpp"

namespace lrfanout {

/// Exact fraction with a positive denominator, always in lowest terms.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t value) : num_(value) {}  // NOLINT(implicit)
  Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
    if (den_ == 0) throw Error(ErrorCode::kParameter, "zero denominator");
    normalize();
  }

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }
  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

  /// Parses "3", "-1.25", "5/2".
  static Rational parse(std::string_view s) {
    auto bad = [&] { return Error(ErrorCode::kParse, "not a rational: '" + std::string(s) + "'"); };
    if (s.empty()) throw bad();
    if (const auto slash = s.find('/'); slash != std::string_view::npos) {
      const auto n = parse(s.substr(0, slash));
      const auto d = parse(s.substr(slash + 1));
      if (d.num_ == 0) throw bad();
      return n / d;
    }
    bool negative = false;
    std::size_t pos = 0;
    if (s[0] == '-' || s[0] == '+') {
      negative = s[0] == '-';
      pos = 1;
    }
    std::int64_t num = 0;
    std::int64_t den = 1;
    bool seen_point = false;
    bool seen_digit = false;
    for (; pos < s.size(); ++pos) {
      const char c = s[pos];
      if (c == '.' && !seen_point) {
        seen_point = true;
        continue;
      }
      if (c < '0' || c > '9') throw bad();
      seen_digit = true;
      if (num > (INT64_MAX - 9) / 10 || (seen_point && den > INT64_MAX / 10)) {
        throw Error(ErrorCode::kParse, "too many digits: '" + std::string(s) + "'");
      }
      num = num * 10 + (c - '0');
      if (seen_point) den *= 10;
    }
    if (!seen_digit) throw bad();
    return {negative ? -num : num, den};
  }

  /// Best rational approximation with denominator <= max_den (continued fractions).
  static Rational approximate(double x, std::int64_t max_den = 1'000'000) {
    if (!std::isfinite(x)) throw Error(ErrorCode::kParameter, "non-finite value");
    std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double v = x;
    for (int iter = 0; iter < 64; ++iter) {
      const double a = std::floor(v);
      const auto ai = static_cast<std::int64_t>(a);
      const std::int64_t q2 = q0 + ai * q1;
      if (q2 > max_den) break;
      const std::int64_t p2 = p0 + ai * p1;
      p0 = p1;
      q0 = q1;
      p1 = p2;
      q1 = q2;
      const double frac = v - a;
      if (frac < 1e-15 || std::fabs(static_cast<double>(p1) / static_cast<double>(q1) - x) < 1e-15) break;
      v = 1.0 / frac;
    }
    return {p1, q1};
  }

  friend Rational operator+(Rational a, Rational b) {
    return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
  }
  friend Rational operator-(Rational a, Rational b) {
    return {a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_};
  }
  friend Rational operator*(Rational a, Rational b) { return {a.num_ * b.num_, a.den_ * b.den_}; }
  friend Rational operator/(Rational a, Rational b) {
    if (b.num_ == 0) throw Error(ErrorCode::kParameter, "division by zero");
    return {a.num_ * b.den_, a.den_ * b.num_};
  }
  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(Rational a, Rational b) {
    return static_cast<__int128>(a.num_) * b.den_ <=> static_cast<__int128>(b.num_) * a.den_;
  }

  std::string str() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  void normalize() {
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    const auto g = std::gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

enum class RegimeTag { kConstant, kLogarithmic, kPower };
enum class RegimeSource { kBroadcastTime, kLiebRobinson, kFrobenius };

inline std::string_view to_string(RegimeTag t) {
  switch (t) {
    case RegimeTag::kConstant: return "constant";
    case RegimeTag::kLogarithmic: return "logarithmic";
    case RegimeTag::kPower: return "power";
  }
  return "?";
}

inline std::string_view to_string(RegimeSource s) {
  switch (s) {
    case RegimeSource::kBroadcastTime: return "t_ghz";
    case RegimeSource::kLiebRobinson: return "lieb_robinson";
    case RegimeSource::kFrobenius: return "frobenius";
  }
  return "?";
}

/// Interval of alpha values; an absent upper end means unbounded.
struct AlphaInterval {
  Rational lower;
  bool lower_closed = true;
  std::optional<Rational> upper;
  bool upper_closed = false;

  bool contains(Rational a) const {
    if (lower_closed ? a < lower : a <= lower) return false;
    if (!upper) return true;
    return upper_closed ? a <= *upper : a < *upper;
  }

  std::string str() const {
    std::string s = lower_closed ? "[" : "(";
    s += lower.str() + ", ";
    s += upper ? upper->str() : std::string("inf");
    s += (upper && upper_closed) ? "]" : ")";
    return s;
  }

  friend bool operator==(const AlphaInterval&, const AlphaInterval&) = default;
};

/// One case of a piecewise scaling law in the distance r (or qubit count n).
/// A power regime scales as x^exponent, divided by log x when
/// `log_divisor` is set. Proportionality constants are deliberately absent.
struct ScalingRegime {
  RegimeSource source = RegimeSource::kBroadcastTime;
  RegimeTag tag = RegimeTag::kConstant;
  Rational exponent;
  bool log_divisor = false;
  AlphaInterval validity;

  bool linear() const { return tag == RegimeTag::kPower && exponent == Rational(1) && !log_divisor; }

  std::string str() const {
    switch (tag) {
      case RegimeTag::kConstant: return "constant";
      case RegimeTag::kLogarithmic: return "logarithmic";
      case RegimeTag::kPower:
        return "power^" + exponent.str() + (log_divisor ? "/log" : "");
    }
    return "?";
  }

  friend bool operator==(const ScalingRegime&, const ScalingRegime&) = default;
};

namespace detail {
inline void check_dimension(int dimension) {
  if (dimension < 1 || dimension > 3) {
    throw Error(ErrorCode::kParameter, "dimension must be in 1..3");
  }
}
}  // namespace detail

/// Broadcast (GHZ construction) time versus n on a D-dimensional lattice.
inline ScalingRegime t_ghz_regime(Rational alpha, int dimension) {
  detail::check_dimension(dimension);
  if (alpha < Rational(0)) throw Error(ErrorCode::kOutOfDomain, "alpha must be nonnegative");
  const Rational d(dimension);
  ScalingRegime r;
  r.source = RegimeSource::kBroadcastTime;
  if (alpha < d) {
    r.tag = RegimeTag::kConstant;
    r.validity = {Rational(0), true, d, false};
  } else if (alpha == d) {
    r.tag = RegimeTag::kLogarithmic;
    r.validity = {d, true, d, true};
  } else if (alpha <= d + 1) {
    r.tag = RegimeTag::kPower;
    r.exponent = (alpha - d) / d;
    r.validity = {d, false, d + 1, true};
  } else {
    r.tag = RegimeTag::kPower;
    r.exponent = Rational(1, dimension);
    r.validity = {d + 1, false, std::nullopt, false};
  }
  return r;
}

/// Lieb-Robinson light-cone lower bound on the QFT/fanout time versus r.
inline ScalingRegime lr_lower_bound(Rational alpha, int dimension) {
  detail::check_dimension(dimension);
  const Rational d(dimension);
  if (alpha < d) {
    throw Error(ErrorCode::kOutOfDomain, "Lieb-Robinson bound needs alpha >= D, got alpha=" +
                                             alpha.str() + " D=" + d.str());
  }
  ScalingRegime r;
  r.source = RegimeSource::kLiebRobinson;
  const Rational two_d = d * 2;
  if (alpha == d) {
    r.tag = RegimeTag::kConstant;
    r.validity = {d, true, d, true};
  } else if (alpha <= two_d) {
    r.tag = RegimeTag::kLogarithmic;
    r.validity = {d, false, two_d, true};
  } else if (alpha <= two_d + 1) {
    r.tag = RegimeTag::kPower;
    r.exponent = (alpha - two_d) / (alpha - d);
    r.validity = {two_d, false, two_d + 1, true};
  } else {
    r.tag = RegimeTag::kPower;
    r.exponent = Rational(1);
    r.validity = {two_d + 1, false, std::nullopt, false};
  }
  return r;
}

/// Frobenius light-cone lower bound (one dimension only).
inline ScalingRegime frob_lower_bound_1d(Rational alpha) {
  const Rational three_halves(3, 2);
  const Rational five_halves(5, 2);
  if (alpha <= three_halves) {
    throw Error(ErrorCode::kOutOfDomain, "Frobenius bound needs alpha > 3/2, got " + alpha.str());
  }
  ScalingRegime r;
  r.source = RegimeSource::kFrobenius;
  r.tag = RegimeTag::kPower;
  if (alpha > five_halves) {
    r.exponent = Rational(1);
    r.validity = {five_halves, false, std::nullopt, false};
  } else {
    r.exponent = alpha - three_halves;
    r.log_divisor = true;
    r.validity = {three_halves, false, five_halves, true};
  }
  return r;
}

struct ScalingSample {
  double n = 0.0;
  double makespan = 0.0;
};

/// For the constant model `value` is max/min; for the logarithmic model it is
/// the slope of makespan against ln n; for the power model it is the slope on
/// log-log axes. `residual` is the RMS deviation in the fitted coordinates.
struct FitReport {
  RegimeTag model = RegimeTag::kConstant;
  double value = 0.0;
  double intercept = 0.0;
  double residual = 0.0;
  std::size_t samples = 0;
};

inline FitReport fit_scaling(const std::vector<ScalingSample>& samples, RegimeTag model) {
  if (samples.size() < 4) {
    throw Error(ErrorCode::kParameter,
                "need at least 4 samples, got " + std::to_string(samples.size()));
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!(samples[i].n > 0.0)) throw Error(ErrorCode::kParameter, "n must be positive");
    if (i > 0 && !(samples[i].n > samples[i - 1].n)) {
      throw Error(ErrorCode::kParameter, "n must be strictly increasing");
    }
  }
  FitReport fit;
  fit.model = model;
  fit.samples = samples.size();
  const auto m = static_cast<double>(samples.size());

  if (model == RegimeTag::kConstant) {
    double lo = samples.front().makespan, hi = lo, mean = 0.0;
    for (const auto& s : samples) {
      lo = std::min(lo, s.makespan);
      hi = std::max(hi, s.makespan);
      mean += s.makespan / m;
    }
    if (!(lo > 0.0)) throw Error(ErrorCode::kParameter, "constant fit needs positive makespans");
    double ss = 0.0;
    for (const auto& s : samples) ss += (s.makespan - mean) * (s.makespan - mean);
    fit.value = hi / lo;
    fit.intercept = mean;
    fit.residual = std::sqrt(ss / m);
    return fit;
  }

  std::vector<double> xs, ys;
  for (const auto& s : samples) {
    xs.push_back(std::log(s.n));
    if (model == RegimeTag::kPower) {
      if (!(s.makespan > 0.0)) throw Error(ErrorCode::kParameter, "power fit needs positive makespans");
      ys.push_back(std::log(s.makespan));
    } else {
      ys.push_back(s.makespan);
    }
  }
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / m;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  fit.value = sxy / sxx;
  fit.intercept = my - fit.value * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (fit.intercept + fit.value * xs[i]);
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / m);
  return fit;
}

/// Finite-size window: drops the smallest `discard` sizes before fitting.
inline std::vector<ScalingSample> fit_window(const std::vector<ScalingSample>& samples,
                                             std::size_t discard = 2) {
  if (samples.size() <= discard) return {};
  return {samples.begin() + static_cast<std::ptrdiff_t>(discard), samples.end()};
}

inline constexpr double kConstantRatioLimit = 3.0;
inline constexpr double kLogResidualFraction = 0.05;
inline constexpr double kPowerExponentTolerance = 0.1;

struct RegimeVerdict {
  ScalingRegime expected;
  FitReport constant_fit;
  FitReport log_fit;
  FitReport power_fit;
  bool pass = false;
  std::string criterion;
};

/// Checks measured makespans against an expected regime. The constant
/// regime is judged on the full sample list (ratio max/min); the others on
/// the finite-size window.
inline RegimeVerdict check_regime(const std::vector<ScalingSample>& samples,
                                  const ScalingRegime& expected, std::size_t discard = 2) {
  RegimeVerdict v;
  v.expected = expected;
  const auto window = fit_window(samples, discard);
  v.constant_fit = fit_scaling(samples, RegimeTag::kConstant);
  v.log_fit = fit_scaling(window, RegimeTag::kLogarithmic);
  v.power_fit = fit_scaling(window, RegimeTag::kPower);
  switch (expected.tag) {
    case RegimeTag::kConstant:
      v.pass = v.constant_fit.value <= kConstantRatioLimit;
      v.criterion = "max/min ratio " + std::to_string(v.constant_fit.value) + " <= 3";
      break;
    case RegimeTag::kLogarithmic:
      v.pass = v.log_fit.value > 0.0 &&
               v.log_fit.residual <= kLogResidualFraction * v.log_fit.value;
      v.criterion = "log-fit residual " + std::to_string(v.log_fit.residual) + " <= 5% of slope " +
                    std::to_string(v.log_fit.value);
      break;
    case RegimeTag::kPower:
      v.pass = std::fabs(v.power_fit.value - expected.exponent.to_double()) <=
               kPowerExponentTolerance;
      v.criterion = "power exponent " + std::to_string(v.power_fit.value) + " within 0.1 of " +
                    expected.exponent.str();
      break;
  }
  return v;
}

}  // namespace lrfanout
