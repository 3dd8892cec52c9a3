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
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "lrfanout/error.hpp"
#include "lrfanout/lattice.hpp"

namespace lrfanout {

inline constexpr double kHalfPi = std::numbers::pi / 2;

/// Maximal coupling strength 1/r^alpha between sites at distance r.
inline double coupling_cap(double r, double alpha) { return std::pow(r, -alpha); }

/// Correctly rounded sum of doubles (Shewchuk's partials). The result does
/// not depend on summation order, and doubling every term doubles the sum
/// exactly.
inline double exact_sum(std::span<const double> values) {
  std::vector<double> partials;
  for (double x : values) {
    std::size_t i = 0;
    for (double y : partials) {
      if (std::fabs(x) < std::fabs(y)) std::swap(x, y);
      const double hi = x + y;
      const double lo = y - (hi - x);
      if (lo != 0.0) partials[i++] = lo;
      x = hi;
    }
    partials.resize(i);
    partials.push_back(x);
  }
  if (partials.empty()) return 0.0;
  // Sum the non-overlapping partials from the top, with half-way correction.
  auto n = partials.size();
  double hi = partials[--n];
  double lo = 0.0;
  while (n > 0) {
    const double x = hi;
    const double y = partials[--n];
    hi = x + y;
    lo = y - (hi - x);
    if (lo != 0.0) break;
  }
  if (n > 0 && ((lo < 0.0 && partials[n - 1] < 0.0) || (lo > 0.0 && partials[n - 1] > 0.0))) {
    const double y = lo * 2.0;
    const double x = hi + y;
    if (y == x - hi) hi = x;
  }
  return hi;
}

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct ControlTerm {
  SiteIndex site = 0;
  double strength = 0.0;

  friend bool operator==(const ControlTerm&, const ControlTerm&) = default;
};

enum class PulseKind { kLocal, kControlledX };

/// One Hamiltonian term sum  sum_i h_i |1><1|_i (x) X_target  switched on for
/// `duration`. A completed controlled-X pulse has duration * sum_i h_i = pi/2.
/// When `phase_correction` is set, the first control also receives diag(1, i)
/// so that the pulse acts as a controlled NOT on correlated controls.
struct Pulse {
  PulseKind kind = PulseKind::kControlledX;
  std::vector<ControlTerm> controls;
  SiteIndex target = 0;
  double duration = 0.0;
  bool phase_correction = false;

  double total_strength() const {
    double s = 0.0;
    for (const auto& c : controls) s += c.strength;
    return s;
  }

  friend bool operator==(const Pulse&, const Pulse&) = default;
};

inline Pulse multicontrol_pulse(std::span<const SiteIndex> controls, SiteIndex target,
                                const LatticeLayout& layout, double alpha) {
  if (controls.empty()) throw Error(ErrorCode::kInvalidPulse, "empty control set");
  Pulse p;
  p.kind = PulseKind::kControlledX;
  p.target = target;
  p.phase_correction = true;
  p.controls.reserve(controls.size());
  std::unordered_set<SiteIndex> seen;
  for (auto c : controls) {
    if (c == target) throw Error(ErrorCode::kInvalidPulse, "target is also a control");
    if (!seen.insert(c).second) {
      throw Error(ErrorCode::kInvalidPulse, "duplicate control " + std::to_string(c));
    }
    p.controls.push_back({c, coupling_cap(layout.distance(c, target), alpha)});
  }
  p.duration = kHalfPi / p.total_strength();
  return p;
}

inline Pulse cnot_pulse(SiteIndex control, SiteIndex target, const LatticeLayout& layout,
                        double alpha) {
  if (control == target) {
    throw Error(ErrorCode::kInvalidPulse, "control equals target " + std::to_string(target));
  }
  const SiteIndex controls[] = {control};
  return multicontrol_pulse(controls, target, layout, alpha);
}

/// Single-qubit X pulse exp(-i t X); counted as pi/2 of wall-clock time.
inline Pulse local_pulse(SiteIndex target) {
  Pulse p;
  p.kind = PulseKind::kLocal;
  p.target = target;
  p.duration = kHalfPi;
  p.phase_correction = true;
  return p;
}

class ScheduleLayer {
 public:
  ScheduleLayer() = default;
  explicit ScheduleLayer(std::vector<Pulse> pulses, bool local = false)
      : pulses_(std::move(pulses)), local_(local) {
    check_commuting();
  }

  const std::vector<Pulse>& pulses() const noexcept { return pulses_; }
  bool local() const noexcept { return local_; }
  bool empty() const noexcept { return pulses_.empty(); }

  double duration() const {
    double d = 0.0;
    for (const auto& p : pulses_) d = std::max(d, p.duration);
    return d;
  }

  friend bool operator==(const ScheduleLayer&, const ScheduleLayer&) = default;

 private:
  // Terms in one layer must commute: a site is targeted at most once and is
  // never both a target and a control.
  void check_commuting() const {
    std::unordered_set<SiteIndex> targets;
    for (const auto& p : pulses_) {
      if (!targets.insert(p.target).second) {
        throw Error(ErrorCode::kInvalidPulse,
                    "site " + std::to_string(p.target) + " targeted twice in one layer");
      }
    }
    for (const auto& p : pulses_) {
      for (const auto& c : p.controls) {
        if (targets.contains(c.site)) {
          throw Error(ErrorCode::kInvalidPulse, "site " + std::to_string(c.site) +
                                                    " is a control and a target in one layer");
        }
      }
    }
  }

  std::vector<Pulse> pulses_;
  bool local_ = false;
};

struct ScheduleMetadata {
  double alpha = 0.0;
  std::string layout;
  std::string protocol;

  friend bool operator==(const ScheduleMetadata&, const ScheduleMetadata&) = default;
};

class ProtocolSchedule {
 public:
  ProtocolSchedule() = default;
  explicit ProtocolSchedule(ScheduleMetadata meta) : meta_(std::move(meta)) {}

  const ScheduleMetadata& metadata() const noexcept { return meta_; }
  ScheduleMetadata& metadata() noexcept { return meta_; }
  const std::vector<ScheduleLayer>& layers() const noexcept { return layers_; }
  bool empty() const noexcept { return layers_.empty(); }

  void add_layer(ScheduleLayer layer) { layers_.push_back(std::move(layer)); }

  void append(const ProtocolSchedule& other) {
    layers_.insert(layers_.end(), other.layers_.begin(), other.layers_.end());
  }

  std::size_t pulse_count() const {
    std::size_t n = 0;
    for (const auto& l : layers_) n += l.pulses().size();
    return n;
  }

  std::vector<double> layer_durations() const {
    std::vector<double> d;
    d.reserve(layers_.size());
    for (const auto& l : layers_) d.push_back(l.duration());
    return d;
  }

  /// Gross makespan: every layer counts.
  double makespan() const { return exact_sum(layer_durations()); }

  /// Makespan excluding layers flagged as short-range local operations.
  double makespan_net() const {
    std::vector<double> d;
    for (const auto& l : layers_) {
      if (!l.local()) d.push_back(l.duration());
    }
    return exact_sum(d);
  }

  friend bool operator==(const ProtocolSchedule&, const ProtocolSchedule&) = default;

 private:
  ScheduleMetadata meta_;
  std::vector<ScheduleLayer> layers_;
};

inline double makespan(const ProtocolSchedule& schedule) { return schedule.makespan(); }

struct PowerLawViolation {
  std::size_t pulse_index = 0;  // position in layer-major order
  std::size_t layer_index = 0;
  SiteIndex control = 0;
  SiteIndex target = 0;
  double strength = 0.0;
  double cap = 0.0;
};

struct PowerLawReport {
  bool pass = true;
  std::vector<PowerLawViolation> violations;
};

inline constexpr double kCapRelativeTolerance = 1e-12;

inline PowerLawReport validate_powerlaw(const ProtocolSchedule& schedule,
                                        const LatticeLayout& layout, double alpha) {
  PowerLawReport report;
  std::size_t pulse_index = 0;
  for (std::size_t li = 0; li < schedule.layers().size(); ++li) {
    for (const auto& p : schedule.layers()[li].pulses()) {
      for (const auto& c : p.controls) {
        const double cap = coupling_cap(layout.distance(c.site, p.target), alpha);
        if (c.strength < 0.0 || c.strength > cap * (1.0 + kCapRelativeTolerance)) {
          report.violations.push_back({pulse_index, li, c.site, p.target, c.strength, cap});
        }
      }
      ++pulse_index;
    }
  }
  report.pass = report.violations.empty();
  return report;
}

// Text format, one pulse per line:
//   layer_index kind target control:strength[,control:strength...] duration phase_flag
// with '-' for an empty control list. Lines starting with '#' carry metadata.

inline void write_schedule(std::ostream& os, const ProtocolSchedule& schedule) {
  const auto& meta = schedule.metadata();
  os << "# lrfanout schedule v1\n";
  os << "# protocol " << (meta.protocol.empty() ? "-" : meta.protocol) << "\n";
  os << "# alpha " << format_double(meta.alpha) << "\n";
  os << "# layout " << (meta.layout.empty() ? "-" : meta.layout) << "\n";
  os << "# layers " << schedule.layers().size() << "\n";
  os << "# local_layers";
  for (std::size_t li = 0; li < schedule.layers().size(); ++li) {
    if (schedule.layers()[li].local()) os << ' ' << li;
  }
  os << "\n";
  for (std::size_t li = 0; li < schedule.layers().size(); ++li) {
    for (const auto& p : schedule.layers()[li].pulses()) {
      os << li << ' ' << (p.kind == PulseKind::kLocal ? "local" : "cx") << ' ' << p.target << ' ';
      if (p.controls.empty()) {
        os << '-';
      } else {
        for (std::size_t k = 0; k < p.controls.size(); ++k) {
          if (k) os << ',';
          os << p.controls[k].site << ':' << format_double(p.controls[k].strength);
        }
      }
      os << ' ' << format_double(p.duration) << ' ' << (p.phase_correction ? 1 : 0) << '\n';
    }
  }
}

inline std::string schedule_to_string(const ProtocolSchedule& schedule) {
  std::ostringstream os;
  write_schedule(os, schedule);
  return os.str();
}

inline ProtocolSchedule read_schedule(std::istream& is) {
  ScheduleMetadata meta;
  std::size_t layer_count = 0;
  std::vector<std::size_t> local_layers;
  std::vector<std::vector<Pulse>> pulses;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::kParse, "schedule line " + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    if (line[0] == '#') {
      std::string hash, key;
      ls >> hash >> key;
      if (key == "protocol") {
        ls >> meta.protocol;
        if (meta.protocol == "-") meta.protocol.clear();
      } else if (key == "alpha") {
        std::string v;
        ls >> v;
        meta.alpha = std::stod(v);
      } else if (key == "layout") {
        ls >> meta.layout;
        if (meta.layout == "-") meta.layout.clear();
      } else if (key == "layers") {
        ls >> layer_count;
      } else if (key == "local_layers") {
        std::size_t li;
        while (ls >> li) local_layers.push_back(li);
      }
      continue;
    }
    std::size_t li = 0;
    std::string kind, controls, duration;
    Pulse p;
    int flag = 0;
    if (!(ls >> li >> kind >> p.target >> controls >> duration >> flag)) fail("malformed pulse");
    if (kind == "cx") {
      p.kind = PulseKind::kControlledX;
    } else if (kind == "local") {
      p.kind = PulseKind::kLocal;
    } else {
      fail("unknown pulse kind '" + kind + "'");
    }
    if (controls != "-") {
      std::istringstream cs(controls);
      std::string term;
      while (std::getline(cs, term, ',')) {
        const auto colon = term.find(':');
        if (colon == std::string::npos) fail("control term without ':'");
        p.controls.push_back({static_cast<SiteIndex>(std::stoull(term.substr(0, colon))),
                              std::stod(term.substr(colon + 1))});
      }
    }
    p.duration = std::stod(duration);
    p.phase_correction = flag != 0;
    if (li >= pulses.size()) pulses.resize(li + 1);
    pulses[li].push_back(std::move(p));
  }
  layer_count = std::max(layer_count, pulses.size());
  pulses.resize(layer_count);
  ProtocolSchedule schedule(meta);
  for (std::size_t li = 0; li < layer_count; ++li) {
    const bool local = std::find(local_layers.begin(), local_layers.end(), li) != local_layers.end();
    schedule.add_layer(ScheduleLayer(std::move(pulses[li]), local));
  }
  return schedule;
}

inline ProtocolSchedule schedule_from_string(const std::string& text) {
  std::istringstream is(text);
  return read_schedule(is);
}

}  // namespace lrfanout
