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
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lrfanout/bounds.hpp"
#include "lrfanout/error.hpp"
#include "lrfanout/lattice.hpp"
#include "lrfanout/schedule.hpp"

namespace lrfanout {

enum class BroadcastStrategy { kAuto, kDoubling, kCascade };

inline std::string_view to_string(BroadcastStrategy s) {
  switch (s) {
    case BroadcastStrategy::kAuto: return "auto";
    case BroadcastStrategy::kDoubling: return "doubling";
    case BroadcastStrategy::kCascade: return "cascade";
  }
  return "?";
}

/// One parallel layer of the broadcast. The cluster driving it is the first
/// `cluster_size` entries of BroadcastPlan::claim_order.
struct BroadcastRound {
  std::size_t cluster_size = 0;
  std::vector<SiteIndex> targets;
  /// Cascade rounds: the single control of each target. Empty for doubling
  /// rounds, where the whole cluster drives every target.
  std::vector<SiteIndex> drivers;
  /// Largest distance from the root to a target of this round.
  double max_target_distance = 0.0;
  double layer_duration = 0.0;
};

struct BroadcastOptions {
  BroadcastStrategy strategy = BroadcastStrategy::kAuto;
  /// Build the pulse-level schedule. Large plans can be summarized without it.
  bool materialize = true;
  /// Upper bound on the total number of control terms when materializing.
  std::size_t max_control_terms = std::size_t{1} << 24;
  /// Compute doubling layer durations, which costs one cap lookup per
  /// (cluster member, target) pair. Untimed plans keep only the round
  /// structure and leave every duration at zero; they need an explicit
  /// strategy.
  bool timed = true;
};

struct BroadcastPlan {
  ProtocolSchedule schedule;
  bool materialized = false;
  BroadcastStrategy strategy = BroadcastStrategy::kDoubling;
  SiteIndex root = 0;
  std::vector<SiteIndex> participants;
  /// Root first, then each round's targets in order.
  std::vector<SiteIndex> claim_order;
  std::vector<BroadcastRound> rounds;

  std::span<const SiteIndex> cluster(std::size_t round) const {
    return std::span<const SiteIndex>(claim_order).first(rounds.at(round).cluster_size);
  }

  std::vector<double> layer_durations() const {
    std::vector<double> d;
    d.reserve(rounds.size());
    for (const auto& r : rounds) d.push_back(r.layer_duration);
    return d;
  }

  /// Broadcast time t_GHZ of this plan.
  double makespan() const { return exact_sum(layer_durations()); }

  std::size_t control_terms() const {
    std::size_t terms = 0;
    for (const auto& r : rounds) {
      terms += r.drivers.empty() ? r.cluster_size * r.targets.size() : r.targets.size();
    }
    return terms;
  }
};

namespace detail {

/// Coupling caps indexed by the per-axis absolute displacement between two
/// sites. Values are bit-identical to coupling_cap(layout.distance(i, j), a).
class CapTable {
 public:
  CapTable(const LatticeLayout& layout, double alpha) : dimension_(layout.dimension()) {
    const auto& ext = layout.extents();
    std::int64_t stride = 1;
    for (int a = dimension_ - 1; a >= 0; --a) {
      strides_[a] = stride;
      stride *= ext[a];
    }
    table_.resize(static_cast<std::size_t>(stride));
    for (std::int64_t idx = 0; idx < stride; ++idx) {
      std::int64_t rest = idx;
      std::int64_t d2 = 0;
      for (int a = 0; a < dimension_; ++a) {
        const auto delta = rest / strides_[a];
        rest %= strides_[a];
        d2 += delta * delta;
      }
      table_[static_cast<std::size_t>(idx)] =
          coupling_cap(std::sqrt(static_cast<double>(d2)), alpha);
    }
  }

  double operator()(const Coordinate& a, const Coordinate& b) const {
    std::int64_t idx = 0;
    for (int k = 0; k < dimension_; ++k) {
      const auto d = a[k] - b[k];
      idx += (d < 0 ? -d : d) * strides_[k];
    }
    return table_[static_cast<std::size_t>(idx)];
  }

 private:
  int dimension_;
  Coordinate strides_{};
  std::vector<double> table_;
};

inline std::vector<Coordinate> coordinates_of(const LatticeLayout& layout,
                                              std::span<const SiteIndex> sites) {
  std::vector<Coordinate> out;
  out.reserve(sites.size());
  for (auto s : sites) out.push_back(layout.coordinate(s));
  return out;
}

// Doubling plan: round k matches the current cluster of m sites with the next
// m unclaimed participants closest to the root; every cluster member drives
// every target, so a target's completion time is pi / (2 sum_i r_i^-alpha).
inline BroadcastPlan doubling_rounds(const LatticeLayout& layout,
                                     const std::vector<SiteIndex>& participants, SiteIndex root,
                                     double alpha, bool timed = true) {
  BroadcastPlan plan;
  plan.strategy = BroadcastStrategy::kDoubling;
  plan.root = root;
  plan.participants = participants;
  std::vector<std::pair<std::int64_t, SiteIndex>> keyed;
  keyed.reserve(participants.size());
  for (auto s : participants) keyed.emplace_back(layout.squared_distance(root, s), s);
  std::sort(keyed.begin(), keyed.end());
  plan.claim_order.reserve(keyed.size());
  for (const auto& [d2, s] : keyed) plan.claim_order.push_back(s);

  const auto caps = timed ? std::optional<CapTable>(std::in_place, layout, alpha) : std::nullopt;
  const auto coords = timed ? coordinates_of(layout, plan.claim_order) : std::vector<Coordinate>{};
  const std::size_t n = plan.claim_order.size();
  std::size_t m = 1;
  while (m < n) {
    const std::size_t count = std::min(m, n - m);
    BroadcastRound round;
    round.cluster_size = m;
    round.targets.assign(plan.claim_order.begin() + static_cast<std::ptrdiff_t>(m),
                         plan.claim_order.begin() + static_cast<std::ptrdiff_t>(m + count));
    double slowest = 0.0;
    for (std::size_t j = m; timed && j < m + count; ++j) {
      double strength = 0.0;
      for (std::size_t i = 0; i < m; ++i) strength += (*caps)(coords[i], coords[j]);
      slowest = std::max(slowest, kHalfPi / strength);
    }
    round.layer_duration = slowest;
    round.max_target_distance =
        std::sqrt(static_cast<double>(keyed[m + count - 1].first));
    plan.rounds.push_back(std::move(round));
    m += count;
  }
  return plan;
}

// Nearest-neighbour cascade: the participants form a graph linking pairs no
// farther apart than the shortest length that connects it. Each layer,
// every cluster member with an unclaimed neighbour drives one of them with a
// single CNOT pulse. Returns nothing when the graph is not connected within
// the search radius.
inline std::optional<BroadcastPlan> cascade_rounds(const LatticeLayout& layout,
                                                   const std::vector<SiteIndex>& participants,
                                                   SiteIndex root, double alpha) {
  constexpr std::int64_t kSearchRadius = 3;
  const int dim = layout.dimension();

  struct Offset {
    std::int64_t d2;
    Coordinate delta;
  };
  std::vector<Offset> offsets;
  {
    Coordinate lo{}, hi{};
    for (int a = 0; a < dim; ++a) {
      lo[a] = -kSearchRadius;
      hi[a] = kSearchRadius;
    }
    Coordinate c = lo;
    while (true) {
      std::int64_t d2 = 0;
      for (int a = 0; a < dim; ++a) d2 += c[a] * c[a];
      if (d2 > 0) offsets.push_back({d2, c});
      int a = dim - 1;
      while (a >= 0 && c[a] == hi[a]) {
        c[a] = lo[a];
        --a;
      }
      if (a < 0) break;
      ++c[a];
    }
    std::stable_sort(offsets.begin(), offsets.end(),
                     [](const Offset& x, const Offset& y) { return x.d2 < y.d2; });
  }

  std::unordered_map<SiteIndex, std::size_t> slot;
  slot.reserve(participants.size() * 2);
  for (std::size_t k = 0; k < participants.size(); ++k) slot.emplace(participants[k], k);
  auto neighbour = [&](SiteIndex s, const Offset& off) -> std::optional<SiteIndex> {
    auto c = layout.coordinate(s);
    for (int a = 0; a < dim; ++a) c[a] += off.delta[a];
    if (!layout.contains(c)) return std::nullopt;
    const auto t = layout.index_of(c);
    if (!slot.contains(t)) return std::nullopt;
    return t;
  };

  // Smallest link length at which the participant graph is connected.
  auto connected = [&](std::int64_t d2max) {
    std::vector<char> seen(participants.size(), 0);
    std::vector<SiteIndex> stack{root};
    seen[slot.at(root)] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
      const auto s = stack.back();
      stack.pop_back();
      for (const auto& off : offsets) {
        if (off.d2 > d2max) break;
        const auto t = neighbour(s, off);
        if (!t || seen[slot.at(*t)]) continue;
        seen[slot.at(*t)] = 1;
        ++reached;
        stack.push_back(*t);
      }
    }
    return reached == participants.size();
  };
  std::int64_t link2 = 0;
  if (participants.size() > 1) {
    std::int64_t tried = 0;
    for (const auto& off : offsets) {
      if (off.d2 == tried) continue;
      tried = off.d2;
      if (connected(tried)) {
        link2 = tried;
        break;
      }
    }
    if (link2 == 0) return std::nullopt;
  }

  BroadcastPlan plan;
  plan.strategy = BroadcastStrategy::kCascade;
  plan.root = root;
  plan.participants = participants;
  plan.claim_order.push_back(root);
  std::vector<char> claimed(participants.size(), 0);
  claimed[slot.at(root)] = 1;
  std::vector<SiteIndex> active{root};

  while (plan.claim_order.size() < participants.size()) {
    BroadcastRound round;
    round.cluster_size = plan.claim_order.size();
    double slowest = 0.0;
    double farthest = 0.0;
    std::vector<SiteIndex> still_active;
    for (auto c : active) {
      bool has_more = false;
      bool drove = false;
      for (const auto& off : offsets) {
        if (off.d2 > link2) break;
        const auto t = neighbour(c, off);
        if (!t || claimed[slot.at(*t)]) continue;
        if (drove) {
          has_more = true;
          break;
        }
        claimed[slot.at(*t)] = 1;
        round.targets.push_back(*t);
        round.drivers.push_back(c);
        slowest = std::max(slowest, kHalfPi / coupling_cap(layout.distance(c, *t), alpha));
        farthest = std::max(farthest, layout.distance(root, *t));
        drove = true;
      }
      if (has_more) still_active.push_back(c);
    }
    if (round.targets.empty()) return std::nullopt;
    for (auto t : round.targets) {
      plan.claim_order.push_back(t);
      still_active.push_back(t);
    }
    active = std::move(still_active);
    round.layer_duration = slowest;
    round.max_target_distance = farthest;
    plan.rounds.push_back(std::move(round));
  }
  return plan;
}

inline void materialize(BroadcastPlan& plan, const LatticeLayout& layout, double alpha,
                        std::size_t max_control_terms) {
  if (plan.control_terms() > max_control_terms) {
    throw Error(ErrorCode::kCapacity, "broadcast plan has " +
                                          std::to_string(plan.control_terms()) +
                                          " control terms; materialization cap is " +
                                          std::to_string(max_control_terms));
  }
  ProtocolSchedule schedule(
      {alpha, layout.describe(), std::string("broadcast-") + std::string(to_string(plan.strategy))});
  for (std::size_t k = 0; k < plan.rounds.size(); ++k) {
    const auto& round = plan.rounds[k];
    std::vector<Pulse> pulses;
    pulses.reserve(round.targets.size());
    for (std::size_t j = 0; j < round.targets.size(); ++j) {
      if (round.drivers.empty()) {
        pulses.push_back(multicontrol_pulse(plan.cluster(k), round.targets[j], layout, alpha));
      } else {
        pulses.push_back(cnot_pulse(round.drivers[j], round.targets[j], layout, alpha));
      }
    }
    schedule.add_layer(ScheduleLayer(std::move(pulses)));
  }
  plan.schedule = std::move(schedule);
  plan.materialized = true;
}

}  // namespace detail

/// Broadcast over an explicit participant list; `root` indexes into it.
inline BroadcastPlan plan_broadcast(const LatticeLayout& layout,
                                    const std::vector<SiteIndex>& participants,
                                    std::size_t root, double alpha,
                                    const BroadcastOptions& options = {}) {
  if (root >= participants.size()) {
    throw Error(ErrorCode::kInvalidRoot, "root " + std::to_string(root) +
                                             " is not one of the " +
                                             std::to_string(participants.size()) +
                                             " participants");
  }
  if (!(alpha >= 0.0)) throw Error(ErrorCode::kParameter, "alpha must be nonnegative");
  const SiteIndex root_site = participants[root];

  if (!options.timed && options.strategy == BroadcastStrategy::kAuto) {
    throw Error(ErrorCode::kParameter, "untimed plans need an explicit strategy");
  }

  BroadcastPlan plan;
  switch (options.strategy) {
    case BroadcastStrategy::kDoubling:
      plan = detail::doubling_rounds(layout, participants, root_site, alpha, options.timed);
      break;
    case BroadcastStrategy::kCascade: {
      auto cascade = detail::cascade_rounds(layout, participants, root_site, alpha);
      if (!cascade) {
        throw Error(ErrorCode::kUnsupportedStrategy,
                    "participants are not connected at nearest-neighbour range");
      }
      plan = std::move(*cascade);
      break;
    }
    case BroadcastStrategy::kAuto: {
      plan = detail::doubling_rounds(layout, participants, root_site, alpha);
      if (alpha > layout.dimension() + 1) {
        auto cascade = detail::cascade_rounds(layout, participants, root_site, alpha);
        if (cascade && cascade->makespan() < plan.makespan()) plan = std::move(*cascade);
      }
      break;
    }
  }
  if (options.materialize) detail::materialize(plan, layout, alpha, options.max_control_terms);
  return plan;
}

/// Broadcast over the assignment's ancillae when it has them, else over its
/// data qubits; `root` is a 0-based logical index.
inline BroadcastPlan plan_broadcast(const QubitAssignment& assignment, double alpha,
                                    std::size_t root = 0, const BroadcastOptions& options = {}) {
  return plan_broadcast(assignment.layout(), assignment.broadcast_sites(), root, alpha, options);
}

/// Layers in reverse order. Each completed pulse is its own inverse on the
/// correlated subspace, and its diagonal correction commutes with it.
inline ProtocolSchedule reverse_schedule(const ProtocolSchedule& schedule) {
  ProtocolSchedule out(schedule.metadata());
  for (auto it = schedule.layers().rbegin(); it != schedule.layers().rend(); ++it) {
    out.add_layer(*it);
  }
  return out;
}

namespace detail {
inline void check_fanout(const QubitAssignment& assignment) {
  if (!assignment.has_ancillae()) {
    throw Error(ErrorCode::kParameter, "fanout needs an assignment with ancillae");
  }
  if (assignment.qubits() < 2) {
    throw Error(ErrorCode::kTrivialFanout, "fanout needs at least 2 data qubits, got " +
                                               std::to_string(assignment.qubits()));
  }
}
}  // namespace detail

/// Fanout controlled by data qubit 1 onto data qubits 2..n:
///   CNOT(d1->a1); broadcast a1 -> a2..an; CNOT(ai->di) for i >= 2 in one layer;
///   reversed broadcast; CNOT(d1->a1).
/// The three CNOT layers are nearest-neighbour and flagged local.
inline ProtocolSchedule plan_fanout(const QubitAssignment& assignment, double alpha,
                                    const BroadcastOptions& options = {}) {
  detail::check_fanout(assignment);
  const auto& layout = assignment.layout();
  auto bopts = options;
  bopts.materialize = true;
  const auto broadcast = plan_broadcast(assignment, alpha, 0, bopts);

  const auto d1 = assignment.data_site(0);
  const auto a1 = assignment.ancilla_site(0);
  ProtocolSchedule schedule({alpha, layout.describe(), "fanout"});
  schedule.add_layer(ScheduleLayer({cnot_pulse(d1, a1, layout, alpha)}, true));
  schedule.append(broadcast.schedule);
  std::vector<Pulse> transfer;
  for (std::size_t i = 1; i < assignment.qubits(); ++i) {
    transfer.push_back(
        cnot_pulse(assignment.ancilla_site(i), assignment.data_site(i), layout, alpha));
  }
  schedule.add_layer(ScheduleLayer(std::move(transfer), true));
  schedule.append(reverse_schedule(broadcast.schedule));
  schedule.add_layer(ScheduleLayer({cnot_pulse(d1, a1, layout, alpha)}, true));
  return schedule;
}

/// Plan-level fanout accounting without building pulses.
struct FanoutSummary {
  BroadcastPlan broadcast;
  double local_layer_duration = 0.0;
  std::size_t layer_count = 0;
  double makespan_net = 0.0;
  double makespan_gross = 0.0;
};

inline FanoutSummary summarize_fanout(const QubitAssignment& assignment, double alpha,
                                      const BroadcastOptions& options = {}) {
  detail::check_fanout(assignment);
  const auto& layout = assignment.layout();
  FanoutSummary s;
  s.broadcast = plan_broadcast(assignment, alpha, 0, options);
  // Every local layer is a set of distance-1 CNOTs.
  s.local_layer_duration =
      kHalfPi / coupling_cap(layout.distance(assignment.data_site(0), assignment.ancilla_site(0)),
                             alpha);
  const auto forward = s.broadcast.layer_durations();
  std::vector<double> net(forward);
  net.insert(net.end(), forward.rbegin(), forward.rend());
  s.makespan_net = exact_sum(net);
  std::vector<double> gross(net);
  gross.insert(gross.end(), 3, s.local_layer_duration);
  s.makespan_gross = exact_sum(gross);
  s.layer_count = 3 + 2 * forward.size();
  return s;
}

}  // namespace lrfanout
