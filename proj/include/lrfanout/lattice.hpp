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

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "lrfanout/error.hpp"

namespace lrfanout {

using SiteIndex = std::size_t;

inline constexpr int kMaxDimension = 3;
inline constexpr std::size_t kDefaultSiteCap = std::size_t{1} << 24;

using Coordinate = std::array<std::int64_t, kMaxDimension>;

/// A D-dimensional hypercubic lattice with unit spacing and open boundaries.
/// Sites are numbered in row-major order: the last axis varies fastest.
class LatticeLayout {
 public:
  LatticeLayout() = default;

  LatticeLayout(int dimension, std::vector<std::int64_t> extents,
                std::size_t site_cap = kDefaultSiteCap)
      : dimension_(dimension), extents_(std::move(extents)) {
    if (dimension_ < 1 || dimension_ > kMaxDimension) {
      throw Error(ErrorCode::kInvalidGeometry,
                  "dimension must be in 1..3, got " + std::to_string(dimension_));
    }
    if (static_cast<int>(extents_.size()) != dimension_) {
      throw Error(ErrorCode::kInvalidGeometry, "expected " + std::to_string(dimension_) +
                                                   " extents, got " +
                                                   std::to_string(extents_.size()));
    }
    size_ = 1;
    for (auto e : extents_) {
      if (e <= 0) {
        throw Error(ErrorCode::kInvalidGeometry,
                    "extents must be positive, got " + std::to_string(e));
      }
      if (size_ > site_cap / static_cast<std::size_t>(e)) {
        throw Error(ErrorCode::kCapacity, "lattice exceeds the site cap of " +
                                              std::to_string(site_cap));
      }
      size_ *= static_cast<std::size_t>(e);
    }
    if (size_ > site_cap) {
      throw Error(ErrorCode::kCapacity,
                  "lattice exceeds the site cap of " + std::to_string(site_cap));
    }
    strides_.fill(0);
    std::int64_t stride = 1;
    for (int a = dimension_ - 1; a >= 0; --a) {
      strides_[a] = stride;
      stride *= extents_[a];
    }
  }

  int dimension() const noexcept { return dimension_; }
  const std::vector<std::int64_t>& extents() const noexcept { return extents_; }
  std::size_t size() const noexcept { return size_; }

  Coordinate coordinate(SiteIndex site) const {
    check(site);
    Coordinate c{};
    auto rest = static_cast<std::int64_t>(site);
    for (int a = 0; a < dimension_; ++a) {
      c[a] = rest / strides_[a];
      rest %= strides_[a];
    }
    return c;
  }

  SiteIndex index_of(const Coordinate& c) const {
    std::int64_t idx = 0;
    for (int a = 0; a < dimension_; ++a) {
      if (c[a] < 0 || c[a] >= extents_[a]) {
        throw Error(ErrorCode::kIndex, "coordinate outside the lattice");
      }
      idx += c[a] * strides_[a];
    }
    return static_cast<SiteIndex>(idx);
  }

  bool contains(const Coordinate& c) const noexcept {
    for (int a = 0; a < dimension_; ++a) {
      if (c[a] < 0 || c[a] >= extents_[a]) return false;
    }
    return true;
  }

  std::int64_t squared_distance(SiteIndex i, SiteIndex j) const {
    const auto a = coordinate(i);
    const auto b = coordinate(j);
    std::int64_t d2 = 0;
    for (int k = 0; k < dimension_; ++k) d2 += (a[k] - b[k]) * (a[k] - b[k]);
    return d2;
  }

  double distance(SiteIndex i, SiteIndex j) const {
    return std::sqrt(static_cast<double>(squared_distance(i, j)));
  }

  double diameter() const {
    std::int64_t d2 = 0;
    for (auto e : extents_) d2 += (e - 1) * (e - 1);
    return std::sqrt(static_cast<double>(d2));
  }

  std::string describe() const {
    std::string s = std::to_string(dimension_) + "D[";
    for (std::size_t a = 0; a < extents_.size(); ++a) {
      if (a) s += 'x';
      s += std::to_string(extents_[a]);
    }
    return s + "]";
  }

  friend bool operator==(const LatticeLayout& a, const LatticeLayout& b) {
    return a.dimension_ == b.dimension_ && a.extents_ == b.extents_;
  }

 private:
  void check(SiteIndex site) const {
    if (site >= size_) {
      throw Error(ErrorCode::kIndex, "site " + std::to_string(site) + " out of range [0, " +
                                         std::to_string(size_) + ")");
    }
  }

  int dimension_ = 0;
  std::vector<std::int64_t> extents_;
  Coordinate strides_{};
  std::size_t size_ = 0;
};

inline LatticeLayout build_lattice(int dimension, std::vector<std::int64_t> extents,
                                   std::size_t site_cap = kDefaultSiteCap) {
  return LatticeLayout(dimension, std::move(extents), site_cap);
}

inline double distance(const LatticeLayout& layout, SiteIndex i, SiteIndex j) {
  return layout.distance(i, j);
}

enum class Placement { kCanonical, kInterleaved };

/// Whether each data qubit needs a dedicated adjacent ancilla.
enum class Register { kDataOnly, kWithAncillae };

inline std::string_view to_string(Placement p) {
  return p == Placement::kCanonical ? "canonical" : "interleaved";
}

inline Placement parse_placement(std::string_view s) {
  if (s == "canonical") return Placement::kCanonical;
  if (s == "interleaved") return Placement::kInterleaved;
  throw Error(ErrorCode::kParameter, "unknown placement '" + std::string(s) + "'");
}

struct SiteRole {
  enum class Kind : std::uint8_t { kUnused, kData, kAncilla };
  Kind kind = Kind::kUnused;
  std::size_t index = 0;  // 0-based logical index within its kind

  friend bool operator==(const SiteRole&, const SiteRole&) = default;
};

class QubitAssignment {
 public:
  QubitAssignment(LatticeLayout layout, Placement placement, std::vector<SiteIndex> data,
                  std::vector<SiteIndex> ancillae)
      : layout_(std::move(layout)),
        placement_(placement),
        data_(std::move(data)),
        ancillae_(std::move(ancillae)),
        roles_(layout_.size()) {
    for (std::size_t k = 0; k < data_.size(); ++k) {
      roles_.at(data_[k]) = {SiteRole::Kind::kData, k};
    }
    for (std::size_t k = 0; k < ancillae_.size(); ++k) {
      roles_.at(ancillae_[k]) = {SiteRole::Kind::kAncilla, k};
    }
  }

  const LatticeLayout& layout() const noexcept { return layout_; }
  Placement placement() const noexcept { return placement_; }
  std::size_t qubits() const noexcept { return data_.size(); }
  bool has_ancillae() const noexcept { return !ancillae_.empty(); }

  SiteIndex data_site(std::size_t k) const { return data_.at(k); }
  SiteIndex ancilla_site(std::size_t k) const { return ancillae_.at(k); }
  const std::vector<SiteIndex>& data_sites() const noexcept { return data_; }
  const std::vector<SiteIndex>& ancilla_sites() const noexcept { return ancillae_; }
  const SiteRole& role(SiteIndex site) const { return roles_.at(site); }

  /// Sites a broadcast runs over: the ancillae when present, else the data.
  const std::vector<SiteIndex>& broadcast_sites() const noexcept {
    return has_ancillae() ? ancillae_ : data_;
  }

 private:
  LatticeLayout layout_;
  Placement placement_;
  std::vector<SiteIndex> data_;
  std::vector<SiteIndex> ancillae_;
  std::vector<SiteRole> roles_;
};

/// Places n logical qubits on the layout.
///
/// Canonical: logical qubit k goes to the k-th eligible site in row-major
/// order. With ancillae, a site is eligible when its first coordinate is even
/// and the next site along the first axis exists; that neighbour holds the
/// ancilla.
///
/// Interleaved (1D, data only): chain position 2k-1 holds logical qubit k and
/// position 2k holds qubit n+1-k (1-based).
inline QubitAssignment assign_qubits(const LatticeLayout& layout, std::size_t n,
                                     Placement placement,
                                     Register reg = Register::kDataOnly) {
  if (n == 0) throw Error(ErrorCode::kParameter, "qubit count must be positive");
  const std::size_t needed = reg == Register::kWithAncillae ? 2 * n : n;
  if (layout.size() < needed) {
    throw Error(ErrorCode::kCapacity, "layout " + layout.describe() + " has " +
                                          std::to_string(layout.size()) +
                                          " sites, need " + std::to_string(needed));
  }
  if (placement == Placement::kInterleaved) {
    if (layout.dimension() != 1) {
      throw Error(ErrorCode::kUnsupportedStrategy, "interleaved placement is 1D only");
    }
    if (reg == Register::kWithAncillae) {
      throw Error(ErrorCode::kUnsupportedStrategy,
                  "interleaved placement does not support ancillae");
    }
    std::vector<SiteIndex> data(n);
    for (std::size_t k = 1; 2 * k - 1 <= n; ++k) {
      data[k - 1] = 2 * k - 2;
      if (2 * k <= n) data[n - k] = 2 * k - 1;
    }
    return QubitAssignment(layout, placement, std::move(data), {});
  }

  std::vector<SiteIndex> data;
  std::vector<SiteIndex> ancillae;
  data.reserve(n);
  if (reg == Register::kDataOnly) {
    for (SiteIndex s = 0; s < n; ++s) data.push_back(s);
    return QubitAssignment(layout, placement, std::move(data), {});
  }
  ancillae.reserve(n);
  const auto first_extent = layout.extents()[0];
  for (SiteIndex s = 0; s < layout.size() && data.size() < n; ++s) {
    auto c = layout.coordinate(s);
    if (c[0] % 2 != 0 || c[0] + 1 >= first_extent) continue;
    data.push_back(s);
    c[0] += 1;
    ancillae.push_back(layout.index_of(c));
  }
  if (data.size() < n) {
    throw Error(ErrorCode::kCapacity, "layout " + layout.describe() + " fits only " +
                                          std::to_string(data.size()) +
                                          " data/ancilla pairs, need " + std::to_string(n));
  }
  return QubitAssignment(layout, placement, std::move(data), std::move(ancillae));
}

/// Smallest L with L^dimension >= n.
inline std::int64_t integer_root_ceil(std::size_t n, int dimension) {
  std::int64_t side = 1;
  auto volume = [&](std::int64_t l) {
    std::size_t v = 1;
    for (int a = 0; a < dimension; ++a) v *= static_cast<std::size_t>(l);
    return v;
  };
  while (volume(side) < n) ++side;
  return side;
}

/// Near-cubic data lattice holding n qubits.
inline LatticeLayout data_layout(int dimension, std::size_t n) {
  const auto side = integer_root_ceil(n, dimension);
  return LatticeLayout(dimension,
                       std::vector<std::int64_t>(static_cast<std::size_t>(dimension), side));
}

/// Near-cubic data lattice with the first axis doubled for adjacent ancillae.
inline LatticeLayout fanout_layout(int dimension, std::size_t n) {
  const auto side = integer_root_ceil(n, dimension);
  std::vector<std::int64_t> extents(static_cast<std::size_t>(dimension), side);
  extents[0] *= 2;
  return LatticeLayout(dimension, std::move(extents));
}

}  // namespace lrfanout
