// Copyright 2026 The crglab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace crglab {

/// Canonical byte encoding of an outcome (an input pair, a transcript, ...).
using Atom = std::string;
using Weight = std::uint64_t;

/// Thrown when an enumeration would exceed its configured support cap.
class CapExceeded : public std::runtime_error {
 public:
  CapExceeded(const std::string& what, double estimate)
      : std::runtime_error(what), estimate_(estimate) {}
  double estimate() const { return estimate_; }

 private:
  double estimate_;
};

inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

/// An exact finite distribution: distinct atoms with positive integer
/// weights. Probabilities are weight / total. Atoms are kept sorted.
///
/// `universe` names the outcome space ("pcs:1,2,1", "pv:3,4", ...); tables
/// are only comparable when their universes agree.
class DistTable {
 public:
  struct Entry {
    Atom atom;
    Weight weight;
  };

  class Builder {
   public:
    explicit Builder(std::string universe) : universe_(std::move(universe)) {}
    void add(Atom atom, Weight weight);
    std::size_t distinct() const { return weights_.size(); }
    /// Throws std::invalid_argument if nothing positive was added.
    DistTable build() &&;

   private:
    std::string universe_;
    std::unordered_map<Atom, Weight> weights_;
  };

  DistTable() = default;

  const std::string& universe() const { return universe_; }
  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  Weight total() const { return total_; }

  Weight weight_of(std::string_view atom) const;
  double probability(std::string_view atom) const {
    return static_cast<double>(weight_of(atom)) / static_cast<double>(total_);
  }

  /// Pushes the distribution forward through `f`, merging equal images.
  DistTable map(const std::function<Atom(std::string_view)>& f,
                std::string universe) const;

  /// Keeps atoms satisfying `keep`; throws std::domain_error if none do.
  DistTable restrict(const std::function<bool(std::string_view)>& keep) const;

  nlohmann::json to_json() const;
  static DistTable from_json(const nlohmann::json& j);

 private:
  std::string universe_;
  std::vector<Entry> entries_;
  Weight total_ = 0;
};

/// Throws std::invalid_argument when the two universes differ.
void require_same_universe(const DistTable& p, const DistTable& q,
                           std::string_view operation);

/// Length-prefixed concatenation; the inverse is split_pair.
Atom pair_atom(std::string_view first, std::string_view second);
std::pair<std::string_view, std::string_view> split_pair(std::string_view atom);

/// Joint law of independent draws from p and q.
DistTable product_table(const DistTable& p, const DistTable& q);

/// 128-bit signed integer for exact cross-multiplied weight comparisons.
__extension__ typedef __int128 WideInt;

/// Checked arithmetic on weights.
Weight checked_add(Weight a, Weight b);
Weight checked_mul(Weight a, Weight b);

std::string to_hex(std::string_view bytes);
std::string from_hex(std::string_view hex);

}  // namespace crglab
