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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "crglab/bits.hpp"
#include "crglab/dist_table.hpp"
#include "crglab/permutation.hpp"
#include "crglab/randomness.hpp"

namespace crglab {

// ---------------------------------------------------------------------------
// Pointer chasing source and its relatives (product, hybrid).

struct PcsParams {
  int r = 1;
  std::size_t n = 2;
  std::size_t L = 1;

  void validate() const;
  std::string universe() const;
  int alice_perm_count() const { return (r + 1) / 2; }
  int bob_perm_count() const { return r / 2; }
  friend bool operator==(const PcsParams&, const PcsParams&) = default;
};

/// Alice's part: pi_1, pi_3, ... and blocks A_0..A_{n-1}.
struct PcsAlice {
  std::vector<Permutation> perms;
  std::vector<BitString> blocks;
  friend bool operator==(const PcsAlice&, const PcsAlice&) = default;
};

/// Bob's part: the start pointer, pi_2, pi_4, ... and blocks B_0..B_{n-1}.
struct PcsBob {
  Index start = 0;
  std::vector<Permutation> perms;
  std::vector<BitString> blocks;
  friend bool operator==(const PcsBob&, const PcsBob&) = default;
};

struct PcsSample {
  PcsParams params;
  PcsAlice alice;
  PcsBob bob;

  /// pi_1, ..., pi_r in chasing order.
  std::vector<Permutation> chain() const;
  /// pi_r(...pi_1(start)...).
  Index endpoint() const;

  Atom encode() const;
  static PcsSample decode(std::string_view atom);
  nlohmann::json to_json() const;

  friend bool operator==(const PcsSample&, const PcsSample&) = default;
};

/// Draw from the pointer chasing source: A_j = B_j at the chased index j.
PcsSample sample_pcs(const PcsParams& params, Rng& rng);
/// Alice's and Bob's marginals drawn independently.
PcsSample sample_pcs_product(const PcsParams& params, Rng& rng);
/// A_j = B_j at an independent uniform j the permutations do not lead to.
PcsSample sample_mid(const PcsParams& params, Rng& rng);

BitString random_block(std::size_t length, Rng& rng);

// ---------------------------------------------------------------------------
// Pointer verification.

struct PvParams {
  int r = 1;
  std::size_t n = 2;

  /// Requires odd r >= 1 and n >= 1.
  void validate() const;
  std::string universe() const;
  int alice_perm_count() const { return (r + 1) / 2; }
  int bob_perm_count() const { return r / 2; }
  friend bool operator==(const PvParams&, const PvParams&) = default;
};

enum class PvLabel : std::uint8_t { yes, no, unlabeled };
enum class PvDraw : std::uint8_t { yes, no, mix };

struct PvAlice {
  std::vector<Permutation> perms;  // pi_1, pi_3, ..., pi_r
  friend bool operator==(const PvAlice&, const PvAlice&) = default;
};

struct PvBob {
  Index i0 = 0;
  Index j0 = 0;
  std::vector<Permutation> perms;  // pi_2, pi_4, ..., pi_{r-1}
  friend bool operator==(const PvBob&, const PvBob&) = default;
};

struct PvInstance {
  PvParams params;
  PvAlice alice;
  PvBob bob;
  /// Which branch produced the instance; not part of the encoding.
  PvLabel label = PvLabel::unlabeled;

  std::vector<Permutation> chain() const;
  /// True iff chasing from i0 lands on j0.
  bool chase_holds() const;

  Atom encode() const;
  static PvInstance decode(std::string_view atom);
  nlohmann::json to_json() const;
};

/// Throws std::invalid_argument on even r.
PvInstance sample_pv(const PvParams& params, PvDraw draw, Rng& rng);

// ---------------------------------------------------------------------------
// Set disjointness inputs with |U| = |V| = n/4.

struct DisjInstance {
  std::size_t n = 4;
  std::vector<Index> u;  // sorted
  std::vector<Index> v;  // sorted

  std::size_t intersection_size() const;
  bool contains_u(Index k) const;
  bool contains_v(Index k) const;

  Atom encode() const;
  static DisjInstance decode(std::string_view atom);
  nlohmann::json to_json() const;
};

/// Uniform over pairs with |U ∩ V| = 1 (intersecting) or 0.
/// Throws std::invalid_argument unless n is a positive multiple of 4.
DisjInstance sample_disj(std::size_t n, bool intersecting, Rng& rng);

// ---------------------------------------------------------------------------
// Families and exact enumeration.

enum class Family : std::uint8_t {
  pcs,
  pcs_product,
  pcs_mid,
  pv_yes,
  pv_no,
  pv_mix,
  disj_yes,
  disj_no,
};

struct FamilyParams {
  int r = 1;
  std::size_t n = 2;
  std::size_t L = 1;
};

std::string family_name(Family family);
/// Accepts the names produced by family_name; throws std::invalid_argument.
Family parse_family(std::string_view name);
bool is_pcs_family(Family family);
bool is_pv_family(Family family);

/// Validates the family's parameter constraints; throws std::invalid_argument.
void validate_family(Family family, const FamilyParams& params);

std::string family_universe(Family family, const FamilyParams& params);

/// One draw of the family as (atom, JSON record).
std::pair<Atom, nlohmann::json> sample_family(Family family, const FamilyParams& params,
                                              Rng& rng);

/// Number of (equally weighted, before merging) combinations enumerated.
double support_combinations(Family family, const FamilyParams& params);

/// Largest block length enumeration accepts.
inline constexpr std::size_t kMaxEnumeratedBlockBits = 2;

/// Calls `visit` once per combination of the family's sampling coins.
/// Every combination carries weight 1 except for pv_mix, which uses the
/// common denominator 2 |support(no)|: yes-combinations weigh n and
/// no-combinations weigh 1.
void for_each_pcs(Family family, const PcsParams& params, std::uint64_t cap,
                  const std::function<void(const PcsSample&)>& visit);
void for_each_pv(PvDraw draw, const PvParams& params, std::uint64_t cap,
                 const std::function<void(const PvInstance&, Weight)>& visit);
void for_each_disj(std::size_t n, bool intersecting, std::uint64_t cap,
                   const std::function<void(const DisjInstance&)>& visit);

/// Exact table of the family. Throws CapExceeded if the combination count
/// exceeds `cap`.
DistTable enumerate_source(Family family, const FamilyParams& params,
                           std::uint64_t cap = kDefaultEnumerationCap);

/// The law of (i0, j0) given the permutation chain, as a table of PV atoms
/// that all carry `chain`.
DistTable enumerate_pv_given_chain(PvDraw draw, const PvParams& params,
                                   std::span<const Permutation> chain);

/// Calls `visit(tuple)` for every tuple in S_n^count (lexicographic).
void for_each_perm_tuple(
    std::size_t n, int count,
    const std::function<void(std::span<const Permutation>)>& visit);

/// Alice's and Bob's views of a PCS, PV or disjointness atom, each as a
/// canonical byte string.
std::pair<std::string, std::string> party_views(std::string_view atom);

}  // namespace crglab
