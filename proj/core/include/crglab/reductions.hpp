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
#include <functional>
#include <utility>
#include <vector>

#include "crglab/bits.hpp"
#include "crglab/dist_table.hpp"
#include "crglab/permutation.hpp"
#include "crglab/randomness.hpp"
#include "crglab/sources.hpp"

namespace crglab {

/// Public coins of a reduction: a permutation grid sigma[l][tau] for
/// l in 0..r, tau in 0..t-1, and a pool of n blocks W_k of L bits.
struct SharedRandomness {
  int r = 1;
  std::size_t t = 1;
  std::size_t n = 2;
  std::size_t L = 1;
  std::vector<std::vector<Permutation>> sigma;
  std::vector<BitString> pool;

  static SharedRandomness draw(int r, std::size_t t, std::size_t n, std::size_t L,
                               Rng& rng);
  /// All-identity grid and all-zero pool.
  static SharedRandomness identity(int r, std::size_t t, std::size_t n,
                                   std::size_t L);
};

// t-removal: one instance with L*t-bit blocks becomes t instances with
// L-bit blocks. pi'_{l,tau} = sigma_{l,tau} ∘ pi_l ∘ sigma_{l-1,tau}^{-1},
// i'_tau = sigma_{0,tau}(i), A'_{k,tau} = A_{sigma_{r,tau}^{-1}(k), tau}, so the
// chased endpoint j moves to sigma_{r,tau}(j) together with its block.
// Each side only sees its own input and the shared coins.

std::vector<PcsAlice> t_removal_alice(const PcsAlice& x, const PcsParams& source,
                                      const SharedRandomness& shared);
std::vector<PcsBob> t_removal_bob(const PcsBob& y, const PcsParams& source,
                                  const SharedRandomness& shared);
/// Throws std::invalid_argument on grid/block dimension mismatch.
std::vector<PcsSample> t_removal(const PcsSample& sample,
                                 const SharedRandomness& shared);

/// Private coins Alice uses when embedding a disjointness input: her
/// permutations and one block for every index outside U, in index order.
struct DisjAliceCoins {
  std::vector<Permutation> perms;
  std::vector<BitString> free_blocks;
};

/// Bob's private coins: start pointer, permutations, and one block for
/// every index outside V, in index order.
struct DisjBobCoins {
  Index start = 0;
  std::vector<Permutation> perms;
  std::vector<BitString> free_blocks;
};

/// A_l = W_l for l in U, otherwise a fresh block.
PcsAlice disj_to_crg_alice(const DisjInstance& instance, const SharedRandomness& shared,
                           int r, const DisjAliceCoins& coins);
/// B_l = W_l for l in V, otherwise a fresh block.
PcsBob disj_to_crg_bob(const DisjInstance& instance, const SharedRandomness& shared,
                       int r, const DisjBobCoins& coins);

PcsAlice disj_to_crg_alice(const DisjInstance& instance, const SharedRandomness& shared,
                           int r, Rng& rng);
PcsBob disj_to_crg_bob(const DisjInstance& instance, const SharedRandomness& shared,
                       int r, Rng& rng);

/// Alice sets every A_l = W_l; Bob sets B_{j0} = W_{j0} and draws the rest.
/// `bob_free_blocks` holds the n - 1 blocks for indices other than j0.
std::pair<PcsAlice, PcsBob> pv_to_crg(const PvInstance& instance,
                                      const SharedRandomness& shared,
                                      const std::vector<BitString>& bob_free_blocks);
std::pair<PcsAlice, PcsBob> pv_to_crg(const PvInstance& instance,
                                      const SharedRandomness& shared, Rng& rng);

// Exact laws of the reductions' outputs at tiny scale. Each enumerates the
// source support together with every value of the coins the reduction
// consumes (shared grid and pool, private permutations and blocks), with
// all combinations equally weighted. Throw CapExceeded beyond `cap`.

/// t-fold product of p; atoms nest as pair_atom(pair_atom(a, b), c).
DistTable power_table(const DistTable& p, std::size_t t);

/// Law of the t instances produced from `family` (pcs or pcs-product) at
/// (r, n, L * t), as a power_table atom over (r, n, L) samples.
DistTable t_removal_table(Family family, const PcsParams& target, std::size_t t,
                          std::uint64_t cap = kDefaultEnumerationCap);

/// Law of the embedded PCS pair for intersecting or disjoint inputs.
DistTable disj_to_crg_table(std::size_t n, bool intersecting, int r, std::size_t L,
                            std::uint64_t cap = kDefaultEnumerationCap);

/// Law of the embedded PCS pair for yes- or no-instances.
DistTable pv_to_crg_table(PvDraw draw, const PvParams& params, std::size_t L,
                          std::uint64_t cap = kDefaultEnumerationCap);

/// Alice's first message as a function of her permutations.
using FirstMessage = std::function<std::string(const PvAlice&)>;

/// Restricts a PV table to {m1 = message, i0 = i0, j0 = j0}, keeping integer
/// weights. With `project_inner`, the result is the law of the inner
/// instance (i1, j1, pi_2, ..., pi_{r-1}) encoded as a PV(r - 2, n) atom,
/// where i1 = pi_1(i0) and j1 = pi_r^{-1}(j0).
/// Throws std::domain_error when the event has zero weight and
/// std::invalid_argument for non-PV tables or r < 3 with projection.
DistTable condition_on_message(const DistTable& table, const FirstMessage& m1,
                               const std::string& message, Index i0, Index j0,
                               bool project_inner);

/// The inner-instance atom of a PV(r, n) instance, as used above.
Atom inner_instance_atom(const PvInstance& instance);

}  // namespace crglab
