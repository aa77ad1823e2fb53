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

#include "crglab/reductions.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace crglab {

namespace {

void check_grid(const SharedRandomness& shared, int r, std::size_t n) {
  if (shared.r != r || shared.n != n) {
    throw std::invalid_argument("shared randomness drawn for (r, n) = (" +
                                std::to_string(shared.r) + ", " + std::to_string(shared.n) +
                                "), instance has (" + std::to_string(r) + ", " +
                                std::to_string(n) + ")");
  }
  if (shared.sigma.size() != static_cast<std::size_t>(r) + 1) {
    throw std::invalid_argument("shared randomness: sigma grid needs r + 1 rows");
  }
  for (const auto& row : shared.sigma) {
    if (row.size() != shared.t) throw std::invalid_argument("shared randomness: sigma row length differs from t");
    for (const auto& s : row) {
      if (s.size() != n) throw std::invalid_argument("shared randomness: sigma size differs from n");
    }
  }
}

void check_pool(const SharedRandomness& shared, std::size_t n, std::size_t L) {
  if (shared.pool.size() != n) {
    throw std::invalid_argument("shared randomness: pool has " + std::to_string(shared.pool.size()) +
                                " blocks, expected " + std::to_string(n));
  }
  for (const auto& w : shared.pool) {
    if (w.size() != L) throw std::invalid_argument("shared randomness: pool block length differs");
  }
}

void check_source(const PcsParams& source, const SharedRandomness& shared) {
  source.validate();
  check_grid(shared, source.r, source.n);
  if (shared.t == 0 || source.L != shared.L * shared.t) {
    throw std::invalid_argument("t_removal: block length " + std::to_string(source.L) +
                                " is not L * t = " + std::to_string(shared.L) + " * " +
                                std::to_string(shared.t));
  }
}

/// sigma_l ∘ pi ∘ sigma_{l-1}^{-1}
Permutation conjugate(const SharedRandomness& shared, int l, std::size_t tau,
                      const Permutation& pi) {
  const auto& out = shared.sigma[static_cast<std::size_t>(l)][tau];
  const auto& in = shared.sigma[static_cast<std::size_t>(l - 1)][tau];
  return compose(out, compose(pi, in.inverse()));
}

std::vector<BitString> relabel_blocks(const std::vector<BitString>& blocks,
                                      const SharedRandomness& shared, std::size_t tau) {
  const auto& last = shared.sigma[static_cast<std::size_t>(shared.r)][tau];
  const Permutation back = last.inverse();
  std::vector<BitString> out;
  out.reserve(blocks.size());
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    out.push_back(blocks.at(back(static_cast<Index>(k))).slice(tau * shared.L, shared.L));
  }
  return out;
}

void check_blocks(const std::vector<BitString>& blocks, std::size_t n, std::size_t L,
                  const char* who) {
  if (blocks.size() != n) throw std::invalid_argument(std::string(who) + ": expected n blocks");
  for (const auto& b : blocks) {
    if (b.size() != L) throw std::invalid_argument(std::string(who) + ": block length differs");
  }
}

}  // namespace

SharedRandomness SharedRandomness::draw(int r, std::size_t t, std::size_t n, std::size_t L,
                                        Rng& rng) {
  SharedRandomness s{r, t, n, L, {}, {}};
  s.sigma.resize(static_cast<std::size_t>(r) + 1);
  for (auto& row : s.sigma) {
    for (std::size_t tau = 0; tau < t; ++tau) row.push_back(random_permutation(n, rng));
  }
  for (std::size_t k = 0; k < n; ++k) s.pool.push_back(random_block(L, rng));
  return s;
}

SharedRandomness SharedRandomness::identity(int r, std::size_t t, std::size_t n,
                                            std::size_t L) {
  SharedRandomness s{r, t, n, L, {}, {}};
  s.sigma.assign(static_cast<std::size_t>(r) + 1,
                 std::vector<Permutation>(t, Permutation::identity(n)));
  s.pool.assign(n, BitString(L));
  return s;
}

std::vector<PcsAlice> t_removal_alice(const PcsAlice& x, const PcsParams& source,
                                      const SharedRandomness& shared) {
  check_source(source, shared);
  check_blocks(x.blocks, source.n, source.L, "t_removal (Alice)");
  std::vector<PcsAlice> out(shared.t);
  for (std::size_t tau = 0; tau < shared.t; ++tau) {
    for (std::size_t k = 0; k < x.perms.size(); ++k) {
      out[tau].perms.push_back(conjugate(shared, static_cast<int>(2 * k + 1), tau, x.perms[k]));
    }
    out[tau].blocks = relabel_blocks(x.blocks, shared, tau);
  }
  return out;
}

std::vector<PcsBob> t_removal_bob(const PcsBob& y, const PcsParams& source,
                                  const SharedRandomness& shared) {
  check_source(source, shared);
  check_blocks(y.blocks, source.n, source.L, "t_removal (Bob)");
  std::vector<PcsBob> out(shared.t);
  for (std::size_t tau = 0; tau < shared.t; ++tau) {
    out[tau].start = shared.sigma[0][tau](y.start);
    for (std::size_t k = 0; k < y.perms.size(); ++k) {
      out[tau].perms.push_back(conjugate(shared, static_cast<int>(2 * k + 2), tau, y.perms[k]));
    }
    out[tau].blocks = relabel_blocks(y.blocks, shared, tau);
  }
  return out;
}

std::vector<PcsSample> t_removal(const PcsSample& sample, const SharedRandomness& shared) {
  auto alice = t_removal_alice(sample.alice, sample.params, shared);
  auto bob = t_removal_bob(sample.bob, sample.params, shared);
  std::vector<PcsSample> out(shared.t);
  for (std::size_t tau = 0; tau < shared.t; ++tau) {
    out[tau].params = {sample.params.r, sample.params.n, shared.L};
    out[tau].alice = std::move(alice[tau]);
    out[tau].bob = std::move(bob[tau]);
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

template <class Contains>
std::vector<BitString> embed_blocks(std::size_t n, const SharedRandomness& shared,
                                    const std::vector<BitString>& free_blocks,
                                    Contains contains, const char* who) {
  std::vector<BitString> blocks;
  blocks.reserve(n);
  std::size_t next = 0;
  for (Index k = 0; k < n; ++k) {
    if (contains(k)) {
      blocks.push_back(shared.pool[k]);
    } else {
      if (next >= free_blocks.size()) throw std::invalid_argument(std::string(who) + ": too few free blocks");
      if (free_blocks[next].size() != shared.L) throw std::invalid_argument(std::string(who) + ": free block length differs");
      blocks.push_back(free_blocks[next++]);
    }
  }
  if (next != free_blocks.size()) throw std::invalid_argument(std::string(who) + ": too many free blocks");
  return blocks;
}

void check_perms(const std::vector<Permutation>& perms, int count, std::size_t n,
                 const char* who) {
  if (static_cast<int>(perms.size()) != count) {
    throw std::invalid_argument(std::string(who) + ": expected " + std::to_string(count) +
                                " permutations");
  }
  for (const auto& p : perms) {
    if (p.size() != n) throw std::invalid_argument(std::string(who) + ": permutation size differs");
  }
}

}  // namespace

PcsAlice disj_to_crg_alice(const DisjInstance& instance, const SharedRandomness& shared,
                           int r, const DisjAliceCoins& coins) {
  check_pool(shared, instance.n, shared.L);
  check_perms(coins.perms, (r + 1) / 2, instance.n, "disj_to_crg (Alice)");
  PcsAlice out;
  out.perms = coins.perms;
  out.blocks = embed_blocks(instance.n, shared, coins.free_blocks,
                            [&](Index k) { return instance.contains_u(k); }, "disj_to_crg (Alice)");
  return out;
}

PcsBob disj_to_crg_bob(const DisjInstance& instance, const SharedRandomness& shared, int r,
                       const DisjBobCoins& coins) {
  check_pool(shared, instance.n, shared.L);
  check_perms(coins.perms, r / 2, instance.n, "disj_to_crg (Bob)");
  if (coins.start >= instance.n) throw std::invalid_argument("disj_to_crg (Bob): start out of range");
  PcsBob out;
  out.start = coins.start;
  out.perms = coins.perms;
  out.blocks = embed_blocks(instance.n, shared, coins.free_blocks,
                            [&](Index k) { return instance.contains_v(k); }, "disj_to_crg (Bob)");
  return out;
}

PcsAlice disj_to_crg_alice(const DisjInstance& instance, const SharedRandomness& shared,
                           int r, Rng& rng) {
  DisjAliceCoins coins;
  for (int k = 0; k < (r + 1) / 2; ++k) coins.perms.push_back(random_permutation(instance.n, rng));
  for (std::size_t k = 0; k < instance.n - instance.u.size(); ++k) {
    coins.free_blocks.push_back(random_block(shared.L, rng));
  }
  return disj_to_crg_alice(instance, shared, r, coins);
}

PcsBob disj_to_crg_bob(const DisjInstance& instance, const SharedRandomness& shared, int r,
                       Rng& rng) {
  DisjBobCoins coins;
  coins.start = static_cast<Index>(std::uniform_int_distribution<std::size_t>(0, instance.n - 1)(rng));
  for (int k = 0; k < r / 2; ++k) coins.perms.push_back(random_permutation(instance.n, rng));
  for (std::size_t k = 0; k < instance.n - instance.v.size(); ++k) {
    coins.free_blocks.push_back(random_block(shared.L, rng));
  }
  return disj_to_crg_bob(instance, shared, r, coins);
}

std::pair<PcsAlice, PcsBob> pv_to_crg(const PvInstance& instance, const SharedRandomness& shared,
                                      const std::vector<BitString>& bob_free_blocks) {
  const std::size_t n = instance.params.n;
  check_pool(shared, n, shared.L);
  PcsAlice alice{instance.alice.perms, shared.pool};
  PcsBob bob;
  bob.start = instance.bob.i0;
  bob.perms = instance.bob.perms;
  bob.blocks = embed_blocks(n, shared, bob_free_blocks,
                            [&](Index k) { return k == instance.bob.j0; }, "pv_to_crg (Bob)");
  return {std::move(alice), std::move(bob)};
}

std::pair<PcsAlice, PcsBob> pv_to_crg(const PvInstance& instance, const SharedRandomness& shared,
                                      Rng& rng) {
  std::vector<BitString> free_blocks;
  for (std::size_t k = 0; k + 1 < instance.params.n; ++k) free_blocks.push_back(random_block(shared.L, rng));
  return pv_to_crg(instance, shared, free_blocks);
}

// ---------------------------------------------------------------------------

Atom inner_instance_atom(const PvInstance& instance) {
  const int r = instance.params.r;
  if (r < 3) throw std::invalid_argument("inner_instance_atom: needs r >= 3");
  const auto chain = instance.chain();
  PvInstance inner;
  inner.params = {r - 2, instance.params.n};
  for (int l = 1; l < r - 1; ++l) {
    ((l - 1) % 2 == 0 ? inner.alice.perms : inner.bob.perms).push_back(chain[static_cast<std::size_t>(l)]);
  }
  inner.bob.i0 = chain.front()(instance.bob.i0);
  inner.bob.j0 = chain.back().inverse()(instance.bob.j0);
  return inner.encode();
}

DistTable condition_on_message(const DistTable& table, const FirstMessage& m1,
                               const std::string& message, Index i0, Index j0,
                               bool project_inner) {
  if (table.universe().rfind("pv:", 0) != 0) {
    throw std::invalid_argument("condition_on_message: not a pointer-verification table");
  }
  if (!m1) throw std::invalid_argument("condition_on_message: message function undefined");
  DistTable restricted = table.restrict([&](std::string_view atom) {
    const auto v = PvInstance::decode(atom);
    return v.bob.i0 == i0 && v.bob.j0 == j0 && m1(v.alice) == message;
  });
  if (!project_inner) return restricted;
  const auto first = PvInstance::decode(restricted.entries().front().atom);
  if (first.params.r < 3) {
    throw std::invalid_argument("condition_on_message: projection needs r >= 3");
  }
  return restricted.map(
      [](std::string_view atom) { return inner_instance_atom(PvInstance::decode(atom)); },
      PvParams{first.params.r - 2, first.params.n}.universe());
}

namespace {

/// Calls visit(blocks) for every vector of `count` blocks of L bits.
void for_each_blocks(std::size_t count, std::size_t L,
                     const std::function<void(const std::vector<BitString>&)>& visit) {
  const std::size_t bits = count * L;
  if (bits >= 63) throw std::length_error("block enumeration too large");
  std::vector<BitString> blocks(count);
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << bits); ++v) {
    const BitString all = BitString::from_uint(v, bits);
    for (std::size_t k = 0; k < count; ++k) blocks[k] = all.slice(k * L, L);
    visit(blocks);
  }
}

void check_reduction_cap(double combos, std::uint64_t cap, const char* what) {
  if (combos > static_cast<double>(cap)) {
    throw CapExceeded(std::string(what) + ": " + std::to_string(static_cast<long double>(combos)) +
                          " combinations exceed the cap of " + std::to_string(cap),
                      combos);
  }
}

double perm_tuples(std::size_t n, int count) {
  return std::pow(static_cast<double>(factorial(n)), count);
}

}  // namespace

DistTable power_table(const DistTable& p, std::size_t t) {
  if (t == 0) throw std::invalid_argument("power_table: t must be >= 1");
  DistTable out = p;
  for (std::size_t k = 1; k < t; ++k) out = product_table(out, p);
  return out;
}

DistTable t_removal_table(Family family, const PcsParams& target, std::size_t t,
                          std::uint64_t cap) {
  if (family != Family::pcs && family != Family::pcs_product) {
    throw std::invalid_argument("t_removal_table: family must be pcs or pcs-product");
  }
  target.validate();
  const PcsParams source{target.r, target.n, target.L * t};
  const DistTable inputs = enumerate_source(family, {source.r, source.n, source.L}, cap);
  const int grid = (target.r + 1) * static_cast<int>(t);
  check_reduction_cap(static_cast<double>(inputs.size()) * perm_tuples(target.n, grid), cap,
                      "t_removal_table");
  const DistTable unit = enumerate_source(family, {target.r, target.n, target.L}, cap);
  DistTable::Builder builder(power_table(unit, t).universe());
  SharedRandomness shared = SharedRandomness::identity(target.r, t, target.n, target.L);
  for (const auto& entry : inputs.entries()) {
    const PcsSample sample = PcsSample::decode(entry.atom);
    for_each_perm_tuple(target.n, grid, [&](std::span<const Permutation> sigmas) {
      for (int l = 0; l <= target.r; ++l) {
        for (std::size_t tau = 0; tau < t; ++tau) {
          shared.sigma[static_cast<std::size_t>(l)][tau] =
              sigmas[static_cast<std::size_t>(l) * t + tau];
        }
      }
      const auto outputs = t_removal(sample, shared);
      Atom atom = outputs.front().encode();
      for (std::size_t tau = 1; tau < t; ++tau) atom = pair_atom(atom, outputs[tau].encode());
      builder.add(std::move(atom), entry.weight);
    });
  }
  return std::move(builder).build();
}

DistTable disj_to_crg_table(std::size_t n, bool intersecting, int r, std::size_t L,
                            std::uint64_t cap) {
  PcsParams{r, n, L}.validate();
  const std::size_t q = n / 4;
  const double instances =
      support_combinations(intersecting ? Family::disj_yes : Family::disj_no, {r, n, L});
  const double combos = instances * std::exp2(static_cast<double>(n * L)) *
                        perm_tuples(n, (r + 1) / 2) * perm_tuples(n, r / 2) * static_cast<double>(n) *
                        std::exp2(static_cast<double>(2 * (n - q) * L));
  check_reduction_cap(combos, cap, "disj_to_crg_table");
  DistTable::Builder builder(PcsParams{r, n, L}.universe());
  SharedRandomness shared = SharedRandomness::identity(r, 0, n, L);
  for_each_disj(n, intersecting, cap, [&](const DisjInstance& d) {
    for_each_blocks(n, L, [&](const std::vector<BitString>& pool) {
      shared.pool = pool;
      for_each_perm_tuple(n, (r + 1) / 2, [&](std::span<const Permutation> alice_perms) {
        for_each_blocks(n - q, L, [&](const std::vector<BitString>& alice_free) {
          DisjAliceCoins ac{{alice_perms.begin(), alice_perms.end()}, alice_free};
          const PcsAlice alice = disj_to_crg_alice(d, shared, r, ac);
          for (Index start = 0; start < n; ++start) {
            auto bob_side = [&](std::span<const Permutation> bob_perms) {
              for_each_blocks(n - q, L, [&](const std::vector<BitString>& bob_free) {
                DisjBobCoins bc{start, {bob_perms.begin(), bob_perms.end()}, bob_free};
                PcsSample s{{r, n, L}, alice, disj_to_crg_bob(d, shared, r, bc)};
                builder.add(s.encode(), 1);
              });
            };
            if (r / 2 == 0) {
              bob_side({});
            } else {
              for_each_perm_tuple(n, r / 2, bob_side);
            }
          }
        });
      });
    });
  });
  return std::move(builder).build();
}

DistTable pv_to_crg_table(PvDraw draw, const PvParams& params, std::size_t L, std::uint64_t cap) {
  if (draw == PvDraw::mix) throw std::invalid_argument("pv_to_crg_table: use yes or no");
  params.validate();
  PcsParams{params.r, params.n, L}.validate();
  const std::size_t n = params.n;
  const double instances =
      support_combinations(draw == PvDraw::yes ? Family::pv_yes : Family::pv_no, {params.r, n, L});
  check_reduction_cap(instances * std::exp2(static_cast<double>((2 * n - 1) * L)), cap,
                      "pv_to_crg_table");
  DistTable::Builder builder(PcsParams{params.r, n, L}.universe());
  SharedRandomness shared = SharedRandomness::identity(params.r, 0, n, L);
  for_each_pv(draw, params, cap, [&](const PvInstance& v, Weight w) {
    for_each_blocks(n, L, [&](const std::vector<BitString>& pool) {
      shared.pool = pool;
      for_each_blocks(n - 1, L, [&](const std::vector<BitString>& bob_free) {
        auto [alice, bob] = pv_to_crg(v, shared, bob_free);
        PcsSample s{{params.r, n, L}, std::move(alice), std::move(bob)};
        builder.add(s.encode(), w);
      });
    });
  });
  return std::move(builder).build();
}

}  // namespace crglab
