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


#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "crglab/infometrics.hpp"
#include "crglab/lab.hpp"
#include "crglab/protocols.hpp"
#include "oracles.hpp"

namespace crglab {
namespace {

TEST(PointerChasing, AgreesOnEverySupportAtom) {
  for (const FamilyParams& p : {FamilyParams{1, 2, 1}, FamilyParams{3, 3, 1}, FamilyParams{2, 3, 2}}) {
    const auto spec = pointer_chasing_skg({p.r, p.n, p.L});
    ASSERT_TRUE(validate(spec).ok());
    const DistTable support = enumerate_source(Family::pcs, p);
    for (const auto& e : support.entries()) {
      const PcsSample s = PcsSample::decode(e.atom);
      const RunRecord run = run_protocol(spec, s.alice, s.bob, 0);
      ASSERT_TRUE(run.keys_agree());
      EXPECT_EQ(run.k_b, s.bob.blocks[s.endpoint()]);
      EXPECT_EQ(run.rounds_used, p.r + 1);
    }
  }
}

TEST(PointerChasing, CommunicationAndSchedule) {
  const auto spec = pointer_chasing_skg({3, 4, 8});
  EXPECT_EQ(spec.first_speaker, Party::bob);
  EXPECT_EQ(spec.declared_bits(), 8u);
  Rng rng(1);
  const PcsSample s = sample_pcs({3, 4, 8}, rng);
  const RunRecord run = run_protocol(spec, s.alice, s.bob, 0);
  EXPECT_EQ(run.bits_used, 8u);
  EXPECT_TRUE(run.transcript.alternates());
  // The transcript lists i_0, ..., i_r.
  Index pointer = s.bob.start;
  const auto chain = s.chain();
  for (std::size_t k = 0; k < run.transcript.rounds(); ++k) {
    EXPECT_EQ(decode_pointer(run.transcript.messages()[k].bits, 0, 4), pointer);
    if (k < chain.size()) pointer = chain[k](pointer);
  }
}

TEST(PointerChasing, TranscriptIsIndependentOfTheKey) {
  for (int r : {1, 3}) {
    const auto spec = pointer_chasing_skg({r, 2, 1});
    const JointTable runs = exact_run_table(spec, enumerate_source(Family::pcs, {r, 2, 1}));
    EXPECT_NEAR(mutual_information(runs, {"transcript"}, {"k_a"}), 0.0, 1e-9);
    EXPECT_NEAR(min_entropy(runs.marginal({"k_a"})), 1.0, 1e-9);
    EXPECT_TRUE(factorizes(runs, {"transcript"}, {"k_a"}));
  }
}

TEST(PointerChasing, ProductInputsAgreeOnlyByChance) {
  const auto spec = pointer_chasing_skg({1, 2, 2});
  const JointTable runs = exact_run_table(spec, enumerate_source(Family::pcs_product, {1, 2, 2}));
  Weight agree = 0;
  for (const auto& e : runs.table().entries()) {
    if (runs.key({"k_a"}, e.atom) == runs.key({"k_b"}, e.atom)) agree += e.weight;
  }
  EXPECT_EQ(agree * 4, runs.table().total());
}

TEST(MeetInMiddle, DecidesCorrectlyEverywhere) {
  for (const FamilyParams& p : {FamilyParams{1, 3, 1}, FamilyParams{3, 3, 1}, FamilyParams{5, 2, 1}}) {
    const auto spec = meet_in_middle_pv({p.r, p.n});
    ASSERT_TRUE(validate(spec).ok());
    EXPECT_EQ(spec.rounds.size(), static_cast<std::size_t>((p.r + 3) / 2));
    EXPECT_EQ(spec.declared_bits(), static_cast<std::size_t>(p.r + 1) * pointer_width(p.n) + 1);
    const Fraction success = success_probability(spec, enumerate_source(Family::pv_mix, p));
    EXPECT_EQ(success.numerator, success.denominator) << "r = " << p.r << ", n = " << p.n;
  }
  EXPECT_THROW(meet_in_middle_pv({2, 3}), std::invalid_argument);
}

TEST(Gf2Hash, RowsAndLinearity) {
  EXPECT_EQ(Gf2Hash::rows_for(0.1), 8u);
  EXPECT_EQ(Gf2Hash::rows_for(0.5), 6u);
  EXPECT_THROW(Gf2Hash::rows_for(0.0), std::invalid_argument);
  EXPECT_THROW(Gf2Hash::rows_for(1.0), std::invalid_argument);
  auto coins = Randomness::seeded(3).stream(CoinSource::shared, "hash");
  const Gf2Hash h = Gf2Hash::draw(8, 8, coins);
  const BitString x = BitString::from_string("10110010");
  const BitString y = BitString::from_string("01100111");
  BitString sum(8);
  for (std::size_t k = 0; k < 8; ++k) sum.set(k, x[k] != y[k]);
  BitString hsum(8);
  for (std::size_t k = 0; k < 8; ++k) hsum.set(k, h(x)[k] != h(y)[k]);
  EXPECT_EQ(h(sum), hsum);
  EXPECT_EQ(h(BitString(8)), BitString(8));
  EXPECT_THROW(h(BitString(7)), std::invalid_argument);
}

TEST(Gf2Hash, CollisionRateForDistinctInputs) {
  const BitString x = BitString::from_string("11000011");
  const BitString y = BitString::from_string("11000010");
  std::size_t collisions = 0;
  constexpr std::size_t trials = 20000;
  for (std::size_t k = 0; k < trials; ++k) {
    auto coins = Randomness::seeded(k).stream(CoinSource::shared, "hash");
    const Gf2Hash h = Gf2Hash::draw(8, 8, coins);
    collisions += h(x) == h(y);
  }
  const double p = 1.0 / 256;
  const double rate = static_cast<double>(collisions) / trials;
  EXPECT_LE(rate, p + 4 * std::sqrt(p * (1 - p) / trials));
}

KeyDistinguisher indicator_verdict() {
  return [](const BitString&, bool indicator) { return indicator; };
}

TEST(HashAugment, AliceLastAddsRowsPlusFourBits) {
  const auto base = pointer_chasing_skg({1, 4, 8});
  const auto spec = hash_equality_augment(base, 0.1, indicator_verdict());
  EXPECT_TRUE(validate(spec).ok());
  EXPECT_EQ(spec.rounds.size(), base.rounds.size() + 1);
  EXPECT_EQ(spec.bit_budget, base.bit_budget + 8 + 4);
  Rng rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const PcsSample s = sample_pcs({1, 4, 8}, rng);
    const RunRecord run = run_protocol(spec, s.alice, s.bob, rng());
    const RunRecord plain = run_protocol(base, s.alice, s.bob, 0);
    EXPECT_TRUE(read_hash_tail(run.transcript).indicator);
    EXPECT_EQ(run.k_a, plain.k_a);
    EXPECT_EQ(run.k_b, plain.k_b);
  }
}

TEST(HashAugment, BobLastAddsRowsPlusTwoBits) {
  const auto base = pointer_chasing_skg({2, 4, 8});
  const auto spec = hash_equality_augment(base, 0.1, indicator_verdict());
  EXPECT_TRUE(validate(spec).ok());
  EXPECT_EQ(spec.bit_budget, base.bit_budget + 8 + 2);
  Rng rng(3);
  std::size_t false_equal = 0;
  std::size_t unequal = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const PcsSample s = sample_pcs_product({2, 4, 8}, rng);
    const RunRecord run = run_protocol(spec, s.alice, s.bob, rng());
    const HashTail tail = read_hash_tail(run.transcript);
    EXPECT_EQ(tail.verdict, tail.indicator);
    if (run.keys_agree()) {
      EXPECT_TRUE(tail.indicator);
    } else {
      ++unequal;
      false_equal += tail.indicator;
    }
  }
  ASSERT_GT(unequal, 1900u);
  EXPECT_LE(static_cast<double>(false_equal) / static_cast<double>(unequal), 0.02);
}

TEST(HashAugment, EmptyBaseGetsAnOpenerAndAReply) {
  PcsProtocol base;
  base.name = "silent";
  base.key_length = 1;
  base.alice_output = [](const PcsAlice& in, const Transcript&, const PartyCoins&) {
    return in.blocks.front();
  };
  base.bob_output = [](const PcsBob& in, const Transcript&, const PartyCoins&) {
    return in.blocks.front();
  };
  const auto spec = hash_equality_augment(base, 0.5, indicator_verdict());
  ASSERT_EQ(spec.rounds.size(), 2u);
  EXPECT_EQ(spec.first_speaker, Party::bob);
  EXPECT_TRUE(validate(spec).ok());
  Rng rng(4);
  const PcsSample s = sample_pcs({1, 2, 1}, rng);
  EXPECT_NO_THROW(run_protocol(spec, s.alice, s.bob, 1));
  EXPECT_THROW(hash_equality_augment(base, 0.5, nullptr), std::invalid_argument);
}

TEST(HashAugment, VerdictUsesTheDistinguisher) {
  const auto base = pointer_chasing_skg({1, 2, 2});
  // T accepts keys starting with 1 regardless of I'.
  const auto spec = hash_equality_augment(
      base, 0.25, [](const BitString& key, bool) { return key[0]; });
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const PcsSample s = sample_pcs({1, 2, 2}, rng);
    const RunRecord run = run_protocol(spec, s.alice, s.bob, rng());
    EXPECT_EQ(read_hash_tail(run.transcript).verdict, run.k_a[0]);
  }
}

TEST(OptimalDistinguisher, AdvantageEqualsTv) {
  Rng rng(6);
  for (int trial = 0; trial < 500; ++trial) {
    const auto [p, q] = oracle::random_table_pair(1 + rng() % 32, rng);
    const AtomDistinguisher t = optimal_distinguisher(p, q);
    EXPECT_EQ(t.advantage(), tv_distance(p, q));
    long double gap = 0;
    for (const auto& e : p.entries()) gap += t(e.atom) * p.probability(e.atom);
    for (const auto& e : q.entries()) gap -= t(e.atom) * q.probability(e.atom);
    EXPECT_NEAR(static_cast<double>(gap), static_cast<double>(oracle::tv(p, q)), 1e-12);
  }
}

TEST(OptimalDistinguisher, KeyAdapter) {
  DistTable::Builder pb("keys");
  pb.add(key_indicator_atom(BitString::from_string("01"), true), 3);
  pb.add(key_indicator_atom(BitString::from_string("10"), false), 1);
  DistTable::Builder qb("keys");
  qb.add(key_indicator_atom(BitString::from_string("10"), false), 1);
  const auto p = std::move(pb).build();
  const auto q = std::move(qb).build();
  const KeyDistinguisher t = as_key_distinguisher(optimal_distinguisher(p, q));
  EXPECT_TRUE(t(BitString::from_string("01"), true));
  EXPECT_FALSE(t(BitString::from_string("10"), false));
  EXPECT_DOUBLE_EQ(optimal_distinguisher(p, q).advantage(), 0.75);
}

}  // namespace
}  // namespace crglab
