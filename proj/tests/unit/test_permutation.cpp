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


#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "crglab/bits.hpp"
#include "crglab/permutation.hpp"
#include "crglab/randomness.hpp"
#include "oracles.hpp"

namespace crglab {
namespace {

TEST(BitString, RoundTripsThroughIntegers) {
  const BitString b = BitString::from_uint(0b1011, 6);
  EXPECT_EQ(b.to_string(), "001011");
  EXPECT_EQ(b.to_uint(), 11u);
  EXPECT_EQ(b.to_uint(2, 3), 0b101u);
  EXPECT_EQ(BitString::from_string("001011"), b);
  EXPECT_THROW(BitString::from_uint(64, 6), std::invalid_argument);
  EXPECT_THROW(BitString::from_string("012"), std::invalid_argument);
}

TEST(BitString, SliceAppendAndPacking) {
  BitString b = BitString::from_string("1100");
  b.append(BitString::from_string("10101"));
  EXPECT_EQ(b.size(), 9u);
  EXPECT_EQ(b.slice(3, 4).to_string(), "0101");
  EXPECT_THROW(b.slice(7, 3), std::out_of_range);
  const std::string packed = b.packed();
  ASSERT_EQ(packed.size(), 2u);
  EXPECT_EQ(static_cast<unsigned char>(packed[0]), 0b11001010u);
  EXPECT_EQ(static_cast<unsigned char>(packed[1]), 0b10000000u);
}

TEST(BitString, PointerWidthIsCeilLog2) {
  EXPECT_EQ(pointer_width(1), 0u);
  EXPECT_EQ(pointer_width(2), 1u);
  EXPECT_EQ(pointer_width(3), 2u);
  EXPECT_EQ(pointer_width(4), 2u);
  EXPECT_EQ(pointer_width(5), 3u);
  EXPECT_EQ(pointer_width(8), 3u);
  EXPECT_EQ(pointer_width(9), 4u);
  EXPECT_THROW(pointer_width(0), std::invalid_argument);
}

TEST(BitString, PointersRoundTrip) {
  for (std::size_t n : {2u, 3u, 5u, 8u, 13u}) {
    BitString out;
    for (std::uint32_t v = 0; v < n; ++v) encode_pointer(out, v, n);
    for (std::uint32_t v = 0; v < n; ++v) {
      EXPECT_EQ(decode_pointer(out, v * pointer_width(n), n), v);
    }
    EXPECT_THROW(encode_pointer(out, static_cast<std::uint32_t>(n), n), std::invalid_argument);
  }
}

TEST(Permutation, RejectsNonBijections) {
  EXPECT_THROW(Permutation::from_images({0, 0, 1}), std::invalid_argument);
  EXPECT_THROW(Permutation::from_images({0, 3, 1}), std::invalid_argument);
  EXPECT_THROW(Permutation::from_images({}), std::invalid_argument);
  EXPECT_NO_THROW(Permutation::from_images({2, 0, 1}));
}

TEST(Permutation, ComposeAndInverse) {
  const auto p = Permutation::from_images({2, 0, 1, 3});
  const auto q = Permutation::from_images({1, 3, 0, 2});
  const auto pq = compose(p, q);
  for (Index k = 0; k < 4; ++k) EXPECT_EQ(pq(k), p(q(k)));
  EXPECT_TRUE(compose(p, p.inverse()).is_identity());
  EXPECT_TRUE(compose(q.inverse(), q).is_identity());
  EXPECT_THROW(compose(p, Permutation::identity(3)), std::invalid_argument);
}

TEST(Permutation, ChaseAppliesInOrder) {
  const std::vector<Permutation> chain = {Permutation::from_images({1, 2, 0}),
                                          Permutation::from_images({0, 2, 1})};
  EXPECT_EQ(chase(chain, 0), 2u);  // 0 -> 1 -> 2
  EXPECT_EQ(chase(chain, 2), 0u);  // 2 -> 0 -> 0
  EXPECT_EQ(chase({}, 1), 1u);
  EXPECT_THROW(chase(chain, 3), std::invalid_argument);
}

TEST(Permutation, EnumerationIsCompleteAndSorted) {
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto all = all_permutations(n);
    EXPECT_EQ(all.size(), factorial(n));
    EXPECT_TRUE(std::is_sorted(all.begin(), all.end()));
    EXPECT_EQ(std::set<Permutation>(all.begin(), all.end()).size(), all.size());
  }
  EXPECT_EQ(factorial(20), 2432902008176640000ull);
  EXPECT_THROW(factorial(21), std::overflow_error);
}

// Uniformity of random_permutation on S_4 by Pearson's test.
TEST(Permutation, RandomPermutationIsUniform) {
  const auto all = all_permutations(4);
  std::map<Permutation, std::size_t> index;
  for (std::size_t k = 0; k < all.size(); ++k) index[all[k]] = k;
  std::vector<std::uint64_t> counts(all.size(), 0);
  Rng rng(20260101);
  for (int trial = 0; trial < 48000; ++trial) ++counts[index.at(random_permutation(4, rng))];
  const std::vector<double> expected(all.size(), 1.0 / static_cast<double>(all.size()));
  EXPECT_GT(oracle::chi_square_p_value(counts, expected), 1e-3);
}

// Every position is equally likely to receive every value.
TEST(Permutation, RandomPermutationPositionsAreUniform) {
  constexpr std::size_t n = 7;
  std::vector<std::uint64_t> cells(n * n, 0);
  Rng rng(7);
  for (int trial = 0; trial < 70000; ++trial) {
    const auto p = random_permutation(n, rng);
    for (Index k = 0; k < n; ++k) ++cells[k * n + p(k)];
  }
  for (std::size_t position = 0; position < n; ++position) {
    std::vector<std::uint64_t> row(cells.begin() + position * n, cells.begin() + (position + 1) * n);
    EXPECT_GT(oracle::chi_square_p_value(row, std::vector<double>(n, 1.0 / n)), 1e-4);
  }
}

TEST(Randomness, SeededStreamsAreReproducibleAndSeparated) {
  const auto a = Randomness::seeded(99);
  const auto b = Randomness::seeded(99);
  auto s1 = a.stream(CoinSource::alice, "x");
  auto s2 = b.stream(CoinSource::alice, "x");
  EXPECT_EQ(s1.next_bits(64), s2.next_bits(64));
  auto alice = a.stream(CoinSource::alice, "y");
  auto bob = a.stream(CoinSource::bob, "y");
  auto shared = a.stream(CoinSource::shared, "y");
  const auto va = alice.next_bits(64);
  const auto vb = bob.next_bits(64);
  const auto vs = shared.next_bits(64);
  EXPECT_NE(va, vb);
  EXPECT_NE(va, vs);
  EXPECT_NE(vb, vs);
  EXPECT_GT(a.reads(), 0u);
}

TEST(Randomness, EnumeratedStreamsReadFixedBits) {
  const auto coins = Randomness::enumerated(BitString::from_string("101"), BitString(),
                                            BitString::from_string("0110"));
  auto alice = coins.stream(CoinSource::alice, "any");
  EXPECT_TRUE(alice.next_bit());
  EXPECT_EQ(alice.next_bits(2), 0b01u);
  EXPECT_THROW(alice.next_bit(), std::out_of_range);
  auto again = coins.stream(CoinSource::alice, "other");
  EXPECT_TRUE(again.next_bit());
  auto shared = coins.stream(CoinSource::shared, "s");
  EXPECT_EQ(shared.next_bitstring(4).to_string(), "0110");
  auto bob = coins.stream(CoinSource::bob, "b");
  EXPECT_THROW(bob.uniform_below(3), std::logic_error);
}

TEST(Randomness, UniformBelowIsUniform) {
  auto stream = Randomness::seeded(5).stream(CoinSource::shared, "u");
  std::vector<std::uint64_t> counts(6, 0);
  for (int k = 0; k < 60000; ++k) ++counts[stream.uniform_below(6)];
  EXPECT_GT(oracle::chi_square_p_value(counts, std::vector<double>(6, 1.0 / 6)), 1e-3);
}

TEST(Randomness, DeriveSeedSeparatesIndices) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t k = 0; k < 10000; ++k) seen.insert(derive_seed(1, k));
  EXPECT_EQ(seen.size(), 10000u);
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
  EXPECT_EQ(fnv1a(""), 14695981039346656037ull);
}

}  // namespace
}  // namespace crglab
