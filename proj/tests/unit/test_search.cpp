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
#include <cstdint>
#include <optional>

#include <gtest/gtest.h>

#include "crglab/lab.hpp"
#include "oracles.hpp"

namespace crglab {
namespace {

bool equal(const Fraction& f, const oracle::Rational& q) {
  return oracle::Rational{f.numerator, f.denominator} == q;
}

SearchResult search(const SearchProblem& problem, int rounds, std::size_t bits,
                    std::optional<Party> first = std::nullopt) {
  SearchOptions options;
  options.first_speaker = first;
  return exhaustive_protocol_search(problem, {rounds, bits}, options);
}

// Values of the brute-force oracle, computed once from its own dense
// enumeration of message functions and frozen here.
TEST(SearchOracle, FrozenValues) {
  EXPECT_EQ(oracle::pv_mix_r1_best(3, 0), (oracle::Rational{2, 3}));
  EXPECT_EQ(oracle::pv_mix_r1_best(3, 1), (oracle::Rational{7, 9}));
  EXPECT_EQ(oracle::pv_mix_r1_best(2, 1), (oracle::Rational{1, 1}));
  EXPECT_EQ(oracle::pv_mix_r1_best(2, 0), (oracle::Rational{3, 4}));
}

TEST(Search, FullInformationOnTwoPoints) {
  const auto problem = SearchProblem::success_on(enumerate_source(Family::pv_mix, {1, 2, 1}));
  const SearchResult result = search(problem, 1, 1);
  EXPECT_DOUBLE_EQ(result.optimum, 1.0);
  EXPECT_EQ(result.exact.numerator, result.exact.denominator);
  ASSERT_TRUE(result.first_speaker.has_value());
  EXPECT_EQ(*result.first_speaker, Party::alice);
}

TEST(Search, NoCommunicationUsesTheBayesRule) {
  const auto problem = SearchProblem::success_on(enumerate_source(Family::pv_mix, {1, 3, 1}));
  const SearchResult result = search(problem, 0, 0);
  EXPECT_TRUE(equal(result.exact, {2, 3}));
  EXPECT_EQ(result.enumeration_size, 0u);
  EXPECT_FALSE(result.first_speaker.has_value());
  // A budget of bits without rounds, or rounds without bits, is the same.
  EXPECT_TRUE(equal(search(problem, 0, 3).exact, {2, 3}));
  EXPECT_TRUE(equal(search(problem, 2, 0).exact, {2, 3}));
}

TEST(Search, MatchesTheBruteForceOracle) {
  for (std::size_t n : {2u, 3u}) {
    const auto problem = SearchProblem::success_on(enumerate_source(Family::pv_mix, {1, n, 1}));
    for (std::size_t bits : {0u, 1u, 2u}) {
      const SearchResult result = search(problem, bits == 0 ? 0 : 1, bits);
      EXPECT_TRUE(equal(result.exact, oracle::pv_mix_r1_best(n, bits)))
          << "n = " << n << ", bits = " << bits << ": " << result.exact.numerator << "/"
          << result.exact.denominator;
    }
  }
}

TEST(Search, MonotoneInRoundsAndBits) {
  const auto problem = SearchProblem::success_on(enumerate_source(Family::pv_mix, {1, 3, 1}));
  double previous_row[4] = {0, 0, 0, 0};
  for (int rounds = 0; rounds <= 2; ++rounds) {
    double previous = 0.0;
    for (std::size_t bits = 0; bits <= 3; ++bits) {
      const double value = search(problem, rounds, bits).optimum;
      EXPECT_GE(value, previous - 1e-15);
      EXPECT_GE(value, previous_row[bits] - 1e-15);
      previous = value;
      previous_row[bits] = value;
    }
  }
}

TEST(Search, FixedFirstSpeakerIsNoBetter) {
  const auto problem = SearchProblem::success_on(enumerate_source(Family::pv_mix, {1, 3, 1}));
  const double both = search(problem, 1, 1).optimum;
  const double alice = search(problem, 1, 1, Party::alice).optimum;
  const double bob = search(problem, 1, 1, Party::bob).optimum;
  EXPECT_DOUBLE_EQ(both, std::max(alice, bob));
}

TEST(Search, DistinguishingAdvantage) {
  const auto problem = SearchProblem::distinguish(enumerate_source(Family::pv_yes, {1, 2, 1}),
                                                  enumerate_source(Family::pv_no, {1, 2, 1}));
  EXPECT_TRUE(problem.is_distinguishing());
  // Each party's view alone has the same law under both families.
  EXPECT_NEAR(search(problem, 0, 0).optimum, 0.0, 1e-15);
  // With pi_1 revealed, the advantage is the input distance 1 - 1/n.
  EXPECT_NEAR(search(problem, 1, 1).optimum, 0.5, 1e-15);
}

TEST(Search, RespectsTheCap) {
  const auto problem = SearchProblem::success_on(enumerate_source(Family::pv_mix, {1, 3, 1}));
  SearchOptions options;
  options.cap = 10;
  EXPECT_THROW(exhaustive_protocol_search(problem, {2, 3}, options), CapExceeded);
}

TEST(Search, ReportsTheOpeningMove) {
  const auto problem = SearchProblem::success_on(enumerate_source(Family::pv_mix, {1, 3, 1}));
  const SearchResult result = search(problem, 1, 1);
  ASSERT_TRUE(result.first_speaker.has_value());
  const std::size_t views = *result.first_speaker == Party::alice ? problem.alice_views()
                                                                   : problem.bob_views();
  EXPECT_EQ(result.first_message.size(), views);
  EXPECT_EQ(result.first_length, 1u);
  const auto j = result.to_json();
  EXPECT_EQ(j.at("objective"), "success");
  EXPECT_EQ(j.at("bits"), 1);
}

}  // namespace
}  // namespace crglab
