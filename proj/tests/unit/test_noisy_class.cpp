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
#include <stdexcept>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "crglab/lab.hpp"

namespace crglab {
namespace {

double log2_factorial(std::size_t n) {
  double out = 0.0;
  for (std::size_t k = 2; k <= n; ++k) out += std::log2(static_cast<double>(k));
  return out;
}

double h(double p) { return -p * std::log2(p) - (1 - p) * std::log2(1 - p); }

NoisyClassParams params(std::size_t n, double delta) { return {n, 3, delta, 0.0}; }

DistTable identity_slice(std::size_t n) {
  return enumerate_pv_given_chain(PvDraw::mix, {3, n},
                                  std::vector<Permutation>(3, Permutation::identity(n)));
}

TEST(NoisyClass, MixtureValuesAtFourPoints) {
  const DistTable mix = enumerate_source(Family::pv_mix, {3, 4, 1});
  const NoisyClassReport report = noisy_class_check(mix, params(4, 0.5));
  EXPECT_NEAR(report.at("1a").measured, 2.0, 1e-9);
  EXPECT_NEAR(report.at("1b").measured, 2.0, 1e-9);
  EXPECT_NEAR(report.at("2").measured, 3 * std::log2(24.0), 1e-9);
  EXPECT_NEAR(report.at("2").measured, 13.754887502163468, 1e-9);
  EXPECT_NEAR(report.at("3a").measured, h(5.0 / 8), 1e-9);
  EXPECT_NEAR(report.at("3a").measured, 0.954434002924965, 1e-9);
  EXPECT_NEAR(report.at("4a").measured, std::log2(3.0), 1e-9);
  EXPECT_NEAR(report.at("4b").measured, std::log2(3.0), 1e-9);
  EXPECT_TRUE(report.all_pass());
  ASSERT_EQ(report.independence.size(), 4u);
  for (const auto& ind : report.independence) EXPECT_TRUE(ind.holds) << "t = " << ind.t;
}

TEST(NoisyClass, ConditionFiveFactorizesExactly) {
  for (std::size_t n : {2u, 3u}) {
    const NoisyClassReport report =
        noisy_class_check(enumerate_source(Family::pv_mix, {3, n, 1}), params(n, 0.9));
    EXPECT_TRUE(report.at("5").pass) << "n = " << n;
    EXPECT_TRUE(report.at("5").evaluated);
    for (const auto& ind : report.independence) {
      EXPECT_TRUE(ind.holds);
      EXPECT_GT(ind.checked_cells, 0u);
    }
  }
}

TEST(NoisyClass, SymmetricRouteAgreesWithFullEnumeration) {
  for (std::size_t n : {3u, 4u}) {
    const double delta = n == 3 ? 0.9 : 0.5;
    const auto full = noisy_class_check(enumerate_source(Family::pv_mix, {3, n, 1}), params(n, delta));
    const auto fast = noisy_class_check_symmetric(identity_slice(n), params(n, delta));
    for (const char* id : {"1a", "1b", "2", "3a", "3b", "4a", "4b"}) {
      EXPECT_NEAR(full.at(id).measured, fast.at(id).measured, 1e-9) << id << ", n = " << n;
      EXPECT_EQ(full.at(id).pass, fast.at(id).pass) << id;
    }
    EXPECT_FALSE(fast.at("5").evaluated);
  }
}

TEST(NoisyClass, EightPointsThroughTheSymmetricRoute) {
  const auto report = noisy_class_check_symmetric(identity_slice(8), params(8, 0.25));
  EXPECT_NEAR(report.at("1a").measured, 3.0, 1e-9);
  EXPECT_NEAR(report.at("2").measured, 3 * log2_factorial(8), 1e-9);
  EXPECT_NEAR(report.at("3a").measured, h(0.5 + 1.0 / 16), 1e-9);
  EXPECT_NEAR(report.at("4a").measured, std::log2(7.0), 1e-9);
  EXPECT_TRUE(report.all_pass());
}

TEST(NoisyClass, MixtureIsRelabelInvariant) {
  Rng rng(1);
  EXPECT_TRUE(relabel_invariant(enumerate_source(Family::pv_mix, {3, 3, 1}), 20, rng));
  const DistTable skewed = enumerate_source(Family::pv_mix, {3, 3, 1}).restrict(
      [](std::string_view atom) { return PvInstance::decode(atom).bob.i0 == 0; });
  EXPECT_FALSE(relabel_invariant(skewed, 20, rng));
}

// All-yes inputs make the indicator deterministic, so condition 3a fails.
TEST(NoisyClass, YesOnlyFailsTheIndicatorCondition) {
  const auto report = noisy_class_check(enumerate_source(Family::pv_yes, {3, 3, 1}), params(3, 0.5));
  EXPECT_NEAR(report.at("3a").measured, 0.0, 1e-12);
  EXPECT_FALSE(report.at("3a").pass);
  EXPECT_FALSE(report.all_pass());
}

TEST(NoisyClass, CorrelatedPermutationsBreakConditionFive) {
  const DistTable tied = enumerate_source(Family::pv_mix, {3, 3, 1}).restrict([](std::string_view atom) {
    const auto chain = PvInstance::decode(atom).chain();
    return chain[0] == chain[1];
  });
  const auto report = noisy_class_check(tied, params(3, 0.9));
  EXPECT_FALSE(report.at("5").pass);
  EXPECT_FALSE(report.at("2").pass);
}

TEST(NoisyClass, Validation) {
  const DistTable mix = enumerate_source(Family::pv_mix, {3, 2, 1});
  EXPECT_THROW(noisy_class_check(mix, {2, 3, 1.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(noisy_class_check(mix, {2, 3, 0.5, 2.0}), std::invalid_argument);
  EXPECT_THROW(noisy_class_check(mix, {2, 2, 0.5, 0.0}), std::invalid_argument);
  EXPECT_THROW(noisy_class_check(mix, {3, 3, 0.5, 0.0}), std::invalid_argument);
  EXPECT_THROW(noisy_class_check(enumerate_source(Family::pcs, {1, 2, 1}), {2, 1, 0.5, 0.0}),
               std::invalid_argument);
  const auto report = noisy_class_check(mix, {2, 3, 0.9, 0.0});
  EXPECT_THROW(report.at("9"), std::out_of_range);
  EXPECT_TRUE(report.to_json().contains("conditions"));
}

TEST(NoisyClass, JointCoordinates) {
  const JointTable j = pv_joint(enumerate_source(Family::pv_mix, {3, 2, 1}));
  for (const char* name : {"i0", "j0", "pi1", "pi2", "pi3", "perms", "ind", "i1", "j1"}) {
    EXPECT_TRUE(j.has(name)) << name;
  }
  EXPECT_NEAR(cond_entropy(j, {"i0"}, {"perms"}), 1.0, 1e-12);
}

}  // namespace
}  // namespace crglab
