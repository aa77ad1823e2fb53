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


#include <cstdint>
#include <stdexcept>
#include <string>

#include <gtest/gtest.h>

#include "crglab/engine.hpp"

namespace crglab {
namespace {

using Spec = ProtocolSpec<std::uint32_t, std::uint32_t>;

// Alice sends x (2 bits), Bob answers x xor y (2 bits); both output x xor y.
Spec xor_protocol() {
  Spec spec;
  spec.name = "xor";
  spec.first_speaker = Party::alice;
  spec.round_budget = 2;
  spec.bit_budget = 4;
  spec.key_length = 2;
  Round<std::uint32_t, std::uint32_t> first;
  first.speaker = Party::alice;
  first.length = 2;
  first.alice = [](const std::uint32_t& x, const Transcript&, const PartyCoins&) {
    return BitString::from_uint(x, 2);
  };
  Round<std::uint32_t, std::uint32_t> second;
  second.speaker = Party::bob;
  second.length = 2;
  second.bob = [](const std::uint32_t& y, const Transcript& t, const PartyCoins&) {
    return BitString::from_uint(t.messages().front().bits.to_uint() ^ y, 2);
  };
  spec.rounds = {first, second};
  spec.alice_output = [](const std::uint32_t&, const Transcript& t, const PartyCoins&) {
    return t.messages().back().bits;
  };
  spec.bob_output = [](const std::uint32_t& y, const Transcript& t, const PartyCoins&) {
    return BitString::from_uint(t.messages().front().bits.to_uint() ^ y, 2);
  };
  return spec;
}

TEST(Engine, RunsAndRecords) {
  const RunRecord record = run_protocol(xor_protocol(), 2u, 3u, 0);
  EXPECT_EQ(record.rounds_used, 2);
  EXPECT_EQ(record.bits_used, 4u);
  EXPECT_TRUE(record.keys_agree());
  EXPECT_EQ(record.k_a.to_string(), "01");
  EXPECT_TRUE(record.transcript.alternates());
  EXPECT_TRUE(record.transcript.last_bit());
  const auto j = record.to_json();
  EXPECT_EQ(j.at("transcript").size(), 2u);
  EXPECT_EQ(j.at("transcript")[0].at("speaker"), "alice");
  EXPECT_EQ(j.at("k_b"), "01");
  EXPECT_TRUE(validate(xor_protocol()).ok());
}

TEST(Engine, RoundBudgetIsEnforced) {
  Spec spec = xor_protocol();
  spec.round_budget = 1;
  try {
    run_protocol(spec, 1u, 1u, 0);
    FAIL() << "expected ProtocolError";
  } catch (const ProtocolError& e) {
    EXPECT_EQ(e.kind(), ProtocolError::Kind::round_budget);
    EXPECT_EQ(e.round(), 2);
  }
  const auto report = validate(spec);
  EXPECT_TRUE(report.has("round_budget"));
  EXPECT_EQ(report.issues.front().round, 2);
}

TEST(Engine, BitBudgetIsEnforced) {
  Spec spec = xor_protocol();
  spec.bit_budget = 3;
  try {
    run_protocol(spec, 1u, 1u, 0);
    FAIL() << "expected ProtocolError";
  } catch (const ProtocolError& e) {
    EXPECT_EQ(e.kind(), ProtocolError::Kind::bit_budget);
    EXPECT_EQ(e.round(), 2);
  }
  EXPECT_TRUE(validate(spec).has("bit_budget"));
}

TEST(Engine, DeclaredLengthsAreEnforced) {
  Spec spec = xor_protocol();
  spec.rounds[0].alice = [](const std::uint32_t&, const Transcript&, const PartyCoins&) {
    return BitString(3);
  };
  spec.bit_budget = 10;
  try {
    run_protocol(spec, 1u, 1u, 0);
    FAIL() << "expected ProtocolError";
  } catch (const ProtocolError& e) {
    EXPECT_EQ(e.kind(), ProtocolError::Kind::message_length);
    EXPECT_EQ(e.round(), 1);
  }
}

TEST(Engine, KeyLengthIsEnforced) {
  Spec spec = xor_protocol();
  spec.key_length = 3;
  try {
    run_protocol(spec, 1u, 1u, 0);
    FAIL() << "expected ProtocolError";
  } catch (const ProtocolError& e) {
    EXPECT_EQ(e.kind(), ProtocolError::Kind::key_length);
  }
}

TEST(Engine, DeterministicProtocolsMayNotReadCoins) {
  Spec spec = xor_protocol();
  spec.rounds[0].alice = [](const std::uint32_t& x, const Transcript&, const PartyCoins& c) {
    auto stream = c.own("peek");
    stream.next_bit();
    return BitString::from_uint(x, 2);
  };
  EXPECT_THROW(run_protocol(spec, 1u, 1u, 0), ProtocolError);
  spec.randomized = true;
  spec.coins.alice = 1;
  EXPECT_NO_THROW(run_protocol(spec, 1u, 1u, 0));
}

TEST(Engine, SameSeedSameRun) {
  Spec spec = xor_protocol();
  spec.randomized = true;
  spec.coins.shared = 2;
  spec.rounds[0].alice = [](const std::uint32_t& x, const Transcript&, const PartyCoins& c) {
    auto pad = c.shared("pad");
    return BitString::from_uint(x ^ pad.next_bits(2), 2);
  };
  spec.alice_output = [](const std::uint32_t&, const Transcript& t, const PartyCoins&) {
    return t.messages().back().bits;
  };
  spec.bob_output = spec.alice_output;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    EXPECT_EQ(run_protocol(spec, 3u, 1u, seed), run_protocol(spec, 3u, 1u, seed));
  }
}

TEST(Engine, ValidateFlagsStructuralProblems) {
  Spec spec = xor_protocol();
  spec.rounds[1].speaker = Party::alice;
  spec.rounds[1].alice = spec.rounds[0].alice;
  EXPECT_TRUE(validate(spec).has("alternation"));

  Spec zero = xor_protocol();
  zero.round_budget = 0;
  zero.bit_budget = 0;
  EXPECT_TRUE(validate(zero).has("zero_budget"));

  Spec missing = xor_protocol();
  missing.rounds[1].bob = nullptr;
  missing.bob_output = nullptr;
  const auto report = validate(missing);
  EXPECT_TRUE(report.has("missing_message_fn"));
  EXPECT_TRUE(report.has("missing_output_fn"));
  EXPECT_THROW(run_protocol(missing, 1u, 1u, 0), ProtocolError);

  Spec wrong_first = xor_protocol();
  wrong_first.first_speaker = Party::bob;
  EXPECT_TRUE(validate(wrong_first).has("first_speaker"));
  EXPECT_FALSE(validate(wrong_first).to_json().at("ok").get<bool>());
}

TEST(Transcript, EncodingRoundTrips) {
  Transcript t;
  t.append(Party::bob, BitString::from_string("101"));
  t.append(Party::alice, BitString::from_string("000000001"));
  t.append(Party::bob, BitString::from_string("1"));
  EXPECT_EQ(Transcript::decode(t.encode()), t);
  EXPECT_EQ(t.total_bits(), 13u);
  EXPECT_EQ(t.rounds(), 3u);
  EXPECT_TRUE(t.last_bit());
  Transcript empty;
  EXPECT_THROW(empty.last_bit(), std::logic_error);
  EXPECT_NE(t.encode(), empty.encode());
}

TEST(Transcript, SpeakerIsPartOfTheEncoding) {
  Transcript a;
  a.append(Party::alice, BitString::from_string("1"));
  Transcript b;
  b.append(Party::bob, BitString::from_string("1"));
  EXPECT_NE(a.encode(), b.encode());
}

}  // namespace
}  // namespace crglab
