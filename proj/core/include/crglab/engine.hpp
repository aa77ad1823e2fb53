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
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "crglab/bits.hpp"
#include "crglab/dist_table.hpp"
#include "crglab/randomness.hpp"

namespace crglab {

enum class Party : std::uint8_t { alice, bob };

inline Party other(Party p) { return p == Party::alice ? Party::bob : Party::alice; }
std::string_view party_name(Party p);

struct Message {
  Party speaker;
  BitString bits;
  friend bool operator==(const Message&, const Message&) = default;
};

/// Speaker-tagged messages in the order they were sent.
class Transcript {
 public:
  void append(Party speaker, BitString bits);

  const std::vector<Message>& messages() const { return messages_; }
  std::size_t rounds() const { return messages_.size(); }
  std::size_t total_bits() const;
  bool alternates() const;

  /// Last bit of the last message; throws std::logic_error when empty.
  bool last_bit() const;

  Atom encode() const;
  static Transcript decode(std::string_view atom);
  nlohmann::json to_json() const;

  friend bool operator==(const Transcript&, const Transcript&) = default;

 private:
  std::vector<Message> messages_;
};

/// What one party may read: its own private coins and the public coins.
class PartyCoins {
 public:
  PartyCoins(const Randomness& randomness, Party who)
      : randomness_(&randomness), who_(who) {}

  RandomStream own(std::string_view label) const {
    return randomness_->stream(
        who_ == Party::alice ? CoinSource::alice : CoinSource::bob, label);
  }
  RandomStream shared(std::string_view label) const {
    return randomness_->stream(CoinSource::shared, label);
  }
  Party who() const { return who_; }

 private:
  const Randomness* randomness_;
  Party who_;
};

template <class In>
using MessageFn =
    std::function<BitString(const In&, const Transcript&, const PartyCoins&)>;
template <class In>
using OutputFn =
    std::function<BitString(const In&, const Transcript&, const PartyCoins&)>;

template <class AliceIn, class BobIn>
struct Round {
  Party speaker = Party::alice;
  std::size_t length = 0;
  MessageFn<AliceIn> alice;  // used when speaker == alice
  MessageFn<BobIn> bob;      // used when speaker == bob
};

/// Coin bits a randomized protocol reads per run; exact enumeration
/// iterates over all 2^(alice + bob + shared) outcomes.
struct CoinBudget {
  std::size_t alice = 0;
  std::size_t bob = 0;
  std::size_t shared = 0;
  std::size_t total() const { return alice + bob + shared; }
};

/// An (r, c)-protocol: at most `round_budget` messages (one message is one
/// round) totalling at most `bit_budget` bits. Output keys are not charged.
template <class AliceIn, class BobIn>
struct ProtocolSpec {
  using AliceInput = AliceIn;
  using BobInput = BobIn;

  std::string name;
  Party first_speaker = Party::alice;
  int round_budget = 0;
  std::size_t bit_budget = 0;
  std::vector<Round<AliceIn, BobIn>> rounds;
  OutputFn<AliceIn> alice_output;
  OutputFn<BobIn> bob_output;
  std::size_t key_length = 0;
  /// Deterministic protocols must never read coins; the engine checks.
  bool randomized = false;
  CoinBudget coins;

  std::size_t declared_bits() const {
    std::size_t total = 0;
    for (const auto& round : rounds) total += round.length;
    return total;
  }
};

struct RunRecord {
  Transcript transcript;
  BitString k_a;
  BitString k_b;
  int rounds_used = 0;
  std::size_t bits_used = 0;

  bool keys_agree() const { return k_a == k_b; }
  nlohmann::json to_json() const;
  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

class ProtocolError : public std::runtime_error {
 public:
  enum class Kind {
    round_budget,
    bit_budget,
    message_length,
    missing_function,
    key_length,
    randomness,
  };

  ProtocolError(Kind kind, int round, const std::string& what)
      : std::runtime_error(what), kind_(kind), round_(round) {}

  Kind kind() const { return kind_; }
  /// 1-based offending round, or 0 for output-phase errors.
  int round() const { return round_; }

 private:
  Kind kind_;
  int round_;
};

/// Executes `spec` on the given inputs. Deterministic in (inputs, coins).
template <class AliceIn, class BobIn>
RunRecord run_protocol(const ProtocolSpec<AliceIn, BobIn>& spec,
                       const AliceIn& alice_in, const BobIn& bob_in,
                       const Randomness& randomness) {
  const PartyCoins alice_coins(randomness, Party::alice);
  const PartyCoins bob_coins(randomness, Party::bob);
  const std::size_t reads_before = randomness.reads();

  RunRecord record;
  int round_number = 0;
  for (const auto& round : spec.rounds) {
    ++round_number;
    if (round_number > spec.round_budget) {
      throw ProtocolError(ProtocolError::Kind::round_budget, round_number,
                          spec.name + ": round " + std::to_string(round_number) +
                              " exceeds the round budget of " +
                              std::to_string(spec.round_budget));
    }
    BitString bits;
    if (round.speaker == Party::alice) {
      if (!round.alice) {
        throw ProtocolError(ProtocolError::Kind::missing_function, round_number,
                            spec.name + ": no Alice message function for round " +
                                std::to_string(round_number));
      }
      bits = round.alice(alice_in, record.transcript, alice_coins);
    } else {
      if (!round.bob) {
        throw ProtocolError(ProtocolError::Kind::missing_function, round_number,
                            spec.name + ": no Bob message function for round " +
                                std::to_string(round_number));
      }
      bits = round.bob(bob_in, record.transcript, bob_coins);
    }
    if (bits.size() != round.length) {
      throw ProtocolError(ProtocolError::Kind::message_length, round_number,
                          spec.name + ": round " + std::to_string(round_number) +
                              " produced " + std::to_string(bits.size()) +
                              " bits, declared " + std::to_string(round.length));
    }
    record.bits_used += bits.size();
    if (record.bits_used > spec.bit_budget) {
      throw ProtocolError(ProtocolError::Kind::bit_budget, round_number,
                          spec.name + ": round " + std::to_string(round_number) +
                              " brings communication to " +
                              std::to_string(record.bits_used) +
                              " bits, over the budget of " +
                              std::to_string(spec.bit_budget));
    }
    record.transcript.append(round.speaker, std::move(bits));
  }
  record.rounds_used = round_number;

  if (!spec.alice_output || !spec.bob_output) {
    throw ProtocolError(ProtocolError::Kind::missing_function, 0,
                        spec.name + ": missing output function");
  }
  record.k_a = spec.alice_output(alice_in, record.transcript, alice_coins);
  record.k_b = spec.bob_output(bob_in, record.transcript, bob_coins);
  if (record.k_a.size() != spec.key_length || record.k_b.size() != spec.key_length) {
    throw ProtocolError(ProtocolError::Kind::key_length, 0,
                        spec.name + ": output key length differs from declared " +
                            std::to_string(spec.key_length));
  }
  if (!spec.randomized && randomness.reads() != reads_before) {
    throw ProtocolError(ProtocolError::Kind::randomness, 0,
                        spec.name + ": deterministic protocol read coins");
  }
  return record;
}

template <class AliceIn, class BobIn>
RunRecord run_protocol(const ProtocolSpec<AliceIn, BobIn>& spec,
                       const AliceIn& alice_in, const BobIn& bob_in,
                       std::uint64_t seed) {
  return run_protocol(spec, alice_in, bob_in, Randomness::seeded(seed));
}

struct ValidationIssue {
  std::string kind;
  int round = 0;  // 1-based; 0 when not tied to a round
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
  bool has(std::string_view kind) const {
    for (const auto& issue : issues) {
      if (issue.kind == kind) return true;
    }
    return false;
  }
  nlohmann::json to_json() const;
};

/// Static checks; never throws.
template <class AliceIn, class BobIn>
ValidationReport validate(const ProtocolSpec<AliceIn, BobIn>& spec) {
  ValidationReport report;
  auto flag = [&](std::string kind, int round, std::string detail) {
    report.issues.push_back({std::move(kind), round, std::move(detail)});
  };

  const auto declared = spec.declared_bits();
  if (!spec.rounds.empty()) {
    if (spec.rounds.front().speaker != spec.first_speaker) {
      flag("first_speaker", 1, "round 1 speaker differs from first_speaker");
    }
    if (spec.round_budget <= 0) {
      flag("zero_budget", 0, "round budget is zero but the protocol sends messages");
    } else if (static_cast<int>(spec.rounds.size()) > spec.round_budget) {
      flag("round_budget", spec.round_budget + 1,
           std::to_string(spec.rounds.size()) + " rounds exceed budget " +
               std::to_string(spec.round_budget));
    }
  }
  if (declared > 0) {
    if (spec.bit_budget == 0) {
      flag("zero_budget", 0, "bit budget is zero but messages carry bits");
    }
    if (declared > spec.bit_budget) {
      std::size_t running = 0;
      int offending = 0;
      for (std::size_t k = 0; k < spec.rounds.size(); ++k) {
        running += spec.rounds[k].length;
        if (running > spec.bit_budget) {
          offending = static_cast<int>(k) + 1;
          break;
        }
      }
      flag("bit_budget", offending,
           std::to_string(declared) + " declared bits exceed budget " +
               std::to_string(spec.bit_budget));
    }
  }
  for (std::size_t k = 0; k < spec.rounds.size(); ++k) {
    const auto& round = spec.rounds[k];
    const int number = static_cast<int>(k) + 1;
    if (k > 0 && round.speaker == spec.rounds[k - 1].speaker) {
      flag("alternation", number,
           std::string(party_name(round.speaker)) + " speaks in consecutive rounds");
    }
    const bool has_fn = round.speaker == Party::alice ? static_cast<bool>(round.alice)
                                                      : static_cast<bool>(round.bob);
    if (!has_fn) flag("missing_message_fn", number, "speaker has no message function");
    if (round.length == 0) flag("empty_message", number, "message declares zero bits");
  }
  if (!spec.alice_output) flag("missing_output_fn", 0, "Alice has no output function");
  if (!spec.bob_output) flag("missing_output_fn", 0, "Bob has no output function");
  return report;
}

}  // namespace crglab
