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
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "crglab/bits.hpp"
#include "crglab/dist_table.hpp"
#include "crglab/engine.hpp"
#include "crglab/randomness.hpp"
#include "crglab/sources.hpp"

namespace crglab {

using PcsProtocol = ProtocolSpec<PcsAlice, PcsBob>;
using PvProtocol = ProtocolSpec<PvAlice, PvBob>;

/// Bob opens with the start pointer; the parties then alternate sending
/// i_t = pi_t(i_{t-1}) until i_r is known to both. Alice outputs A_{i_r},
/// Bob outputs B_{i_r}. r + 1 messages of pointer_width(n) bits each.
PcsProtocol pointer_chasing_skg(const PcsParams& params);

/// Decides whether pi_r(...pi_1(i0)...) = j0 by walking i0 forward and j0
/// backward at the same time. Bob opens with (i0, j0); each later message
/// carries both frontiers advanced by the sender's permutations, and the
/// party that closes the gap sends the one-bit verdict. Uses (r + 3) / 2
/// messages and (r + 1) * pointer_width(n) + 1 bits.
/// Throws std::invalid_argument on even r.
PvProtocol meet_in_middle_pv(const PvParams& params);

/// h(x) = M x over GF(2) with a uniformly random rows x cols matrix M.
/// For fixed x != y, Pr[h(x) = h(y)] = 2^-rows.
class Gf2Hash {
 public:
  /// ceil(log2(20 / gamma)); requires 0 < gamma < 1.
  static std::size_t rows_for(double gamma);

  static Gf2Hash draw(std::size_t rows, std::size_t cols, RandomStream& coins);

  std::size_t rows() const { return matrix_.size(); }
  std::size_t cols() const { return cols_; }
  BitString operator()(const BitString& x) const;

 private:
  std::vector<BitString> matrix_;
  std::size_t cols_ = 0;
};

/// T(K_A, I') in the hash-equality tail.
using KeyDistinguisher = std::function<bool(const BitString& key, bool indicator)>;

/// The two bits closing an augmented transcript.
struct HashTail {
  bool indicator;  // I'
  bool verdict;    // b_{I'}
};

/// Reads I' and b_{I'} from the final message of an augmented run.
HashTail read_hash_tail(const Transcript& transcript);

namespace detail {

Transcript strip_tail(const Transcript& transcript, std::size_t base_rounds,
                      std::size_t base_last_length);

}  // namespace detail

/// Appends the hash-equality tail to a key-producing protocol.
///
/// If Bob speaks last, he appends h(K_B) to his final message and Alice
/// replies with I' = [h(K_A) = h(K_B)] and b = T(K_A, I'). If Alice speaks
/// last, she appends h(K_A), T(K_A, 0) and T(K_A, 1), and Bob replies with
/// I' and b_{I'}. The hash matrix comes from the public coins under the
/// label "hash". Keys are those of the base protocol.
///
/// Adds one round and rows + 2 (Bob last) or rows + 4 (Alice last) bits.
/// A base protocol without messages gets a Bob hash round and an Alice
/// reply. Throws std::invalid_argument if `verdict` is empty or gamma is
/// outside (0, 1).
template <class AliceIn, class BobIn>
ProtocolSpec<AliceIn, BobIn> hash_equality_augment(
    const ProtocolSpec<AliceIn, BobIn>& base, double gamma,
    KeyDistinguisher verdict) {
  if (!verdict) {
    throw std::invalid_argument("hash_equality_augment: distinguisher undefined");
  }
  if (!base.alice_output || !base.bob_output || base.key_length == 0) {
    throw std::invalid_argument("hash_equality_augment: base protocol has no keys");
  }
  const std::size_t rows = Gf2Hash::rows_for(gamma);
  const std::size_t key_length = base.key_length;

  using Spec = ProtocolSpec<AliceIn, BobIn>;
  Spec out = base;
  out.name = base.name + "+hash";
  out.randomized = true;
  out.coins.shared += rows * key_length;

  const bool empty_base = base.rounds.empty();
  const std::size_t base_rounds = base.rounds.size();
  const std::size_t base_last_length = empty_base ? 0 : base.rounds.back().length;
  const Party last = empty_base ? Party::bob : base.rounds.back().speaker;

  auto draw_hash = [rows, key_length](const PartyCoins& coins) {
    auto stream = coins.shared("hash");
    return Gf2Hash::draw(rows, key_length, stream);
  };
  auto base_view = [base_rounds, base_last_length](const Transcript& t) {
    return detail::strip_tail(t, base_rounds, base_last_length);
  };
  auto bob_key = [base, base_view](const BobIn& in, const Transcript& t,
                                   const PartyCoins& c) {
    return base.bob_output(in, base_view(t), c);
  };
  auto alice_key = [base, base_view](const AliceIn& in, const Transcript& t,
                                     const PartyCoins& c) {
    return base.alice_output(in, base_view(t), c);
  };

  if (last == Party::bob) {
    if (empty_base) {
      Round<AliceIn, BobIn> opener;
      opener.speaker = Party::bob;
      opener.length = rows;
      opener.bob = [base, draw_hash](const BobIn& in, const Transcript& t,
                                     const PartyCoins& c) {
        return draw_hash(c)(base.bob_output(in, t, c));
      };
      out.rounds.push_back(std::move(opener));
      out.first_speaker = Party::bob;
      out.round_budget += 1;
    } else {
      auto& final_round = out.rounds.back();
      const auto base_fn = base.rounds.back().bob;
      final_round.length += rows;
      final_round.bob = [base, base_fn, draw_hash](const BobIn& in,
                                                   const Transcript& t,
                                                   const PartyCoins& c) {
        BitString bits = base_fn(in, t, c);
        Transcript with_last = t;
        with_last.append(Party::bob, bits);
        bits.append(draw_hash(c)(base.bob_output(in, with_last, c)));
        return bits;
      };
    }
    Round<AliceIn, BobIn> reply;
    reply.speaker = Party::alice;
    reply.length = 2;
    reply.alice = [alice_key, draw_hash, verdict, rows](
                      const AliceIn& in, const Transcript& t, const PartyCoins& c) {
      const BitString key = alice_key(in, t, c);
      const BitString& sent = t.messages().back().bits;
      const BitString their_hash = sent.slice(sent.size() - rows, rows);
      const bool indicator = draw_hash(c)(key) == their_hash;
      BitString bits;
      bits.push_back(indicator);
      bits.push_back(verdict(key, indicator));
      return bits;
    };
    out.rounds.push_back(std::move(reply));
    out.round_budget += 1;
    out.bit_budget += rows + 2;
  } else {
    auto& final_round = out.rounds.back();
    const auto base_fn = base.rounds.back().alice;
    final_round.length += rows + 2;
    final_round.alice = [base, base_fn, draw_hash, verdict](
                            const AliceIn& in, const Transcript& t,
                            const PartyCoins& c) {
      BitString bits = base_fn(in, t, c);
      Transcript with_last = t;
      with_last.append(Party::alice, bits);
      const BitString key = base.alice_output(in, with_last, c);
      bits.append(draw_hash(c)(key));
      bits.push_back(verdict(key, false));
      bits.push_back(verdict(key, true));
      return bits;
    };
    Round<AliceIn, BobIn> reply;
    reply.speaker = Party::bob;
    reply.length = 2;
    reply.bob = [bob_key, draw_hash, rows](const BobIn& in, const Transcript& t,
                                           const PartyCoins& c) {
      const BitString key = bob_key(in, t, c);
      const BitString& sent = t.messages().back().bits;
      const BitString their_hash = sent.slice(sent.size() - rows - 2, rows);
      const bool indicator = draw_hash(c)(key) == their_hash;
      BitString bits;
      bits.push_back(indicator);
      bits.push_back(sent[sent.size() - (indicator ? 1 : 2)]);
      return bits;
    };
    out.rounds.push_back(std::move(reply));
    out.round_budget += 1;
    out.bit_budget += rows + 4;
  }
  out.alice_output = alice_key;
  out.bob_output = bob_key;
  return out;
}

/// T(x) = 1 iff P(x) >= Q(x); atoms outside both supports are ties.
class AtomDistinguisher {
 public:
  bool operator()(std::string_view atom) const;
  /// E_P[T] - E_Q[T], which equals the total variation distance.
  double advantage() const { return advantage_; }
  const std::string& universe() const { return universe_; }

 private:
  friend AtomDistinguisher optimal_distinguisher(const DistTable&, const DistTable&);
  std::string universe_;
  std::vector<Atom> rejected_;  // sorted atoms with P(x) < Q(x)
  double advantage_ = 0.0;
};

/// Throws std::invalid_argument when the universes differ.
AtomDistinguisher optimal_distinguisher(const DistTable& p, const DistTable& q);

/// Atom for the pair (K_A, I) used by key distinguishers.
Atom key_indicator_atom(const BitString& key, bool indicator);

/// Adapts an atom distinguisher over key_indicator_atom outcomes.
KeyDistinguisher as_key_distinguisher(AtomDistinguisher t);

}  // namespace crglab
