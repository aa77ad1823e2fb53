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

#include "crglab/protocols.hpp"

#include <algorithm>
#include <cmath>

namespace crglab {

namespace {

Index last_pointer(const Transcript& t, std::size_t n) {
  return decode_pointer(t.messages().back().bits, 0, n);
}

BitString pointer_bits(Index value, std::size_t n) {
  BitString out;
  encode_pointer(out, value, n);
  return out;
}

template <class In>
void require_perm_count(const In& in, int count, std::size_t n, const char* who) {
  if (static_cast<int>(in.perms.size()) != count) {
    throw std::invalid_argument(std::string(who) + " input carries " +
                                std::to_string(in.perms.size()) + " permutations, expected " +
                                std::to_string(count));
  }
  for (const auto& p : in.perms) {
    if (p.size() != n) throw std::invalid_argument(std::string(who) + " permutation size differs from n");
  }
}

}  // namespace

PcsProtocol pointer_chasing_skg(const PcsParams& params) {
  params.validate();
  const std::size_t n = params.n;
  const std::size_t w = pointer_width(n);
  const std::size_t L = params.L;

  PcsProtocol spec;
  spec.name = "pointer-chasing";
  spec.first_speaker = Party::bob;
  spec.round_budget = params.r + 1;
  spec.bit_budget = static_cast<std::size_t>(params.r + 1) * w;
  spec.key_length = L;

  Round<PcsAlice, PcsBob> opener;
  opener.speaker = Party::bob;
  opener.length = w;
  opener.bob = [n](const PcsBob& in, const Transcript&, const PartyCoins&) {
    return pointer_bits(in.start, n);
  };
  spec.rounds.push_back(std::move(opener));

  for (int k = 1; k <= params.r; ++k) {
    Round<PcsAlice, PcsBob> round;
    round.length = w;
    if (k % 2 == 1) {
      const auto slot = static_cast<std::size_t>((k - 1) / 2);
      round.speaker = Party::alice;
      round.alice = [n, slot](const PcsAlice& in, const Transcript& t, const PartyCoins&) {
        return pointer_bits(in.perms.at(slot)(last_pointer(t, n)), n);
      };
    } else {
      const auto slot = static_cast<std::size_t>(k / 2 - 1);
      round.speaker = Party::bob;
      round.bob = [n, slot](const PcsBob& in, const Transcript& t, const PartyCoins&) {
        return pointer_bits(in.perms.at(slot)(last_pointer(t, n)), n);
      };
    }
    spec.rounds.push_back(std::move(round));
  }

  spec.alice_output = [n, L](const PcsAlice& in, const Transcript& t, const PartyCoins&) {
    const BitString& block = in.blocks.at(last_pointer(t, n));
    if (block.size() != L) throw std::invalid_argument("pointer-chasing: block length differs from L");
    return block;
  };
  spec.bob_output = [n, L](const PcsBob& in, const Transcript& t, const PartyCoins&) {
    const BitString& block = in.blocks.at(last_pointer(t, n));
    if (block.size() != L) throw std::invalid_argument("pointer-chasing: block length differs from L");
    return block;
  };
  return spec;
}

PvProtocol meet_in_middle_pv(const PvParams& params) {
  params.validate();
  const std::size_t n = params.n;
  const std::size_t w = pointer_width(n);
  const int r = params.r;
  const int meet = (r + 1) / 2;

  PvProtocol spec;
  spec.name = "meet-in-middle";
  spec.first_speaker = Party::bob;
  spec.round_budget = meet + 1;
  spec.bit_budget = static_cast<std::size_t>(r + 1) * w + 1;
  spec.key_length = 1;

  Round<PvAlice, PvBob> opener;
  opener.speaker = Party::bob;
  opener.length = 2 * w;
  opener.bob = [n, r](const PvBob& in, const Transcript&, const PartyCoins&) {
    require_perm_count(in, r / 2, n, "Bob");
    BitString bits = pointer_bits(in.i0, n);
    encode_pointer(bits, in.j0, n);
    return bits;
  };
  spec.rounds.push_back(std::move(opener));

  // Message k + 1 uses pi_k and pi_{r-k+1}; both belong to the sender.
  for (int k = 1; k <= meet; ++k) {
    const bool final_step = k == meet;
    const auto forward = static_cast<std::size_t>(k);
    const auto backward = static_cast<std::size_t>(r - k + 1);
    auto step = [n, w, forward, backward, final_step](const std::vector<Permutation>& own,
                                                      const Transcript& t) {
      const BitString& last = t.messages().back().bits;
      const Index i_prev = decode_pointer(last, 0, n);
      const Index j_prev = decode_pointer(last, w, n);
      // own holds pi_1, pi_3, ... (Alice) or pi_2, pi_4, ... (Bob).
      const Permutation& pf = own.at((forward - 1) / 2);
      if (final_step) {
        BitString bit;
        bit.push_back(pf(i_prev) == j_prev);
        return bit;
      }
      const Permutation& pb = own.at((backward - 1) / 2);
      BitString bits = pointer_bits(pf(i_prev), n);
      encode_pointer(bits, pb.inverse()(j_prev), n);
      return bits;
    };
    Round<PvAlice, PvBob> round;
    round.length = final_step ? 1 : 2 * w;
    if (k % 2 == 1) {
      round.speaker = Party::alice;
      round.alice = [step, n, r](const PvAlice& in, const Transcript& t, const PartyCoins&) {
        require_perm_count(in, (r + 1) / 2, n, "Alice");
        return step(in.perms, t);
      };
    } else {
      round.speaker = Party::bob;
      round.bob = [step](const PvBob& in, const Transcript& t, const PartyCoins&) {
        return step(in.perms, t);
      };
    }
    spec.rounds.push_back(std::move(round));
  }

  spec.alice_output = [](const PvAlice&, const Transcript& t, const PartyCoins&) {
    BitString key;
    key.push_back(t.last_bit());
    return key;
  };
  spec.bob_output = [](const PvBob&, const Transcript& t, const PartyCoins&) {
    BitString key;
    key.push_back(t.last_bit());
    return key;
  };
  return spec;
}

// ---------------------------------------------------------------------------

std::size_t Gf2Hash::rows_for(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("Gf2Hash: gamma must lie in (0, 1)");
  }
  return static_cast<std::size_t>(std::ceil(std::log2(20.0 / gamma)));
}

Gf2Hash Gf2Hash::draw(std::size_t rows, std::size_t cols, RandomStream& coins) {
  Gf2Hash h;
  h.cols_ = cols;
  h.matrix_.reserve(rows);
  for (std::size_t k = 0; k < rows; ++k) h.matrix_.push_back(coins.next_bitstring(cols));
  return h;
}

BitString Gf2Hash::operator()(const BitString& x) const {
  if (x.size() != cols_) {
    throw std::invalid_argument("Gf2Hash: input has " + std::to_string(x.size()) +
                                " bits, expected " + std::to_string(cols_));
  }
  BitString out(matrix_.size());
  for (std::size_t row = 0; row < matrix_.size(); ++row) {
    bool acc = false;
    for (std::size_t k = 0; k < cols_; ++k) acc ^= matrix_[row][k] && x[k];
    out.set(row, acc);
  }
  return out;
}

HashTail read_hash_tail(const Transcript& transcript) {
  if (transcript.messages().empty() || transcript.messages().back().bits.size() < 2) {
    throw std::invalid_argument("read_hash_tail: transcript has no hash tail");
  }
  const BitString& bits = transcript.messages().back().bits;
  return {bits[bits.size() - 2], bits[bits.size() - 1]};
}

Transcript detail::strip_tail(const Transcript& transcript, std::size_t base_rounds,
                              std::size_t base_last_length) {
  Transcript out;
  const auto& messages = transcript.messages();
  const std::size_t keep = std::min(base_rounds, messages.size());
  for (std::size_t k = 0; k < keep; ++k) {
    const auto& m = messages[k];
    if (k + 1 == base_rounds && m.bits.size() > base_last_length) {
      out.append(m.speaker, m.bits.slice(0, base_last_length));
    } else {
      out.append(m.speaker, m.bits);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

bool AtomDistinguisher::operator()(std::string_view atom) const {
  return !std::binary_search(rejected_.begin(), rejected_.end(), atom,
                             [](std::string_view a, std::string_view b) { return a < b; });
}

AtomDistinguisher optimal_distinguisher(const DistTable& p, const DistTable& q) {
  require_same_universe(p, q, "optimal_distinguisher");
  AtomDistinguisher t;
  t.universe_ = p.universe();
  const auto tp = static_cast<WideInt>(p.total());
  const auto tq = static_cast<WideInt>(q.total());
  WideInt gain = 0;  // sum over accepted atoms of (P - Q) * tp * tq
  auto it_p = p.entries().begin();
  auto it_q = q.entries().begin();
  while (it_p != p.entries().end() || it_q != q.entries().end()) {
    WideInt wp = 0;
    WideInt wq = 0;
    std::string_view atom;
    if (it_q == q.entries().end() || (it_p != p.entries().end() && it_p->atom < it_q->atom)) {
      atom = it_p->atom;
      wp = it_p->weight;
      ++it_p;
    } else if (it_p == p.entries().end() || it_q->atom < it_p->atom) {
      atom = it_q->atom;
      wq = it_q->weight;
      ++it_q;
    } else {
      atom = it_p->atom;
      wp = it_p->weight;
      wq = it_q->weight;
      ++it_p;
      ++it_q;
    }
    const WideInt diff = wp * tq - wq * tp;
    if (diff < 0) {
      t.rejected_.emplace_back(atom);
    } else {
      gain += diff;
    }
  }
  t.advantage_ = static_cast<double>(static_cast<long double>(gain) /
                                     (static_cast<long double>(tp) * static_cast<long double>(tq)));
  return t;
}

Atom key_indicator_atom(const BitString& key, bool indicator) {
  Atom out(1, 'K');
  out.push_back(indicator ? '1' : '0');
  out.append(key.to_string());
  return out;
}

KeyDistinguisher as_key_distinguisher(AtomDistinguisher t) {
  return [t = std::move(t)](const BitString& key, bool indicator) {
    return t(key_indicator_atom(key, indicator));
  };
}

}  // namespace crglab
