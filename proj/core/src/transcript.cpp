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

#include <stdexcept>

#include "crglab/engine.hpp"

namespace crglab {

std::string_view party_name(Party p) { return p == Party::alice ? "alice" : "bob"; }

void Transcript::append(Party speaker, BitString bits) {
  messages_.push_back({speaker, std::move(bits)});
}

std::size_t Transcript::total_bits() const {
  std::size_t total = 0;
  for (const auto& m : messages_) total += m.bits.size();
  return total;
}

bool Transcript::alternates() const {
  for (std::size_t k = 1; k < messages_.size(); ++k) {
    if (messages_[k].speaker == messages_[k - 1].speaker) return false;
  }
  return true;
}

bool Transcript::last_bit() const {
  if (messages_.empty() || messages_.back().bits.empty()) {
    throw std::logic_error("Transcript::last_bit: transcript ends without a bit");
  }
  const auto& bits = messages_.back().bits;
  return bits[bits.size() - 1];
}

Atom Transcript::encode() const {
  Atom out(1, 'T');
  auto put_u16 = [&out](std::size_t value) {
    if (value > 0xFFFF) throw std::length_error("transcript field exceeds 16 bits");
    out.push_back(static_cast<char>((value >> 8) & 0xFFU));
    out.push_back(static_cast<char>(value & 0xFFU));
  };
  put_u16(messages_.size());
  for (const auto& m : messages_) {
    out.push_back(m.speaker == Party::alice ? 'A' : 'B');
    put_u16(m.bits.size());
    out.append(m.bits.packed());
  }
  return out;
}

Transcript Transcript::decode(std::string_view atom) {
  std::size_t pos = 0;
  auto need = [&](std::size_t count) {
    if (atom.size() - pos < count) throw std::invalid_argument("transcript decode: truncated");
  };
  auto u16 = [&]() {
    need(2);
    const std::size_t value = (static_cast<std::size_t>(static_cast<unsigned char>(atom[pos])) << 8) |
                              static_cast<unsigned char>(atom[pos + 1]);
    pos += 2;
    return value;
  };
  if (atom.empty() || atom[0] != 'T') throw std::invalid_argument("transcript decode: bad tag");
  pos = 1;
  Transcript t;
  const std::size_t count = u16();
  for (std::size_t k = 0; k < count; ++k) {
    need(1);
    const char who = atom[pos++];
    if (who != 'A' && who != 'B') throw std::invalid_argument("transcript decode: bad speaker");
    const std::size_t length = u16();
    need((length + 7) / 8);
    BitString bits(length);
    for (std::size_t b = 0; b < length; ++b) {
      bits.set(b, (static_cast<unsigned char>(atom[pos + b / 8]) >> (7 - b % 8)) & 1U);
    }
    pos += (length + 7) / 8;
    t.append(who == 'A' ? Party::alice : Party::bob, std::move(bits));
  }
  if (pos != atom.size()) throw std::invalid_argument("transcript decode: trailing bytes");
  return t;
}

nlohmann::json Transcript::to_json() const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& m : messages_) {
    out.push_back({{"speaker", party_name(m.speaker)}, {"bits", m.bits.to_string()}});
  }
  return out;
}

nlohmann::json RunRecord::to_json() const {
  return {{"transcript", transcript.to_json()},
          {"k_a", k_a.to_string()},
          {"k_b", k_b.to_string()},
          {"agree", keys_agree()},
          {"rounds_used", rounds_used},
          {"bits_used", bits_used}};
}

nlohmann::json ValidationReport::to_json() const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& issue : issues) {
    out.push_back({{"kind", issue.kind}, {"round", issue.round}, {"detail", issue.detail}});
  }
  return {{"ok", ok()}, {"issues", std::move(out)}};
}

}  // namespace crglab
