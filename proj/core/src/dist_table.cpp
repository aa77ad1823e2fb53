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

#include "crglab/dist_table.hpp"

#include <algorithm>
#include <limits>

namespace crglab {

void DistTable::Builder::add(Atom atom, Weight weight) {
  if (weight == 0) return;
  auto& slot = weights_[std::move(atom)];
  slot = checked_add(slot, weight);
}

DistTable DistTable::Builder::build() && {
  if (weights_.empty()) {
    throw std::invalid_argument("DistTable: no atom with positive weight");
  }
  DistTable out;
  out.universe_ = std::move(universe_);
  out.entries_.reserve(weights_.size());
  for (auto& [atom, weight] : weights_) {
    out.entries_.push_back({atom, weight});
    out.total_ = checked_add(out.total_, weight);
  }
  weights_.clear();
  std::sort(out.entries_.begin(), out.entries_.end(),
            [](const Entry& a, const Entry& b) { return a.atom < b.atom; });
  return out;
}

Weight DistTable::weight_of(std::string_view atom) const {
  const auto it = std::lower_bound(
      entries_.begin(), entries_.end(), atom,
      [](const Entry& e, std::string_view key) { return std::string_view(e.atom) < key; });
  if (it == entries_.end() || it->atom != atom) return 0;
  return it->weight;
}

DistTable DistTable::map(const std::function<Atom(std::string_view)>& f,
                         std::string universe) const {
  Builder builder(std::move(universe));
  for (const auto& entry : entries_) builder.add(f(entry.atom), entry.weight);
  return std::move(builder).build();
}

DistTable DistTable::restrict(const std::function<bool(std::string_view)>& keep) const {
  DistTable out;
  out.universe_ = universe_;
  for (const auto& entry : entries_) {
    if (keep(entry.atom)) {
      out.entries_.push_back(entry);
      out.total_ = checked_add(out.total_, entry.weight);
    }
  }
  if (out.entries_.empty()) throw std::domain_error("DistTable::restrict: event has weight 0");
  return out;
}

nlohmann::json DistTable::to_json() const {
  nlohmann::json atoms = nlohmann::json::array();
  for (const auto& entry : entries_) {
    atoms.push_back({{"atom", to_hex(entry.atom)}, {"weight", entry.weight}});
  }
  return {{"universe", universe_}, {"total", total_}, {"atoms", std::move(atoms)}};
}

DistTable DistTable::from_json(const nlohmann::json& j) {
  Builder builder(j.at("universe").get<std::string>());
  for (const auto& item : j.at("atoms")) {
    builder.add(from_hex(item.at("atom").get<std::string>()),
                item.at("weight").get<Weight>());
  }
  return std::move(builder).build();
}

void require_same_universe(const DistTable& p, const DistTable& q,
                           std::string_view operation) {
  if (p.universe() != q.universe()) {
    throw std::invalid_argument(std::string(operation) + ": universes differ ('" +
                                p.universe() + "' vs '" + q.universe() + "')");
  }
}

Atom pair_atom(std::string_view first, std::string_view second) {
  if (first.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw std::length_error("pair_atom: component too long");
  }
  const auto len = static_cast<std::uint32_t>(first.size());
  Atom out;
  out.reserve(4 + first.size() + second.size());
  for (int shift = 24; shift >= 0; shift -= 8) {
    out.push_back(static_cast<char>((len >> shift) & 0xFFU));
  }
  out.append(first);
  out.append(second);
  return out;
}

std::pair<std::string_view, std::string_view> split_pair(std::string_view atom) {
  if (atom.size() < 4) throw std::invalid_argument("split_pair: atom too short");
  std::uint32_t len = 0;
  for (int k = 0; k < 4; ++k) len = (len << 8) | static_cast<unsigned char>(atom[k]);
  if (atom.size() - 4 < len) throw std::invalid_argument("split_pair: bad length prefix");
  return {atom.substr(4, len), atom.substr(4 + len)};
}

DistTable product_table(const DistTable& p, const DistTable& q) {
  DistTable::Builder builder("(" + p.universe() + ")x(" + q.universe() + ")");
  for (const auto& a : p.entries()) {
    for (const auto& b : q.entries()) {
      builder.add(pair_atom(a.atom, b.atom), checked_mul(a.weight, b.weight));
    }
  }
  return std::move(builder).build();
}

Weight checked_add(Weight a, Weight b) {
  if (a > std::numeric_limits<Weight>::max() - b) {
    throw std::overflow_error("weight addition overflows 64 bits");
  }
  return a + b;
}

Weight checked_mul(Weight a, Weight b) {
  if (a != 0 && b > std::numeric_limits<Weight>::max() / a) {
    throw std::overflow_error("weight multiplication overflows 64 bits");
  }
  return a * b;
}

std::string to_hex(std::string_view bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * bytes.size());
  for (unsigned char ch : bytes) {
    out.push_back(kDigits[ch >> 4]);
    out.push_back(kDigits[ch & 0xF]);
  }
  return out;
}

std::string from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw std::invalid_argument("from_hex: odd length");
  auto nibble = [](char ch) -> unsigned {
    if (ch >= '0' && ch <= '9') return static_cast<unsigned>(ch - '0');
    if (ch >= 'a' && ch <= 'f') return static_cast<unsigned>(ch - 'a' + 10);
    if (ch >= 'A' && ch <= 'F') return static_cast<unsigned>(ch - 'A' + 10);
    throw std::invalid_argument("from_hex: bad digit");
  };
  std::string out(hex.size() / 2, '\0');
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = static_cast<char>((nibble(hex[2 * k]) << 4) | nibble(hex[2 * k + 1]));
  }
  return out;
}

}  // namespace crglab
