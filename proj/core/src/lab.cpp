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

#include "crglab/lab.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace crglab {

namespace {

void put_field(Atom& out, std::string_view field) {
  const auto len = static_cast<std::uint32_t>(field.size());
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<char>((len >> shift) & 0xFFU));
  out.append(field);
}

/// Field `index` of an atom written by run_atom.
std::string_view run_field(std::string_view atom, int index) {
  if (atom.empty() || atom[0] != 'R') throw std::invalid_argument("run atom: bad tag");
  std::size_t pos = 1;
  for (int k = 0;; ++k) {
    if (atom.size() - pos < 4) throw std::invalid_argument("run atom: truncated");
    std::uint32_t len = 0;
    for (int b = 0; b < 4; ++b) len = (len << 8) | static_cast<unsigned char>(atom[pos + b]);
    pos += 4;
    if (atom.size() - pos < len) throw std::invalid_argument("run atom: truncated");
    if (k == index) return atom.substr(pos, len);
    pos += len;
  }
}

}  // namespace

Randomness enumerated_coins(const CoinBudget& coins, std::uint64_t outcome) {
  const std::size_t total = coins.total();
  const BitString all = BitString::from_uint(outcome, total);
  return Randomness::enumerated(all.slice(0, coins.alice), all.slice(coins.alice, coins.bob),
                                all.slice(coins.alice + coins.bob, coins.shared));
}

Atom run_atom(std::string_view input, const RunRecord& record) {
  Atom out(1, 'R');
  put_field(out, input);
  put_field(out, record.transcript.encode());
  put_field(out, record.k_a.to_string());
  put_field(out, record.k_b.to_string());
  return out;
}

JointTable run_joint(DistTable runs) {
  JointTable joint(std::move(runs));
  joint.with("input", [](std::string_view a) { return std::string(run_field(a, 0)); })
      .with("transcript", [](std::string_view a) { return std::string(run_field(a, 1)); })
      .with("k_a", [](std::string_view a) { return std::string(run_field(a, 2)); })
      .with("k_b", [](std::string_view a) { return std::string(run_field(a, 3)); })
      .with("last_bit", [](std::string_view a) {
        const Transcript t = Transcript::decode(run_field(a, 1));
        if (t.messages().empty() || t.messages().back().bits.empty()) return std::string("-");
        return std::string(t.last_bit() ? "1" : "0");
      });
  return joint;
}

nlohmann::json McTvEstimate::to_json() const {
  return {{"estimate", estimate},
          {"std_error", std_error},
          {"bias_floor", bias_floor},
          {"trials", trials},
          {"bootstrap", bootstrap}};
}

McTvEstimate estimate_tv_from_counts(const std::map<Atom, std::uint64_t>& counts1,
                                     const std::map<Atom, std::uint64_t>& counts2,
                                     std::size_t bootstrap, std::uint64_t seed) {
  // Align the two histograms over the union of observed cells.
  std::map<Atom, std::pair<double, double>> cells;
  double n1 = 0.0;
  double n2 = 0.0;
  for (const auto& [atom, c] : counts1) {
    cells[atom].first = static_cast<double>(c);
    n1 += static_cast<double>(c);
  }
  for (const auto& [atom, c] : counts2) {
    cells[atom].second = static_cast<double>(c);
    n2 += static_cast<double>(c);
  }
  if (n1 == 0.0 || n2 == 0.0) throw std::invalid_argument("estimate_tv_from_counts: empty histogram");

  std::vector<double> w1;
  std::vector<double> w2;
  for (const auto& [atom, c] : cells) {
    w1.push_back(c.first);
    w2.push_back(c.second);
  }
  auto plug_in = [&](const std::vector<double>& a, double na, const std::vector<double>& b, double nb) {
    double l1 = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) l1 += std::abs(a[k] / na - b[k] / nb);
    return l1 / 2.0;
  };

  McTvEstimate out;
  out.trials = static_cast<std::size_t>(std::min(n1, n2));
  out.bootstrap = bootstrap;
  out.estimate = plug_in(w1, n1, w2, n2);

  for (std::size_t k = 0; k < w1.size(); ++k) {
    const double p = (w1[k] + w2[k]) / (n1 + n2);
    out.bias_floor += std::sqrt(2.0 / std::numbers::pi) *
                      std::sqrt(p * (1.0 - p) * (1.0 / n1 + 1.0 / n2));
  }
  out.bias_floor /= 2.0;

  if (bootstrap >= 2) {
    Rng rng(seed);
    auto resample = [&](const std::vector<double>& w, double total) {
      std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
      std::vector<double> out_counts(w.size(), 0.0);
      for (std::size_t k = 0; k < static_cast<std::size_t>(total); ++k) out_counts[pick(rng)] += 1.0;
      return out_counts;
    };
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t b = 0; b < bootstrap; ++b) {
      const double tv = plug_in(resample(w1, n1), n1, resample(w2, n2), n2);
      sum += tv;
      sum_sq += tv * tv;
    }
    const double mean = sum / static_cast<double>(bootstrap);
    const double var = (sum_sq - static_cast<double>(bootstrap) * mean * mean) /
                       static_cast<double>(bootstrap - 1);
    out.std_error = std::sqrt(std::max(var, 0.0));
  }
  return out;
}

}  // namespace crglab
