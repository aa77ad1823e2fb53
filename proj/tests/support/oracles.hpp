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


// Reference computations written independently of the library code paths
// they check. Only public data (atoms and weights) crosses the boundary.

#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "crglab/dist_table.hpp"
#include "crglab/randomness.hpp"

namespace crglab::oracle {

struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational& a, const Rational& b) {
    return static_cast<unsigned __int128>(a.num) * b.den ==
           static_cast<unsigned __int128>(b.num) * a.den;
  }
};

/// Shannon entropy in bits of a (not necessarily normalized) weight vector.
long double entropy(const std::vector<long double>& weights);

/// H(X) - H(X | Y) from a dense joint weight matrix joint[x][y].
long double mutual_information(const std::vector<std::vector<long double>>& joint);

/// Half the L1 distance, computed over the merged atom lists.
long double tv(const DistTable& p, const DistTable& q);
/// KL(p || q) in bits; +inf when q misses mass of p.
long double kl(const DistTable& p, const DistTable& q);

/// Upper-tail p-value of Pearson's statistic for `observed` counts against
/// cell probabilities `expected`.
double chi_square_p_value(const std::vector<std::uint64_t>& observed,
                          const std::vector<double>& expected);

/// Two random tables on the atoms 0..M-1 of a shared universe. Weights are
/// drawn from 0..max_weight, with `zero_rate` of the cells forced to zero.
std::pair<DistTable, DistTable> random_table_pair(std::size_t M, Rng& rng,
                                                  double zero_rate = 0.2,
                                                  std::uint64_t max_weight = 50);

/// Best success probability on the pointer-verification mixture with one
/// permutation on [n] (yes: j0 = pi(i0); no: j0 uniform; prior 1/2 each)
/// over protocols with at most one `bits`-bit message followed by a
/// decision from the receiver. bits = 0 means no message. Tries every
/// message function of Alice (on pi) and of Bob (on (i0, j0)); bits <= 2.
Rational pv_mix_r1_best(std::size_t n, std::size_t bits);

}  // namespace crglab::oracle
