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


#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include <boost/math/distributions/chi_squared.hpp>

namespace crglab::oracle {

long double entropy(const std::vector<long double>& weights) {
  const long double total = std::accumulate(weights.begin(), weights.end(), 0.0L);
  long double h = 0.0L;
  for (long double w : weights) {
    if (w > 0) h -= (w / total) * std::log2(w / total);
  }
  return h;
}

long double mutual_information(const std::vector<std::vector<long double>>& joint) {
  std::vector<long double> px;
  std::vector<long double> py(joint.empty() ? 0 : joint.front().size(), 0.0L);
  std::vector<long double> all;
  for (const auto& row : joint) {
    px.push_back(std::accumulate(row.begin(), row.end(), 0.0L));
    for (std::size_t y = 0; y < row.size(); ++y) {
      py[y] += row[y];
      all.push_back(row[y]);
    }
  }
  return entropy(px) + entropy(py) - entropy(all);
}

namespace {

std::map<std::string, long double> normalized(const DistTable& t) {
  std::map<std::string, long double> out;
  for (const auto& e : t.entries()) {
    out[e.atom] = static_cast<long double>(e.weight) / static_cast<long double>(t.total());
  }
  return out;
}

}  // namespace

long double tv(const DistTable& p, const DistTable& q) {
  auto a = normalized(p);
  auto b = normalized(q);
  long double sum = 0.0L;
  for (const auto& [atom, w] : a) sum += std::fabs(w - (b.count(atom) ? b[atom] : 0.0L));
  for (const auto& [atom, w] : b) {
    if (!a.count(atom)) sum += w;
  }
  return sum / 2;
}

long double kl(const DistTable& p, const DistTable& q) {
  auto a = normalized(p);
  auto b = normalized(q);
  long double sum = 0.0L;
  for (const auto& [atom, w] : a) {
    if (!b.count(atom)) return std::numeric_limits<long double>::infinity();
    sum += w * std::log2(w / b[atom]);
  }
  return sum;
}

double chi_square_p_value(const std::vector<std::uint64_t>& observed,
                          const std::vector<double>& expected) {
  if (observed.size() != expected.size() || observed.size() < 2) {
    throw std::invalid_argument("chi_square_p_value: bad cell count");
  }
  const double total =
      static_cast<double>(std::accumulate(observed.begin(), observed.end(), std::uint64_t{0}));
  double stat = 0.0;
  for (std::size_t k = 0; k < observed.size(); ++k) {
    const double e = expected[k] * total;
    const double d = static_cast<double>(observed[k]) - e;
    stat += d * d / e;
  }
  boost::math::chi_squared dist(static_cast<double>(observed.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

std::pair<DistTable, DistTable> random_table_pair(std::size_t M, Rng& rng, double zero_rate,
                                                  std::uint64_t max_weight) {
  std::uniform_int_distribution<std::uint64_t> weight(1, max_weight);
  std::bernoulli_distribution zero(zero_rate);
  auto draw = [&] {
    DistTable::Builder builder("oracle:" + std::to_string(M));
    bool any = false;
    for (std::size_t k = 0; k < M; ++k) {
      if (zero(rng)) continue;
      builder.add("x" + std::to_string(k), weight(rng));
      any = true;
    }
    if (!any) builder.add("x0", 1);
    return std::move(builder).build();
  };
  DistTable p = draw();
  DistTable q = draw();
  return {std::move(p), std::move(q)};
}

namespace {

struct PvMixR1 {
  std::size_t n;
  std::vector<std::vector<std::uint32_t>> perms;  // all of S_n
  // weight(p, i, j) = n [j = perms[p][i]] + 1
  std::uint64_t weight(std::size_t p, std::size_t i, std::size_t j, bool want) const {
    const bool match = perms[p][i] == j;
    const std::uint64_t w = match ? n + 1 : 1;
    // Splits w into the mass of truth = 1 (match) and truth = 0.
    if (match) return want ? w : 0;
    return want ? 0 : w;
  }
};

std::uint64_t power(std::uint64_t base, std::size_t exponent) {
  std::uint64_t out = 1;
  for (std::size_t k = 0; k < exponent; ++k) out *= base;
  return out;
}

}  // namespace

Rational pv_mix_r1_best(std::size_t n, std::size_t bits) {
  if (bits > 2) throw std::invalid_argument("pv_mix_r1_best: bits <= 2");
  PvMixR1 pv{n, {}};
  std::vector<std::uint32_t> image(n);
  std::iota(image.begin(), image.end(), 0u);
  do {
    pv.perms.push_back(image);
  } while (std::next_permutation(image.begin(), image.end()));
  const std::size_t P = pv.perms.size();
  const std::size_t messages = std::size_t{1} << bits;
  const std::uint64_t den = P * 2 * n * n;
  std::uint64_t best = 0;

  // Alice speaks: message function on pi, Bob decides per (m, i0, j0).
  const std::uint64_t alice_fns = power(messages, P);
  for (std::uint64_t code = 0; code < alice_fns; ++code) {
    std::vector<std::size_t> f(P);
    std::uint64_t c = code;
    for (std::size_t p = 0; p < P; ++p, c /= messages) f[p] = c % messages;
    std::uint64_t value = 0;
    for (std::size_t m = 0; m < messages; ++m) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          std::uint64_t one = 0, zero = 0;
          for (std::size_t p = 0; p < P; ++p) {
            if (f[p] != m) continue;
            one += pv.weight(p, i, j, true);
            zero += pv.weight(p, i, j, false);
          }
          value += std::max(one, zero);
        }
      }
    }
    best = std::max(best, value);
  }

  // Bob speaks: message function on (i0, j0), Alice decides per (m, pi).
  const std::uint64_t bob_fns = power(messages, n * n);
  for (std::uint64_t code = 0; code < bob_fns; ++code) {
    std::vector<std::size_t> g(n * n);
    std::uint64_t c = code;
    for (std::size_t k = 0; k < n * n; ++k, c /= messages) g[k] = c % messages;
    std::uint64_t value = 0;
    for (std::size_t m = 0; m < messages; ++m) {
      for (std::size_t p = 0; p < P; ++p) {
        std::uint64_t one = 0, zero = 0;
        for (std::size_t k = 0; k < n * n; ++k) {
          if (g[k] != m) continue;
          one += pv.weight(p, k / n, k % n, true);
          zero += pv.weight(p, k / n, k % n, false);
        }
        value += std::max(one, zero);
      }
    }
    best = std::max(best, value);
  }
  return {best, den};
}

}  // namespace crglab::oracle
