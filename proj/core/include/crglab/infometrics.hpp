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

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "crglab/dist_table.hpp"

namespace crglab {

/// Extracts one coordinate of an atom as a canonical byte string.
using Coordinate = std::function<std::string(std::string_view atom)>;

/// A distribution whose atoms carry named coordinates.
class JointTable {
 public:
  JointTable() = default;
  explicit JointTable(DistTable table) : table_(std::move(table)) {}

  JointTable& with(std::string name, Coordinate extractor);

  const DistTable& table() const { return table_; }
  bool has(std::string_view name) const;
  std::vector<std::string> names() const;

  /// Key of the named coordinates at `atom`. Throws std::out_of_range for
  /// unknown names.
  std::string key(const std::vector<std::string>& names, std::string_view atom) const;

  /// Law of the named coordinates.
  DistTable marginal(const std::vector<std::string>& names) const;

  /// Restricts to atoms satisfying `keep`, preserving the coordinates.
  JointTable restrict(const std::function<bool(std::string_view)>& keep) const;

 private:
  DistTable table_;
  std::map<std::string, Coordinate, std::less<>> coords_;
};

/// Shannon entropy in bits, 0 log 0 = 0.
double entropy(const DistTable& p);
/// -log2 of the largest atom probability.
double min_entropy(const DistTable& p);
/// Binary entropy h(p).
double binary_entropy(double p);

/// H(X | Y) = E_y H(X_y), with X and Y lists of coordinate names.
double cond_entropy(const JointTable& joint, const std::vector<std::string>& target,
                    const std::vector<std::string>& given);
double joint_entropy(const JointTable& joint, const std::vector<std::string>& names);
/// I(X; Y) = H(X) - H(X | Y).
double mutual_information(const JointTable& joint, const std::vector<std::string>& x,
                          const std::vector<std::string>& y);
/// I(X; Y | Z) = H(X | Z) - H(X | Y, Z).
double cond_mutual_information(const JointTable& joint,
                               const std::vector<std::string>& x,
                               const std::vector<std::string>& y,
                               const std::vector<std::string>& z);

/// Exact test that w(x, y) * total == w(x) * w(y) for every pair of
/// support points.
bool factorizes(const JointTable& joint, const std::vector<std::string>& x,
                const std::vector<std::string>& y);

/// Half the L1 distance over the union of supports.
double tv_distance(const DistTable& p, const DistTable& q);
/// KL divergence in bits; +infinity when q vanishes where p does not.
double kl_divergence(const DistTable& p, const DistTable& q);

struct InequalityCheck {
  double lhs;
  double rhs;
  bool holds;
};

/// TV(P, Q) <= sqrt(KL(P || Q) / 2).
InequalityCheck pinsker_check(const DistTable& p, const DistTable& q);

/// Largest |H(P) - H(Q)| over distributions on [M] at TV distance eps:
/// h(eps) + eps log2(M - 1) up to eps = (M - 1) / M, log2 M beyond.
/// Throws std::invalid_argument for M < 2 or eps < 0.
double ho_bound(std::size_t M, double eps);

/// eps log2(M / eps) for 0 <= eps <= 1/2 (0 at eps = 0).
/// Throws std::invalid_argument outside that range.
double cover_bound(std::size_t M, double eps);

}  // namespace crglab
