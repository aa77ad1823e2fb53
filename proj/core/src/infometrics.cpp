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

#include "crglab/infometrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace crglab {

namespace {

double entropy_of_weights(const std::vector<Weight>& weights, Weight total) {
  const double t = static_cast<double>(total);
  double h = 0.0;
  for (Weight w : weights) {
    if (w == 0) continue;
    const double p = static_cast<double>(w) / t;
    h -= p * std::log2(p);
  }
  return h;
}

long double exact_ratio(WideInt num, WideInt den) {
  return static_cast<long double>(num) / static_cast<long double>(den);
}

}  // namespace

JointTable& JointTable::with(std::string name, Coordinate extractor) {
  if (!extractor) throw std::invalid_argument("JointTable: empty extractor for '" + name + "'");
  coords_[std::move(name)] = std::move(extractor);
  return *this;
}

bool JointTable::has(std::string_view name) const { return coords_.find(name) != coords_.end(); }

std::vector<std::string> JointTable::names() const {
  std::vector<std::string> out;
  for (const auto& [name, fn] : coords_) out.push_back(name);
  return out;
}

std::string JointTable::key(const std::vector<std::string>& names, std::string_view atom) const {
  auto value = [&](const std::string& name) {
    const auto it = coords_.find(name);
    if (it == coords_.end()) throw std::out_of_range("JointTable: unknown coordinate '" + name + "'");
    return it->second(atom);
  };
  if (names.size() == 1) return value(names.front());
  std::string out;
  for (const auto& name : names) {
    const std::string part = value(name);
    const auto len = static_cast<std::uint32_t>(part.size());
    for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<char>((len >> shift) & 0xFFU));
    out.append(part);
  }
  return out;
}

DistTable JointTable::marginal(const std::vector<std::string>& names) const {
  std::string universe = table_.universe() + "|";
  for (std::size_t k = 0; k < names.size(); ++k) universe += (k ? "," : "") + names[k];
  return table_.map([&](std::string_view atom) { return key(names, atom); }, universe);
}

JointTable JointTable::restrict(const std::function<bool(std::string_view)>& keep) const {
  JointTable out(table_.restrict(keep));
  out.coords_ = coords_;
  return out;
}

double entropy(const DistTable& p) {
  std::vector<Weight> weights;
  weights.reserve(p.size());
  for (const auto& e : p.entries()) weights.push_back(e.weight);
  return entropy_of_weights(weights, p.total());
}

double min_entropy(const DistTable& p) {
  Weight top = 0;
  for (const auto& e : p.entries()) top = std::max(top, e.weight);
  return std::log2(static_cast<double>(p.total()) / static_cast<double>(top));
}

double binary_entropy(double p) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("binary_entropy: p outside [0, 1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double cond_entropy(const JointTable& joint, const std::vector<std::string>& target,
                    const std::vector<std::string>& given) {
  if (given.empty()) return joint_entropy(joint, target);
  std::unordered_map<std::string, std::unordered_map<std::string, Weight>> cells;
  for (const auto& e : joint.table().entries()) {
    auto& cell = cells[joint.key(given, e.atom)][joint.key(target, e.atom)];
    cell = checked_add(cell, e.weight);
  }
  const double total = static_cast<double>(joint.table().total());
  double h = 0.0;
  std::vector<Weight> weights;
  for (const auto& [y, row] : cells) {
    weights.clear();
    Weight mass = 0;
    for (const auto& [x, w] : row) {
      weights.push_back(w);
      mass = checked_add(mass, w);
    }
    h += static_cast<double>(mass) / total * entropy_of_weights(weights, mass);
  }
  return h;
}

double joint_entropy(const JointTable& joint, const std::vector<std::string>& names) {
  return entropy(joint.marginal(names));
}

double mutual_information(const JointTable& joint, const std::vector<std::string>& x,
                          const std::vector<std::string>& y) {
  return joint_entropy(joint, x) - cond_entropy(joint, x, y);
}

double cond_mutual_information(const JointTable& joint, const std::vector<std::string>& x,
                               const std::vector<std::string>& y,
                               const std::vector<std::string>& z) {
  std::vector<std::string> yz = y;
  yz.insert(yz.end(), z.begin(), z.end());
  return cond_entropy(joint, x, z) - cond_entropy(joint, x, yz);
}

bool factorizes(const JointTable& joint, const std::vector<std::string>& x,
                const std::vector<std::string>& y) {
  std::unordered_map<std::string, Weight> wx;
  std::unordered_map<std::string, Weight> wy;
  std::unordered_map<std::string, Weight> wxy;
  for (const auto& e : joint.table().entries()) {
    const std::string kx = joint.key(x, e.atom);
    const std::string ky = joint.key(y, e.atom);
    wx[kx] = checked_add(wx[kx], e.weight);
    wy[ky] = checked_add(wy[ky], e.weight);
    auto& cell = wxy[pair_atom(kx, ky)];
    cell = checked_add(cell, e.weight);
  }
  if (wxy.size() != wx.size() * wy.size()) return false;
  const auto total = static_cast<WideInt>(joint.table().total());
  for (const auto& [cell, w] : wxy) {
    const auto [kx, ky] = split_pair(cell);
    const auto lhs = static_cast<WideInt>(w) * total;
    const auto rhs = static_cast<WideInt>(wx.at(std::string(kx))) * wy.at(std::string(ky));
    if (lhs != rhs) return false;
  }
  return true;
}

double tv_distance(const DistTable& p, const DistTable& q) {
  require_same_universe(p, q, "tv_distance");
  const auto tp = static_cast<WideInt>(p.total());
  const auto tq = static_cast<WideInt>(q.total());
  WideInt l1 = 0;
  auto it_p = p.entries().begin();
  auto it_q = q.entries().begin();
  while (it_p != p.entries().end() || it_q != q.entries().end()) {
    WideInt wp = 0;
    WideInt wq = 0;
    if (it_q == q.entries().end() || (it_p != p.entries().end() && it_p->atom < it_q->atom)) {
      wp = (it_p++)->weight;
    } else if (it_p == p.entries().end() || it_q->atom < it_p->atom) {
      wq = (it_q++)->weight;
    } else {
      wp = (it_p++)->weight;
      wq = (it_q++)->weight;
    }
    const WideInt d = wp * tq - wq * tp;
    l1 += d < 0 ? -d : d;
  }
  return static_cast<double>(exact_ratio(l1, 2 * tp * tq));
}

double kl_divergence(const DistTable& p, const DistTable& q) {
  require_same_universe(p, q, "kl_divergence");
  const double tp = static_cast<double>(p.total());
  const double tq = static_cast<double>(q.total());
  double kl = 0.0;
  for (const auto& e : p.entries()) {
    const Weight wq = q.weight_of(e.atom);
    if (wq == 0) return std::numeric_limits<double>::infinity();
    const double pp = static_cast<double>(e.weight) / tp;
    kl += pp * std::log2(pp / (static_cast<double>(wq) / tq));
  }
  return std::max(kl, 0.0);
}

InequalityCheck pinsker_check(const DistTable& p, const DistTable& q) {
  const double lhs = tv_distance(p, q);
  const double rhs = std::sqrt(kl_divergence(p, q) / 2.0);
  return {lhs, rhs, lhs <= rhs + 1e-12};
}

double ho_bound(std::size_t M, double eps) {
  if (M < 2) throw std::invalid_argument("ho_bound: M must be >= 2");
  if (!(eps >= 0.0)) throw std::invalid_argument("ho_bound: eps must be >= 0");
  const double m = static_cast<double>(M);
  if (eps >= (m - 1.0) / m) return std::log2(m);
  if (eps == 0.0) return 0.0;
  return binary_entropy(eps) + eps * std::log2(m - 1.0);
}

double cover_bound(std::size_t M, double eps) {
  if (M < 1) throw std::invalid_argument("cover_bound: M must be >= 1");
  if (!(eps >= 0.0 && eps <= 0.5)) throw std::invalid_argument("cover_bound: eps must lie in [0, 1/2]");
  if (eps == 0.0) return 0.0;
  return eps * std::log2(static_cast<double>(M) / eps);
}

}  // namespace crglab
