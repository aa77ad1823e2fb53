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

#include <cmath>
#include <set>
#include <unordered_map>

#include "crglab/lab.hpp"

namespace crglab {

namespace {

struct PvShape {
  int r = 1;
  std::size_t n = 2;
};

PvShape parse_pv_universe(const std::string& universe) {
  if (universe.rfind("pv:", 0) != 0) {
    throw std::invalid_argument("noisy class: table is not over pointer-verification inputs");
  }
  const auto comma = universe.find(',');
  if (comma == std::string::npos) throw std::invalid_argument("noisy class: malformed universe");
  PvShape shape;
  shape.r = std::stoi(universe.substr(3, comma - 3));
  shape.n = std::stoul(universe.substr(comma + 1));
  return shape;
}

/// Byte layout of a PV atom: tag, r, n, pi_1..pi_r (n u16 each), i0, j0.
struct PvLayout {
  int r;
  std::size_t n;
  std::size_t perm_offset(int l) const { return 5 + 2 * n * static_cast<std::size_t>(l - 1); }
  std::size_t i0_offset() const { return 5 + 2 * n * static_cast<std::size_t>(r); }
  static Index u16(std::string_view atom, std::size_t at) {
    return static_cast<Index>((static_cast<unsigned char>(atom[at]) << 8) |
                              static_cast<unsigned char>(atom[at + 1]));
  }
  Index image(std::string_view atom, int l, Index k) const { return u16(atom, perm_offset(l) + 2 * k); }
  Index preimage(std::string_view atom, int l, Index v) const {
    for (Index k = 0; k < n; ++k) {
      if (image(atom, l, k) == v) return k;
    }
    throw std::invalid_argument("pv atom: permutation is not a bijection");
  }
  Index i0(std::string_view atom) const { return u16(atom, i0_offset()); }
  Index j0(std::string_view atom) const { return u16(atom, i0_offset() + 2); }
  Index forward(std::string_view atom, int s) const {
    Index at = i0(atom);
    for (int l = 1; l <= s; ++l) at = image(atom, l, at);
    return at;
  }
  Index backward(std::string_view atom, int s) const {
    Index at = j0(atom);
    for (int l = r; l > r - s; --l) at = preimage(atom, l, at);
    return at;
  }
};

std::string pointer_key(Index k) {
  return std::string{static_cast<char>(k >> 8), static_cast<char>(k & 0xFFU)};
}

std::string perm_name(int l) { return "pi" + std::to_string(l); }

double log2_factorial(std::size_t n) {
  double out = 0.0;
  for (std::size_t k = 2; k <= n; ++k) out += std::log2(static_cast<double>(k));
  return out;
}

// Entropies summed over ~10^5 atoms carry rounding error near 1e-11, so a
// condition that holds with equality must not fail on it.
constexpr double kEntropyTolerance = 1e-9;

ConditionResult condition(std::string id, std::string quantity, double measured, double threshold) {
  ConditionResult c;
  c.id = std::move(id);
  c.quantity = std::move(quantity);
  c.measured = measured;
  c.threshold = threshold;
  c.margin = measured - threshold;
  c.pass = measured >= threshold - kEntropyTolerance;
  return c;
}

/// Exact per-cell test of X independent of Y given Z over positive cells.
IndependenceResult independence(const JointTable& joint, int t, const std::vector<std::string>& x,
                                const std::vector<std::string>& y,
                                const std::vector<std::string>& z, double possible_cells) {
  IndependenceResult out;
  out.t = t;
  struct Cell {
    Weight total = 0;
    std::unordered_map<std::string, Weight> wx, wy, wxy;
  };
  std::unordered_map<std::string, Cell> cells;
  for (const auto& e : joint.table().entries()) {
    auto& cell = cells[joint.key(z, e.atom)];
    cell.total = checked_add(cell.total, e.weight);
    if (x.empty() || y.empty()) continue;
    const std::string kx = joint.key(x, e.atom);
    const std::string ky = joint.key(y, e.atom);
    cell.wx[kx] = checked_add(cell.wx[kx], e.weight);
    cell.wy[ky] = checked_add(cell.wy[ky], e.weight);
    auto& w = cell.wxy[pair_atom(kx, ky)];
    w = checked_add(w, e.weight);
  }
  out.checked_cells = cells.size();
  out.skipped_cells = std::max(0.0, possible_cells - static_cast<double>(cells.size()));
  if (x.empty() || y.empty()) return out;
  for (const auto& [key, cell] : cells) {
    if (cell.wxy.size() != cell.wx.size() * cell.wy.size()) {
      out.holds = false;
      return out;
    }
    for (const auto& [pair, w] : cell.wxy) {
      const auto [kx, ky] = split_pair(pair);
      const auto lhs = static_cast<WideInt>(w) * cell.total;
      const auto rhs = static_cast<WideInt>(cell.wx.at(std::string(kx))) * cell.wy.at(std::string(ky));
      if (lhs != rhs) {
        out.holds = false;
        return out;
      }
    }
  }
  return out;
}

void entropy_conditions(const JointTable& joint, const NoisyClassParams& params,
                        NoisyClassReport& report, std::optional<double> perm_entropy) {
  const double log_n = std::log2(static_cast<double>(params.n));
  const double delta = params.delta;
  const auto perms = std::vector<std::string>{"perms"};
  auto with = [](std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };
  report.conditions.push_back(condition("1a", "H(i0 | pi)", cond_entropy(joint, {"i0"}, perms), log_n - delta));
  report.conditions.push_back(condition("1b", "H(j0 | pi)", cond_entropy(joint, {"j0"}, perms), log_n - delta));
  const double h_perms = perm_entropy ? *perm_entropy : joint_entropy(joint, perms);
  report.conditions.push_back(condition(
      "2", "H(pi)", h_perms, params.r * log2_factorial(params.n) - params.C));
  report.conditions.push_back(condition("3a", "H(ind | i0, pi)",
                                        cond_entropy(joint, {"ind"}, with({"i0"}, perms)), 1.0 - delta));
  report.conditions.push_back(condition("3b", "H(ind | j0, pi)",
                                        cond_entropy(joint, {"ind"}, with({"j0"}, perms)), 1.0 - delta));
  double h4a = 0.0;
  double h4b = 0.0;
  bool miss = false;
  try {
    const JointTable off = joint.restrict([&](std::string_view atom) {
      return joint.key({"ind"}, atom) == "0";
    });
    h4a = cond_entropy(off, {"j0"}, with({"i0"}, perms));
    h4b = cond_entropy(off, {"i0"}, with({"j0"}, perms));
  } catch (const std::domain_error&) {
    miss = true;  // the chase always lands on j0; both entropies are undefined
  }
  auto c4a = condition("4a", "H(j0 | i0, pi, chase != j0)", h4a, log_n - delta);
  auto c4b = condition("4b", "H(i0 | j0, pi, chase != j0)", h4b, log_n - delta);
  if (miss) c4a.pass = c4b.pass = false;
  report.conditions.push_back(std::move(c4a));
  report.conditions.push_back(std::move(c4b));
}

}  // namespace

void NoisyClassParams::validate() const {
  if (r < 1 || r % 2 == 0) throw std::invalid_argument("noisy class: r must be odd and >= 1");
  if (n < 1) throw std::invalid_argument("noisy class: n must be >= 1");
  if (!(delta >= 0.0 && delta < 1.0)) throw std::invalid_argument("noisy class: need 0 <= delta < 1");
  if (!(C >= 0.0 && C < static_cast<double>(n))) throw std::invalid_argument("noisy class: need 0 <= C < n");
}

const ConditionResult& NoisyClassReport::at(std::string_view id) const {
  for (const auto& c : conditions) {
    if (c.id == id) return c;
  }
  throw std::out_of_range("NoisyClassReport: no condition '" + std::string(id) + "'");
}

bool NoisyClassReport::all_pass() const {
  for (const auto& c : conditions) {
    if (c.evaluated && !c.pass) return false;
  }
  return true;
}

nlohmann::json NoisyClassReport::to_json() const {
  nlohmann::json conds = nlohmann::json::array();
  for (const auto& c : conditions) {
    nlohmann::json item = {{"id", c.id}, {"quantity", c.quantity}, {"evaluated", c.evaluated}};
    if (c.evaluated) {
      item["measured"] = c.measured;
      item["threshold"] = c.threshold;
      item["margin"] = c.margin;
      item["pass"] = c.pass;
    }
    conds.push_back(std::move(item));
  }
  nlohmann::json indep = nlohmann::json::array();
  for (const auto& i : independence) {
    indep.push_back({{"t", i.t},
                     {"holds", i.holds},
                     {"checked_cells", i.checked_cells},
                     {"skipped_cells", i.skipped_cells}});
  }
  return {{"conditions", std::move(conds)}, {"independence", std::move(indep)}, {"all_pass", all_pass()}};
}

JointTable pv_joint(const DistTable& table) {
  const PvShape shape = parse_pv_universe(table.universe());
  const PvLayout layout{shape.r, shape.n};
  JointTable joint(table);
  joint.with("i0", [layout](std::string_view a) { return pointer_key(layout.i0(a)); })
      .with("j0", [layout](std::string_view a) { return pointer_key(layout.j0(a)); })
      .with("perms", [layout](std::string_view a) {
        return std::string(a.substr(layout.perm_offset(1), 2 * layout.n * static_cast<std::size_t>(layout.r)));
      })
      .with("piA", [layout](std::string_view a) {
        std::string out;
        for (int l = 1; l <= layout.r; l += 2) out.append(a.substr(layout.perm_offset(l), 2 * layout.n));
        return out;
      })
      .with("piB", [layout](std::string_view a) {
        std::string out;
        for (int l = 2; l <= layout.r; l += 2) out.append(a.substr(layout.perm_offset(l), 2 * layout.n));
        return out;
      })
      .with("ind", [layout](std::string_view a) {
        return std::string(layout.forward(a, layout.r) == layout.j0(a) ? "1" : "0");
      });
  for (int l = 1; l <= shape.r; ++l) {
    joint.with(perm_name(l), [layout, l](std::string_view a) {
      return std::string(a.substr(layout.perm_offset(l), 2 * layout.n));
    });
  }
  for (int s = 1; s <= shape.r; ++s) {
    joint.with("i" + std::to_string(s), [layout, s](std::string_view a) { return pointer_key(layout.forward(a, s)); });
    joint.with("j" + std::to_string(s), [layout, s](std::string_view a) { return pointer_key(layout.backward(a, s)); });
  }
  return joint;
}

NoisyClassReport noisy_class_check(const DistTable& table, const NoisyClassParams& params) {
  params.validate();
  const PvShape shape = parse_pv_universe(table.universe());
  if (shape.r != params.r || shape.n != params.n) {
    throw std::invalid_argument("noisy class: table is " + table.universe() + ", params give (r, n) = (" +
                                std::to_string(params.r) + ", " + std::to_string(params.n) + ")");
  }
  const JointTable joint = pv_joint(table);
  NoisyClassReport report;
  entropy_conditions(joint, params, report, std::nullopt);

  const int r = params.r;
  const double perm_count = static_cast<double>(factorial(params.n));
  bool all_hold = true;
  for (int t = 0; t <= r; ++t) {
    // outer permutations of the party that owns pi_t (Alice for odd t)
    std::set<int> outer;
    for (int l = 1; l <= t; ++l) outer.insert(l);
    for (int l = r - t + 1; l <= r; ++l) outer.insert(l);
    const int parity = t % 2 == 1 ? 1 : 0;
    std::vector<std::string> x;
    std::vector<std::string> y;
    for (int l = 1; l <= r; ++l) {
      if (l % 2 == parity && outer.count(l) != 0) x.push_back(perm_name(l));
      if (l % 2 != parity) y.push_back(perm_name(l));
    }
    std::vector<std::string> z;
    for (int s = 0; s <= t; ++s) {
      z.push_back("i" + std::to_string(s));
      z.push_back("j" + std::to_string(s));
    }
    int inner = 0;
    for (int l = t + 2; l <= r - t - 1; l += 2) {
      z.push_back(perm_name(l));
      ++inner;
    }
    const double possible = std::pow(static_cast<double>(params.n), 2.0 * (t + 1)) * std::pow(perm_count, inner);
    auto result = independence(joint, t, x, y, z, possible);
    all_hold = all_hold && result.holds;
    report.independence.push_back(result);
  }
  report.conditions.push_back(
      condition("5", "conditional independence of outer and cross permutations, every t",
                all_hold ? 1.0 : 0.0, 1.0));
  return report;
}

NoisyClassReport noisy_class_check_symmetric(const DistTable& identity_slice,
                                             const NoisyClassParams& params) {
  params.validate();
  const PvShape shape = parse_pv_universe(identity_slice.universe());
  if (shape.r != params.r || shape.n != params.n) {
    throw std::invalid_argument("noisy class: slice does not match params");
  }
  for (const auto& e : identity_slice.entries()) {
    for (const auto& p : PvInstance::decode(e.atom).chain()) {
      if (!p.is_identity()) throw std::invalid_argument("noisy class: slice carries a non-identity permutation");
    }
  }
  const JointTable joint = pv_joint(identity_slice);
  NoisyClassReport report;
  entropy_conditions(joint, params, report, params.r * log2_factorial(params.n));
  ConditionResult c5;
  c5.id = "5";
  c5.quantity = "conditional independence of outer and cross permutations, every t";
  c5.evaluated = false;
  report.conditions.push_back(std::move(c5));
  return report;
}

bool relabel_invariant(const DistTable& table, std::size_t trials, Rng& rng) {
  const PvShape shape = parse_pv_universe(table.universe());
  for (std::size_t trial = 0; trial < trials; ++trial) {
    std::vector<Permutation> sigma;
    for (int l = 0; l <= shape.r; ++l) sigma.push_back(random_permutation(shape.n, rng));
    for (const auto& e : table.entries()) {
      auto v = PvInstance::decode(e.atom);
      const auto chain = v.chain();
      std::vector<Permutation> moved;
      for (int l = 1; l <= shape.r; ++l) {
        const auto idx = static_cast<std::size_t>(l);
        moved.push_back(compose(sigma[idx], compose(chain[idx - 1], sigma[idx - 1].inverse())));
      }
      v.alice.perms.clear();
      v.bob.perms.clear();
      for (std::size_t l = 0; l < moved.size(); ++l) (l % 2 == 0 ? v.alice.perms : v.bob.perms).push_back(moved[l]);
      v.bob.i0 = sigma.front()(v.bob.i0);
      v.bob.j0 = sigma.back()(v.bob.j0);
      if (table.weight_of(v.encode()) != e.weight) return false;
    }
  }
  return true;
}

}  // namespace crglab
