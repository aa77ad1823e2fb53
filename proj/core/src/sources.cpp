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

#include "crglab/sources.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace crglab {

namespace {

constexpr std::size_t kMaxField = std::numeric_limits<std::uint16_t>::max();

void put_u16(std::string& out, std::size_t value) {
  if (value > kMaxField) throw std::length_error("atom field exceeds 16 bits");
  out.push_back(static_cast<char>((value >> 8) & 0xFFU));
  out.push_back(static_cast<char>(value & 0xFFU));
}

class Reader {
 public:
  Reader(std::string_view atom, char tag) : atom_(atom) {
    if (atom.empty() || atom[0] != tag) {
      throw std::invalid_argument(std::string("atom decode: expected tag '") + tag + "'");
    }
    pos_ = 1;
  }
  std::size_t u16() {
    need(2);
    const auto hi = static_cast<unsigned char>(atom_[pos_]);
    const auto lo = static_cast<unsigned char>(atom_[pos_ + 1]);
    pos_ += 2;
    return (static_cast<std::size_t>(hi) << 8) | lo;
  }
  std::string_view bytes(std::size_t count) {
    need(count);
    auto out = atom_.substr(pos_, count);
    pos_ += count;
    return out;
  }
  void finish() const {
    if (pos_ != atom_.size()) throw std::invalid_argument("atom decode: trailing bytes");
  }

 private:
  void need(std::size_t count) const {
    if (atom_.size() - pos_ < count) throw std::invalid_argument("atom decode: truncated");
  }
  std::string_view atom_;
  std::size_t pos_ = 0;
};

void put_perm(std::string& out, const Permutation& p) {
  for (Index k : p.images()) put_u16(out, k);
}

Permutation read_perm(Reader& in, std::size_t n) {
  std::vector<Index> image(n);
  for (auto& k : image) k = static_cast<Index>(in.u16());
  return Permutation::from_images(std::move(image));
}

void put_block(std::string& out, const BitString& block) { out.append(block.packed()); }

BitString read_block(Reader& in, std::size_t L) {
  const auto bytes = in.bytes((L + 7) / 8);
  BitString out(L);
  for (std::size_t k = 0; k < L; ++k) {
    out.set(k, (static_cast<unsigned char>(bytes[k / 8]) >> (7 - k % 8)) & 1U);
  }
  return out;
}

std::vector<Permutation> interleave(const std::vector<Permutation>& odd,
                                    const std::vector<Permutation>& even, int r) {
  std::vector<Permutation> chain;
  chain.reserve(static_cast<std::size_t>(r));
  for (int l = 1; l <= r; ++l) {
    chain.push_back(l % 2 == 1 ? odd.at(static_cast<std::size_t>((l - 1) / 2))
                               : even.at(static_cast<std::size_t>(l / 2 - 1)));
  }
  return chain;
}

void split_chain(std::span<const Permutation> chain, std::vector<Permutation>& odd,
                 std::vector<Permutation>& even) {
  odd.clear();
  even.clear();
  for (std::size_t l = 0; l < chain.size(); ++l) {
    (l % 2 == 0 ? odd : even).push_back(chain[l]);
  }
}

nlohmann::json perms_json(const std::vector<Permutation>& perms) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& p : perms) {
    out.push_back(std::vector<Index>(p.images().begin(), p.images().end()));
  }
  return out;
}

nlohmann::json blocks_json(const std::vector<BitString>& blocks) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& b : blocks) out.push_back(b.to_string());
  return out;
}

Index uniform_index(std::size_t n, Rng& rng) {
  return static_cast<Index>(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
}

std::vector<Permutation> random_perms(std::size_t n, int count, Rng& rng) {
  std::vector<Permutation> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) out.push_back(random_permutation(n, rng));
  return out;
}

std::vector<BitString> random_blocks(std::size_t n, std::size_t L, Rng& rng) {
  std::vector<BitString> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) out.push_back(random_block(L, rng));
  return out;
}

void check_cap(double combos, std::uint64_t cap, std::string_view what) {
  if (combos > static_cast<double>(cap)) {
    throw CapExceeded(std::string(what) + ": support of about " +
                          std::to_string(static_cast<long double>(combos)) +
                          " combinations exceeds the cap of " + std::to_string(cap),
                      combos);
  }
}

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  double out = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    out = out * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return std::round(out);
}

void require_n(std::size_t n) {
  if (n == 0 || n > kMaxField) {
    throw std::invalid_argument("n must be in [1, 65535], got " + std::to_string(n));
  }
}

/// Calls visit(values) for each length-`count` subset of `pool` in
/// lexicographic order.
void for_each_subset(const std::vector<Index>& pool, std::size_t count,
                     const std::function<void(const std::vector<Index>&)>& visit) {
  std::vector<std::size_t> pick(count);
  for (std::size_t k = 0; k < count; ++k) pick[k] = k;
  if (count > pool.size()) return;
  std::vector<Index> values(count);
  while (true) {
    for (std::size_t k = 0; k < count; ++k) values[k] = pool[pick[k]];
    visit(values);
    std::size_t k = count;
    while (k > 0 && pick[k - 1] == pool.size() - count + (k - 1)) --k;
    if (k == 0) return;
    ++pick[k - 1];
    for (std::size_t m = k; m < count; ++m) pick[m] = pick[m - 1] + 1;
  }
}

}  // namespace

// ---------------------------------------------------------------------------

void PcsParams::validate() const {
  if (r < 1) throw std::invalid_argument("pcs: r must be >= 1");
  require_n(n);
  if (L < 1 || L > kMaxField) throw std::invalid_argument("pcs: L must be in [1, 65535]");
}

std::string PcsParams::universe() const {
  return "pcs:" + std::to_string(r) + "," + std::to_string(n) + "," + std::to_string(L);
}

std::vector<Permutation> PcsSample::chain() const {
  return interleave(alice.perms, bob.perms, params.r);
}

Index PcsSample::endpoint() const {
  const auto perms = chain();
  return chase(perms, bob.start);
}

Atom PcsSample::encode() const {
  Atom out(1, 'P');
  put_u16(out, static_cast<std::size_t>(params.r));
  put_u16(out, params.n);
  put_u16(out, params.L);
  for (const auto& p : chain()) put_perm(out, p);
  put_u16(out, bob.start);
  for (const auto& b : alice.blocks) put_block(out, b);
  for (const auto& b : bob.blocks) put_block(out, b);
  return out;
}

PcsSample PcsSample::decode(std::string_view atom) {
  Reader in(atom, 'P');
  PcsSample s;
  s.params.r = static_cast<int>(in.u16());
  s.params.n = in.u16();
  s.params.L = in.u16();
  s.params.validate();
  std::vector<Permutation> chain;
  for (int l = 0; l < s.params.r; ++l) chain.push_back(read_perm(in, s.params.n));
  split_chain(chain, s.alice.perms, s.bob.perms);
  s.bob.start = static_cast<Index>(in.u16());
  if (s.bob.start >= s.params.n) throw std::invalid_argument("pcs decode: bad start");
  for (std::size_t k = 0; k < s.params.n; ++k) s.alice.blocks.push_back(read_block(in, s.params.L));
  for (std::size_t k = 0; k < s.params.n; ++k) s.bob.blocks.push_back(read_block(in, s.params.L));
  in.finish();
  return s;
}

nlohmann::json PcsSample::to_json() const {
  return {{"r", params.r},
          {"n", params.n},
          {"L", params.L},
          {"alice", {{"perms", perms_json(alice.perms)}, {"blocks", blocks_json(alice.blocks)}}},
          {"bob",
           {{"start", bob.start},
            {"perms", perms_json(bob.perms)},
            {"blocks", blocks_json(bob.blocks)}}},
          {"endpoint", endpoint()}};
}

BitString random_block(std::size_t length, Rng& rng) {
  BitString out(length);
  for (std::size_t k = 0; k < length; ++k) out.set(k, (rng() >> 63) != 0);
  return out;
}

PcsSample sample_pcs(const PcsParams& params, Rng& rng) {
  params.validate();
  PcsSample s;
  s.params = params;
  s.bob.start = uniform_index(params.n, rng);
  s.alice.perms = random_perms(params.n, params.alice_perm_count(), rng);
  s.bob.perms = random_perms(params.n, params.bob_perm_count(), rng);
  s.alice.blocks = random_blocks(params.n, params.L, rng);
  s.bob.blocks = random_blocks(params.n, params.L, rng);
  const Index j = s.endpoint();
  s.bob.blocks[j] = s.alice.blocks[j];
  return s;
}

PcsSample sample_pcs_product(const PcsParams& params, Rng& rng) {
  params.validate();
  PcsSample s;
  s.params = params;
  s.bob.start = uniform_index(params.n, rng);
  s.alice.perms = random_perms(params.n, params.alice_perm_count(), rng);
  s.bob.perms = random_perms(params.n, params.bob_perm_count(), rng);
  s.alice.blocks = random_blocks(params.n, params.L, rng);
  s.bob.blocks = random_blocks(params.n, params.L, rng);
  return s;
}

PcsSample sample_mid(const PcsParams& params, Rng& rng) {
  params.validate();
  PcsSample s;
  s.params = params;
  s.bob.start = uniform_index(params.n, rng);
  s.alice.perms = random_perms(params.n, params.alice_perm_count(), rng);
  s.bob.perms = random_perms(params.n, params.bob_perm_count(), rng);
  const Index j = uniform_index(params.n, rng);
  s.alice.blocks = random_blocks(params.n, params.L, rng);
  s.bob.blocks = random_blocks(params.n, params.L, rng);
  s.bob.blocks[j] = s.alice.blocks[j];
  return s;
}

// ---------------------------------------------------------------------------

void PvParams::validate() const {
  if (r < 1 || r % 2 == 0) {
    throw std::invalid_argument("pv: r must be odd and >= 1, got " + std::to_string(r));
  }
  require_n(n);
}

std::string PvParams::universe() const {
  return "pv:" + std::to_string(r) + "," + std::to_string(n);
}

std::vector<Permutation> PvInstance::chain() const {
  return interleave(alice.perms, bob.perms, params.r);
}

bool PvInstance::chase_holds() const {
  const auto perms = chain();
  return chase(perms, bob.i0) == bob.j0;
}

Atom PvInstance::encode() const {
  Atom out(1, 'V');
  put_u16(out, static_cast<std::size_t>(params.r));
  put_u16(out, params.n);
  for (const auto& p : chain()) put_perm(out, p);
  put_u16(out, bob.i0);
  put_u16(out, bob.j0);
  return out;
}

PvInstance PvInstance::decode(std::string_view atom) {
  Reader in(atom, 'V');
  PvInstance v;
  v.params.r = static_cast<int>(in.u16());
  v.params.n = in.u16();
  v.params.validate();
  std::vector<Permutation> chain;
  for (int l = 0; l < v.params.r; ++l) chain.push_back(read_perm(in, v.params.n));
  split_chain(chain, v.alice.perms, v.bob.perms);
  v.bob.i0 = static_cast<Index>(in.u16());
  v.bob.j0 = static_cast<Index>(in.u16());
  if (v.bob.i0 >= v.params.n || v.bob.j0 >= v.params.n) {
    throw std::invalid_argument("pv decode: pointer out of range");
  }
  in.finish();
  return v;
}

nlohmann::json PvInstance::to_json() const {
  const char* label_name = label == PvLabel::yes ? "yes" : label == PvLabel::no ? "no" : "unlabeled";
  return {{"r", params.r},
          {"n", params.n},
          {"alice", {{"perms", perms_json(alice.perms)}}},
          {"bob", {{"i0", bob.i0}, {"j0", bob.j0}, {"perms", perms_json(bob.perms)}}},
          {"label", label_name},
          {"chase_holds", chase_holds()}};
}

PvInstance sample_pv(const PvParams& params, PvDraw draw, Rng& rng) {
  params.validate();
  if (draw == PvDraw::mix) {
    draw = std::bernoulli_distribution(0.5)(rng) ? PvDraw::yes : PvDraw::no;
  }
  PvInstance v;
  v.params = params;
  v.bob.i0 = uniform_index(params.n, rng);
  v.alice.perms = random_perms(params.n, params.alice_perm_count(), rng);
  v.bob.perms = random_perms(params.n, params.bob_perm_count(), rng);
  if (draw == PvDraw::yes) {
    v.label = PvLabel::yes;
    const auto perms = v.chain();
    v.bob.j0 = chase(perms, v.bob.i0);
  } else {
    v.label = PvLabel::no;
    v.bob.j0 = uniform_index(params.n, rng);
  }
  return v;
}

// ---------------------------------------------------------------------------

std::size_t DisjInstance::intersection_size() const {
  std::size_t count = 0;
  for (Index k : u) count += contains_v(k) ? 1 : 0;
  return count;
}

bool DisjInstance::contains_u(Index k) const { return std::binary_search(u.begin(), u.end(), k); }
bool DisjInstance::contains_v(Index k) const { return std::binary_search(v.begin(), v.end(), k); }

Atom DisjInstance::encode() const {
  Atom out(1, 'D');
  put_u16(out, n);
  for (Index k : u) put_u16(out, k);
  for (Index k : v) put_u16(out, k);
  return out;
}

DisjInstance DisjInstance::decode(std::string_view atom) {
  Reader in(atom, 'D');
  DisjInstance d;
  d.n = in.u16();
  if (d.n == 0 || d.n % 4 != 0) throw std::invalid_argument("disj decode: bad n");
  for (std::size_t k = 0; k < d.n / 4; ++k) d.u.push_back(static_cast<Index>(in.u16()));
  for (std::size_t k = 0; k < d.n / 4; ++k) d.v.push_back(static_cast<Index>(in.u16()));
  in.finish();
  return d;
}

nlohmann::json DisjInstance::to_json() const {
  return {{"n", n}, {"u", u}, {"v", v}, {"intersection", intersection_size()}};
}

namespace {

void validate_disj(std::size_t n) {
  if (n == 0 || n % 4 != 0 || n > kMaxField) {
    throw std::invalid_argument("disj: n must be a positive multiple of 4, got " +
                                std::to_string(n));
  }
}

}  // namespace

DisjInstance sample_disj(std::size_t n, bool intersecting, Rng& rng) {
  validate_disj(n);
  const std::size_t q = n / 4;
  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});
  std::shuffle(order.begin(), order.end(), rng);
  DisjInstance d;
  d.n = n;
  d.u.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(q));
  std::vector<Index> rest(order.begin() + static_cast<std::ptrdiff_t>(q), order.end());
  std::shuffle(rest.begin(), rest.end(), rng);
  if (intersecting) {
    d.v.push_back(d.u[uniform_index(q, rng)]);
    d.v.insert(d.v.end(), rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(q - 1));
  } else {
    d.v.assign(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(q));
  }
  std::sort(d.u.begin(), d.u.end());
  std::sort(d.v.begin(), d.v.end());
  return d;
}

// ---------------------------------------------------------------------------

std::string family_name(Family family) {
  switch (family) {
    case Family::pcs: return "pcs";
    case Family::pcs_product: return "pcs-product";
    case Family::pcs_mid: return "pcs-mid";
    case Family::pv_yes: return "pv-yes";
    case Family::pv_no: return "pv-no";
    case Family::pv_mix: return "pv-mix";
    case Family::disj_yes: return "disj-yes";
    case Family::disj_no: return "disj-no";
  }
  return "?";
}

Family parse_family(std::string_view name) {
  if (name.rfind("d-", 0) == 0) name.remove_prefix(2);
  for (Family f : {Family::pcs, Family::pcs_product, Family::pcs_mid, Family::pv_yes,
                   Family::pv_no, Family::pv_mix, Family::disj_yes, Family::disj_no}) {
    if (family_name(f) == name) return f;
  }
  throw std::invalid_argument("unknown family '" + std::string(name) + "'");
}

bool is_pcs_family(Family family) {
  return family == Family::pcs || family == Family::pcs_product || family == Family::pcs_mid;
}

bool is_pv_family(Family family) {
  return family == Family::pv_yes || family == Family::pv_no || family == Family::pv_mix;
}

void validate_family(Family family, const FamilyParams& params) {
  if (is_pcs_family(family)) {
    PcsParams{params.r, params.n, params.L}.validate();
  } else if (is_pv_family(family)) {
    PvParams{params.r, params.n}.validate();
  } else {
    validate_disj(params.n);
  }
}

std::string family_universe(Family family, const FamilyParams& params) {
  if (is_pcs_family(family)) return PcsParams{params.r, params.n, params.L}.universe();
  if (is_pv_family(family)) return PvParams{params.r, params.n}.universe();
  return "disj:" + std::to_string(params.n);
}

std::pair<Atom, nlohmann::json> sample_family(Family family, const FamilyParams& params,
                                              Rng& rng) {
  validate_family(family, params);
  const PcsParams pcs{params.r, params.n, params.L};
  const PvParams pv{params.r, params.n};
  auto pack = [](const auto& value) { return std::make_pair(value.encode(), value.to_json()); };
  switch (family) {
    case Family::pcs: return pack(sample_pcs(pcs, rng));
    case Family::pcs_product: return pack(sample_pcs_product(pcs, rng));
    case Family::pcs_mid: return pack(sample_mid(pcs, rng));
    case Family::pv_yes: return pack(sample_pv(pv, PvDraw::yes, rng));
    case Family::pv_no: return pack(sample_pv(pv, PvDraw::no, rng));
    case Family::pv_mix: return pack(sample_pv(pv, PvDraw::mix, rng));
    case Family::disj_yes: return pack(sample_disj(params.n, true, rng));
    case Family::disj_no: return pack(sample_disj(params.n, false, rng));
  }
  throw std::logic_error("sample_family: unknown family");
}

double support_combinations(Family family, const FamilyParams& params) {
  const double n = static_cast<double>(params.n);
  double perms = 1.0;
  for (std::size_t k = 2; k <= params.n; ++k) perms *= static_cast<double>(k);
  perms = std::pow(perms, params.r);
  const double L = static_cast<double>(params.L);
  switch (family) {
    case Family::pcs: return n * perms * std::exp2(L * (2 * n - 1));
    case Family::pcs_product: return n * perms * std::exp2(L * 2 * n);
    case Family::pcs_mid: return n * n * perms * std::exp2(L * (2 * n - 1));
    case Family::pv_yes: return n * perms;
    case Family::pv_no: return n * n * perms;
    case Family::pv_mix: return n * perms + n * n * perms;
    case Family::disj_yes: {
      const std::size_t q = params.n / 4;
      return binomial(params.n, q) * static_cast<double>(q) * binomial(params.n - q, q - 1);
    }
    case Family::disj_no: {
      const std::size_t q = params.n / 4;
      return binomial(params.n, q) * binomial(params.n - q, q);
    }
  }
  return 0.0;
}

void for_each_perm_tuple(std::size_t n, int count,
                         const std::function<void(std::span<const Permutation>)>& visit) {
  const auto all = all_permutations(n);
  std::vector<std::size_t> digit(static_cast<std::size_t>(count), 0);
  std::vector<Permutation> tuple(static_cast<std::size_t>(count), all.front());
  while (true) {
    for (std::size_t k = 0; k < digit.size(); ++k) tuple[k] = all[digit[k]];
    visit(tuple);
    std::size_t k = digit.size();
    while (k > 0 && digit[k - 1] + 1 == all.size()) {
      digit[k - 1] = 0;
      --k;
    }
    if (k == 0) return;
    ++digit[k - 1];
  }
}

void for_each_pcs(Family family, const PcsParams& params, std::uint64_t cap,
                  const std::function<void(const PcsSample&)>& visit) {
  if (!is_pcs_family(family)) throw std::invalid_argument("for_each_pcs: not a PCS family");
  params.validate();
  const FamilyParams fp{params.r, params.n, params.L};
  const double combos = support_combinations(family, fp);
  if (params.L > kMaxEnumeratedBlockBits) {
    throw CapExceeded("enumerate " + family_name(family) + ": block length " +
                          std::to_string(params.L) + " exceeds the enumeration limit of " +
                          std::to_string(kMaxEnumeratedBlockBits) + " bits",
                      combos);
  }
  check_cap(combos, cap, "enumerate " + family_name(family));

  const std::size_t n = params.n;
  const std::size_t L = params.L;
  const bool mid = family == Family::pcs_mid;
  const std::size_t free_bits = family == Family::pcs_product ? 2 * n * L : (2 * n - 1) * L;

  PcsSample s;
  s.params = params;
  s.alice.blocks.assign(n, BitString(L));
  s.bob.blocks.assign(n, BitString(L));
  for (Index start = 0; start < n; ++start) {
    s.bob.start = start;
    for_each_perm_tuple(n, params.r, [&](std::span<const Permutation> chain) {
      split_chain(chain, s.alice.perms, s.bob.perms);
      const Index chased = chase(chain, start);
      for (Index j = 0; j < (mid ? n : 1); ++j) {
        const Index shared_at = mid ? j : chased;
        for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << free_bits); ++bits) {
          const BitString all = BitString::from_uint(bits, free_bits);
          std::size_t at = 0;
          if (family == Family::pcs_product) {
            for (std::size_t k = 0; k < n; ++k, at += L) s.alice.blocks[k] = all.slice(at, L);
            for (std::size_t k = 0; k < n; ++k, at += L) s.bob.blocks[k] = all.slice(at, L);
          } else {
            const BitString common = all.slice(0, L);
            at = L;
            for (std::size_t k = 0; k < n; ++k) {
              if (k == shared_at) {
                s.alice.blocks[k] = common;
              } else {
                s.alice.blocks[k] = all.slice(at, L);
                at += L;
              }
            }
            for (std::size_t k = 0; k < n; ++k) {
              if (k == shared_at) {
                s.bob.blocks[k] = common;
              } else {
                s.bob.blocks[k] = all.slice(at, L);
                at += L;
              }
            }
          }
          visit(s);
        }
      }
    });
  }
}

void for_each_pv(PvDraw draw, const PvParams& params, std::uint64_t cap,
                 const std::function<void(const PvInstance&, Weight)>& visit) {
  params.validate();
  const Family family = draw == PvDraw::yes ? Family::pv_yes
                        : draw == PvDraw::no ? Family::pv_no
                                             : Family::pv_mix;
  check_cap(support_combinations(family, {params.r, params.n, 1}), cap,
            "enumerate " + family_name(family));
  const std::size_t n = params.n;
  PvInstance v;
  v.params = params;
  if (draw != PvDraw::no) {
    const Weight w = draw == PvDraw::mix ? n : 1;
    v.label = PvLabel::yes;
    for (Index i0 = 0; i0 < n; ++i0) {
      for_each_perm_tuple(n, params.r, [&](std::span<const Permutation> chain) {
        split_chain(chain, v.alice.perms, v.bob.perms);
        v.bob.i0 = i0;
        v.bob.j0 = chase(chain, i0);
        visit(v, w);
      });
    }
  }
  if (draw != PvDraw::yes) {
    v.label = PvLabel::no;
    for (Index i0 = 0; i0 < n; ++i0) {
      for (Index j0 = 0; j0 < n; ++j0) {
        for_each_perm_tuple(n, params.r, [&](std::span<const Permutation> chain) {
          split_chain(chain, v.alice.perms, v.bob.perms);
          v.bob.i0 = i0;
          v.bob.j0 = j0;
          visit(v, 1);
        });
      }
    }
  }
}

void for_each_disj(std::size_t n, bool intersecting, std::uint64_t cap,
                   const std::function<void(const DisjInstance&)>& visit) {
  validate_disj(n);
  check_cap(support_combinations(intersecting ? Family::disj_yes : Family::disj_no,
                                 {1, n, 1}),
            cap, "enumerate disjointness");
  const std::size_t q = n / 4;
  std::vector<Index> all(n);
  std::iota(all.begin(), all.end(), Index{0});
  DisjInstance d;
  d.n = n;
  for_each_subset(all, q, [&](const std::vector<Index>& u) {
    d.u = u;
    std::vector<Index> outside;
    for (Index k : all) {
      if (!std::binary_search(u.begin(), u.end(), k)) outside.push_back(k);
    }
    if (intersecting) {
      for (Index common : u) {
        for_each_subset(outside, q - 1, [&](const std::vector<Index>& rest) {
          d.v = rest;
          d.v.push_back(common);
          std::sort(d.v.begin(), d.v.end());
          visit(d);
        });
      }
    } else {
      for_each_subset(outside, q, [&](const std::vector<Index>& v) {
        d.v = v;
        visit(d);
      });
    }
  });
}

DistTable enumerate_source(Family family, const FamilyParams& params, std::uint64_t cap) {
  validate_family(family, params);
  DistTable::Builder builder(family_universe(family, params));
  if (is_pcs_family(family)) {
    for_each_pcs(family, {params.r, params.n, params.L}, cap,
                 [&](const PcsSample& s) { builder.add(s.encode(), 1); });
  } else if (is_pv_family(family)) {
    const PvDraw draw = family == Family::pv_yes ? PvDraw::yes
                        : family == Family::pv_no ? PvDraw::no
                                                  : PvDraw::mix;
    for_each_pv(draw, {params.r, params.n}, cap,
                [&](const PvInstance& v, Weight w) { builder.add(v.encode(), w); });
  } else {
    for_each_disj(params.n, family == Family::disj_yes, cap,
                  [&](const DisjInstance& d) { builder.add(d.encode(), 1); });
  }
  return std::move(builder).build();
}

DistTable enumerate_pv_given_chain(PvDraw draw, const PvParams& params,
                                   std::span<const Permutation> chain) {
  params.validate();
  if (chain.size() != static_cast<std::size_t>(params.r)) {
    throw std::invalid_argument("enumerate_pv_given_chain: chain length differs from r");
  }
  for (const auto& p : chain) {
    if (p.size() != params.n) {
      throw std::invalid_argument("enumerate_pv_given_chain: permutation size differs from n");
    }
  }
  const std::size_t n = params.n;
  PvInstance v;
  v.params = params;
  split_chain(chain, v.alice.perms, v.bob.perms);
  DistTable::Builder builder(params.universe());
  if (draw != PvDraw::no) {
    const Weight w = draw == PvDraw::mix ? n : 1;
    for (Index i0 = 0; i0 < n; ++i0) {
      v.bob.i0 = i0;
      v.bob.j0 = chase(chain, i0);
      builder.add(v.encode(), w);
    }
  }
  if (draw != PvDraw::yes) {
    for (Index i0 = 0; i0 < n; ++i0) {
      for (Index j0 = 0; j0 < n; ++j0) {
        v.bob.i0 = i0;
        v.bob.j0 = j0;
        builder.add(v.encode(), 1);
      }
    }
  }
  return std::move(builder).build();
}

std::pair<std::string, std::string> party_views(std::string_view atom) {
  if (atom.empty()) throw std::invalid_argument("party_views: empty atom");
  std::string a;
  std::string b;
  switch (atom[0]) {
    case 'P': {
      const auto s = PcsSample::decode(atom);
      a.push_back('a');
      for (const auto& p : s.alice.perms) put_perm(a, p);
      for (const auto& blk : s.alice.blocks) put_block(a, blk);
      b.push_back('b');
      put_u16(b, s.bob.start);
      for (const auto& p : s.bob.perms) put_perm(b, p);
      for (const auto& blk : s.bob.blocks) put_block(b, blk);
      break;
    }
    case 'V': {
      const auto v = PvInstance::decode(atom);
      a.push_back('a');
      for (const auto& p : v.alice.perms) put_perm(a, p);
      b.push_back('b');
      put_u16(b, v.bob.i0);
      put_u16(b, v.bob.j0);
      for (const auto& p : v.bob.perms) put_perm(b, p);
      break;
    }
    case 'D': {
      const auto d = DisjInstance::decode(atom);
      a.push_back('a');
      for (Index k : d.u) put_u16(a, k);
      b.push_back('b');
      for (Index k : d.v) put_u16(b, k);
      break;
    }
    default:
      throw std::invalid_argument("party_views: unknown atom tag");
  }
  return {std::move(a), std::move(b)};
}

}  // namespace crglab
