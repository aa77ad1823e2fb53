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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "crglab/lab.hpp"

namespace crglab {

namespace {

std::int64_t to_gain(Weight a, Weight b) {
  const Weight w = checked_mul(a, b);
  if (w > static_cast<Weight>(std::numeric_limits<std::int64_t>::max() / 4)) {
    throw std::overflow_error("search: weights too large");
  }
  return static_cast<std::int64_t>(w);
}

}  // namespace

void SearchProblem::add(std::string_view atom, std::int64_t gain0, std::int64_t gain1) {
  auto [a, b] = party_views(atom);
  auto id = [](std::map<std::string, std::uint32_t, std::less<>>& ids,
               std::vector<std::string>& names, std::string view) {
    const auto it = ids.find(view);
    if (it != ids.end()) return it->second;
    const auto next = static_cast<std::uint32_t>(names.size());
    ids.emplace(view, next);
    names.push_back(std::move(view));
    return next;
  };
  const auto ia = id(alice_ids_, alice_views_, std::move(a));
  const auto ib = id(bob_ids_, bob_views_, std::move(b));
  items_.push_back({ia, ib, gain0, gain1});
  scale_ += gain0 + gain1;
}

void SearchProblem::finish() {
  std::sort(items_.begin(), items_.end(), [](const Item& x, const Item& y) {
    return std::tie(x.alice, x.bob) < std::tie(y.alice, y.bob);
  });
  std::vector<Item> merged;
  for (const auto& item : items_) {
    if (!merged.empty() && merged.back().alice == item.alice && merged.back().bob == item.bob) {
      merged.back().gain0 += item.gain0;
      merged.back().gain1 += item.gain1;
    } else {
      merged.push_back(item);
    }
  }
  items_ = std::move(merged);
}

SearchProblem SearchProblem::success_on(const DistTable& mix) {
  if (mix.universe().rfind("pv:", 0) != 0) {
    throw std::invalid_argument("search: success needs a pointer-verification table");
  }
  SearchProblem p;
  for (const auto& e : mix.entries()) {
    const bool truth = PvInstance::decode(e.atom).chase_holds();
    const auto w = to_gain(e.weight, 1);
    p.add(e.atom, truth ? 0 : w, truth ? w : 0);
  }
  p.finish();
  return p;
}

SearchProblem SearchProblem::distinguish(const DistTable& d1, const DistTable& d2) {
  require_same_universe(d1, d2, "search");
  SearchProblem p;
  p.distinguishing_ = true;
  for (const auto& e : d1.entries()) p.add(e.atom, 0, to_gain(e.weight, d2.total()));
  for (const auto& e : d2.entries()) p.add(e.atom, to_gain(e.weight, d1.total()), 0);
  p.finish();
  return p;
}

namespace {

struct Choice {
  bool decide = true;
  std::size_t length = 0;
  std::vector<std::uint32_t> views;   // speaker views in order
  std::vector<std::uint32_t> labels;  // message value per view
};

class Searcher {
 public:
  Searcher(const SearchProblem& problem, std::uint64_t cap) : problem_(problem), cap_(cap) {}

  std::int64_t solve(const std::vector<std::uint32_t>& items, Party speaker, int rounds,
                     std::size_t bits, Choice* record) {
    std::string key;
    if (record == nullptr) {
      key = memo_key(items, speaker, rounds, bits);
      const auto hit = memo_.find(key);
      if (hit != memo_.end()) return hit->second;
    }

    std::int64_t best = decide(items, speaker);
    const std::int64_t ceiling = upper(items);
    if (record != nullptr) *record = Choice{};

    std::vector<std::uint32_t> views = speaker_views(items, speaker);
    const std::size_t v = views.size();
    if (best < ceiling && rounds > 0 && bits > 0 && v >= 2) {
      // position of each item's speaker view within `views`
      std::vector<std::uint32_t> slot(items.size());
      for (std::size_t k = 0; k < items.size(); ++k) {
        const auto view = view_of(items[k], speaker);
        slot[k] = static_cast<std::uint32_t>(
            std::lower_bound(views.begin(), views.end(), view) - views.begin());
      }
      std::vector<std::uint32_t> labels(v, 0);
      std::vector<std::vector<std::uint32_t>> groups;
      for (std::size_t length = 1; length <= bits && best < ceiling; ++length) {
        const std::size_t lo = (std::size_t{1} << (length - 1)) + 1;
        if (lo > v) break;
        const std::size_t hi = std::min<std::size_t>(v, std::size_t{1} << std::min<std::size_t>(length, 62));
        for_each_rgs(labels, lo, hi, [&](std::size_t used) {
          if (++enumerated_ > cap_) {
            throw CapExceeded("search: more than " + std::to_string(cap_) +
                                  " sender functions needed",
                              static_cast<double>(enumerated_) + remaining_estimate(v, bits));
          }
          groups.assign(used, {});
          for (std::size_t k = 0; k < items.size(); ++k) groups[labels[slot[k]]].push_back(items[k]);
          std::int64_t total = 0;
          for (const auto& g : groups) {
            total += solve(g, other(speaker), rounds - 1, bits - length, nullptr);
          }
          if (total > best) {
            best = total;
            if (record != nullptr) {
              record->decide = false;
              record->length = length;
              record->views = views;
              record->labels = labels;
            }
          }
          return best < ceiling;
        });
      }
    }
    if (record == nullptr) memo_.emplace(std::move(key), best);
    return best;
  }

  std::uint64_t enumerated() const { return enumerated_; }

  std::int64_t decide(const std::vector<std::uint32_t>& items, Party who) const {
    std::unordered_map<std::uint32_t, std::pair<std::int64_t, std::int64_t>> cells;
    for (auto k : items) {
      const auto& item = problem_.items()[k];
      auto& cell = cells[view_of(k, who)];
      cell.first += item.gain0;
      cell.second += item.gain1;
    }
    std::int64_t value = 0;
    for (const auto& [view, g] : cells) value += std::max(g.first, g.second);
    return value;
  }

  std::int64_t upper(const std::vector<std::uint32_t>& items) const {
    std::int64_t value = 0;
    for (auto k : items) {
      const auto& item = problem_.items()[k];
      value += std::max(item.gain0, item.gain1);
    }
    return value;
  }

 private:
  std::uint32_t view_of(std::uint32_t item, Party who) const {
    const auto& it = problem_.items()[item];
    return who == Party::alice ? it.alice : it.bob;
  }

  std::vector<std::uint32_t> speaker_views(const std::vector<std::uint32_t>& items,
                                           Party who) const {
    std::vector<std::uint32_t> views;
    views.reserve(items.size());
    for (auto k : items) views.push_back(view_of(k, who));
    std::sort(views.begin(), views.end());
    views.erase(std::unique(views.begin(), views.end()), views.end());
    return views;
  }

  static std::string memo_key(const std::vector<std::uint32_t>& items, Party speaker,
                              int rounds, std::size_t bits) {
    std::string key;
    key.reserve(12 + 4 * items.size());
    auto put = [&key](std::uint64_t x, int bytes) {
      for (int b = 0; b < bytes; ++b) key.push_back(static_cast<char>((x >> (8 * b)) & 0xFFU));
    };
    put(speaker == Party::alice ? 0 : 1, 1);
    put(static_cast<std::uint64_t>(rounds), 4);
    put(bits, 4);
    for (auto k : items) put(k, 4);
    return key;
  }

  /// Visits every restricted growth string over labels.size() positions
  /// whose label count lies in [lo, hi]. `visit(used)` returns false to stop.
  template <class Visit>
  static void for_each_rgs(std::vector<std::uint32_t>& labels, std::size_t lo, std::size_t hi,
                           Visit&& visit) {
    const std::size_t len = labels.size();
    bool go = true;
    auto rec = [&](auto&& self, std::size_t pos, std::size_t used) -> void {
      if (!go) return;
      if (len - pos + used < lo) return;  // cannot reach lo labels any more
      if (pos == len) {
        go = visit(used);
        return;
      }
      const std::size_t top = std::min(used + 1, hi);
      for (std::size_t label = 0; label < top && go; ++label) {
        labels[pos] = static_cast<std::uint32_t>(label);
        self(self, pos + 1, label == used ? used + 1 : used);
      }
    };
    rec(rec, 0, 0);
  }

  static double remaining_estimate(std::size_t views, std::size_t bits) {
    // Upper estimate of the sender functions at one node: (2^bits)^views / 2.
    return std::pow(2.0, static_cast<double>(std::min<std::size_t>(bits, 60)) *
                             static_cast<double>(views)) / 2.0;
  }

  const SearchProblem& problem_;
  std::uint64_t cap_;
  std::uint64_t enumerated_ = 0;
  std::unordered_map<std::string, std::int64_t> memo_;
};

std::string label_bits(std::uint32_t label, std::size_t length) {
  return BitString::from_uint(label, length).to_string();
}

}  // namespace

SearchResult exhaustive_protocol_search(const SearchProblem& problem, const SearchBudget& budget,
                                        const SearchOptions& options) {
  if (budget.rounds < 0) throw std::invalid_argument("search: negative round budget");
  if (problem.items().empty()) throw std::invalid_argument("search: empty problem");
  Searcher searcher(problem, options.cap);
  std::vector<std::uint32_t> all(problem.items().size());
  std::iota(all.begin(), all.end(), 0U);

  std::vector<Party> speakers;
  if (options.first_speaker) {
    speakers.push_back(*options.first_speaker);
  } else {
    speakers = {Party::alice, Party::bob};
  }

  std::int64_t best = -1;
  Choice best_choice;
  Party best_speaker = speakers.front();
  for (Party p : speakers) {
    Choice choice;
    const std::int64_t value = searcher.solve(all, p, budget.rounds, budget.bits, &choice);
    if (value > best) {
      best = value;
      best_choice = choice;
      best_speaker = p;
    }
  }

  SearchResult result;
  result.distinguishing = problem.is_distinguishing();
  result.budget = budget;
  result.enumeration_size = searcher.enumerated();
  const auto scale = static_cast<std::uint64_t>(problem.scale());
  std::uint64_t numerator = static_cast<std::uint64_t>(best);
  if (problem.is_distinguishing()) numerator = 2 * numerator - scale;
  const std::uint64_t g = std::gcd(numerator, scale);
  result.exact = {numerator / g, scale / g};
  result.optimum = result.exact.value();

  if (best_choice.decide) {
    result.decider = best_speaker;
  } else {
    result.first_speaker = best_speaker;
    result.first_length = best_choice.length;
    const auto& names = best_speaker == Party::alice ? problem.alice_view_atoms()
                                                     : problem.bob_view_atoms();
    for (std::size_t k = 0; k < best_choice.views.size(); ++k) {
      result.first_message.emplace_back(to_hex(names[best_choice.views[k]]),
                                        best_choice.labels[k]);
    }
  }
  return result;
}

nlohmann::json SearchResult::to_json() const {
  nlohmann::json message = nlohmann::json::array();
  for (const auto& [view, label] : first_message) {
    message.push_back({{"view", view}, {"message", label_bits(label, first_length)}});
  }
  return {{"objective", distinguishing ? "advantage" : "success"},
          {"optimum", optimum},
          {"numerator", exact.numerator},
          {"denominator", exact.denominator},
          {"rounds", budget.rounds},
          {"bits", budget.bits},
          {"enumeration_size", enumeration_size},
          {"first_speaker", first_speaker ? nlohmann::json(std::string(party_name(*first_speaker)))
                                          : nlohmann::json(nullptr)},
          {"opening_decider", first_speaker ? nlohmann::json(nullptr)
                                            : nlohmann::json(std::string(party_name(decider)))},
          {"first_length", first_length},
          {"first_message", std::move(message)}};
}

}  // namespace crglab
