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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "crglab/dist_table.hpp"
#include "crglab/engine.hpp"
#include "crglab/infometrics.hpp"
#include "crglab/protocols.hpp"
#include "crglab/randomness.hpp"
#include "crglab/sources.hpp"

namespace crglab {

/// Splits an input-pair atom into the parties' inputs.
template <class AliceIn, class BobIn>
struct InputCodec;

template <>
struct InputCodec<PcsAlice, PcsBob> {
  static std::pair<PcsAlice, PcsBob> split(std::string_view atom) {
    auto sample = PcsSample::decode(atom);
    return {std::move(sample.alice), std::move(sample.bob)};
  }
};

template <>
struct InputCodec<PvAlice, PvBob> {
  static std::pair<PvAlice, PvBob> split(std::string_view atom) {
    auto instance = PvInstance::decode(atom);
    return {std::move(instance.alice), std::move(instance.bob)};
  }
};

/// Coin outcomes of one run for exhaustive enumeration of `coins`.
Randomness enumerated_coins(const CoinBudget& coins, std::uint64_t outcome);

/// Atom of one execution: (input, transcript, K_A, K_B).
Atom run_atom(std::string_view input, const RunRecord& record);

/// Adds the named coordinates "input", "transcript", "k_a", "k_b" and
/// "last_bit" to a table of run atoms.
JointTable run_joint(DistTable runs);

/// Exact law of (input, transcript, K_A, K_B) when inputs follow `inputs`
/// and coins are uniform. Throws CapExceeded when inputs x coin outcomes
/// exceed `cap`.
template <class AliceIn, class BobIn>
JointTable exact_run_table(const ProtocolSpec<AliceIn, BobIn>& spec,
                           const DistTable& inputs,
                           std::uint64_t cap = kDefaultEnumerationCap) {
  const std::size_t coin_bits = spec.randomized ? spec.coins.total() : 0;
  if (coin_bits > 40) {
    throw CapExceeded("exact_run_table: " + std::to_string(coin_bits) +
                          " coin bits cannot be enumerated",
                      std::ldexp(static_cast<double>(inputs.size()),
                                 static_cast<int>(coin_bits)));
  }
  const std::uint64_t outcomes = std::uint64_t{1} << coin_bits;
  const double combos = static_cast<double>(inputs.size()) * static_cast<double>(outcomes);
  if (combos > static_cast<double>(cap)) {
    throw CapExceeded("exact_run_table: " + std::to_string(static_cast<std::uint64_t>(combos)) +
                          " input x coin combinations exceed the cap of " +
                          std::to_string(cap),
                      combos);
  }
  DistTable::Builder builder("runs:" + spec.name + "@" + inputs.universe());
  for (const auto& entry : inputs.entries()) {
    const auto [alice_in, bob_in] = InputCodec<AliceIn, BobIn>::split(entry.atom);
    for (std::uint64_t outcome = 0; outcome < outcomes; ++outcome) {
      const Randomness coins = spec.randomized ? enumerated_coins(spec.coins, outcome)
                                               : Randomness::seeded(0);
      builder.add(run_atom(entry.atom, run_protocol(spec, alice_in, bob_in, coins)),
                  entry.weight);
    }
  }
  return run_joint(std::move(builder).build());
}

/// Exact law of the transcript.
template <class AliceIn, class BobIn>
DistTable exact_transcript_distribution(const ProtocolSpec<AliceIn, BobIn>& spec,
                                        const DistTable& inputs,
                                        std::uint64_t cap = kDefaultEnumerationCap) {
  return exact_run_table(spec, inputs, cap).marginal({"transcript"});
}

/// Total variation distance between the transcript laws under d1 and d2.
template <class AliceIn, class BobIn>
double protocol_tv(const ProtocolSpec<AliceIn, BobIn>& spec, const DistTable& d1,
                   const DistTable& d2, std::uint64_t cap = kDefaultEnumerationCap) {
  require_same_universe(d1, d2, "protocol_tv");
  return tv_distance(exact_transcript_distribution(spec, d1, cap),
                     exact_transcript_distribution(spec, d2, cap));
}

/// Pr_{d1}[last bit = 1] - Pr_{d2}[last bit = 1].
template <class AliceIn, class BobIn>
double output_bit_advantage(const ProtocolSpec<AliceIn, BobIn>& spec,
                            const DistTable& d1, const DistTable& d2,
                            std::uint64_t cap = kDefaultEnumerationCap) {
  auto ones = [&](const DistTable& d) {
    const auto bits = exact_run_table(spec, d, cap).marginal({"last_bit"});
    return bits.probability("1");
  };
  return ones(d1) - ones(d2);
}

struct Fraction {
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 1;
  double value() const {
    return static_cast<double>(numerator) / static_cast<double>(denominator);
  }
};

/// Exact probability that the final transcript bit equals
/// [pi_r(...pi_1(i0)...) = j0]. Requires a PV table.
template <class AliceIn, class BobIn>
Fraction success_probability(const ProtocolSpec<AliceIn, BobIn>& spec,
                             const DistTable& mix,
                             std::uint64_t cap = kDefaultEnumerationCap) {
  if (mix.universe().rfind("pv:", 0) != 0) {
    throw std::invalid_argument(
        "success_probability: table carries no pointer-verification truth");
  }
  const JointTable runs = exact_run_table(spec, mix, cap);
  Fraction result{0, runs.table().total()};
  for (const auto& entry : runs.table().entries()) {
    const bool truth = PvInstance::decode(runs.key({"input"}, entry.atom)).chase_holds();
    const bool said = runs.key({"last_bit"}, entry.atom) == "1";
    if (truth == said) result.numerator = checked_add(result.numerator, entry.weight);
  }
  return result;
}

struct McTvEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  /// Approximate expected plug-in TV when both laws are equal to the pooled
  /// histogram; the estimator's upward bias floor. Not subtracted.
  double bias_floor = 0.0;
  std::size_t trials = 0;
  std::size_t bootstrap = 0;
  nlohmann::json to_json() const;
};

struct McOptions {
  std::size_t bootstrap = 200;
  unsigned jobs = 1;
};

/// Plug-in TV between two transcript histograms with a bootstrap standard
/// error. `counts` map transcript atoms to occurrence counts.
McTvEstimate estimate_tv_from_counts(const std::map<Atom, std::uint64_t>& counts1,
                                     const std::map<Atom, std::uint64_t>& counts2,
                                     std::size_t bootstrap, std::uint64_t seed);

template <class AliceIn, class BobIn>
using InputSampler = std::function<std::pair<AliceIn, BobIn>(Rng&)>;

/// Transcript histogram of `trials` runs on sampled inputs. Trial k draws
/// its input from derive_seed(seed, 2k) and its coins from
/// derive_seed(seed, 2k + 1), so the result does not depend on `jobs`.
template <class AliceIn, class BobIn>
std::map<Atom, std::uint64_t> sample_transcripts(
    const ProtocolSpec<AliceIn, BobIn>& spec, const InputSampler<AliceIn, BobIn>& sampler,
    std::size_t trials, std::uint64_t seed, unsigned jobs = 1) {
  std::vector<Atom> transcripts(trials);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      Rng rng(derive_seed(seed, 2 * k));
      const auto [a, b] = sampler(rng);
      transcripts[k] = run_protocol(spec, a, b, derive_seed(seed, 2 * k + 1))
                           .transcript.encode();
    }
  };
  jobs = std::max(1u, jobs);
  if (jobs == 1 || trials < 2 * jobs) {
    work(0, trials);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (trials + jobs - 1) / jobs;
    for (unsigned w = 0; w < jobs; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(trials, begin + chunk);
      if (begin < end) pool.emplace_back(work, begin, end);
    }
    for (auto& thread : pool) thread.join();
  }
  std::map<Atom, std::uint64_t> counts;
  for (auto& atom : transcripts) ++counts[std::move(atom)];
  return counts;
}

/// Monte Carlo surrogate for protocol_tv at scales too large to enumerate.
/// Throws std::invalid_argument for fewer than 100 trials.
template <class AliceIn, class BobIn>
McTvEstimate mc_tv_estimate(const ProtocolSpec<AliceIn, BobIn>& spec,
                            const InputSampler<AliceIn, BobIn>& sampler1,
                            const InputSampler<AliceIn, BobIn>& sampler2,
                            std::size_t trials, std::uint64_t seed,
                            const McOptions& options = {}) {
  if (trials < 100) throw std::invalid_argument("mc_tv_estimate: need at least 100 trials");
  const auto counts1 = sample_transcripts(spec, sampler1, trials, derive_seed(seed, 1),
                                          options.jobs);
  const auto counts2 = sample_transcripts(spec, sampler2, trials, derive_seed(seed, 2),
                                          options.jobs);
  return estimate_tv_from_counts(counts1, counts2, options.bootstrap,
                                 derive_seed(seed, 3));
}

// ---------------------------------------------------------------------------
// Exhaustive protocol search.

/// What the terminal decision bit is scored against.
class SearchProblem {
 public:
  /// Success on a PV table: the bit should equal the chase indicator.
  static SearchProblem success_on(const DistTable& mix);
  /// Telling d1 (bit 1) from d2 (bit 0); scored as advantage.
  static SearchProblem distinguish(const DistTable& d1, const DistTable& d2);

  struct Item {
    std::uint32_t alice;  // id of Alice's view
    std::uint32_t bob;    // id of Bob's view
    std::int64_t gain0;   // weight won by deciding 0
    std::int64_t gain1;   // weight won by deciding 1
  };

  bool is_distinguishing() const { return distinguishing_; }
  const std::vector<Item>& items() const { return items_; }
  std::size_t alice_views() const { return alice_views_.size(); }
  std::size_t bob_views() const { return bob_views_.size(); }
  const std::vector<std::string>& alice_view_atoms() const { return alice_views_; }
  const std::vector<std::string>& bob_view_atoms() const { return bob_views_; }
  /// Sum of all gains: the denominator of the success probability.
  std::int64_t scale() const { return scale_; }

 private:
  void add(std::string_view atom, std::int64_t gain0, std::int64_t gain1);
  void finish();

  bool distinguishing_ = false;
  std::vector<Item> items_;
  std::vector<std::string> alice_views_;
  std::vector<std::string> bob_views_;
  std::map<std::string, std::uint32_t, std::less<>> alice_ids_;
  std::map<std::string, std::uint32_t, std::less<>> bob_ids_;
  std::int64_t scale_ = 0;
};

struct SearchBudget {
  int rounds = 0;          // sender messages, excluding the decision bit
  std::size_t bits = 0;    // bits over those messages
};

struct SearchOptions {
  std::uint64_t cap = 1'000'000;  // sender functions evaluated
  std::optional<Party> first_speaker;  // both when unset
};

struct SearchResult {
  bool distinguishing = false;
  double optimum = 0.0;   // success probability or advantage
  Fraction exact;         // optimum as a fraction (advantage: numerator / denominator)
  SearchBudget budget;
  std::uint64_t enumeration_size = 0;
  /// The optimal opening move: who decides without communication, or who
  /// speaks first and the message each of their views sends.
  std::optional<Party> first_speaker;
  Party decider = Party::bob;
  std::size_t first_length = 0;
  std::vector<std::pair<std::string, std::uint32_t>> first_message;
  nlohmann::json to_json() const;
};

/// Best value over all protocols with at most budget.rounds sender messages
/// and budget.bits bits, closed by a decision bit from the party who would
/// speak next. The decision is the exact Bayes response per (transcript,
/// decider view) cell; sender functions are enumerated in canonical form
/// (message values in order of first use). Throws CapExceeded once more
/// than options.cap sender functions would be evaluated.
SearchResult exhaustive_protocol_search(const SearchProblem& problem,
                                        const SearchBudget& budget,
                                        const SearchOptions& options = {});

// ---------------------------------------------------------------------------
// Noisy distribution class checker.

struct NoisyClassParams {
  std::size_t n = 2;
  int r = 1;
  double delta = 0.0;  // entropy slack, bits
  double C = 0.0;      // total entropy slack on the permutations, bits
  /// Requires odd r, 0 <= delta < 1 and 0 <= C < n.
  void validate() const;
};

struct ConditionResult {
  std::string id;  // "1a", "1b", "2", "3a", "3b", "4a", "4b", "5"
  std::string quantity;
  double measured = 0.0;
  double threshold = 0.0;
  double margin = 0.0;  // measured - threshold
  bool pass = false;  // measured >= threshold - 1e-9
  bool evaluated = true;
};

struct IndependenceResult {
  int t = 0;
  bool holds = true;
  std::uint64_t checked_cells = 0;
  /// Conditioning tuples of zero probability, which are not checked.
  double skipped_cells = 0.0;
};

struct NoisyClassReport {
  std::vector<ConditionResult> conditions;
  std::vector<IndependenceResult> independence;

  const ConditionResult& at(std::string_view id) const;
  /// Every evaluated condition passes.
  bool all_pass() const;
  nlohmann::json to_json() const;
};

/// Named coordinates of a PV table: i0, j0, pi1..pir, perms, ind (chase
/// indicator), i<s> and j<s> for the forward and backward frontiers.
JointTable pv_joint(const DistTable& table);

/// Exact check over a full PV table. Throws std::invalid_argument for a
/// non-PV table or parameter mismatch.
NoisyClassReport noisy_class_check(const DistTable& table, const NoisyClassParams& params);

/// Check for a distribution invariant under the relabelling
/// pi_l -> s_l ∘ pi_l ∘ s_{l-1}^{-1}, i0 -> s_0(i0), j0 -> s_r(j0).
/// `identity_slice` is the law of (i0, j0) given that every permutation is
/// the identity. Under invariance the permutations are uniform and every
/// quantity conditioned on all permutations equals its value on the slice.
/// Condition 5 is reported as not evaluated.
NoisyClassReport noisy_class_check_symmetric(const DistTable& identity_slice,
                                             const NoisyClassParams& params);

/// Samples `trials` random relabellings and checks the table maps onto
/// itself with equal weights.
bool relabel_invariant(const DistTable& table, std::size_t trials, Rng& rng);

}  // namespace crglab
