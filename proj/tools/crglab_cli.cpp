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


#include "crglab_cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "crglab/dist_table.hpp"
#include "crglab/engine.hpp"
#include "crglab/infometrics.hpp"
#include "crglab/lab.hpp"
#include "crglab/protocols.hpp"
#include "crglab/randomness.hpp"
#include "crglab/reductions.hpp"
#include "crglab/sources.hpp"

namespace crglab::cli {

namespace {

using nlohmann::json;

// Exact computations run without --exact only below this many combinations.
constexpr double kAutoExactLimit = 1e5;

void round_numbers(json& value) {
  if (value.is_number_float()) {
    value = round12(value.get<double>());
  } else if (value.is_structured()) {
    for (auto& child : value) round_numbers(child);
  }
}

void write_line(std::ostream& out, json value) {
  round_numbers(value);
  out << value.dump() << '\n';
}

std::string format12(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.12g", value);
  return buffer;
}

FamilyParams family_params(const ExperimentConfig& config) {
  return {config.r, config.n, config.L};
}

Family checked_family(const std::string& name, const FamilyParams& params) {
  const Family family = parse_family(name);
  validate_family(family, params);
  return family;
}

/// Runs body(k) for k in [0, count) over `jobs` threads.
void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& body) {
  jobs = std::max(1u, jobs);
  if (jobs == 1 || count < 2 * jobs) {
    for (std::size_t k = 0; k < count; ++k) body(k);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (count + jobs - 1) / jobs;
  for (unsigned w = 0; w < jobs; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&body, begin, end] {
      for (std::size_t k = begin; k < end; ++k) body(k);
    });
  }
  for (auto& thread : pool) thread.join();
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

std::uint64_t coin_outcomes(const CoinBudget& coins, bool randomized) {
  const std::size_t bits = randomized ? coins.total() : 0;
  return bits >= 40 ? std::uint64_t{1} << 40 : std::uint64_t{1} << bits;
}

bool exact_wanted(const ExperimentConfig& config, double combos) {
  return config.exact || (combos <= kAutoExactLimit && config.L <= kMaxEnumeratedBlockBits);
}

// ---------------------------------------------------------------------------
// Protocol dispatch.

template <class Fn>
void with_protocol(const ExperimentConfig& config, Family family, Fn&& fn) {
  if (config.protocol == "pointer-chasing") {
    if (!is_pcs_family(family)) {
      throw std::invalid_argument("pointer-chasing needs a pcs family, got " +
                                  family_name(family));
    }
    PcsProtocol spec = pointer_chasing_skg({config.r, config.n, config.L});
    if (config.gamma) {
      spec = hash_equality_augment(spec, *config.gamma,
                                   [](const BitString&, bool indicator) { return indicator; });
    }
    fn(spec);
  } else if (config.protocol == "meet-in-middle") {
    if (!is_pv_family(family)) {
      throw std::invalid_argument("meet-in-middle needs a pv family, got " +
                                  family_name(family));
    }
    if (config.gamma) throw std::invalid_argument("--gamma applies to pointer-chasing only");
    fn(meet_in_middle_pv({config.r, config.n}));
  } else {
    throw std::invalid_argument("unknown protocol '" + config.protocol +
                                "' (pointer-chasing, meet-in-middle)");
  }
}

template <class AliceIn, class BobIn>
InputSampler<AliceIn, BobIn> family_sampler(Family family, const FamilyParams& params) {
  return [family, params](Rng& rng) {
    return InputCodec<AliceIn, BobIn>::split(sample_family(family, params, rng).first);
  };
}

json exact_run_summary(const JointTable& runs) {
  const DistTable& table = runs.table();
  Weight agree = 0;
  for (const auto& entry : table.entries()) {
    if (runs.key({"k_a"}, entry.atom) == runs.key({"k_b"}, entry.atom)) {
      agree = checked_add(agree, entry.weight);
    }
  }
  return {{"agreement_probability",
           static_cast<double>(agree) / static_cast<double>(table.total())},
          {"min_entropy_k_a", min_entropy(runs.marginal({"k_a"}))},
          {"mutual_information_transcript_k_a",
           mutual_information(runs, {"transcript"}, {"k_a"})},
          {"support", table.size()}};
}

}  // namespace

double round12(double value) {
  if (!std::isfinite(value)) return value;
  return std::strtod(format12(value).c_str(), nullptr);
}

// ---------------------------------------------------------------------------

void cmd_sample(const ExperimentConfig& config, std::ostream& out) {
  if (config.format != Format::jsonl) throw std::invalid_argument("sample writes jsonl only");
  const FamilyParams params = family_params(config);
  const Family family = checked_family(config.family, params);
  for (std::size_t k = 0; k < config.count; ++k) {
    Rng rng(derive_seed(config.seed, k));
    auto [atom, record] = sample_family(family, params, rng);
    write_line(out, {{"index", k}, {"family", family_name(family)}, {"sample", record}});
  }
}

void cmd_run(const ExperimentConfig& config, std::ostream& out) {
  if (config.format != Format::jsonl) throw std::invalid_argument("run writes jsonl only");
  const FamilyParams params = family_params(config);
  const Family family = checked_family(config.family, params);
  with_protocol(config, family, [&](const auto& spec) {
    using Spec = std::decay_t<decltype(spec)>;
    using AliceIn = typename Spec::AliceInput;
    using BobIn = typename Spec::BobInput;
    const std::size_t trials = config.trials;
    std::vector<RunRecord> runs(trials);
    std::vector<json> inputs(config.records ? trials : 0);
    std::vector<char> truth(trials, 0);
    parallel_for(trials, config.jobs, [&](std::size_t k) {
      Rng rng(derive_seed(config.seed, 2 * k));
      auto [atom, record] = sample_family(family, params, rng);
      const auto [a, b] = InputCodec<AliceIn, BobIn>::split(atom);
      runs[k] = run_protocol(spec, a, b, derive_seed(config.seed, 2 * k + 1));
      if (config.records) inputs[k] = std::move(record);
      if (is_pv_family(family)) truth[k] = PvInstance::decode(atom).chase_holds();
    });
    std::size_t agree = 0;
    std::size_t correct = 0;
    std::size_t max_bits = 0;
    int max_rounds = 0;
    for (std::size_t k = 0; k < trials; ++k) {
      const RunRecord& run = runs[k];
      if (config.records) {
        write_line(out, {{"trial", k}, {"input", inputs[k]}, {"run", run.to_json()}});
      }
      agree += run.keys_agree();
      correct += run.transcript.last_bit() == static_cast<bool>(truth[k]);
      max_bits = std::max(max_bits, run.bits_used);
      max_rounds = std::max(max_rounds, run.rounds_used);
    }
    const double denom = static_cast<double>(std::max<std::size_t>(trials, 1));
    json summary = {{"summary", true},
                    {"protocol", spec.name},
                    {"family", family_name(family)},
                    {"r", config.r},
                    {"n", config.n},
                    {"L", config.L},
                    {"seed", config.seed},
                    {"trials", trials},
                    {"agreement_rate", static_cast<double>(agree) / denom},
                    {"bits", max_bits},
                    {"rounds", max_rounds},
                    {"declared_bits", spec.declared_bits()}};
    if (is_pv_family(family)) summary["accuracy"] = static_cast<double>(correct) / denom;
    const double combos = support_combinations(family, params) *
                          static_cast<double>(coin_outcomes(spec.coins, spec.randomized));
    summary["exact"] = nullptr;
    if (exact_wanted(config, combos)) {
      const JointTable exact = exact_run_table(spec, enumerate_source(family, params, config.cap),
                                               config.cap);
      summary["exact"] = exact_run_summary(exact);
      if (is_pv_family(family)) {
        summary["exact"]["accuracy"] =
            success_probability(spec, enumerate_source(family, params, config.cap), config.cap)
                .value();
      }
    }
    write_line(out, summary);
  });
}

void cmd_tv(const ExperimentConfig& config, std::ostream& out) {
  if (config.format != Format::jsonl) throw std::invalid_argument("tv writes jsonl only");
  const FamilyParams params = family_params(config);
  const Family f1 = checked_family(config.family, params);
  std::string second = config.family2;
  if (second.empty()) second = is_pv_family(f1) ? "pv-no" : "pcs-product";
  const Family f2 = checked_family(second, params);
  with_protocol(config, f1, [&](const auto& spec) {
    using Spec = std::decay_t<decltype(spec)>;
    using AliceIn = typename Spec::AliceInput;
    using BobIn = typename Spec::BobInput;
    if (is_pv_family(f1) != is_pv_family(f2) || is_pcs_family(f1) != is_pcs_family(f2)) {
      throw std::invalid_argument("tv: both families must share one input space");
    }
    json report = {{"protocol", spec.name},
                   {"family", family_name(f1)},
                   {"family2", family_name(f2)},
                   {"r", config.r},
                   {"n", config.n},
                   {"L", config.L},
                   {"exact", nullptr}};
    const double combos = std::max(support_combinations(f1, params), support_combinations(f2, params)) *
                          static_cast<double>(coin_outcomes(spec.coins, spec.randomized));
    if (exact_wanted(config, combos)) {
      const DistTable d1 = enumerate_source(f1, params, config.cap);
      const DistTable d2 = enumerate_source(f2, params, config.cap);
      report["exact"] = {{"tv", protocol_tv(spec, d1, d2, config.cap)},
                         {"output_bit_advantage", output_bit_advantage(spec, d1, d2, config.cap)}};
    }
    if (config.mc) {
      const auto estimate =
          mc_tv_estimate(spec, family_sampler<AliceIn, BobIn>(f1, params),
                         family_sampler<AliceIn, BobIn>(f2, params), config.trials, config.seed,
                         McOptions{config.bootstrap, config.jobs});
      report["mc"] = estimate.to_json();
      report["seed"] = config.seed;
    }
    write_line(out, report);
  });
}

void cmd_search(const ExperimentConfig& config, std::ostream& out) {
  const FamilyParams params = family_params(config);
  const Family f1 = checked_family(config.family, params);
  const DistTable d1 = enumerate_source(f1, params, config.cap);
  SearchProblem problem = [&] {
    if (config.family2.empty()) return SearchProblem::success_on(d1);
    const Family f2 = checked_family(config.family2, params);
    return SearchProblem::distinguish(d1, enumerate_source(f2, params, config.cap));
  }();
  SearchOptions options;
  options.cap = config.cap;
  if (config.first_speaker == "alice") {
    options.first_speaker = Party::alice;
  } else if (config.first_speaker == "bob") {
    options.first_speaker = Party::bob;
  } else if (!config.first_speaker.empty()) {
    throw std::invalid_argument("--first must be alice or bob");
  }
  std::vector<SearchBudget> budgets;
  if (config.sweep) {
    for (int rounds = 0; rounds <= config.rounds; ++rounds) {
      for (std::size_t bits = 0; bits <= config.bits; ++bits) budgets.push_back({rounds, bits});
    }
  } else {
    budgets.push_back({config.rounds, config.bits});
  }
  if (config.format == Format::csv) out << "r,c,n,optimum,enumeration_size,wall_time_ms\n";
  for (const SearchBudget& budget : budgets) {
    const auto start = std::chrono::steady_clock::now();
    const SearchResult result = exhaustive_protocol_search(problem, budget, options);
    const double ms = elapsed_ms(start);
    if (config.format == Format::csv) {
      out << budget.rounds << ',' << budget.bits << ',' << config.n << ','
          << format12(result.optimum) << ',' << result.enumeration_size << ','
          << (config.timing ? format12(ms) : std::string("NA")) << '\n';
    } else {
      json record = result.to_json();
      record["family"] = config.family;
      if (!config.family2.empty()) record["family2"] = config.family2;
      record["r"] = config.r;
      record["n"] = config.n;
      record["wall_time_ms"] = config.timing ? json(ms) : json(nullptr);
      write_line(out, record);
    }
  }
}

void cmd_check(const ExperimentConfig& config, std::ostream& out) {
  if (config.format != Format::jsonl) throw std::invalid_argument("check writes jsonl only");
  const FamilyParams params = family_params(config);
  const Family family = checked_family(config.family, params);
  if (!is_pv_family(family)) throw std::invalid_argument("check needs a pv family");
  NoisyClassParams noisy{config.n, config.r,
                         config.delta.value_or(2.0 / static_cast<double>(config.n)), config.C};
  noisy.validate();
  std::string method = config.method;
  if (method == "auto") {
    method = support_combinations(family, params) <= static_cast<double>(config.cap) ? "full"
                                                                                      : "symmetric";
  }
  NoisyClassReport report;
  if (method == "full") {
    report = noisy_class_check(enumerate_source(family, params, config.cap), noisy);
  } else if (method == "symmetric") {
    const PvDraw draw = family == Family::pv_yes  ? PvDraw::yes
                        : family == Family::pv_no ? PvDraw::no
                                                  : PvDraw::mix;
    const std::vector<Permutation> chain(static_cast<std::size_t>(config.r),
                                         Permutation::identity(config.n));
    report = noisy_class_check_symmetric(
        enumerate_pv_given_chain(draw, {config.r, config.n}, chain), noisy);
  } else {
    throw std::invalid_argument("--method must be auto, full or symmetric");
  }
  json record = report.to_json();
  record["family"] = family_name(family);
  record["r"] = config.r;
  record["n"] = config.n;
  record["delta"] = noisy.delta;
  record["C"] = noisy.C;
  record["method"] = method;
  record["all_pass"] = report.all_pass();
  write_line(out, record);
}

void cmd_reduce(const ExperimentConfig& config, std::ostream& out) {
  if (config.format != Format::jsonl) throw std::invalid_argument("reduce writes jsonl only");
  const PcsParams target{config.r, config.n, config.L};
  target.validate();
  json report = {{"kind", config.kind}, {"family", config.family},
                 {"r", config.r},       {"n", config.n},
                 {"L", config.L}};
  if (config.kind == "t-removal") {
    const Family family = parse_family(config.family);
    if (family != Family::pcs && family != Family::pcs_product) {
      throw std::invalid_argument("t-removal needs family pcs or pcs-product");
    }
    if (config.t == 0) throw std::invalid_argument("--t must be positive");
    report["t"] = config.t;
    const PcsParams source{config.r, config.n, config.L * config.t};
    if (config.exact) {
      const DistTable produced = t_removal_table(family, target, config.t, config.cap);
      const DistTable wanted = power_table(
          enumerate_source(family, {config.r, config.n, config.L}, config.cap), config.t);
      report["tv"] = tv_distance(produced, wanted);
      report["support"] = produced.size();
      write_line(out, report);
      return;
    }
    for (std::size_t k = 0; k < config.count; ++k) {
      Rng rng(derive_seed(config.seed, k));
      const PcsSample input = PcsSample::decode(
          sample_family(family, {source.r, source.n, source.L}, rng).first);
      const auto shared = SharedRandomness::draw(config.r, config.t, config.n, config.L, rng);
      json produced = json::array();
      for (const auto& instance : t_removal(input, shared)) produced.push_back(instance.to_json());
      write_line(out, {{"index", k}, {"input", input.to_json()}, {"outputs", produced}});
    }
  } else if (config.kind == "disj") {
    const Family family = parse_family(config.family);
    if (family != Family::disj_yes && family != Family::disj_no) {
      throw std::invalid_argument("disj reduction needs family disj-yes or disj-no");
    }
    const bool intersecting = family == Family::disj_yes;
    if (config.exact) {
      const DistTable produced =
          disj_to_crg_table(config.n, intersecting, config.r, config.L, config.cap);
      const Family expected = intersecting ? Family::pcs_mid : Family::pcs_product;
      report["target"] = family_name(expected);
      report["tv"] = tv_distance(
          produced, enumerate_source(expected, {config.r, config.n, config.L}, config.cap));
      report["support"] = produced.size();
      write_line(out, report);
      return;
    }
    for (std::size_t k = 0; k < config.count; ++k) {
      Rng rng(derive_seed(config.seed, k));
      const DisjInstance input = sample_disj(config.n, intersecting, rng);
      const auto shared = SharedRandomness::draw(config.r, 0, config.n, config.L, rng);
      PcsSample produced{target, disj_to_crg_alice(input, shared, config.r, rng),
                         disj_to_crg_bob(input, shared, config.r, rng)};
      write_line(out, {{"index", k}, {"input", input.to_json()}, {"output", produced.to_json()}});
    }
  } else if (config.kind == "pv") {
    const Family family = parse_family(config.family);
    if (family != Family::pv_yes && family != Family::pv_no) {
      throw std::invalid_argument("pv reduction needs family pv-yes or pv-no");
    }
    const PvDraw draw = family == Family::pv_yes ? PvDraw::yes : PvDraw::no;
    const PvParams pv{config.r, config.n};
    if (config.exact) {
      const DistTable produced = pv_to_crg_table(draw, pv, config.L, config.cap);
      const Family expected = draw == PvDraw::yes ? Family::pcs : Family::pcs_mid;
      report["target"] = family_name(expected);
      report["tv"] = tv_distance(
          produced, enumerate_source(expected, {config.r, config.n, config.L}, config.cap));
      report["support"] = produced.size();
      write_line(out, report);
      return;
    }
    for (std::size_t k = 0; k < config.count; ++k) {
      Rng rng(derive_seed(config.seed, k));
      const PvInstance input = sample_pv(pv, draw, rng);
      const auto shared = SharedRandomness::draw(config.r, 0, config.n, config.L, rng);
      auto [alice, bob] = pv_to_crg(input, shared, rng);
      PcsSample produced{target, std::move(alice), std::move(bob)};
      write_line(out, {{"index", k}, {"input", input.to_json()}, {"output", produced.to_json()}});
    }
  } else {
    throw std::invalid_argument("unknown reduction '" + config.kind + "' (t-removal, disj, pv)");
  }
}

// ---------------------------------------------------------------------------

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  ExperimentConfig config;
  CLI::App app{"Common randomness and pointer chasing experiments", "crglab"};
  app.require_subcommand(1);
  std::string format = "jsonl";
  bool no_timing = false;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--family", config.family, "Input family");
    sub->add_option("-r,--r", config.r, "Number of permutations");
    sub->add_option("-n,--n", config.n, "Domain size");
    sub->add_option("-L,--L", config.L, "Block length in bits");
    sub->add_option("--seed", config.seed, "Master seed");
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"jsonl", "csv"}));
    sub->add_option("-o,--output", config.output, "Output file (default stdout)");
    sub->add_option("--jobs", config.jobs, "Worker threads")->check(CLI::PositiveNumber);
  };

  auto* sample = app.add_subcommand("sample", "Draw samples of an input family");
  common(sample);
  sample->add_option("--count", config.count, "Number of samples");

  auto* run_cmd = app.add_subcommand("run", "Run a protocol on sampled inputs");
  common(run_cmd);
  run_cmd->add_option("--protocol", config.protocol, "pointer-chasing or meet-in-middle");
  run_cmd->add_option("--trials", config.trials, "Number of runs");
  run_cmd->add_option("--gamma", config.gamma, "Append the hash-equality tail with this gamma");
  run_cmd->add_flag("--exact", config.exact, "Force exact enumeration of the run law");
  run_cmd->add_flag("--records", config.records, "Emit one record per run");

  auto* tv = app.add_subcommand("tv", "Transcript distance between two input families");
  common(tv);
  tv->add_option("--protocol", config.protocol, "pointer-chasing or meet-in-middle");
  tv->add_option("--family2", config.family2, "Second input family");
  tv->add_option("--trials", config.trials, "Monte Carlo runs per family");
  tv->add_option("--bootstrap", config.bootstrap, "Bootstrap resamples");
  tv->add_flag("--exact", config.exact, "Force exact enumeration");
  tv->add_flag("--mc", config.mc, "Add a Monte Carlo estimate");

  auto* search = app.add_subcommand("search", "Exhaustive protocol search");
  common(search);
  search->add_option("--family2", config.family2, "Second family (distinguishing)");
  search->add_option("--rounds", config.rounds, "Message budget");
  search->add_option("--bits", config.bits, "Bit budget");
  search->add_option("--first", config.first_speaker, "First speaker (alice, bob)");
  search->add_flag("--sweep", config.sweep, "All budgets up to --rounds and --bits");
  search->add_flag("--no-timing", no_timing, "Omit wall times");

  auto* check = app.add_subcommand("check", "Noisy class membership report");
  common(check);
  check->add_option("--delta", config.delta, "Entropy slack (default 2/n)");
  check->add_option("--C", config.C, "Permutation entropy slack");
  check->add_option("--method", config.method, "auto, full or symmetric");

  auto* reduce = app.add_subcommand("reduce", "Apply or verify an instance reduction");
  common(reduce);
  reduce->add_option("--kind", config.kind, "t-removal, disj or pv");
  reduce->add_option("-t,--t", config.t, "Number of produced instances");
  reduce->add_option("--count", config.count, "Number of samples");
  reduce->add_flag("--exact", config.exact, "Compare the exact output law with its target");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  config.subcommand = app.get_subcommands().front()->get_name();
  config.format = format == "csv" ? Format::csv : Format::jsonl;
  config.timing = !no_timing;
  if (const char* cap = std::getenv("CRGLAB_CAP")) {
    try {
      std::size_t used = 0;
      config.cap = std::stoull(cap, &used);
      if (used != std::string(cap).size() || config.cap == 0) throw std::invalid_argument(cap);
    } catch (const std::exception&) {
      err << "error: CRGLAB_CAP must be a positive integer, got '" << cap << "'\n";
      return kExitValidation;
    }
  }

  try {
    std::ofstream file;
    if (!config.output.empty()) {
      file.open(config.output, std::ios::binary | std::ios::trunc);
      if (!file) throw std::invalid_argument("cannot open output file " + config.output);
    }
    std::ostream& sink = config.output.empty() ? out : file;
    const std::string& name = config.subcommand;
    if (name == "sample") cmd_sample(config, sink);
    if (name == "run") cmd_run(config, sink);
    if (name == "tv") cmd_tv(config, sink);
    if (name == "search") cmd_search(config, sink);
    if (name == "check") cmd_check(config, sink);
    if (name == "reduce") cmd_reduce(config, sink);
    sink.flush();
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << " (estimated size " << format12(e.estimate())
        << "; raise CRGLAB_CAP to allow it)\n";
    return kExitCap;
  } catch (const ProtocolError& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace crglab::cli
