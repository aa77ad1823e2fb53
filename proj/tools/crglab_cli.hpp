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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace crglab::cli {

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitCap = 3;

enum class Format { jsonl, csv };

/// Everything a subcommand needs; a run is fully determined by the config.
struct ExperimentConfig {
  std::string subcommand;
  std::string family = "pcs";
  std::string family2;  // second law for tv and distinguishing search
  std::string protocol = "pointer-chasing";
  std::string kind = "t-removal";  // reduce
  int r = 1;
  std::size_t n = 2;
  std::size_t L = 1;
  std::size_t t = 2;
  std::optional<double> gamma;
  std::optional<double> delta;
  double C = 0.0;
  int rounds = 1;
  std::size_t bits = 1;
  bool sweep = false;
  std::size_t count = 1;
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  std::size_t bootstrap = 200;
  unsigned jobs = 1;
  bool exact = false;
  bool mc = false;
  bool records = false;
  bool timing = true;
  std::string method = "auto";  // check: auto, full, symmetric
  std::string first_speaker;    // search: alice, bob or empty for both
  std::uint64_t cap = 10'000'000;
  Format format = Format::jsonl;
  std::string output;  // empty for the caller's stream
};

/// Subcommands. Each writes its result to `out` and throws on error.
void cmd_sample(const ExperimentConfig& config, std::ostream& out);
void cmd_run(const ExperimentConfig& config, std::ostream& out);
void cmd_tv(const ExperimentConfig& config, std::ostream& out);
void cmd_search(const ExperimentConfig& config, std::ostream& out);
void cmd_check(const ExperimentConfig& config, std::ostream& out);
void cmd_reduce(const ExperimentConfig& config, std::ostream& out);

/// Parses arguments (without the program name) and dispatches. Errors are
/// reported on `err`; the return value is the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Rounds a double to 12 significant digits.
double round12(double value);

}  // namespace crglab::cli
