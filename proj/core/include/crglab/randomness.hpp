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

#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <string_view>

#include "crglab/bits.hpp"

namespace crglab {

/// Caller-owned generator used by every sampler.
using Rng = std::mt19937_64;

/// Stable 64-bit FNV-1a hash, used for domain separation.
std::uint64_t fnv1a(std::string_view text);

/// Deterministic child seed for trial `index` under `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

enum class CoinSource : std::uint8_t { alice, bob, shared };

/// A stream of coin flips. Either expanded from a seed or read from a
/// fixed bit string (for exact enumeration over all coin outcomes).
class RandomStream {
 public:
  RandomStream(std::uint64_t key, std::shared_ptr<std::size_t> reads);
  RandomStream(const BitString* fixed, std::shared_ptr<std::size_t> reads);

  bool next_bit();
  std::uint64_t next_bits(std::size_t count);
  BitString next_bitstring(std::size_t count);

  /// Uniform value in [0, bound). Not available on fixed streams.
  std::uint64_t uniform_below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
  const BitString* fixed_ = nullptr;
  std::size_t position_ = 0;
  std::shared_ptr<std::size_t> reads_;
};

/// The three randomness sources of one protocol run: Alice-private,
/// Bob-private and public. Streams are derived from the master seed by
/// (source, label) so every caller asking for the same label sees the
/// same coins.
class Randomness {
 public:
  static Randomness seeded(std::uint64_t seed);

  /// Fixed coins for exhaustive enumeration. Every label of a source reads
  /// the same bit string from its start.
  static Randomness enumerated(BitString alice, BitString bob,
                               BitString shared);

  RandomStream stream(CoinSource source, std::string_view label) const;

  /// Number of coin reads performed through any stream of this run.
  std::size_t reads() const { return *reads_; }

 private:
  Randomness() : reads_(std::make_shared<std::size_t>(0)) {}

  std::uint64_t seed_ = 0;
  bool fixed_ = false;
  std::shared_ptr<BitString> alice_, bob_, shared_;
  std::shared_ptr<std::size_t> reads_;
};

}  // namespace crglab
