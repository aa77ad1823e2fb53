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

#include "crglab/randomness.hpp"

#include <stdexcept>
#include <string>

namespace crglab {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::string_view source_tag(CoinSource source) {
  switch (source) {
    case CoinSource::alice: return "alice";
    case CoinSource::bob: return "bob";
    case CoinSource::shared: return "shared";
  }
  return "?";
}

}  // namespace

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t hash = 0xCBF29CE484222325ULL;
  for (unsigned char ch : text) {
    hash ^= ch;
    hash *= 0x100000001B3ULL;
  }
  return hash;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

RandomStream::RandomStream(std::uint64_t key, std::shared_ptr<std::size_t> reads)
    : engine_(key), reads_(std::move(reads)) {}

RandomStream::RandomStream(const BitString* fixed, std::shared_ptr<std::size_t> reads)
    : fixed_(fixed), reads_(std::move(reads)) {}

bool RandomStream::next_bit() {
  ++*reads_;
  if (fixed_ != nullptr) {
    if (position_ >= fixed_->size()) {
      throw std::out_of_range("RandomStream: read past the declared coin budget");
    }
    return (*fixed_)[position_++];
  }
  return (engine_() >> 63) != 0;
}

std::uint64_t RandomStream::next_bits(std::size_t count) {
  if (count > 64) throw std::invalid_argument("RandomStream::next_bits: count over 64");
  std::uint64_t value = 0;
  for (std::size_t k = 0; k < count; ++k) value = (value << 1) | (next_bit() ? 1U : 0U);
  return value;
}

BitString RandomStream::next_bitstring(std::size_t count) {
  BitString out(count);
  for (std::size_t k = 0; k < count; ++k) out.set(k, next_bit());
  return out;
}

std::uint64_t RandomStream::uniform_below(std::uint64_t bound) {
  if (fixed_ != nullptr) {
    throw std::logic_error("RandomStream::uniform_below on enumerated coins");
  }
  if (bound == 0) throw std::invalid_argument("RandomStream::uniform_below: bound 0");
  ++*reads_;
  return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(engine_);
}

Randomness Randomness::seeded(std::uint64_t seed) {
  Randomness out;
  out.seed_ = seed;
  return out;
}

Randomness Randomness::enumerated(BitString alice, BitString bob, BitString shared) {
  Randomness out;
  out.fixed_ = true;
  out.alice_ = std::make_shared<BitString>(std::move(alice));
  out.bob_ = std::make_shared<BitString>(std::move(bob));
  out.shared_ = std::make_shared<BitString>(std::move(shared));
  return out;
}

RandomStream Randomness::stream(CoinSource source, std::string_view label) const {
  if (fixed_) {
    const BitString* bits = source == CoinSource::alice ? alice_.get()
                            : source == CoinSource::bob ? bob_.get()
                                                        : shared_.get();
    return RandomStream(bits, reads_);
  }
  const std::uint64_t key =
      derive_seed(derive_seed(seed_, fnv1a(source_tag(source))), fnv1a(label));
  return RandomStream(key, reads_);
}

}  // namespace crglab
