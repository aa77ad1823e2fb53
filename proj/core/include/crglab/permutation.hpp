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

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace crglab {

using Index = std::uint32_t;

/// A bijection on {0, ..., n-1}; image()[k] is the image of k.
class Permutation {
 public:
  static Permutation identity(std::size_t n);

  /// Throws std::invalid_argument unless `image` is a bijection on [n].
  static Permutation from_images(std::vector<Index> image);

  std::size_t size() const { return image_.size(); }
  Index operator()(Index k) const { return image_[k]; }
  std::span<const Index> images() const { return image_; }

  Permutation inverse() const;
  bool is_identity() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  explicit Permutation(std::vector<Index> image) : image_(std::move(image)) {}
  std::vector<Index> image_;
};

inline Permutation invert(const Permutation& p) { return p.inverse(); }

/// outer ∘ inner, i.e. k -> outer(inner(k)).
Permutation compose(const Permutation& outer, const Permutation& inner);

/// Applies perms[0], then perms[1], ... starting from `start`.
/// Throws std::invalid_argument on mismatched sizes or out-of-range start.
Index chase(std::span<const Permutation> perms, Index start);

/// All n! permutations of [n] in lexicographic order.
std::vector<Permutation> all_permutations(std::size_t n);

/// n! as an exact integer; throws std::overflow_error beyond 20!.
std::uint64_t factorial(std::size_t n);

/// Uniform draw from S_n (Fisher-Yates via std::shuffle).
template <class URBG>
Permutation random_permutation(std::size_t n, URBG& rng) {
  if (n == 0) throw std::invalid_argument("random_permutation: n must be >= 1");
  std::vector<Index> image(n);
  std::iota(image.begin(), image.end(), Index{0});
  std::shuffle(image.begin(), image.end(), rng);
  return Permutation::from_images(std::move(image));
}

}  // namespace crglab
