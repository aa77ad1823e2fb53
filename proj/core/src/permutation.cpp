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

#include "crglab/permutation.hpp"

#include <string>

namespace crglab {

Permutation Permutation::identity(std::size_t n) {
  std::vector<Index> image(n);
  std::iota(image.begin(), image.end(), Index{0});
  return Permutation(std::move(image));
}

Permutation Permutation::from_images(std::vector<Index> image) {
  if (image.empty()) throw std::invalid_argument("Permutation: empty image");
  std::vector<bool> seen(image.size(), false);
  for (Index k : image) {
    if (k >= image.size() || seen[k]) {
      throw std::invalid_argument("Permutation: image is not a bijection on [" +
                                  std::to_string(image.size()) + "]");
    }
    seen[k] = true;
  }
  return Permutation(std::move(image));
}

Permutation Permutation::inverse() const {
  std::vector<Index> inv(image_.size());
  for (std::size_t k = 0; k < image_.size(); ++k) inv[image_[k]] = static_cast<Index>(k);
  return Permutation(std::move(inv));
}

bool Permutation::is_identity() const {
  for (std::size_t k = 0; k < image_.size(); ++k) {
    if (image_[k] != k) return false;
  }
  return true;
}

Permutation compose(const Permutation& outer, const Permutation& inner) {
  if (outer.size() != inner.size()) {
    throw std::invalid_argument("compose: permutations of different sizes");
  }
  std::vector<Index> image(inner.size());
  for (std::size_t k = 0; k < image.size(); ++k) {
    image[k] = outer(inner(static_cast<Index>(k)));
  }
  return Permutation::from_images(std::move(image));
}

Index chase(std::span<const Permutation> perms, Index start) {
  if (perms.empty()) return start;
  const std::size_t n = perms.front().size();
  for (const auto& p : perms) {
    if (p.size() != n) throw std::invalid_argument("chase: permutations of different sizes");
  }
  if (start >= n) {
    throw std::invalid_argument("chase: start " + std::to_string(start) +
                                " out of range for n = " + std::to_string(n));
  }
  Index at = start;
  for (const auto& p : perms) at = p(at);
  return at;
}

std::vector<Permutation> all_permutations(std::size_t n) {
  if (n == 0) throw std::invalid_argument("all_permutations: n must be >= 1");
  std::vector<Permutation> out;
  out.reserve(static_cast<std::size_t>(factorial(n)));
  std::vector<Index> image(n);
  std::iota(image.begin(), image.end(), Index{0});
  do {
    out.push_back(Permutation::from_images(image));
  } while (std::next_permutation(image.begin(), image.end()));
  return out;
}

std::uint64_t factorial(std::size_t n) {
  if (n > 20) throw std::overflow_error("factorial: " + std::to_string(n) + "! overflows");
  std::uint64_t value = 1;
  for (std::size_t k = 2; k <= n; ++k) value *= k;
  return value;
}

}  // namespace crglab
