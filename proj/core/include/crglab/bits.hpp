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
#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace crglab {

/// A sequence of bits, stored one bit per byte.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t length, bool value = false)
      : bits_(length, value ? 1 : 0) {}

  /// Parses a string of '0'/'1' characters.
  static BitString from_string(std::string_view text);

  /// Big-endian fixed-width encoding of `value`.
  static BitString from_uint(std::uint64_t value, std::size_t width);

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  bool operator[](std::size_t k) const { return bits_[k] != 0; }
  void set(std::size_t k, bool value) { bits_[k] = value ? 1 : 0; }
  void push_back(bool value) { bits_.push_back(value ? 1 : 0); }
  void append(const BitString& other);

  BitString slice(std::size_t offset, std::size_t length) const;

  /// Reads bits [offset, offset + width) as a big-endian unsigned integer.
  std::uint64_t to_uint(std::size_t offset, std::size_t width) const;
  std::uint64_t to_uint() const { return to_uint(0, size()); }

  std::string to_string() const;

  /// Packs bits MSB-first into ceil(size/8) bytes.
  std::string packed() const;

  friend bool operator==(const BitString&, const BitString&) = default;
  friend auto operator<=>(const BitString&, const BitString&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// ceil(log2 n) for n >= 1; the width of a pointer into {0,...,n-1}.
unsigned pointer_width(std::size_t n);

/// Appends `value` as a pointer of width pointer_width(n).
void encode_pointer(BitString& out, std::uint32_t value, std::size_t n);

/// Decodes a pointer written by encode_pointer starting at `offset`.
std::uint32_t decode_pointer(const BitString& bits, std::size_t offset,
                             std::size_t n);

}  // namespace crglab
