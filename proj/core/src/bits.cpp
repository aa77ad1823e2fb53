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

#include "crglab/bits.hpp"

#include <stdexcept>

namespace crglab {

BitString BitString::from_string(std::string_view text) {
  BitString out;
  out.bits_.reserve(text.size());
  for (char ch : text) {
    if (ch != '0' && ch != '1') {
      throw std::invalid_argument("BitString: expected '0' or '1', got '" +
                                  std::string(1, ch) + "'");
    }
    out.bits_.push_back(ch == '1' ? 1 : 0);
  }
  return out;
}

BitString BitString::from_uint(std::uint64_t value, std::size_t width) {
  if (width < 64 && (value >> width) != 0) {
    throw std::invalid_argument("BitString::from_uint: value does not fit in " +
                                std::to_string(width) + " bits");
  }
  BitString out(width);
  for (std::size_t k = 0; k < width; ++k) {
    const std::size_t shift = width - 1 - k;
    out.bits_[k] = shift < 64 ? static_cast<std::uint8_t>((value >> shift) & 1U) : 0;
  }
  return out;
}

void BitString::append(const BitString& other) {
  bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
}

BitString BitString::slice(std::size_t offset, std::size_t length) const {
  if (offset > size() || length > size() - offset) {
    throw std::out_of_range("BitString::slice out of range");
  }
  BitString out;
  out.bits_.assign(bits_.begin() + static_cast<std::ptrdiff_t>(offset),
                   bits_.begin() + static_cast<std::ptrdiff_t>(offset + length));
  return out;
}

std::uint64_t BitString::to_uint(std::size_t offset, std::size_t width) const {
  if (width > 64) throw std::invalid_argument("BitString::to_uint: width over 64");
  if (offset > size() || width > size() - offset) {
    throw std::out_of_range("BitString::to_uint out of range");
  }
  std::uint64_t value = 0;
  for (std::size_t k = 0; k < width; ++k) value = (value << 1) | bits_[offset + k];
  return value;
}

std::string BitString::to_string() const {
  std::string out(size(), '0');
  for (std::size_t k = 0; k < size(); ++k) {
    if (bits_[k] != 0) out[k] = '1';
  }
  return out;
}

std::string BitString::packed() const {
  std::string out((size() + 7) / 8, '\0');
  for (std::size_t k = 0; k < size(); ++k) {
    if (bits_[k] != 0) {
      out[k / 8] = static_cast<char>(static_cast<unsigned char>(out[k / 8]) |
                                     (0x80U >> (k % 8)));
    }
  }
  return out;
}

unsigned pointer_width(std::size_t n) {
  if (n == 0) throw std::invalid_argument("pointer_width: n must be >= 1");
  unsigned width = 0;
  while ((std::size_t{1} << width) < n) ++width;
  return width;
}

void encode_pointer(BitString& out, std::uint32_t value, std::size_t n) {
  if (value >= n) {
    throw std::invalid_argument("encode_pointer: " + std::to_string(value) +
                                " out of range for n = " + std::to_string(n));
  }
  out.append(BitString::from_uint(value, pointer_width(n)));
}

std::uint32_t decode_pointer(const BitString& bits, std::size_t offset, std::size_t n) {
  const auto value = bits.to_uint(offset, pointer_width(n));
  if (value >= n) {
    throw std::invalid_argument("decode_pointer: " + std::to_string(value) +
                                " out of range for n = " + std::to_string(n));
  }
  return static_cast<std::uint32_t>(value);
}

}  // namespace crglab
