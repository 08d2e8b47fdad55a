// Copyright 2026 The blefind Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace blefind {

using Bytes = std::vector<std::uint8_t>;

template <std::size_t N>
using ByteArray = std::array<std::uint8_t, N>;

/// Lowercase hex, no separators.
std::string to_hex(std::span<const std::uint8_t> data);

/// Accepts upper or lower case; throws std::invalid_argument on odd length
/// or non-hex characters.
Bytes from_hex(std::string_view hex);

template <std::size_t N>
ByteArray<N> array_from_hex(std::string_view hex) {
  const Bytes raw = from_hex(hex);
  if (raw.size() != N) {
    throw std::invalid_argument("expected " + std::to_string(N) +
                                " bytes of hex, got " +
                                std::to_string(raw.size()));
  }
  ByteArray<N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = raw[i];
  return out;
}

inline void append(Bytes& dst, std::span<const std::uint8_t> src) {
  dst.insert(dst.end(), src.begin(), src.end());
}

inline void append_u64_be(Bytes& dst, std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) {
    dst.push_back(static_cast<std::uint8_t>(v >> shift));
  }
}

inline std::uint64_t read_u64_be(std::span<const std::uint8_t> src) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < 8; ++i) v = (v << 8) | src[i];
  return v;
}

}  // namespace blefind
