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
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace blefind::crypto {

/// Fixed-width 256-bit unsigned integer, little-endian 64-bit limbs.
struct U256 {
  std::array<std::uint64_t, 4> limb{};

  static constexpr U256 from_u64(std::uint64_t v) { return U256{{v, 0, 0, 0}}; }

  /// Big-endian input of at most 32 bytes.
  static U256 from_be_bytes(std::span<const std::uint8_t> bytes);
  static U256 from_hex(std::string_view hex);

  /// Writes the low `out.size()` bytes big-endian. Throws if the value does
  /// not fit.
  void to_be_bytes(std::span<std::uint8_t> out) const;
  std::string to_hex() const;

  bool is_zero() const { return (limb[0] | limb[1] | limb[2] | limb[3]) == 0; }
  bool bit(unsigned i) const { return (limb[i / 64] >> (i % 64)) & 1U; }
  unsigned bit_length() const;
  bool is_odd() const { return limb[0] & 1U; }

  friend bool operator==(const U256&, const U256&) = default;
  friend std::strong_ordering operator<=>(const U256& a, const U256& b) {
    for (int i = 3; i >= 0; --i) {
      if (a.limb[i] != b.limb[i]) return a.limb[i] <=> b.limb[i];
    }
    return std::strong_ordering::equal;
  }
};

/// a += b, returns carry out.
inline std::uint64_t add_in_place(U256& a, const U256& b) {
  unsigned long long c = 0;
  for (int i = 0; i < 4; ++i) {
    unsigned long long out;
    c = __builtin_add_overflow(a.limb[i], b.limb[i], &out) |
        __builtin_add_overflow(out, c, &out);
    a.limb[i] = out;
  }
  return c;
}

/// a -= b, returns borrow out.
inline std::uint64_t sub_in_place(U256& a, const U256& b) {
  unsigned long long c = 0;
  for (int i = 0; i < 4; ++i) {
    unsigned long long out;
    c = __builtin_sub_overflow(a.limb[i], b.limb[i], &out) |
        __builtin_sub_overflow(out, c, &out);
    a.limb[i] = out;
  }
  return c;
}
U256 shift_left1(const U256& a, std::uint64_t* carry_out = nullptr);
U256 shift_right1(const U256& a);

/// x mod m by binary long division. m must be nonzero; works for even m.
U256 mod_reduce(const U256& x, const U256& m);

}  // namespace blefind::crypto
