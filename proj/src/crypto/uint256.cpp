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

#include "blefind/crypto/uint256.hpp"

#include <bit>
#include <stdexcept>

#include "blefind/bytes.hpp"

namespace blefind::crypto {

U256 U256::from_be_bytes(std::span<const std::uint8_t> bytes) {
  if (bytes.size() > 32) {
    throw std::invalid_argument("U256 input longer than 32 bytes");
  }
  U256 out;
  const std::size_t n = bytes.size();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t pos = n - 1 - i;  // byte significance
    out.limb[pos / 8] |= static_cast<std::uint64_t>(bytes[i]) << (8 * (pos % 8));
  }
  return out;
}

U256 U256::from_hex(std::string_view hex) {
  std::string padded(hex);
  if (padded.size() % 2 != 0) padded.insert(padded.begin(), '0');
  return from_be_bytes(blefind::from_hex(padded));
}

void U256::to_be_bytes(std::span<std::uint8_t> out) const {
  const std::size_t n = out.size();
  if (n < 32 && bit_length() > 8 * n) {
    throw std::invalid_argument("U256 value does not fit output width");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t pos = n - 1 - i;
    out[i] = pos < 32 ? static_cast<std::uint8_t>(limb[pos / 8] >> (8 * (pos % 8)))
                      : 0;
  }
}

std::string U256::to_hex() const {
  std::array<std::uint8_t, 32> raw{};
  to_be_bytes(raw);
  return blefind::to_hex(raw);
}

unsigned U256::bit_length() const {
  for (int i = 3; i >= 0; --i) {
    if (limb[i] != 0) {
      return 64U * static_cast<unsigned>(i) + 64U -
             static_cast<unsigned>(std::countl_zero(limb[i]));
    }
  }
  return 0;
}

U256 shift_left1(const U256& a, std::uint64_t* carry_out) {
  U256 out;
  std::uint64_t carry = 0;
  for (int i = 0; i < 4; ++i) {
    out.limb[i] = (a.limb[i] << 1) | carry;
    carry = a.limb[i] >> 63;
  }
  if (carry_out != nullptr) *carry_out = carry;
  return out;
}

U256 shift_right1(const U256& a) {
  U256 out;
  for (int i = 0; i < 4; ++i) {
    out.limb[i] = a.limb[i] >> 1;
    if (i < 3) out.limb[i] |= a.limb[i + 1] << 63;
  }
  return out;
}

U256 mod_reduce(const U256& x, const U256& m) {
  if (m.is_zero()) throw std::invalid_argument("modulus is zero");
  // Remainder is kept < m; one extra bit of headroom comes from the carry.
  U256 rem;
  for (int i = static_cast<int>(x.bit_length()) - 1; i >= 0; --i) {
    std::uint64_t carry = 0;
    rem = shift_left1(rem, &carry);
    rem.limb[0] |= x.bit(static_cast<unsigned>(i)) ? 1U : 0U;
    if (carry != 0 || rem >= m) sub_in_place(rem, m);
  }
  return rem;
}

}  // namespace blefind::crypto
