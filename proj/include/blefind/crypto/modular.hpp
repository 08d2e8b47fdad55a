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

#include <optional>

#include "blefind/crypto/uint256.hpp"

namespace blefind::crypto {

/// Montgomery arithmetic modulo an odd m < 2^256 (R = 2^256).
///
/// Values handed to mul/add/sub/pow are in Montgomery form unless a function
/// name says otherwise; `to_mont` / `from_mont` convert at the boundary.
///
/// The P-224 prime 2^224 - 2^96 + 1 is recognized and reduced with the
/// Solinas identity instead; its "Montgomery form" is then the plain value
/// (R = 1), which the conversion helpers honor transparently.
class Modulus {
 public:
  explicit Modulus(const U256& m);

  const U256& value() const { return m_; }
  /// Montgomery form of 1.
  const U256& one() const { return one_; }

  U256 to_mont(const U256& a) const;
  U256 from_mont(const U256& a) const;

  U256 mul(const U256& a, const U256& b) const;
  U256 sqr(const U256& a) const { return mul(a, a); }
  U256 add(const U256& a, const U256& b) const;
  U256 sub(const U256& a, const U256& b) const;
  U256 neg(const U256& a) const;
  /// a^e with a in Montgomery form and e a plain exponent.
  U256 pow(const U256& a, const U256& e) const;
  /// Inverse by Fermat; valid only for prime m and a != 0.
  U256 inverse(const U256& a) const;

  /// Fully-reduced plain-domain helpers for occasional use (scalar math).
  U256 mul_plain(const U256& a, const U256& b) const;
  U256 add_plain(const U256& a, const U256& b) const;

  /// Square root in the plain domain for prime m (Tonelli-Shanks). Returns
  /// nullopt for quadratic non-residues.
  std::optional<U256> sqrt_plain(const U256& a) const;

 private:
  U256 mul_solinas_p224(const U256& a, const U256& b) const;

  U256 m_;
  bool p224_form_ = false;
  std::uint64_t n0inv_ = 0;
  U256 r2_;
  U256 one_;
};

// Hot paths are inline so point formulas can be optimized across calls.

// a, b < p < 2^224. Full 448-bit product on 64-bit limbs, then the usual
// 32-bit word fold using 2^224 == 2^96 - 1 (mod p).
inline U256 Modulus::mul_solinas_p224(const U256& a, const U256& b) const {
  using u64 = std::uint64_t;
  using u128 = unsigned __int128;
  u64 c[7] = {0, 0, 0, 0, 0, 0, 0};
  for (int i = 0; i < 4; ++i) {
    u128 carry = 0;
    for (int j = 0; j + i < 7 && j < 4; ++j) {
      carry += static_cast<u128>(a.limb[i]) * b.limb[j] + c[i + j];
      c[i + j] = static_cast<u64>(carry);
      carry >>= 64;
    }
    if (i + 4 < 7) c[i + 4] = static_cast<u64>(carry);
  }
  auto w = [&](int k) -> std::int64_t {
    return static_cast<std::int64_t>((c[k / 2] >> (32 * (k % 2))) & 0xFFFFFFFFU);
  };
  std::int64_t r[7] = {
      w(0) - w(7) - w(11),
      w(1) - w(8) - w(12),
      w(2) - w(9) - w(13),
      w(3) + w(7) + w(11) - w(10),
      w(4) + w(8) + w(12) - w(11),
      w(5) + w(9) + w(13) - w(12),
      w(6) + w(10) - w(13),
  };
  for (;;) {
    for (int k = 0; k < 6; ++k) {
      r[k + 1] += r[k] >> 32;  // arithmetic shift keeps the sign
      r[k] &= 0xFFFFFFFF;
    }
    const std::int64_t top = r[6] >> 32;
    r[6] &= 0xFFFFFFFF;
    if (top == 0) break;
    r[0] -= top;
    r[3] += top;
  }
  U256 out{{static_cast<u64>(r[0]) | (static_cast<u64>(r[1]) << 32),
            static_cast<u64>(r[2]) | (static_cast<u64>(r[3]) << 32),
            static_cast<u64>(r[4]) | (static_cast<u64>(r[5]) << 32),
            static_cast<u64>(r[6])}};
  if (out >= m_) sub_in_place(out, m_);
  return out;
}

inline U256 Modulus::mul(const U256& a, const U256& b) const {
  if (p224_form_) return mul_solinas_p224(a, b);
  // CIOS Montgomery multiplication.
  std::uint64_t t[6] = {0, 0, 0, 0, 0, 0};
  for (int i = 0; i < 4; ++i) {
    unsigned __int128 c = 0;
    for (int j = 0; j < 4; ++j) {
      c += static_cast<unsigned __int128>(a.limb[j]) * b.limb[i] + t[j];
      t[j] = static_cast<std::uint64_t>(c);
      c >>= 64;
    }
    c += t[4];
    t[4] = static_cast<std::uint64_t>(c);
    t[5] = static_cast<std::uint64_t>(c >> 64);

    const std::uint64_t q = t[0] * n0inv_;
    c = static_cast<unsigned __int128>(q) * m_.limb[0] + t[0];
    c >>= 64;
    for (int j = 1; j < 4; ++j) {
      c += static_cast<unsigned __int128>(q) * m_.limb[j] + t[j];
      t[j - 1] = static_cast<std::uint64_t>(c);
      c >>= 64;
    }
    c += t[4];
    t[3] = static_cast<std::uint64_t>(c);
    t[4] = t[5] + static_cast<std::uint64_t>(c >> 64);
  }
  U256 out{{t[0], t[1], t[2], t[3]}};
  if (t[4] != 0 || out >= m_) sub_in_place(out, m_);
  return out;
}

inline U256 Modulus::add(const U256& a, const U256& b) const {
  U256 out = a;
  const std::uint64_t carry = add_in_place(out, b);
  if (carry != 0 || out >= m_) sub_in_place(out, m_);
  return out;
}

inline U256 Modulus::sub(const U256& a, const U256& b) const {
  U256 out = a;
  if (sub_in_place(out, b) != 0) add_in_place(out, m_);
  return out;
}

}  // namespace blefind::crypto
