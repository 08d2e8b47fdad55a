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

#include "blefind/crypto/modular.hpp"

#include <stdexcept>

namespace blefind::crypto {

Modulus::Modulus(const U256& m) : m_(m) {
  if (!m.is_odd() || m.bit_length() < 2) {
    throw std::invalid_argument("Montgomery modulus must be odd and > 1");
  }
  // Newton iteration for m0^-1 mod 2^64.
  std::uint64_t inv = 1;
  for (int i = 0; i < 6; ++i) inv *= 2 - m.limb[0] * inv;
  n0inv_ = ~inv + 1;

  // R mod m = (2^256 - m) mod m.
  U256 r;
  sub_in_place(r, m);
  r = mod_reduce(r, m);
  one_ = r;
  // R^2 mod m by 256 modular doublings of R.
  U256 x = r;
  for (int i = 0; i < 256; ++i) {
    std::uint64_t carry = 0;
    x = shift_left1(x, &carry);
    if (carry != 0 || x >= m_) sub_in_place(x, m_);
  }
  r2_ = x;

  if (m == U256::from_hex("ffffffffffffffffffffffffffffffff000000000000000000000001")) {
    p224_form_ = true;
    one_ = U256::from_u64(1);
    r2_ = one_;
  }
}

U256 Modulus::to_mont(const U256& a) const {
  return mul(a >= m_ ? mod_reduce(a, m_) : a, r2_);
}

U256 Modulus::from_mont(const U256& a) const { return mul(a, U256::from_u64(1)); }

U256 Modulus::neg(const U256& a) const {
  if (a.is_zero()) return a;
  U256 out = m_;
  sub_in_place(out, a);
  return out;
}

U256 Modulus::pow(const U256& a, const U256& e) const {
  // Fixed 4-bit window, left to right.
  U256 table[16];
  table[0] = one_;
  for (int i = 1; i < 16; ++i) table[i] = mul(table[i - 1], a);
  U256 acc = one_;
  const int top = static_cast<int>((e.bit_length() + 3) / 4);
  for (int w = top - 1; w >= 0; --w) {
    for (int k = 0; k < 4; ++k) acc = sqr(acc);
    const unsigned shift = static_cast<unsigned>(w) * 4;
    const unsigned nibble =
        static_cast<unsigned>((e.limb[shift / 64] >> (shift % 64)) & 0xF);
    if (nibble != 0) acc = mul(acc, table[nibble]);
  }
  return acc;
}

U256 Modulus::inverse(const U256& a) const {
  if (a.is_zero()) throw std::domain_error("inverse of zero");
  if (p224_form_) {
    // Plain domain: binary extended Euclid, far cheaper than the Fermat chain.
    const U256 unit = U256::from_u64(1);
    U256 u = a, v = m_, x1 = unit, x2{};
    auto halve = [this](U256& x) {
      if (x.is_odd()) add_in_place(x, m_);  // < 2^225, no overflow
      x = shift_right1(x);
    };
    while (u != unit && v != unit) {
      while (!u.is_odd()) {
        u = shift_right1(u);
        halve(x1);
      }
      while (!v.is_odd()) {
        v = shift_right1(v);
        halve(x2);
      }
      if (u >= v) {
        sub_in_place(u, v);
        x1 = sub(x1, x2);
      } else {
        sub_in_place(v, u);
        x2 = sub(x2, x1);
      }
    }
    return u == unit ? x1 : x2;
  }
  U256 e = m_;
  sub_in_place(e, U256::from_u64(2));
  return pow(a, e);
}

U256 Modulus::mul_plain(const U256& a, const U256& b) const {
  return from_mont(mul(to_mont(a), to_mont(b)));
}

U256 Modulus::add_plain(const U256& a, const U256& b) const {
  const U256 ra = a >= m_ ? mod_reduce(a, m_) : a;
  const U256 rb = b >= m_ ? mod_reduce(b, m_) : b;
  return add(ra, rb);
}

std::optional<U256> Modulus::sqrt_plain(const U256& a_plain) const {
  const U256 a_red = a_plain >= m_ ? mod_reduce(a_plain, m_) : a_plain;
  if (a_red.is_zero()) return U256{};
  const U256 a = to_mont(a_red);

  U256 pm1 = m_;
  sub_in_place(pm1, U256::from_u64(1));
  const U256 half = shift_right1(pm1);
  const U256 minus_one = neg(one_);
  if (pow(a, half) != one_) return std::nullopt;

  // m - 1 = 2^s * q with q odd.
  unsigned s = 0;
  U256 q = pm1;
  while (!q.is_odd()) {
    q = shift_right1(q);
    ++s;
  }

  U256 z = one_;
  for (std::uint64_t cand = 2;; ++cand) {
    z = to_mont(U256::from_u64(cand));
    if (pow(z, half) == minus_one) break;
  }

  U256 qp1 = q;
  add_in_place(qp1, U256::from_u64(1));
  unsigned big_m = s;
  U256 c = pow(z, q);
  U256 t = pow(a, q);
  U256 r = pow(a, shift_right1(qp1));
  while (t != one_) {
    unsigned i = 0;
    U256 t2 = t;
    while (t2 != one_) {
      t2 = sqr(t2);
      ++i;
      if (i == big_m) return std::nullopt;
    }
    U256 b = c;
    for (unsigned k = 0; k + i + 1 < big_m; ++k) b = sqr(b);
    big_m = i;
    c = sqr(b);
    t = mul(t, c);
    r = mul(r, b);
  }
  return from_mont(r);
}

}  // namespace blefind::crypto
