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

#include "blefind/crypto/curve.hpp"

#include <cstdlib>

#include <array>
#include <stdexcept>

namespace blefind::crypto {

CurveParams CurveParams::nist_p224() {
  CurveParams cp;
  cp.p = U256::from_hex("ffffffffffffffffffffffffffffffff000000000000000000000001");
  cp.n = U256::from_hex("ffffffffffffffffffffffffffff16a2e0b8f03e13dd29455c5c2a3d");
  cp.b = U256::from_hex("b4050a850c04b3abf54132565044b0b7d7bfd8ba270b39432355ffb4");
  cp.c = U256::from_hex("5b056c7e11dd68f40469ee7f3c7a7d74f7d121116506d031218291fb");
  cp.seed = from_hex("bd71344799d5c7fcdc45b59fa3b9ab8f6a948bc5");
  cp.gx = U256::from_hex("b70e0cbd6bb4bf7f321390b94a03c1d356c21122343280d6115c1d21");
  cp.gy = U256::from_hex("bd376388b5f723fb4c22dfe6cd4375a05a07476444d5819985007e34");
  return cp;
}

namespace {

bool rhs_matches(const Modulus& f, const U256& b_mont, const U256& x,
                 const U256& y) {
  const U256 xm = f.to_mont(x);
  const U256 ym = f.to_mont(y);
  const U256 three = f.to_mont(U256::from_u64(3));
  U256 rhs = f.mul(f.sqr(xm), xm);
  rhs = f.sub(rhs, f.mul(three, xm));
  rhs = f.add(rhs, b_mont);
  return f.sqr(ym) == rhs;
}

}  // namespace

CurveCheck validate_curve(const CurveParams& params) {
  if (!params.p.is_odd() || params.p.bit_length() < 3) {
    return {false, "field modulus must be an odd prime"};
  }
  if (params.b >= params.p || params.c >= params.p || params.gx >= params.p ||
      params.gy >= params.p) {
    return {false, "parameter not reduced modulo p"};
  }
  const Modulus f(params.p);
  const U256 b = f.to_mont(params.b);
  const U256 c = f.to_mont(params.c);
  const U256 lhs = f.mul(f.sqr(b), c);
  const U256 minus27 = f.neg(f.to_mont(U256::from_u64(27)));
  if (lhs != minus27) return {false, "b^2 c != -27 (mod p)"};
  if (!rhs_matches(f, b, params.gx, params.gy)) {
    return {false, "base point not on curve"};
  }
  return {true, {}};
}

Curve::Curve(CurveParams params)
    : params_(std::move(params)),
      field_(params_.p),
      order_(params_.n),
      b_mont_(field_.to_mont(params_.b)) {
  base_table_ = std::make_unique<FixedBaseTable>(*this, generator());
}

bool Curve::on_curve(const AffinePoint& pt) const {
  if (pt.infinity) return false;
  if (pt.x >= params_.p || pt.y >= params_.p) return false;
  return rhs_matches(field_, b_mont_, pt.x, pt.y);
}

Curve::Jacobian Curve::to_jacobian(const AffinePoint& a) const {
  if (a.infinity) return {field_.one(), field_.one(), U256{}};
  return {field_.to_mont(a.x), field_.to_mont(a.y), field_.one()};
}

AffinePoint Curve::to_affine(const Jacobian& j) const {
  if (j.z.is_zero()) return {U256{}, U256{}, true};
  const U256 zinv = field_.inverse(j.z);
  const U256 zinv2 = field_.sqr(zinv);
  const U256 x = field_.mul(j.x, zinv2);
  const U256 y = field_.mul(j.y, field_.mul(zinv2, zinv));
  return {field_.from_mont(x), field_.from_mont(y), false};
}

// dbl-2001-b, a = -3.
Curve::Jacobian Curve::jdouble(const Jacobian& a) const {
  if (a.z.is_zero() || a.y.is_zero()) return {field_.one(), field_.one(), U256{}};
  const Modulus& f = field_;
  const U256 delta = f.sqr(a.z);
  const U256 gamma = f.sqr(a.y);
  const U256 beta = f.mul(a.x, gamma);
  U256 alpha = f.mul(f.sub(a.x, delta), f.add(a.x, delta));
  alpha = f.add(f.add(alpha, alpha), alpha);
  const U256 beta4 = f.add(f.add(beta, beta), f.add(beta, beta));
  const U256 beta8 = f.add(beta4, beta4);
  Jacobian r;
  r.x = f.sub(f.sqr(alpha), beta8);
  const U256 yz = f.add(a.y, a.z);
  r.z = f.sub(f.sub(f.sqr(yz), gamma), delta);
  U256 gamma2 = f.sqr(gamma);
  gamma2 = f.add(gamma2, gamma2);
  gamma2 = f.add(gamma2, gamma2);
  gamma2 = f.add(gamma2, gamma2);
  r.y = f.sub(f.mul(alpha, f.sub(beta4, r.x)), gamma2);
  return r;
}

// add-2007-bl.
Curve::Jacobian Curve::jadd(const Jacobian& a, const Jacobian& b) const {
  if (a.z.is_zero()) return b;
  if (b.z.is_zero()) return a;
  const Modulus& f = field_;
  const U256 z1z1 = f.sqr(a.z);
  const U256 z2z2 = f.sqr(b.z);
  const U256 u1 = f.mul(a.x, z2z2);
  const U256 u2 = f.mul(b.x, z1z1);
  const U256 s1 = f.mul(f.mul(a.y, b.z), z2z2);
  const U256 s2 = f.mul(f.mul(b.y, a.z), z1z1);
  const U256 h = f.sub(u2, u1);
  U256 r = f.sub(s2, s1);
  if (h.is_zero()) {
    if (r.is_zero()) return jdouble(a);
    return {f.one(), f.one(), U256{}};
  }
  const U256 h2 = f.add(h, h);
  const U256 i = f.sqr(h2);
  const U256 j = f.mul(h, i);
  r = f.add(r, r);
  const U256 v = f.mul(u1, i);
  Jacobian out;
  out.x = f.sub(f.sub(f.sqr(r), j), f.add(v, v));
  const U256 s1j = f.mul(s1, j);
  out.y = f.sub(f.mul(r, f.sub(v, out.x)), f.add(s1j, s1j));
  const U256 zz = f.add(a.z, b.z);
  out.z = f.mul(f.sub(f.sub(f.sqr(zz), z1z1), z2z2), h);
  return out;
}

// madd-2007-bl.
Curve::Jacobian Curve::jadd_mixed(const Jacobian& a, const U256& bx,
                                  const U256& by) const {
  const Modulus& f = field_;
  if (a.z.is_zero()) return {bx, by, f.one()};
  const U256 z1z1 = f.sqr(a.z);
  const U256 u2 = f.mul(bx, z1z1);
  const U256 s2 = f.mul(f.mul(by, a.z), z1z1);
  const U256 h = f.sub(u2, a.x);
  U256 r = f.sub(s2, a.y);
  if (h.is_zero()) {
    if (r.is_zero()) return jdouble(a);
    return {f.one(), f.one(), U256{}};
  }
  const U256 hh = f.sqr(h);
  U256 i = f.add(hh, hh);
  i = f.add(i, i);
  const U256 j = f.mul(h, i);
  r = f.add(r, r);
  const U256 v = f.mul(a.x, i);
  Jacobian out;
  out.x = f.sub(f.sub(f.sqr(r), j), f.add(v, v));
  const U256 y1j = f.mul(a.y, j);
  out.y = f.sub(f.mul(r, f.sub(v, out.x)), f.add(y1j, y1j));
  const U256 zh = f.add(a.z, h);
  out.z = f.sub(f.sub(f.sqr(zh), z1z1), hh);
  return out;
}

AffinePoint Curve::add(const AffinePoint& a, const AffinePoint& b) const {
  return to_affine(jadd(to_jacobian(a), to_jacobian(b)));
}

AffinePoint Curve::negate(const AffinePoint& a) const {
  if (a.infinity || a.y.is_zero()) return a;
  U256 y = params_.p;
  sub_in_place(y, a.y);
  return {a.x, y, false};
}

AffinePoint Curve::dbl(const AffinePoint& a) const {
  return to_affine(jdouble(to_jacobian(a)));
}

AffinePoint Curve::mul(const AffinePoint& pt, const U256& k_in) const {
  const U256 k = k_in >= params_.n ? mod_reduce(k_in, params_.n) : k_in;
  if (pt.infinity || k.is_zero()) return {U256{}, U256{}, true};

  // Width-5 NAF digits, least significant first.
  std::array<int, 260> naf{};
  int len = 0;
  U256 e = k;
  while (!e.is_zero()) {
    int digit = 0;
    if (e.is_odd()) {
      digit = static_cast<int>(e.limb[0] & 31U);
      if (digit >= 16) {
        digit -= 32;
        add_in_place(e, U256::from_u64(static_cast<std::uint64_t>(-digit)));
      } else {
        sub_in_place(e, U256::from_u64(static_cast<std::uint64_t>(digit)));
      }
    }
    naf[len++] = digit;
    e = shift_right1(e);
  }

  // Odd multiples P, 3P, ..., 15P, normalized to affine (Montgomery form)
  // with one shared inversion so the main loop can use mixed additions.
  std::array<Jacobian, 8> odd;
  odd[0] = to_jacobian(pt);
  const Jacobian twice = jdouble(odd[0]);
  for (int i = 1; i < 8; ++i) odd[i] = jadd(odd[i - 1], twice);
  const Modulus& f = field_;
  bool degenerate = false;
  for (const auto& j : odd) degenerate = degenerate || j.z.is_zero();
  if (degenerate) {
    // Only reachable for inputs off the curve; stay on the general formulas.
    Jacobian acc{f.one(), f.one(), U256{}};
    for (int i = len - 1; i >= 0; --i) {
      acc = jdouble(acc);
      const int d = naf[i];
      if (d == 0) continue;
      Jacobian q = odd[(std::abs(d) - 1) / 2];
      if (d < 0) q.y = f.neg(q.y);
      acc = jadd(acc, q);
    }
    return to_affine(acc);
  }
  std::array<U256, 8> prefix;
  prefix[0] = odd[0].z;
  for (int i = 1; i < 8; ++i) prefix[i] = f.mul(prefix[i - 1], odd[i].z);
  U256 inv = f.inverse(prefix[7]);
  std::array<U256, 8> ax, ay;
  for (int i = 7; i >= 0; --i) {
    const U256 zinv = i == 0 ? inv : f.mul(inv, prefix[i - 1]);
    if (i > 0) inv = f.mul(inv, odd[i].z);
    const U256 zinv2 = f.sqr(zinv);
    ax[i] = f.mul(odd[i].x, zinv2);
    ay[i] = f.mul(odd[i].y, f.mul(zinv2, zinv));
  }

  Jacobian acc{f.one(), f.one(), U256{}};
  for (int i = len - 1; i >= 0; --i) {
    acc = jdouble(acc);
    const int d = naf[i];
    if (d > 0) {
      acc = jadd_mixed(acc, ax[(d - 1) / 2], ay[(d - 1) / 2]);
    } else if (d < 0) {
      acc = jadd_mixed(acc, ax[(-d - 1) / 2], f.neg(ay[(-d - 1) / 2]));
    }
  }
  return to_affine(acc);
}

AffinePoint Curve::mul_base(const U256& k) const { return base_table_->mul(k); }

AffinePoint Curve::mul_add(const U256& u, const AffinePoint& pt,
                           const U256& v) const {
  return add(mul(pt, u), mul_base(v));
}

std::optional<AffinePoint> Curve::lift_x(const U256& x) const {
  if (x >= params_.p) return std::nullopt;
  const Modulus& f = field_;
  const U256 xm = f.to_mont(x);
  const U256 three = f.to_mont(U256::from_u64(3));
  U256 rhs = f.sub(f.mul(f.sqr(xm), xm), f.mul(three, xm));
  rhs = f.add(rhs, b_mont_);
  const auto root = f.sqrt_plain(f.from_mont(rhs));
  if (!root) return std::nullopt;
  AffinePoint pt{x, *root, false};
  if (pt.y.is_odd()) pt = negate(pt);
  return pt;
}

EncodedPoint Curve::encode(const AffinePoint& pt) const {
  if (pt.infinity) throw std::invalid_argument("cannot encode point at infinity");
  EncodedPoint out{};
  out[0] = 0x04;
  pt.x.to_be_bytes(std::span<std::uint8_t>(out).subspan(1, kP224FieldBytes));
  pt.y.to_be_bytes(
      std::span<std::uint8_t>(out).subspan(1 + kP224FieldBytes, kP224FieldBytes));
  return out;
}

std::optional<AffinePoint> Curve::decode(std::span<const std::uint8_t> bytes) const {
  if (bytes.size() != kP224PointBytes || bytes[0] != 0x04) return std::nullopt;
  AffinePoint pt{U256::from_be_bytes(bytes.subspan(1, kP224FieldBytes)),
                 U256::from_be_bytes(bytes.subspan(1 + kP224FieldBytes)), false};
  if (!on_curve(pt)) return std::nullopt;
  return pt;
}

FieldBytes Curve::x_bytes(const AffinePoint& pt) const {
  FieldBytes out{};
  pt.x.to_be_bytes(out);
  return out;
}

FixedBaseTable::FixedBaseTable(const Curve& curve, const AffinePoint& base)
    : curve_(&curve), base_(base) {
  if (!curve.on_curve(base)) {
    throw std::invalid_argument("fixed-base table needs an on-curve point");
  }
  const Modulus& f = curve.field_;
  std::vector<Curve::Jacobian> pts;
  pts.reserve(kWindows * kPerWindow);
  Curve::Jacobian window_base = curve.to_jacobian(base);
  for (int w = 0; w < kWindows; ++w) {
    Curve::Jacobian acc = window_base;
    pts.push_back(acc);
    for (int j = 2; j <= kPerWindow; ++j) {
      acc = curve.jadd(acc, window_base);
      pts.push_back(acc);
    }
    // 16 * window_base = 15 * window_base + window_base.
    window_base = curve.jadd(acc, window_base);
  }

  // Batch normalization (Montgomery's trick); no entry is infinity because
  // every multiple is below the group order.
  const std::size_t count = pts.size();
  std::vector<U256> prefix(count);
  U256 running = f.one();
  for (std::size_t i = 0; i < count; ++i) {
    prefix[i] = running;
    running = f.mul(running, pts[i].z);
  }
  U256 inv = f.inverse(running);
  xs_.resize(count);
  ys_.resize(count);
  for (std::size_t i = count; i-- > 0;) {
    const U256 zinv = f.mul(inv, prefix[i]);
    inv = f.mul(inv, pts[i].z);
    const U256 zinv2 = f.sqr(zinv);
    xs_[i] = f.mul(pts[i].x, zinv2);
    ys_[i] = f.mul(pts[i].y, f.mul(zinv2, zinv));
  }
}

AffinePoint FixedBaseTable::mul(const U256& k_in) const {
  const U256& n = curve_->params_.n;
  const U256 k = k_in >= n ? mod_reduce(k_in, n) : k_in;
  Curve::Jacobian acc{curve_->field_.one(), curve_->field_.one(), U256{}};
  for (int w = 0; w < kWindows; ++w) {
    const unsigned shift = static_cast<unsigned>(w) * 4;
    const unsigned nibble =
        static_cast<unsigned>((k.limb[shift / 64] >> (shift % 64)) & 0xF);
    if (nibble == 0) continue;
    const std::size_t idx = static_cast<std::size_t>(w) * kPerWindow + nibble - 1;
    acc = curve_->jadd_mixed(acc, xs_[idx], ys_[idx]);
  }
  return curve_->to_affine(acc);
}

const Curve& p224() {
  static const Curve curve(CurveParams::nist_p224());
  return curve;
}

}  // namespace blefind::crypto
