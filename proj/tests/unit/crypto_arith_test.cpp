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

// Field, scalar and point arithmetic, cross-checked against libcrypto's
// BIGNUM / EC_POINT as an independent route and against frozen vectors
// produced by tests/oracles/kat_oracle.py.

#include <openssl/bn.h>
#include <openssl/ec.h>
#include <openssl/obj_mac.h>

#include <memory>
#include <random>
#include <vector>

#include "blefind/crypto/curve.hpp"
#include "gtest/gtest.h"
#include "test_util.hpp"

namespace blefind::crypto {
namespace {

using blefind::testing::random_array;
using blefind::testing::read_vector_lines;
using blefind::testing::split_ws;

struct BnDeleter {
  void operator()(BIGNUM* b) const { BN_free(b); }
};
using Bn = std::unique_ptr<BIGNUM, BnDeleter>;

Bn to_bn(const U256& v) {
  std::array<std::uint8_t, 32> raw{};
  v.to_be_bytes(raw);
  return Bn(BN_bin2bn(raw.data(), 32, nullptr));
}

U256 from_bn(const BIGNUM* b) {
  std::array<std::uint8_t, 32> raw{};
  BN_bn2binpad(b, raw.data(), 32);
  return U256::from_be_bytes(raw);
}

U256 random_u256(std::mt19937_64& rng) {
  return U256{{rng(), rng(), rng(), rng()}};
}

U256 random_below(std::mt19937_64& rng, const U256& m) {
  return mod_reduce(random_u256(rng), m);
}

TEST(U256Test, HexAndBytesRoundTrip) {
  const U256 v = U256::from_hex("0123456789abcdef00112233445566778899aabbccddeeff");
  EXPECT_EQ(v.to_hex(),
            "00000000000000000123456789abcdef00112233445566778899aabbccddeeff");
  EXPECT_EQ(v.bit_length(), 185U);
  std::array<std::uint8_t, 28> out{};
  v.to_be_bytes(out);
  EXPECT_EQ(U256::from_be_bytes(out), v);
  std::array<std::uint8_t, 8> small{};
  EXPECT_THROW(v.to_be_bytes(small), std::invalid_argument);
}

TEST(U256Test, ModReduceMatchesBignum) {
  std::mt19937_64 rng(1);
  BN_CTX* ctx = BN_CTX_new();
  for (int i = 0; i < 500; ++i) {
    const U256 x = random_u256(rng);
    U256 m = random_u256(rng);
    m.limb[3] >>= static_cast<unsigned>(rng() % 64);
    if (m.is_zero()) continue;
    Bn r(BN_new());
    BN_mod(r.get(), to_bn(x).get(), to_bn(m).get(), ctx);
    EXPECT_EQ(mod_reduce(x, m), from_bn(r.get()));
  }
  BN_CTX_free(ctx);
}

class ModulusTest : public ::testing::TestWithParam<const char*> {};

TEST_P(ModulusTest, MontgomeryProductMatchesBignum) {
  const U256 mval = U256::from_hex(GetParam());
  const Modulus m(mval);
  std::mt19937_64 rng(7);
  BN_CTX* ctx = BN_CTX_new();
  const Bn bm = to_bn(mval);
  for (int i = 0; i < 2000; ++i) {
    const U256 a = random_below(rng, mval);
    const U256 b = random_below(rng, mval);
    Bn r(BN_new());
    BN_mod_mul(r.get(), to_bn(a).get(), to_bn(b).get(), bm.get(), ctx);
    ASSERT_EQ(m.mul_plain(a, b), from_bn(r.get()));
    BN_mod_add(r.get(), to_bn(a).get(), to_bn(b).get(), bm.get(), ctx);
    ASSERT_EQ(m.add_plain(a, b), from_bn(r.get()));
    BN_mod_sub(r.get(), to_bn(a).get(), to_bn(b).get(), bm.get(), ctx);
    ASSERT_EQ(m.from_mont(m.sub(m.to_mont(a), m.to_mont(b))), from_bn(r.get()));
  }
  BN_CTX_free(ctx);
}

TEST_P(ModulusTest, InverseAndSqrt) {
  const U256 mval = U256::from_hex(GetParam());
  const Modulus m(mval);
  std::mt19937_64 rng(11);
  int residues = 0;
  for (int i = 0; i < 200; ++i) {
    const U256 a = random_below(rng, mval);
    if (a.is_zero()) continue;
    const U256 am = m.to_mont(a);
    EXPECT_EQ(m.mul(am, m.inverse(am)), m.one());
    const auto root = m.sqrt_plain(a);
    if (root) {
      ++residues;
      EXPECT_EQ(m.mul_plain(*root, *root), a);
    }
    const U256 sq = m.mul_plain(a, a);
    const auto r2 = m.sqrt_plain(sq);
    ASSERT_TRUE(r2.has_value());
    EXPECT_EQ(m.mul_plain(*r2, *r2), sq);
  }
  // About half of random elements are squares.
  EXPECT_GT(residues, 60);
  EXPECT_LT(residues, 140);
}

INSTANTIATE_TEST_SUITE_P(
    Primes, ModulusTest,
    ::testing::Values(
        "ffffffffffffffffffffffffffffffff000000000000000000000001",   // P-224 p
        "ffffffffffffffffffffffffffff16a2e0b8f03e13dd29455c5c2a3d",   // P-224 n
        "ffffffffffffffffffffffffffffffffffffffffffffffff"
        "fffffffefffffc2f"));  // secp256k1 p, exercises a full top limb

TEST(ModulusTest, P224ReductionEdgeOperands) {
  const U256 p = CurveParams::nist_p224().p;
  const Modulus m(p);
  BN_CTX* ctx = BN_CTX_new();
  const Bn bp = to_bn(p);
  std::vector<U256> edge = {U256{}, U256::from_u64(1), U256::from_u64(2)};
  for (std::uint64_t k : {1, 2, 3, 0xFFFF}) {
    U256 v = p;
    sub_in_place(v, U256::from_u64(k));
    edge.push_back(v);
  }
  edge.push_back(U256{{0, 0, 0, 1}});                      // 2^192
  edge.push_back(U256{{0, 1ULL << 32, 0, 0}});             // 2^96
  edge.push_back(U256{{~0ULL, ~0ULL, ~0ULL, 0}});          // 2^192 - 1
  edge.push_back(U256{{0, 0xFFFFFFFF00000000ULL, ~0ULL, 0xFFFFFFFF}});  // p - 1
  edge.push_back(U256{{0xFFFFFFFFULL, 0, 0, 0xFFFFFFFF}});
  for (const U256& a : edge) {
    for (const U256& b : edge) {
      Bn r(BN_new());
      BN_mod_mul(r.get(), to_bn(a).get(), to_bn(b).get(), bp.get(), ctx);
      ASSERT_EQ(m.mul_plain(a, b), from_bn(r.get())) << a.to_hex() << " " << b.to_hex();
    }
  }
  BN_CTX_free(ctx);
}

TEST(ModulusTest, RejectsEvenModulus) {
  EXPECT_THROW(Modulus(U256::from_u64(10)), std::invalid_argument);
}

TEST(CurveTest, PublishedParametersValidate) {
  const CurveCheck check = validate_curve(CurveParams::nist_p224());
  EXPECT_TRUE(check.ok) << check.failure;
}

TEST(CurveTest, PerturbedConstantFailsParameterCheck) {
  CurveParams cp = CurveParams::nist_p224();
  add_in_place(cp.b, U256::from_u64(1));
  const CurveCheck check = validate_curve(cp);
  EXPECT_FALSE(check.ok);
  EXPECT_EQ(check.failure, "b^2 c != -27 (mod p)");
}

TEST(CurveTest, OffCurveBasePointFails) {
  CurveParams cp = CurveParams::nist_p224();
  add_in_place(cp.gy, U256::from_u64(1));
  EXPECT_FALSE(validate_curve(cp).ok);
}

TEST(CurveTest, PointValidationExamples) {
  const Curve& c = p224();
  const AffinePoint g = c.generator();
  EXPECT_TRUE(c.on_curve(g));
  EXPECT_TRUE(c.on_curve(c.negate(g)));
  AffinePoint bumped = g;
  add_in_place(bumped.y, U256::from_u64(1));
  EXPECT_FALSE(c.on_curve(bumped));
  EXPECT_FALSE(c.on_curve(AffinePoint{U256{}, U256{}, true}));
  AffinePoint unreduced = g;
  add_in_place(unreduced.x, c.params().p);
  EXPECT_FALSE(c.on_curve(unreduced));
}

TEST(CurveTest, ScalarMultipleVectors) {
  const Curve& c = p224();
  const auto lines = read_vector_lines("scalar_mult_kat.txt");
  ASSERT_FALSE(lines.empty());
  for (const auto& line : lines) {
    const auto tok = split_ws(line);
    ASSERT_EQ(tok.size(), 3U);
    const U256 k = U256::from_hex(tok[0]);
    const auto expected = c.decode(from_hex(tok[2]));
    ASSERT_TRUE(expected.has_value()) << line;
    EXPECT_EQ(c.mul_base(k), *expected) << tok[0];
    EXPECT_EQ(c.mul(c.generator(), k), *expected) << tok[0];
  }
}

TEST(CurveTest, EdgeScalars) {
  const Curve& c = p224();
  EXPECT_TRUE(c.mul_base(U256{}).infinity);
  EXPECT_TRUE(c.mul_base(c.params().n).infinity);
  EXPECT_TRUE(c.mul(c.generator(), c.params().n).infinity);
  const AffinePoint g = c.generator();
  EXPECT_TRUE(c.add(g, c.negate(g)).infinity);
  EXPECT_EQ(c.add(g, g), c.dbl(g));
  EXPECT_EQ(c.add(g, AffinePoint{U256{}, U256{}, true}), g);
}

TEST(CurveTest, RandomMultiplesAgreeWithLibcrypto) {
  const Curve& c = p224();
  EC_GROUP* group = EC_GROUP_new_by_curve_name(NID_secp224r1);
  ASSERT_NE(group, nullptr);
  BN_CTX* ctx = BN_CTX_new();
  EC_POINT* q = EC_POINT_new(group);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const U256 k = random_below(rng, c.params().n);
    ASSERT_EQ(EC_POINT_mul(group, q, to_bn(k).get(), nullptr, nullptr, ctx), 1);
    Bn x(BN_new());
    Bn y(BN_new());
    EC_POINT_get_affine_coordinates(group, q, x.get(), y.get(), ctx);
    const AffinePoint expected{from_bn(x.get()), from_bn(y.get()), false};
    const AffinePoint via_table = c.mul_base(k);
    ASSERT_EQ(via_table, expected);
    // Variable base on a non-generator point: (k * G) * 3 == (3k) * G.
    const U256 k3 = c.order().mul_plain(k, U256::from_u64(3));
    EXPECT_EQ(c.mul(via_table, U256::from_u64(3)), c.mul_base(k3));
  }
  EC_POINT_free(q);
  BN_CTX_free(ctx);
  EC_GROUP_free(group);
}

TEST(CurveTest, FixedBaseTableOnArbitraryPoint) {
  const Curve& c = p224();
  std::mt19937_64 rng(5);
  const AffinePoint base = c.mul_base(random_below(rng, c.params().n));
  const FixedBaseTable table(c, base);
  for (int i = 0; i < 50; ++i) {
    const U256 k = random_below(rng, c.params().n);
    EXPECT_EQ(table.mul(k), c.mul(base, k));
  }
}

TEST(CurveTest, LiftXAndEncodingRoundTrip) {
  const Curve& c = p224();
  const AffinePoint g = c.generator();
  const auto lifted = c.lift_x(g.x);
  ASSERT_TRUE(lifted.has_value());
  EXPECT_FALSE(lifted->y.is_odd());
  EXPECT_TRUE(*lifted == g || *lifted == c.negate(g));
  const EncodedPoint enc = c.encode(g);
  EXPECT_EQ(enc[0], 0x04);
  EXPECT_EQ(c.decode(enc), g);
  EncodedPoint bad = enc;
  bad[56] ^= 0x01;
  EXPECT_FALSE(c.decode(bad).has_value());
  bad = enc;
  bad[0] = 0x02;
  EXPECT_FALSE(c.decode(bad).has_value());
}

// Random x values: roughly half lift; lifted points must validate, and the
// same x with a perturbed y must not.
TEST(CurveTest, PointValidationFuzz) {
  const Curve& c = p224();
  std::mt19937_64 rng(9);
  int on = 0;
  for (int i = 0; i < 10000; ++i) {
    U256 x = random_u256(rng);
    x.limb[3] &= 0xFFFFFFFFULL;
    if (x >= c.params().p) continue;
    const auto pt = c.lift_x(x);
    U256 y = pt ? pt->y : random_below(rng, c.params().p);
    if (pt) {
      ++on;
      ASSERT_TRUE(c.on_curve(*pt));
      ASSERT_TRUE(c.on_curve(c.negate(*pt)));
      U256 y2 = c.field().add_plain(y, U256::from_u64(1 + rng() % 1000));
      ASSERT_FALSE(c.on_curve({x, y2, false}));
    } else {
      // No y exists for this x, so every candidate must be rejected.
      ASSERT_FALSE(c.on_curve({x, y, false}));
    }
  }
  EXPECT_GT(on, 4500);
  EXPECT_LT(on, 5500);
}

}  // namespace
}  // namespace blefind::crypto
