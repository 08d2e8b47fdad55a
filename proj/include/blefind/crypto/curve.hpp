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

// Short-Weierstrass curves y^2 = x^3 - 3x + b over a prime field, with the
// NIST P-224 instance used by the AirTag-path key schedule.

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "blefind/bytes.hpp"
#include "blefind/crypto/modular.hpp"
#include "blefind/crypto/uint256.hpp"

namespace blefind::crypto {

inline constexpr std::size_t kP224FieldBytes = 28;
inline constexpr std::size_t kP224PointBytes = 1 + 2 * kP224FieldBytes;

using FieldBytes = ByteArray<kP224FieldBytes>;
using EncodedPoint = ByteArray<kP224PointBytes>;

/// Affine point in plain (non-Montgomery) coordinates.
struct AffinePoint {
  U256 x;
  U256 y;
  bool infinity = false;

  friend bool operator==(const AffinePoint&, const AffinePoint&) = default;
};

struct CurveParams {
  U256 p;     // field prime
  U256 n;     // group order
  U256 b;     // constant coefficient
  U256 c;     // SHA-1-derived verification constant, b^2 c == -27 (mod p)
  Bytes seed;
  U256 gx;
  U256 gy;

  static CurveParams nist_p224();
};

struct CurveCheck {
  bool ok = false;
  std::string failure;  // empty when ok
};

/// Checks b^2 c == -27 (mod p) and that G lies on the curve.
CurveCheck validate_curve(const CurveParams& params);

class FixedBaseTable;

class Curve {
 public:
  explicit Curve(CurveParams params);
  Curve(const Curve&) = delete;
  Curve& operator=(const Curve&) = delete;

  const CurveParams& params() const { return params_; }
  const Modulus& field() const { return field_; }
  const Modulus& order() const { return order_; }
  AffinePoint generator() const { return {params_.gx, params_.gy, false}; }

  /// Curve-equation membership with x, y < p. The point at infinity is
  /// rejected: it is never a usable public key.
  bool on_curve(const AffinePoint& pt) const;

  AffinePoint add(const AffinePoint& a, const AffinePoint& b) const;
  AffinePoint negate(const AffinePoint& a) const;
  AffinePoint dbl(const AffinePoint& a) const;

  /// k * pt, variable base (width-5 NAF).
  AffinePoint mul(const AffinePoint& pt, const U256& k) const;
  /// k * G through a precomputed comb table.
  AffinePoint mul_base(const U256& k) const;
  /// u * pt + v * G.
  AffinePoint mul_add(const U256& u, const AffinePoint& pt, const U256& v) const;

  /// The point with x-coordinate `x` and even y, if x is on the curve.
  std::optional<AffinePoint> lift_x(const U256& x) const;

  /// Uncompressed SEC1 form, 0x04 || X || Y (28-byte coordinates).
  EncodedPoint encode(const AffinePoint& pt) const;
  /// Parses uncompressed form; returns nullopt for malformed or off-curve input.
  std::optional<AffinePoint> decode(std::span<const std::uint8_t> bytes) const;
  FieldBytes x_bytes(const AffinePoint& pt) const;

  const FixedBaseTable& base_table() const { return *base_table_; }

 private:
  friend class FixedBaseTable;

  struct Jacobian {
    U256 x, y, z;  // Montgomery form; z == 0 is infinity
  };

  Jacobian to_jacobian(const AffinePoint& a) const;
  AffinePoint to_affine(const Jacobian& j) const;
  Jacobian jdouble(const Jacobian& a) const;
  Jacobian jadd(const Jacobian& a, const Jacobian& b) const;
  /// b given as Montgomery-form affine coordinates.
  Jacobian jadd_mixed(const Jacobian& a, const U256& bx, const U256& by) const;

  CurveParams params_;
  Modulus field_;
  Modulus order_;
  U256 b_mont_;
  std::unique_ptr<FixedBaseTable> base_table_;
};

/// Precomputed 4-bit comb over one base point: 56 windows x 15 multiples,
/// stored as Montgomery-form affine coordinates.
class FixedBaseTable {
 public:
  FixedBaseTable(const Curve& curve, const AffinePoint& base);

  AffinePoint mul(const U256& k) const;
  const AffinePoint& base() const { return base_; }

 private:
  static constexpr int kWindows = 56;
  static constexpr int kPerWindow = 15;

  const Curve* curve_;
  AffinePoint base_;
  std::vector<U256> xs_;
  std::vector<U256> ys_;
};

/// Process-wide NIST P-224 instance.
const Curve& p224();

}  // namespace blefind::crypto
