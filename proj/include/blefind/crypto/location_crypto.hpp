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

// ECIES over P-224 for helper-encrypted location reports.
//
// A helper draws an ephemeral scalar e, computes S = e * P_i, and derives
// 28 octets HKDF-SHA256(ikm = x(S), salt = encode(e * G),
// info = "blefind location report"): a 16-octet AES key followed by a
// 12-octet GCM nonce. The plaintext fix is sealed with AES-128-GCM using the
// key index as associated data.

#pragma once

#include <cstdint>
#include <memory>
#include <optional>

#include "blefind/crypto/curve.hpp"
#include "blefind/crypto/key_schedule.hpp"
#include "blefind/expected.hpp"
#include "blefind/geo.hpp"

namespace blefind::crypto {

struct LocationPlaintext {
  GeoFix fix;
  std::int64_t observed_at = 0;

  friend bool operator==(const LocationPlaintext&, const LocationPlaintext&) = default;
};

inline constexpr std::size_t kLocationPlaintextBytes = 24;

/// What the AirTag-path cloud stores. Carries no plaintext field; only
/// decrypt_location yields a fix.
struct EncryptedLocationReport {
  KeyIndex key_index{};
  EncodedPoint ephemeral_share{};
  Bytes ciphertext;
  ByteArray<16> auth_tag{};
  std::int64_t server_time = 0;
};

enum class LocationCryptoError {
  kInvalidPublicPoint,
  kInvalidEphemeralPoint,
  kAuthFailure,
};

const char* to_string(LocationCryptoError e);

/// A validated recipient key, optionally carrying a fixed-base table so that
/// repeated encryptions to the same P_i avoid a full variable-base multiply.
class RecipientKey {
 public:
  /// nullopt if `pt` fails curve membership (twist defense).
  static std::optional<RecipientKey> from_point(const AffinePoint& pt);
  /// Lifts an x-coordinate to its even-y point; nullopt if x is off-curve.
  static std::optional<RecipientKey> from_x(const FieldBytes& x);

  const AffinePoint& point() const { return point_; }
  const KeyIndex& key_index() const { return index_; }

  void precompute();
  bool precomputed() const { return table_ != nullptr; }
  AffinePoint multiply(const U256& k) const;

 private:
  explicit RecipientKey(const AffinePoint& pt);

  AffinePoint point_;
  KeyIndex index_{};
  std::shared_ptr<const FixedBaseTable> table_;
};

Bytes serialize_plaintext(const LocationPlaintext& p);
std::optional<LocationPlaintext> parse_plaintext(std::span<const std::uint8_t> raw);

/// Encrypts to a validated key with a caller-supplied ephemeral scalar
/// (1 <= e < n).
EncryptedLocationReport encrypt_location(const LocationPlaintext& loc,
                                         const RecipientKey& recipient,
                                         const U256& ephemeral_scalar,
                                         std::int64_t server_time = 0);

/// Validates `pub` first and refuses to run ECDH on an off-curve point.
Expected<EncryptedLocationReport, LocationCryptoError> encrypt_location(
    const LocationPlaintext& loc, const AffinePoint& pub,
    const U256& ephemeral_scalar, std::int64_t server_time = 0);

Expected<LocationPlaintext, LocationCryptoError> decrypt_location(
    const EncryptedLocationReport& report, const U256& private_scalar);

}  // namespace blefind::crypto
