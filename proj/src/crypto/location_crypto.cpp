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

#include "blefind/crypto/location_crypto.hpp"

#include <bit>
#include <cstring>
#include <stdexcept>

namespace blefind::crypto {

namespace {

constexpr std::string_view kReportInfo = "blefind location report";

struct SessionKeys {
  AesKey key{};
  ByteArray<12> iv{};
};

SessionKeys derive_session(const AffinePoint& shared, const EncodedPoint& share) {
  const FieldBytes z = p224().x_bytes(shared);
  const Bytes okm = hkdf_sha256(z, share, kReportInfo, 28);
  SessionKeys s;
  std::copy(okm.begin(), okm.begin() + 16, s.key.begin());
  std::copy(okm.begin() + 16, okm.end(), s.iv.begin());
  return s;
}

}  // namespace

const char* to_string(LocationCryptoError e) {
  switch (e) {
    case LocationCryptoError::kInvalidPublicPoint:
      return "invalid-public-point";
    case LocationCryptoError::kInvalidEphemeralPoint:
      return "invalid-ephemeral-point";
    case LocationCryptoError::kAuthFailure:
      return "auth-failure";
  }
  return "unknown";
}

RecipientKey::RecipientKey(const AffinePoint& pt)
    : point_(pt), index_(crypto::key_index(pt)) {}

std::optional<RecipientKey> RecipientKey::from_point(const AffinePoint& pt) {
  if (!p224().on_curve(pt)) return std::nullopt;
  return RecipientKey(pt);
}

std::optional<RecipientKey> RecipientKey::from_x(const FieldBytes& x) {
  const auto pt = p224().lift_x(U256::from_be_bytes(x));
  if (!pt) return std::nullopt;
  return RecipientKey(*pt);
}

void RecipientKey::precompute() {
  if (!table_) table_ = std::make_shared<const FixedBaseTable>(p224(), point_);
}

AffinePoint RecipientKey::multiply(const U256& k) const {
  return table_ ? table_->mul(k) : p224().mul(point_, k);
}

Bytes serialize_plaintext(const LocationPlaintext& p) {
  Bytes out;
  out.reserve(kLocationPlaintextBytes);
  append_u64_be(out, std::bit_cast<std::uint64_t>(p.fix.lat));
  append_u64_be(out, std::bit_cast<std::uint64_t>(p.fix.lon));
  append_u64_be(out, static_cast<std::uint64_t>(p.observed_at));
  return out;
}

std::optional<LocationPlaintext> parse_plaintext(std::span<const std::uint8_t> raw) {
  if (raw.size() != kLocationPlaintextBytes) return std::nullopt;
  LocationPlaintext p;
  p.fix.lat = std::bit_cast<double>(read_u64_be(raw.subspan(0, 8)));
  p.fix.lon = std::bit_cast<double>(read_u64_be(raw.subspan(8, 8)));
  p.observed_at = static_cast<std::int64_t>(read_u64_be(raw.subspan(16, 8)));
  return p;
}

EncryptedLocationReport encrypt_location(const LocationPlaintext& loc,
                                         const RecipientKey& recipient,
                                         const U256& ephemeral_scalar,
                                         std::int64_t server_time) {
  const Curve& c = p224();
  if (ephemeral_scalar.is_zero() || ephemeral_scalar >= c.params().n) {
    throw std::invalid_argument("ephemeral scalar out of range");
  }
  EncryptedLocationReport rep;
  rep.key_index = recipient.key_index();
  rep.ephemeral_share = c.encode(c.mul_base(ephemeral_scalar));
  const AffinePoint shared = recipient.multiply(ephemeral_scalar);
  const SessionKeys s = derive_session(shared, rep.ephemeral_share);
  SealedBox box = aes128_gcm_seal(s.key, s.iv, rep.key_index, serialize_plaintext(loc));
  rep.ciphertext = std::move(box.ciphertext);
  rep.auth_tag = box.tag;
  rep.server_time = server_time;
  return rep;
}

Expected<EncryptedLocationReport, LocationCryptoError> encrypt_location(
    const LocationPlaintext& loc, const AffinePoint& pub,
    const U256& ephemeral_scalar, std::int64_t server_time) {
  const auto recipient = RecipientKey::from_point(pub);
  if (!recipient) return unexpected(LocationCryptoError::kInvalidPublicPoint);
  return encrypt_location(loc, *recipient, ephemeral_scalar, server_time);
}

Expected<LocationPlaintext, LocationCryptoError> decrypt_location(
    const EncryptedLocationReport& report, const U256& private_scalar) {
  const Curve& c = p224();
  const auto share = c.decode(report.ephemeral_share);
  if (!share) return unexpected(LocationCryptoError::kInvalidEphemeralPoint);
  const AffinePoint shared = c.mul(*share, private_scalar);
  if (shared.infinity) return unexpected(LocationCryptoError::kAuthFailure);
  const SessionKeys s = derive_session(shared, report.ephemeral_share);
  const auto plain = aes128_gcm_open(s.key, s.iv, report.key_index,
                                     report.ciphertext, report.auth_tag);
  if (!plain) return unexpected(LocationCryptoError::kAuthFailure);
  const auto parsed = parse_plaintext(*plain);
  if (!parsed) return unexpected(LocationCryptoError::kAuthFailure);
  return *parsed;
}

}  // namespace blefind::crypto
