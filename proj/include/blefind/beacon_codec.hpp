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

// Wire layouts of the two lost-mode beacon formats.
//
// AirTag-format payload (32 octets, one AD structure):
//
//   0      0x1E  AD length (31)
//   1      0xFF  manufacturer specific data
//   2-3    0x004C company identifier
//   4      0x12  offline-finding payload type
//   5      0x19  payload length (25)
//   6      status byte
//   7-29   public key octets 5..27
//   30     top two bits of public key octet 0 (bits 0-1; bits 2-7 zero)
//   31     crypto counter
//
// The remaining key octets 0..4 travel in the random-static advertiser
// address, whose top two bits must read 0b11; the displaced key bits are what
// byte 30 carries. Address octet 5 is fixed at 0x00.
//
// SmartTag-format payload (32 octets, no AD header):
//
//   0      tag state
//   1-3    aging counter, big-endian
//   4-11   privacy ID
//   12     region code (bits 0-5), encryption flag (bit 6), UWB flag (bit 7)
//   13-15  reserved, 0x00
//   16-19  signature over bytes 0-15
//   20-31  unused (emitted as zero, accepted as anything)

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "blefind/bytes.hpp"
#include "blefind/crypto/curve.hpp"
#include "blefind/crypto/smarttag_crypto.hpp"
#include "blefind/expected.hpp"
#include "blefind/geo.hpp"

namespace blefind::codec {

inline constexpr std::size_t kPayloadBytes = 32;
inline constexpr std::size_t kAddressBytes = 6;
inline constexpr std::size_t kAirTagKeyPayloadBytes = 23;

using Payload = ByteArray<kPayloadBytes>;
using Address = ByteArray<kAddressBytes>;
using KeyPayload = ByteArray<kAirTagKeyPayloadBytes>;

inline constexpr std::uint8_t kAirTagStatusLost = 0x10;

inline constexpr std::int64_t kSmartTagEpoch = 1593648000;
inline constexpr std::int64_t kAgingWindowSeconds = 900;
inline constexpr std::uint32_t kAgingCounterMask = 0xFFFFFF;

enum class CodecError {
  kNotAirTagFormat,
  kNotSmartTagFormat,
};

const char* to_string(CodecError e);

struct AirTagAdv {
  std::uint8_t status_byte = kAirTagStatusLost;
  KeyPayload key_payload{};
  std::uint8_t key_top_bits = 0;
  std::uint8_t crypto_counter = 0;
  Address adv_address{0xC0, 0, 0, 0, 0, 0};

  /// Throws std::invalid_argument when key_top_bits > 3 or the address lacks
  /// the random-static 0b11 prefix.
  void validate() const;

  friend bool operator==(const AirTagAdv&, const AirTagAdv&) = default;
};

struct SmartTagAdv {
  std::uint8_t tag_state = 0;
  std::uint32_t aging_counter = 0;  // 24 bits used
  crypto::PrivacyId privacy_id{};
  std::uint8_t region_flags = 0;
  ByteArray<3> reserved{};
  crypto::SmartTagSignature signature{};
  ByteArray<12> unused{};

  friend bool operator==(const SmartTagAdv&, const SmartTagAdv&) = default;
};

/// Address plus payload, as carried over the air.
struct EncodedFrame {
  Address address{};
  Payload payload{};

  friend bool operator==(const EncodedFrame&, const EncodedFrame&) = default;
};

/// A beacon as the simulator moves it around.
struct AdvertisementFrame {
  Address adv_address{};
  Payload payload{};
  std::int64_t emit_time = 0;
  GeoFix emit_position;
  std::string emitter_id;
};

EncodedFrame encode_airtag(const AirTagAdv& adv);
Expected<AirTagAdv, CodecError> decode_airtag(std::span<const std::uint8_t> payload,
                                              std::span<const std::uint8_t> address);

struct PackedKey {
  Address adv_address{};
  KeyPayload key_payload{};
  std::uint8_t key_top_bits = 0;
};

/// Splits a 28-octet x-coordinate across address and payload. Throws
/// std::invalid_argument on any other length.
PackedKey pack_airtag_key(std::span<const std::uint8_t> x_coordinate);
crypto::FieldBytes unpack_airtag_key(const Address& address,
                                     const KeyPayload& key_payload,
                                     std::uint8_t key_top_bits);
inline crypto::FieldBytes unpack_airtag_key(const AirTagAdv& adv) {
  return unpack_airtag_key(adv.adv_address, adv.key_payload, adv.key_top_bits);
}

std::uint8_t make_region_flags(std::uint8_t region_code, bool encrypted, bool uwb);
inline std::uint8_t region_code(std::uint8_t flags) { return flags & 0x3F; }
inline bool encryption_flag(std::uint8_t flags) { return (flags >> 6) & 1; }
inline bool uwb_flag(std::uint8_t flags) { return (flags >> 7) & 1; }

/// Throws std::invalid_argument if the counter exceeds 24 bits or the
/// reserved octets are nonzero.
Payload encode_smarttag(const SmartTagAdv& adv);
Expected<SmartTagAdv, CodecError> decode_smarttag(std::span<const std::uint8_t> payload);

/// Octets 0-15 of an encoded SmartTag payload: the signed prefix.
ByteArray<16> smarttag_signed_prefix(const Payload& payload);

/// floor((tagtime - 1593648000) / 900) truncated to 24 bits. Throws
/// std::invalid_argument for times before the epoch.
std::uint32_t aging_counter(std::int64_t tagtime);

/// One line of a codec hexdump: lowercase address hex, a space, payload hex.
std::string hexdump_line(const EncodedFrame& frame);
/// Throws std::invalid_argument on malformed lines.
EncodedFrame parse_hexdump_line(std::string_view line);

}  // namespace blefind::codec
