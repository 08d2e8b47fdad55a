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

#include "blefind/beacon_codec.hpp"

#include <algorithm>
#include <stdexcept>

namespace blefind::codec {

namespace {

constexpr std::uint8_t kAirTagHeader[6] = {0x1E, 0xFF, 0x00, 0x4C, 0x12, 0x19};
constexpr std::uint8_t kRandomStaticMask = 0xC0;

}  // namespace

const char* to_string(CodecError e) {
  switch (e) {
    case CodecError::kNotAirTagFormat:
      return "not-airtag-format";
    case CodecError::kNotSmartTagFormat:
      return "not-smarttag-format";
  }
  return "unknown";
}

void AirTagAdv::validate() const {
  if (key_top_bits > 3) throw std::invalid_argument("key_top_bits must be 0..3");
  if ((adv_address[0] & kRandomStaticMask) != kRandomStaticMask) {
    throw std::invalid_argument("advertiser address must be random static");
  }
}

EncodedFrame encode_airtag(const AirTagAdv& adv) {
  adv.validate();
  EncodedFrame f;
  f.address = adv.adv_address;
  std::copy(std::begin(kAirTagHeader), std::end(kAirTagHeader), f.payload.begin());
  f.payload[6] = adv.status_byte;
  std::copy(adv.key_payload.begin(), adv.key_payload.end(), f.payload.begin() + 7);
  f.payload[30] = adv.key_top_bits;
  f.payload[31] = adv.crypto_counter;
  return f;
}

Expected<AirTagAdv, CodecError> decode_airtag(std::span<const std::uint8_t> payload,
                                              std::span<const std::uint8_t> address) {
  if (payload.size() != kPayloadBytes || address.size() != kAddressBytes) {
    return unexpected(CodecError::kNotAirTagFormat);
  }
  if (!std::equal(std::begin(kAirTagHeader), std::end(kAirTagHeader), payload.begin())) {
    return unexpected(CodecError::kNotAirTagFormat);
  }
  if ((payload[30] & 0xFC) != 0 ||
      (address[0] & kRandomStaticMask) != kRandomStaticMask) {
    return unexpected(CodecError::kNotAirTagFormat);
  }
  AirTagAdv adv;
  adv.status_byte = payload[6];
  std::copy(payload.begin() + 7, payload.begin() + 30, adv.key_payload.begin());
  adv.key_top_bits = payload[30];
  adv.crypto_counter = payload[31];
  std::copy(address.begin(), address.end(), adv.adv_address.begin());
  return adv;
}

PackedKey pack_airtag_key(std::span<const std::uint8_t> x) {
  if (x.size() != crypto::kP224FieldBytes) {
    throw std::invalid_argument("P-224 x-coordinate must be 28 octets");
  }
  PackedKey k;
  std::copy(x.begin(), x.begin() + 5, k.adv_address.begin());
  k.adv_address[0] = static_cast<std::uint8_t>((x[0] & 0x3F) | kRandomStaticMask);
  k.adv_address[5] = 0x00;
  std::copy(x.begin() + 5, x.end(), k.key_payload.begin());
  k.key_top_bits = static_cast<std::uint8_t>(x[0] >> 6);
  return k;
}

crypto::FieldBytes unpack_airtag_key(const Address& address,
                                     const KeyPayload& key_payload,
                                     std::uint8_t key_top_bits) {
  crypto::FieldBytes x{};
  std::copy(address.begin(), address.begin() + 5, x.begin());
  x[0] = static_cast<std::uint8_t>((address[0] & 0x3F) | ((key_top_bits & 0x03) << 6));
  std::copy(key_payload.begin(), key_payload.end(), x.begin() + 5);
  return x;
}

std::uint8_t make_region_flags(std::uint8_t code, bool encrypted, bool uwb) {
  if (code > 0x3F) throw std::invalid_argument("region code must fit in 6 bits");
  return static_cast<std::uint8_t>(code | (encrypted ? 0x40 : 0) | (uwb ? 0x80 : 0));
}

Payload encode_smarttag(const SmartTagAdv& adv) {
  if (adv.aging_counter > kAgingCounterMask) {
    throw std::invalid_argument("aging counter exceeds 24 bits");
  }
  if (adv.reserved != ByteArray<3>{}) {
    throw std::invalid_argument("reserved octets must be zero");
  }
  Payload p{};
  p[0] = adv.tag_state;
  p[1] = static_cast<std::uint8_t>(adv.aging_counter >> 16);
  p[2] = static_cast<std::uint8_t>(adv.aging_counter >> 8);
  p[3] = static_cast<std::uint8_t>(adv.aging_counter);
  std::copy(adv.privacy_id.begin(), adv.privacy_id.end(), p.begin() + 4);
  p[12] = adv.region_flags;
  std::copy(adv.signature.begin(), adv.signature.end(), p.begin() + 16);
  std::copy(adv.unused.begin(), adv.unused.end(), p.begin() + 20);
  return p;
}

Expected<SmartTagAdv, CodecError> decode_smarttag(std::span<const std::uint8_t> p) {
  if (p.size() != kPayloadBytes) return unexpected(CodecError::kNotSmartTagFormat);
  if (p[13] != 0 || p[14] != 0 || p[15] != 0) {
    return unexpected(CodecError::kNotSmartTagFormat);
  }
  SmartTagAdv adv;
  adv.tag_state = p[0];
  adv.aging_counter = (static_cast<std::uint32_t>(p[1]) << 16) |
                      (static_cast<std::uint32_t>(p[2]) << 8) | p[3];
  std::copy(p.begin() + 4, p.begin() + 12, adv.privacy_id.begin());
  adv.region_flags = p[12];
  std::copy(p.begin() + 16, p.begin() + 20, adv.signature.begin());
  std::copy(p.begin() + 20, p.end(), adv.unused.begin());
  return adv;
}

ByteArray<16> smarttag_signed_prefix(const Payload& payload) {
  ByteArray<16> out{};
  std::copy(payload.begin(), payload.begin() + 16, out.begin());
  return out;
}

std::uint32_t aging_counter(std::int64_t tagtime) {
  if (tagtime < kSmartTagEpoch) {
    throw std::invalid_argument("tagtime precedes the SmartTag aging epoch");
  }
  const std::int64_t windows = (tagtime - kSmartTagEpoch) / kAgingWindowSeconds;
  return static_cast<std::uint32_t>(windows) & kAgingCounterMask;
}

std::string hexdump_line(const EncodedFrame& frame) {
  return to_hex(frame.address) + " " + to_hex(frame.payload);
}

EncodedFrame parse_hexdump_line(std::string_view line) {
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) {
    line.remove_suffix(1);
  }
  const auto space = line.find(' ');
  if (space == std::string_view::npos) {
    throw std::invalid_argument("hexdump line needs 'address payload'");
  }
  EncodedFrame f;
  f.address = array_from_hex<kAddressBytes>(line.substr(0, space));
  f.payload = array_from_hex<kPayloadBytes>(line.substr(space + 1));
  return f;
}

}  // namespace blefind::codec
