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

#include <cstdint>
#include <span>

#include "blefind/crypto/primitives.hpp"

namespace blefind::crypto {

using SmartTagSignature = ByteArray<4>;
using PrivacyId = ByteArray<8>;

/// Symmetric material shared between a SmartTag and the server.
struct SmartTagSecrets {
  AesKey device_key{};
  ByteArray<16> id_secret{};
};

/// Signature over advertisement bytes 0-15: PKCS#7 pad to 32 octets,
/// AES-128-CBC under an all-zero IV, keep the first 4 octets of the last
/// ciphertext block. Throws std::invalid_argument unless the prefix is 16
/// octets and the key is 16 octets.
SmartTagSignature smarttag_sign(std::span<const std::uint8_t> prefix,
                                std::span<const std::uint8_t> key);

/// AES-128-ECB of the counter as a 16-octet big-endian block, truncated to 8.
PrivacyId derive_privacy_id(const ByteArray<16>& id_secret,
                            std::uint32_t aging_counter);

}  // namespace blefind::crypto
