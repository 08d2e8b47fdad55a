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

// Thin wrappers over libcrypto for hashing, HKDF and AES.

#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "blefind/bytes.hpp"

namespace blefind::crypto {

using Digest = ByteArray<32>;
using AesKey = ByteArray<16>;
using AesBlock = ByteArray<16>;

Digest sha256(std::span<const std::uint8_t> data);
Digest hmac_sha256(std::span<const std::uint8_t> key,
                   std::span<const std::uint8_t> data);

/// RFC 5869 HKDF over SHA-256. An empty salt means HashLen zero octets.
Bytes hkdf_sha256(std::span<const std::uint8_t> ikm,
                  std::span<const std::uint8_t> salt, std::string_view info,
                  std::size_t length);

AesBlock aes128_encrypt_block(const AesKey& key, const AesBlock& block);

/// AES-128-CBC, all-zero IV, no padding (input must be a multiple of 16).
Bytes aes128_cbc_encrypt_zero_iv(const AesKey& key,
                                 std::span<const std::uint8_t> data);

/// PKCS#7 to a multiple of 16; a full block is added when already aligned.
Bytes pkcs7_pad(std::span<const std::uint8_t> data);

struct SealedBox {
  Bytes ciphertext;
  ByteArray<16> tag{};
};

SealedBox aes128_gcm_seal(const AesKey& key, const ByteArray<12>& iv,
                          std::span<const std::uint8_t> aad,
                          std::span<const std::uint8_t> plaintext);

/// nullopt when the tag does not verify.
std::optional<Bytes> aes128_gcm_open(const AesKey& key, const ByteArray<12>& iv,
                                     std::span<const std::uint8_t> aad,
                                     std::span<const std::uint8_t> ciphertext,
                                     const ByteArray<16>& tag);

/// Streaming SHA-256 for trace digests.
class Sha256Stream {
 public:
  Sha256Stream();
  ~Sha256Stream();
  Sha256Stream(const Sha256Stream&) = delete;
  Sha256Stream& operator=(const Sha256Stream&) = delete;

  void update(std::span<const std::uint8_t> data);
  void update(std::string_view text);
  /// Digest of everything so far; the stream stays usable.
  Digest peek() const;

 private:
  void* ctx_;
};

}  // namespace blefind::crypto
