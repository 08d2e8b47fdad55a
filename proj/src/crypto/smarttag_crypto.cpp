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

#include "blefind/crypto/smarttag_crypto.hpp"

#include <algorithm>
#include <stdexcept>

namespace blefind::crypto {

SmartTagSignature smarttag_sign(std::span<const std::uint8_t> prefix,
                                std::span<const std::uint8_t> key) {
  if (prefix.size() != 16) {
    throw std::invalid_argument("signature prefix must be 16 octets");
  }
  if (key.size() != 16) {
    throw std::invalid_argument("device key must be 16 octets");
  }
  AesKey k{};
  std::copy(key.begin(), key.end(), k.begin());
  const Bytes ct = aes128_cbc_encrypt_zero_iv(k, pkcs7_pad(prefix));
  SmartTagSignature sig{};
  std::copy(ct.end() - 16, ct.end() - 12, sig.begin());
  return sig;
}

PrivacyId derive_privacy_id(const ByteArray<16>& id_secret,
                            std::uint32_t aging_counter) {
  AesBlock block{};
  block[12] = static_cast<std::uint8_t>(aging_counter >> 24);
  block[13] = static_cast<std::uint8_t>(aging_counter >> 16);
  block[14] = static_cast<std::uint8_t>(aging_counter >> 8);
  block[15] = static_cast<std::uint8_t>(aging_counter);
  const AesBlock ct = aes128_encrypt_block(id_secret, block);
  PrivacyId id{};
  std::copy(ct.begin(), ct.begin() + 8, id.begin());
  return id;
}

}  // namespace blefind::crypto
