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

#include "blefind/crypto/primitives.hpp"

#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/sha.h>

#include <memory>
#include <stdexcept>

namespace blefind::crypto {

namespace {

struct CipherCtxDeleter {
  void operator()(EVP_CIPHER_CTX* ctx) const { EVP_CIPHER_CTX_free(ctx); }
};
using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, CipherCtxDeleter>;

CipherCtx new_cipher_ctx() {
  CipherCtx ctx(EVP_CIPHER_CTX_new());
  if (!ctx) throw std::runtime_error("EVP_CIPHER_CTX_new failed");
  return ctx;
}

void check(int rc, const char* what) {
  if (rc != 1) throw std::runtime_error(std::string("libcrypto: ") + what);
}

}  // namespace

Digest sha256(std::span<const std::uint8_t> data) {
  Digest out{};
  SHA256(data.data(), data.size(), out.data());
  return out;
}

Digest hmac_sha256(std::span<const std::uint8_t> key,
                   std::span<const std::uint8_t> data) {
  Digest out{};
  unsigned int len = 0;
  const std::uint8_t zero = 0;
  if (HMAC(EVP_sha256(), key.empty() ? &zero : key.data(),
           static_cast<int>(key.size()), data.data(), data.size(), out.data(),
           &len) == nullptr) {
    throw std::runtime_error("HMAC failed");
  }
  return out;
}

Bytes hkdf_sha256(std::span<const std::uint8_t> ikm,
                  std::span<const std::uint8_t> salt, std::string_view info,
                  std::size_t length) {
  if (length > 255 * 32) throw std::invalid_argument("HKDF output too long");
  const Digest zero_salt{};
  const Digest prk = hmac_sha256(salt.empty() ? std::span<const std::uint8_t>(zero_salt)
                                              : salt,
                                 ikm);
  Bytes okm;
  okm.reserve(length);
  Bytes block;
  std::uint8_t counter = 1;
  while (okm.size() < length) {
    Bytes msg = block;
    msg.insert(msg.end(), info.begin(), info.end());
    msg.push_back(counter++);
    const Digest t = hmac_sha256(prk, msg);
    block.assign(t.begin(), t.end());
    const std::size_t take = std::min<std::size_t>(32, length - okm.size());
    okm.insert(okm.end(), t.begin(), t.begin() + static_cast<std::ptrdiff_t>(take));
  }
  return okm;
}

AesBlock aes128_encrypt_block(const AesKey& key, const AesBlock& block) {
  CipherCtx ctx = new_cipher_ctx();
  check(EVP_EncryptInit_ex(ctx.get(), EVP_aes_128_ecb(), nullptr, key.data(),
                           nullptr),
        "ecb init");
  EVP_CIPHER_CTX_set_padding(ctx.get(), 0);
  AesBlock out{};
  int len = 0;
  check(EVP_EncryptUpdate(ctx.get(), out.data(), &len, block.data(), 16),
        "ecb update");
  return out;
}

Bytes aes128_cbc_encrypt_zero_iv(const AesKey& key,
                                 std::span<const std::uint8_t> data) {
  if (data.size() % 16 != 0) {
    throw std::invalid_argument("CBC input must be block aligned");
  }
  CipherCtx ctx = new_cipher_ctx();
  const AesBlock iv{};
  check(EVP_EncryptInit_ex(ctx.get(), EVP_aes_128_cbc(), nullptr, key.data(),
                           iv.data()),
        "cbc init");
  EVP_CIPHER_CTX_set_padding(ctx.get(), 0);
  Bytes out(data.size());
  int len = 0;
  check(EVP_EncryptUpdate(ctx.get(), out.data(), &len, data.data(),
                          static_cast<int>(data.size())),
        "cbc update");
  return out;
}

Bytes pkcs7_pad(std::span<const std::uint8_t> data) {
  const std::size_t pad = 16 - (data.size() % 16);
  Bytes out(data.begin(), data.end());
  out.insert(out.end(), pad, static_cast<std::uint8_t>(pad));
  return out;
}

SealedBox aes128_gcm_seal(const AesKey& key, const ByteArray<12>& iv,
                          std::span<const std::uint8_t> aad,
                          std::span<const std::uint8_t> plaintext) {
  CipherCtx ctx = new_cipher_ctx();
  check(EVP_EncryptInit_ex(ctx.get(), EVP_aes_128_gcm(), nullptr, key.data(),
                           iv.data()),
        "gcm init");
  int len = 0;
  if (!aad.empty()) {
    check(EVP_EncryptUpdate(ctx.get(), nullptr, &len, aad.data(),
                            static_cast<int>(aad.size())),
          "gcm aad");
  }
  SealedBox box;
  box.ciphertext.resize(plaintext.size());
  check(EVP_EncryptUpdate(ctx.get(), box.ciphertext.data(), &len, plaintext.data(),
                          static_cast<int>(plaintext.size())),
        "gcm update");
  check(EVP_EncryptFinal_ex(ctx.get(), box.ciphertext.data() + len, &len),
        "gcm final");
  check(EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, 16, box.tag.data()),
        "gcm tag");
  return box;
}

std::optional<Bytes> aes128_gcm_open(const AesKey& key, const ByteArray<12>& iv,
                                     std::span<const std::uint8_t> aad,
                                     std::span<const std::uint8_t> ciphertext,
                                     const ByteArray<16>& tag) {
  CipherCtx ctx = new_cipher_ctx();
  check(EVP_DecryptInit_ex(ctx.get(), EVP_aes_128_gcm(), nullptr, key.data(),
                           iv.data()),
        "gcm init");
  int len = 0;
  if (!aad.empty()) {
    check(EVP_DecryptUpdate(ctx.get(), nullptr, &len, aad.data(),
                            static_cast<int>(aad.size())),
          "gcm aad");
  }
  Bytes out(ciphertext.size());
  check(EVP_DecryptUpdate(ctx.get(), out.data(), &len, ciphertext.data(),
                          static_cast<int>(ciphertext.size())),
        "gcm update");
  ByteArray<16> tag_copy = tag;
  check(EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, 16, tag_copy.data()),
        "gcm set tag");
  if (EVP_DecryptFinal_ex(ctx.get(), out.data() + len, &len) != 1) {
    return std::nullopt;
  }
  return out;
}

Sha256Stream::Sha256Stream() : ctx_(EVP_MD_CTX_new()) {
  if (ctx_ == nullptr) throw std::runtime_error("EVP_MD_CTX_new failed");
  check(EVP_DigestInit_ex(static_cast<EVP_MD_CTX*>(ctx_), EVP_sha256(), nullptr),
        "digest init");
}

Sha256Stream::~Sha256Stream() { EVP_MD_CTX_free(static_cast<EVP_MD_CTX*>(ctx_)); }

void Sha256Stream::update(std::span<const std::uint8_t> data) {
  check(EVP_DigestUpdate(static_cast<EVP_MD_CTX*>(ctx_), data.data(), data.size()),
        "digest update");
}

void Sha256Stream::update(std::string_view text) {
  check(EVP_DigestUpdate(static_cast<EVP_MD_CTX*>(ctx_), text.data(), text.size()),
        "digest update");
}

Digest Sha256Stream::peek() const {
  EVP_MD_CTX* copy = EVP_MD_CTX_new();
  if (copy == nullptr) throw std::runtime_error("EVP_MD_CTX_new failed");
  Digest out{};
  unsigned int len = 0;
  const int ok = EVP_MD_CTX_copy_ex(copy, static_cast<EVP_MD_CTX*>(ctx_)) == 1 &&
                 EVP_DigestFinal_ex(copy, out.data(), &len) == 1;
  EVP_MD_CTX_free(copy);
  if (!ok) throw std::runtime_error("digest finalize failed");
  return out;
}

}  // namespace blefind::crypto
