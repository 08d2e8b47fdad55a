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

#include "blefind/crypto/key_schedule.hpp"

#include <stdexcept>

namespace blefind::crypto {

namespace {

constexpr std::string_view kUpdateLabel = "update";
constexpr std::string_view kDiversifyLabel = "diversify";

U256 order_minus_one() {
  U256 m = p224().params().n;
  sub_in_place(m, U256::from_u64(1));
  return m;
}

}  // namespace

U256 scalar_from_bytes(std::span<const std::uint8_t> bytes) {
  static const U256 nm1 = order_minus_one();
  U256 s = mod_reduce(U256::from_be_bytes(bytes), nm1);
  add_in_place(s, U256::from_u64(1));
  return s;
}

MasterKeySet MasterKeySet::from_private(const U256& d, const RollingSecret& sk0,
                                        std::string owner_id) {
  const Curve& c = p224();
  if (d.is_zero() || d >= c.params().n) {
    throw std::invalid_argument("master private key out of range");
  }
  MasterKeySet m;
  m.d = d;
  m.public_key = c.mul_base(d);
  m.sk0 = sk0;
  m.owner_id = std::move(owner_id);
  return m;
}

MasterKeySet MasterKeySet::from_seed_bytes(const ByteArray<32>& d_bytes,
                                           const RollingSecret& sk0,
                                           std::string owner_id) {
  return from_private(scalar_from_bytes(d_bytes), sk0, std::move(owner_id));
}

RollingSecret kdf_update(const RollingSecret& sk) {
  const Bytes okm = hkdf_sha256(sk, {}, kUpdateLabel, 32);
  RollingSecret out{};
  std::copy(okm.begin(), okm.end(), out.begin());
  return out;
}

std::pair<U256, U256> kdf_diversify(const RollingSecret& sk) {
  const Bytes okm = hkdf_sha256(sk, {}, kDiversifyLabel, 64);
  const std::span<const std::uint8_t> all(okm);
  return {scalar_from_bytes(all.first(32)), scalar_from_bytes(all.subspan(32))};
}

namespace {

EpochKeys derive(std::uint64_t epoch, const RollingSecret& sk,
                 const MasterKeySet& master) {
  const Curve& c = p224();
  const auto [u, v] = kdf_diversify(sk);
  EpochKeys k;
  k.epoch = epoch;
  k.sk = sk;
  k.d = c.order().add_plain(c.order().mul_plain(u, master.d), v);
  if (k.d.is_zero()) {
    // Happens with probability ~2^-224.
    throw std::runtime_error("derived ephemeral scalar is zero");
  }
  k.public_key = c.mul_add(u, master.public_key, v);
  return k;
}

}  // namespace

EpochKeys first_epoch(const MasterKeySet& master) {
  return derive(0, kdf_update(master.sk0), master);
}

EpochKeys advance_epoch(const EpochKeys& prev, const MasterKeySet& master) {
  return derive(prev.epoch + 1, kdf_update(prev.sk), master);
}

EpochKeys keys_at(const MasterKeySet& master, std::uint64_t epoch) {
  EpochKeys k = first_epoch(master);
  for (std::uint64_t i = 0; i < epoch; ++i) k = advance_epoch(k, master);
  return k;
}

AffinePoint even_y_representative(const AffinePoint& pt) {
  return pt.y.is_odd() ? p224().negate(pt) : pt;
}

KeyIndex key_index(const AffinePoint& pt) {
  return sha256(p224().encode(even_y_representative(pt)));
}

}  // namespace blefind::crypto
