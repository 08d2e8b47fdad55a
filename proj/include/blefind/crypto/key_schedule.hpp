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

// Rolling ephemeral key schedule for AirTag-path trackers.
//
//   SK_i      = KDF(SK_{i-1}, "update")
//   (u_i,v_i) = KDF(SK_i, "diversify")
//   d_i       = u_i * d + v_i   (mod n)
//   P_i       = u_i * P + v_i * G
//
// The KDF is HKDF-SHA256 with an empty salt and the label as `info`. The
// diversify output is 64 octets; each 32-octet half is reduced mod (n - 1)
// and incremented, so u_i and v_i are never zero.
//
// Simulated epoch e (one 24-hour window) broadcasts the keys obtained after
// e + 1 update steps: epoch 0 is already one step away from SK_0, and the
// master pair itself never appears on the air.

#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "blefind/crypto/curve.hpp"
#include "blefind/crypto/primitives.hpp"

namespace blefind::crypto {

using RollingSecret = ByteArray<32>;
using KeyIndex = Digest;

struct MasterKeySet {
  U256 d;
  AffinePoint public_key;
  RollingSecret sk0{};
  std::string owner_id;

  /// Throws std::invalid_argument unless d is in [1, n - 1].
  static MasterKeySet from_private(const U256& d, const RollingSecret& sk0,
                                   std::string owner_id = {});
  /// d is drawn from 32 uniform octets, reduced into [1, n - 1].
  static MasterKeySet from_seed_bytes(const ByteArray<32>& d_bytes,
                                      const RollingSecret& sk0,
                                      std::string owner_id = {});
};

struct EpochKeys {
  std::uint64_t epoch = 0;
  RollingSecret sk{};
  U256 d;
  AffinePoint public_key;
};

/// Maps 32 octets to a scalar in [1, n - 1].
U256 scalar_from_bytes(std::span<const std::uint8_t> bytes);

RollingSecret kdf_update(const RollingSecret& sk);
std::pair<U256, U256> kdf_diversify(const RollingSecret& sk);

EpochKeys first_epoch(const MasterKeySet& master);
EpochKeys advance_epoch(const EpochKeys& prev, const MasterKeySet& master);
EpochKeys keys_at(const MasterKeySet& master, std::uint64_t epoch);

/// SHA-256 of the uncompressed encoding of the even-y representative of
/// +/-P. A beacon carries only the x-coordinate, so helpers and owners both
/// index by the representative they can reconstruct.
KeyIndex key_index(const AffinePoint& pt);
AffinePoint even_y_representative(const AffinePoint& pt);

}  // namespace blefind::crypto
