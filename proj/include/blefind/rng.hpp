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
#include <random>
#include <string_view>

#include "blefind/bytes.hpp"

namespace blefind {

/// Deterministic per-purpose random stream. Each stream is an mt19937_64
/// seeded from SHA-256(seed || label), so adding a consumer never shifts the
/// values another consumer sees. Only raw engine output is used; the
/// standard distributions are implementation-defined.
class Rng {
 public:
  Rng(std::uint64_t seed, std::string_view label);

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, bound) by rejection; bound must be nonzero.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi);
  /// Uniform in [0, 1) with 53 bits.
  double unit();
  std::uint8_t byte() { return static_cast<std::uint8_t>(engine_() >> 56); }

  template <std::size_t N>
  ByteArray<N> bytes() {
    ByteArray<N> out{};
    for (auto& b : out) b = byte();
    return out;
  }

  template <typename It>
  void shuffle(It first, It last) {
    const auto n = static_cast<std::uint64_t>(last - first);
    for (std::uint64_t i = n; i > 1; --i) {
      std::swap(first[i - 1], first[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace blefind
