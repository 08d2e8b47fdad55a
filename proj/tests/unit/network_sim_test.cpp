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


#include "blefind/network_sim.hpp"

#include <gtest/gtest.h>

#include <random>

#include "test_util.hpp"

namespace blefind::sim {
namespace {

using blefind::testing::random_array;

constexpr std::int64_t kStart = 1700000000;
const GeoFix kSite{52.520008, 13.404954};

crypto::MasterKeySet master_from(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return crypto::MasterKeySet::from_seed_bytes(random_array<32>(rng), random_array<32>(rng));
}

// One AirTag, its owner, and helpers at the given offsets (meters east).
struct TagWorld {
  explicit TagWorld(std::uint64_t seed, std::vector<double> helper_offsets = {10.0},
                 std::int64_t duration = 3600, bool keep_lines = true)
      : world([&] {
          WorldConfig c;
          c.seed = seed;
          c.start = kStart;
          c.duration_s = duration;
          c.keep_trace_lines = keep_lines;
          return c;
        }()) {
    device::TrackerConfig tc;
    tc.epoch_origin = kStart;
    const auto master = master_from(seed);
    world.add_tracker(device::Tracker::airtag("tag", kSite, master, kStart, tc, seed));
    for (std::size_t i = 0; i < helper_offsets.size(); ++i) {
      world.add_helper(device::HelperDevice::make("h" + std::to_string(i),
                                                  offset_m(kSite, 0, helper_offsets[i]), seed));
    }
    device::OwnerDevice o{"owner", offset_m(kSite, 5000, 0), 60, {}, 0, 0};
    o.owned.push_back({"tag", device::Architecture::kAirTag, master, tc, {}, {}});
    world.add_owner(std::move(o));
  }
  World world;
};

std::vector<std::string> lines_of_kind(const Trace& t, std::string_view kind) {
  std::vector<std::string> out;
  for (const auto& l : t.lines()) {
    const auto a = l.find('\t');
    const auto b = l.find('\t', a + 1);
    if (l.substr(a + 1, b - a - 1) == kind) out.push_back(l);
  }
  return out;
}

TEST(Distance, IdentityAndSymmetry) {
  const GeoFix a{10.5, -20.25}, b{10.6, -20.0};
  EXPECT_EQ(distance(a, a), 0.0);
  EXPECT_EQ(distance(a, b), distance(b, a));
}

TEST(Distance, OneDegreeOfLongitudeAtTheEquator) {
  const double d = distance({0.0, 0.0}, {0.0, 1.0});
  EXPECT_NEAR(d, 111195.0, 111195.0 * 0.005);
}

TEST(Jamming, NoZonesDelivers) {
  EXPECT_EQ(apply_jamming({}, kSite, kSite, kStart), Delivery::kDelivered);
}

TEST(Jamming, EitherEndInsideActiveZoneSuppresses) {
  const std::vector<JamZone> zones{{"z", kSite, 100.0, kStart, kStart + 600}};
  const GeoFix far = offset_m(kSite, 1000, 0);
  EXPECT_EQ(apply_jamming(zones, kSite, far, kStart + 10), Delivery::kSuppressed);
  EXPECT_EQ(apply_jamming(zones, far, kSite, kStart + 10), Delivery::kSuppressed);
  EXPECT_EQ(apply_jamming(zones, far, far, kStart + 10), Delivery::kDelivered);
}

TEST(Jamming, OnlyInsideTheActiveWindow) {
  const std::vector<JamZone> zones{{"z", kSite, 100.0, kStart + 100, kStart + 600}};
  EXPECT_EQ(apply_jamming(zones, kSite, kSite, kStart + 99), Delivery::kDelivered);
  EXPECT_EQ(apply_jamming(zones, kSite, kSite, kStart + 100), Delivery::kSuppressed);
  EXPECT_EQ(apply_jamming(zones, kSite, kSite, kStart + 600), Delivery::kSuppressed);
  EXPECT_EQ(apply_jamming(zones, kSite, kSite, kStart + 601), Delivery::kDelivered);
}

TEST(Trace, LineFormatAndDigest) {
  Trace a(true), b(false);
  for (Trace* t : {&a, &b}) {
    t->record(5, "emit", "tag", {{"addr", "c0ffee"}, {"b31", "07"}});
    t->record(5, "deliver", "h1", {});
  }
  ASSERT_EQ(a.lines().size(), 2u);
  EXPECT_EQ(a.lines()[0], "5\temit\ttag\taddr=c0ffee b31=07");
  EXPECT_EQ(a.lines()[1], "5\tdeliver\th1\t");
  EXPECT_TRUE(b.lines().empty());
  EXPECT_EQ(a.digest_hex(), b.digest_hex());
  const auto whole = to_hex(crypto::sha256(
      Bytes{0x35, 0x09, 'e', 'm', 'i', 't', 0x09, 't', 'a', 'g', 0x09, 'a', 'd', 'd', 'r', '=',
            'c', '0', 'f', 'f', 'e', 'e', ' ', 'b', '3', '1', '=', '0', '7', '\n', '5', 0x09,
            'd', 'e', 'l', 'i', 'v', 'e', 'r', 0x09, 'h', '1', 0x09, '\n'}));
  EXPECT_EQ(a.digest_hex(), whole);
  EXPECT_EQ(a.count("emit"), 1u);
  EXPECT_EQ(a.count("poll"), 0u);
}

TEST(Trace, RejectsTimeTravel) {
  Trace t;
  t.record(10, "emit", "x");
  EXPECT_THROW(t.record(9, "emit", "x"), std::logic_error);
}

TEST(World, EmptyWorldAdvancesWithoutEvents) {
  World w(WorldConfig{1, kStart, 600, 50.0, true, {}});
  w.run();
  EXPECT_EQ(w.now(), kStart + 600);
  EXPECT_EQ(w.trace().size(), 0u);
}

TEST(World, DuplicateIdsRejected) {
  World w(WorldConfig{1, kStart, 600, 50.0, false, {}});
  w.add_helper(device::HelperDevice::make("x", kSite, 1));
  EXPECT_THROW(w.add_helper(device::HelperDevice::make("x", kSite, 1)), std::invalid_argument);
}

TEST(World, NearbyHelperDeliveryIsLogged) {
  TagWorld s(3, {10.0}, 901);
  s.world.run();
  const auto deliveries = lines_of_kind(s.world.trace(), "deliver");
  ASSERT_EQ(deliveries.size(), 1u);
  EXPECT_EQ(deliveries[0], std::to_string(kStart + 900) + "\tdeliver\th0\tfrom=tag dist=10.0");
  EXPECT_EQ(s.world.counters().emitted, 1u);
  EXPECT_EQ(s.world.counters().accepted, 1u);
  const auto modes = lines_of_kind(s.world.trace(), "mode");
  ASSERT_EQ(modes.size(), 1u);
  EXPECT_EQ(modes[0], std::to_string(kStart + 900) + "\tmode\ttag\tmode=lost gap=900");
}

TEST(World, NothingCrossesTheRange) {
  TagWorld s(4, {49.0, 51.0, 400.0}, 1200);
  s.world.run();
  for (const auto& l : lines_of_kind(s.world.trace(), "deliver")) {
    EXPECT_NE(l.find("\th0\t"), std::string::npos) << l;
  }
  EXPECT_GT(s.world.counters().delivered, 0u);
}

TEST(World, SameSeedSameDigest) {
  TagWorld a(5, {10.0, 20.0, 30.0}), b(5, {10.0, 20.0, 30.0}), c(6, {10.0, 20.0, 30.0});
  a.world.run();
  b.world.run();
  c.world.run();
  EXPECT_EQ(a.world.trace().digest_hex(), b.world.trace().digest_hex());
  EXPECT_EQ(a.world.trace().lines(), b.world.trace().lines());
  EXPECT_NE(a.world.trace().digest_hex(), c.world.trace().digest_hex());
}

TEST(World, OwnerPollsOnSchedule) {
  TagWorld s(7, {10.0}, 3600);
  s.world.run();
  EXPECT_EQ(s.world.polls().size(), 60u);
  EXPECT_EQ(lines_of_kind(s.world.trace(), "poll").size(), 60u);
  const auto& last = s.world.polls().back();
  ASSERT_TRUE(last.estimate.has_value());
  EXPECT_LT(distance(*last.estimate, last.truth), 50.0);
  EXPECT_EQ(s.world.owners()[0].decrypt_failures, 0u);
}

TEST(World, OwnerDepartureStartsTheLostClock) {
  TagWorld s(8, {10.0}, 3600);
  auto& owner = s.world.owners()[0];
  owner.position = offset_m(kSite, 3, 3);
  s.world.schedule(kStart + 1200, [](World& w) { w.move_device("owner", offset_m(kSite, 9000, 0)); });
  s.world.run();
  const auto modes = lines_of_kind(s.world.trace(), "mode");
  ASSERT_EQ(modes.size(), 1u);
  EXPECT_EQ(modes[0], std::to_string(kStart + 1199 + 900) + "\tmode\ttag\tmode=lost gap=900");
}

TEST(World, JammedTagGoesLostAndIsNeverReported) {
  TagWorld s(9, {10.0, 30.0}, 3600);
  s.world.owners()[0].position = offset_m(kSite, 3, 3);
  s.world.add_zone({"jam", kSite, 200.0, kStart, kStart + 3600});
  s.world.run();
  EXPECT_EQ(s.world.counters().accepted, 0u);
  EXPECT_GT(s.world.counters().suppressed, 0u);
  EXPECT_EQ(s.world.trackers()[0].lost_since, kStart + 900);
}

TEST(World, EventCountTracksDuration) {
  TagWorld a(10, {10.0}, 1900, false), b(10, {10.0}, 2900, false);
  a.world.run();
  b.world.run();
  // 500 and 1000 seconds of lost-mode advertising.
  EXPECT_EQ(a.world.counters().emitted, 501u);
  EXPECT_EQ(b.world.counters().emitted, 1001u);
}

TEST(World, ScanReportsLatestFramePerAdvertiser) {
  TagWorld s(11, {10.0}, 1000);
  s.world.helpers()[0].scan_interval_s = 10;
  s.world.run();
  // Lost at +900 through +1000 inclusive: frames every 2 s, scans every 10 s.
  EXPECT_EQ(s.world.counters().emitted, 51u);
  EXPECT_EQ(s.world.counters().uploads, 11u);
}

}  // namespace
}  // namespace blefind::sim
