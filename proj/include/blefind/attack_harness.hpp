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


// Attacker actors and the procedures they run: beacon capture and replay,
// counter sweeps, bot swarms, GPS spoofing on a helper, a covert channel
// through the AirTag-path cloud, and report floods.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "blefind/device_model.hpp"
#include "blefind/expected.hpp"
#include "blefind/network_sim.hpp"

namespace blefind::attack {

/// Capability tags. An attacker may hold several.
enum class AdversaryClass : unsigned {
  kA1 = 1,  // local application on a helper phone
  kA2 = 2,  // proximity: own radio near the target
  kA3 = 4,  // network: can talk to the cloud directly
  kA4 = 8,  // service operator
};

using Capabilities = unsigned;

/// Parses "A2" or "A2,A3".
Expected<Capabilities, std::string> parse_capabilities(std::string_view text);
std::string to_string_capabilities(Capabilities c);

inline bool has(Capabilities c, AdversaryClass a) { return (c & static_cast<unsigned>(a)) != 0; }
inline bool can_capture(Capabilities c) {
  return has(c, AdversaryClass::kA1) || has(c, AdversaryClass::kA2);
}
inline bool can_broadcast(Capabilities c) { return has(c, AdversaryClass::kA2); }
inline bool can_upload(Capabilities c) {
  return has(c, AdversaryClass::kA3) || has(c, AdversaryClass::kA4);
}

struct CapturedBeacon {
  codec::AdvertisementFrame frame;
  std::int64_t capture_time = 0;
};

/// Outcome tallies for one attack directive.
struct AttackRecord {
  std::string verb;
  std::string attacker;
  std::int64_t at = 0;
  std::int64_t until = 0;
  std::string status = "scheduled";
  std::uint64_t frames = 0;
  std::uint64_t uploads = 0;
  std::uint64_t accepted = 0;
  std::uint64_t rejected_signature = 0;
  std::uint64_t rejected_ip = 0;
  std::vector<std::pair<std::string, std::string>> notes;

  void note(std::string key, std::string value) {
    notes.emplace_back(std::move(key), std::move(value));
  }
};

/// Routes cloud outcomes back to the directive that caused them. Sources are
/// emitter ids; `bind_helper` claims everything one helper uploads.
class AttackLog {
 public:
  std::size_t open(AttackRecord r);
  AttackRecord& record(std::size_t i) { return records_.at(i); }
  const std::vector<AttackRecord>& records() const { return records_; }

  void bind_source(const std::string& source, std::size_t record);
  void bind_helper(const std::string& helper_id, std::size_t record);
  /// Counts one broadcast frame toward the record bound to `source`.
  void tally_frame(const std::string& source);
  void attach(sim::World& w);

 private:
  void on_ingest(const std::string& source, const device::ReportUpload& u,
                 const device::IngestOutcome& out);

  std::vector<AttackRecord> records_;
  std::map<std::string, std::size_t> by_source_;
  std::map<std::string, std::size_t> by_helper_;
};

/// A fixed list of frames cycled from the attacker's position. Frame n goes
/// out at t0 + floor(n / rate); `total` frames in all.
struct BroadcastProgram {
  std::vector<codec::EncodedFrame> frames;
  std::int64_t t0 = 0;
  double rate = 1.0;
  std::uint64_t total = 0;
  std::uint64_t sent = 0;
  std::optional<std::size_t> record;

  std::int64_t due(std::uint64_t n) const;
};

class Attacker : public sim::Actor {
 public:
  /// Throws std::invalid_argument unless broadcast_rate > 0.
  Attacker(std::string id, Capabilities caps, const GeoFix& pos, double broadcast_rate = 1.0,
           AttackLog* log = nullptr);

  const std::string& id() const override { return id_; }
  GeoFix position() const override { return position_; }
  void move_to(const GeoFix& p) override { position_ = p; }
  std::int64_t next_wake(std::int64_t now) const override;
  void step(sim::World& w, std::int64_t now) override;
  bool listening() const override { return capture_target_.has_value(); }
  void on_frame(sim::World& w, const codec::AdvertisementFrame& f, std::int64_t now) override;

  Capabilities capabilities() const { return caps_; }
  double broadcast_rate() const { return rate_; }
  const std::vector<CapturedBeacon>& captured() const { return captured_; }
  std::optional<CapturedBeacon> latest_capture() const;

  /// Listens for the next frame from `target` until `until` (inclusive).
  void arm_capture(std::string target, std::int64_t until, std::optional<std::size_t> record);
  void add_program(BroadcastProgram p);
  bool broadcasting(std::int64_t now) const;

 private:
  std::string id_;
  Capabilities caps_;
  GeoFix position_;
  double rate_;
  AttackLog* log_;
  std::vector<CapturedBeacon> captured_;
  std::optional<std::string> capture_target_;
  std::int64_t capture_until_ = 0;
  std::optional<std::size_t> capture_record_;
  std::vector<BroadcastProgram> programs_;
};

/// 0..255.
std::vector<std::uint8_t> full_sweep();

/// AirTag-format beacon: one frame per sweep value with byte 31 replaced.
/// Anything else is replayed verbatim as a single frame.
std::vector<codec::EncodedFrame> spoof_broadcast(const CapturedBeacon& cb,
                                                 const std::vector<std::uint8_t>& sweep);

/// Every bot cycles the swept target from its own position at its own rate
/// for `duration_s` seconds starting now. Requires at least one bot.
void botnet_campaign(sim::World& w, const CapturedBeacon& target,
                     const std::vector<Attacker*>& bots, std::int64_t duration_s,
                     std::optional<std::size_t> record);

/// The helper reports `fake` from now on. With `vpn`, its apparent IP
/// location moves there too.
void gps_spoof(device::HelperDevice& h, const GeoFix& fake, bool vpn);

// Send-My covert channel. Bit k with value v becomes the public point
// s*G, s = scalar(HKDF(secret, "sendmy" || k || v)).

inline constexpr std::size_t kSendMyMaxBits = 4096;

crypto::AffinePoint sendmy_point(std::span<const std::uint8_t> secret, std::uint64_t bit_index,
                                 bool value);
/// Throws std::invalid_argument beyond kSendMyMaxBits.
std::vector<crypto::AffinePoint> sendmy_encode(const std::vector<bool>& bits,
                                               std::span<const std::uint8_t> secret);
/// AirTag-format frames carrying each point's x-coordinate.
std::vector<codec::EncodedFrame> sendmy_frames(const std::vector<crypto::AffinePoint>& points);

struct SendMyDecoded {
  std::vector<std::optional<bool>> bits;
  std::size_t erasures = 0;
};

/// Reads bit k as whichever of its two key indexes the cloud holds; neither
/// or both is an erasure.
SendMyDecoded sendmy_decode(const device::CloudServer& c, std::span<const std::uint8_t> secret,
                            std::size_t length);

/// "1011" -> bits; throws std::invalid_argument on other characters.
std::vector<bool> parse_bits(std::string_view text);
std::string format_bits(const SendMyDecoded& d);

// Report floods sent straight to the cloud.

/// Well-formed reports to the captured AirTag key, each carrying a random
/// fix within `spread_m` of `around`.
std::vector<device::ReportUpload> flood_airtag(const CapturedBeacon& cb, std::size_t n, Rng& rng,
                                               const GeoFix& around, double spread_m,
                                               std::int64_t now, device::RecipientCache& keys,
                                               const std::string& uploader);

/// SmartTag-format uploads with random privacy IDs and signatures under the
/// current aging counter.
std::vector<device::ReportUpload> flood_smarttag(std::size_t n, Rng& rng, const GeoFix& from,
                                                 std::int64_t now, const std::string& uploader);

struct DosReport {
  std::uint64_t airtag_server_cost = 0;
  std::uint64_t smarttag_server_cost = 0;
  std::uint64_t airtag_owner_decrypt_attempts = 0;
  std::uint64_t airtag_owner_decrypt_failures = 0;
  std::uint64_t airtag_reports_stored = 0;
  std::uint64_t smarttag_reports_stored = 0;
};

DosReport dos_report(const sim::World& w);

}  // namespace blefind::attack
