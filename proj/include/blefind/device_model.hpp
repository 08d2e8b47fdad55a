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


// Trackers, helpers, owners and the cloud for both finding-network
// architectures. Everything here is stepped by the world loop; nothing keeps
// its own clock.

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "blefind/beacon_codec.hpp"
#include "blefind/crypto/key_schedule.hpp"
#include "blefind/crypto/location_crypto.hpp"
#include "blefind/crypto/smarttag_crypto.hpp"
#include "blefind/expected.hpp"
#include "blefind/geo.hpp"
#include "blefind/rng.hpp"

namespace blefind::device {

enum class Architecture { kAirTag, kSmartTag };

/// "airtag-path" / "smarttag-path".
const char* to_string(Architecture a);

enum class TrackerMode { kPaired, kLost };

const char* to_string(TrackerMode m);

inline constexpr std::int64_t kEpochSeconds = 86400;
inline constexpr std::int64_t kCounterWindowSeconds = 900;

struct TrackerConfig {
  std::int64_t lost_threshold_s = 900;
  std::int64_t advertising_interval_s = 2;
  /// Unix time at which epoch 0 (and the first 15-minute counter window)
  /// begins.
  std::int64_t epoch_origin = 0;
};

/// Epoch index of `now`; times before the origin map to epoch 0.
std::uint64_t epoch_of(std::int64_t now, const TrackerConfig& cfg);

struct Tracker {
  std::string id;
  Architecture kind = Architecture::kAirTag;
  GeoFix position;
  std::optional<crypto::MasterKeySet> master;
  std::optional<crypto::SmartTagSecrets> secrets;
  std::int64_t last_owner_contact = 0;
  TrackerMode mode = TrackerMode::kPaired;
  std::uint64_t current_epoch = 0;
  std::uint8_t current_counter = 0;
  TrackerConfig config;

  // Emission bookkeeping.
  std::int64_t next_emit = 0;
  std::int64_t lost_since = -1;
  std::int64_t counter_window = -1;
  std::optional<crypto::EpochKeys> keys;
  std::uint32_t smarttag_counter = 0;
  std::optional<codec::EncodedFrame> smarttag_frame;
  Rng counter_rng;

  static Tracker airtag(std::string id, const GeoFix& pos, crypto::MasterKeySet master,
                        std::int64_t now, const TrackerConfig& cfg, std::uint64_t seed);
  static Tracker smarttag(std::string id, const GeoFix& pos,
                          const crypto::SmartTagSecrets& secrets, std::int64_t now,
                          const TrackerConfig& cfg);

 private:
  Tracker(std::uint64_t seed, const std::string& id);
};

/// Re-evaluates lost mode against the contact gap and, while lost, emits one
/// frame per advertising interval. `now` must not decrease between calls.
std::optional<codec::AdvertisementFrame> tracker_step(Tracker& t, std::int64_t now);

/// Earliest time at which tracker_step could change state or emit, assuming
/// no further owner contact.
std::int64_t tracker_next_wake(const Tracker& t, std::int64_t now);

/// x-coordinate -> validated recipient key, shared by every helper in a world.
/// Keys seen repeatedly get a fixed-base table.
class RecipientCache {
 public:
  explicit RecipientCache(int precompute_after = 3) : precompute_after_(precompute_after) {}

  /// nullptr when x is not on the curve.
  const crypto::RecipientKey* lookup(const crypto::FieldBytes& x);
  std::size_t size() const { return entries_.size(); }

 private:
  struct Entry {
    std::optional<crypto::RecipientKey> key;
    int uses = 0;
  };
  int precompute_after_;
  std::map<crypto::FieldBytes, Entry> entries_;
};

struct HelperDevice {
  std::string id;
  GeoFix position;
  GeoFix reported_position;
  GeoFix ip_position;
  std::string auth_token;
  std::int64_t scan_interval_s = 1;
  /// Suppress re-uploading a payload identical to the previous upload for
  /// the same advertiser address.
  bool dedupe = false;
  std::map<codec::Address, codec::Payload> last_uploaded;
  Rng rng;

  static HelperDevice make(std::string id, const GeoFix& pos, std::uint64_t seed,
                           double ip_grid_m = 10000.0);

 private:
  HelperDevice(std::uint64_t seed, const std::string& id);
};

struct AirTagUpload {
  crypto::EncryptedLocationReport report;
};

struct SmartTagUpload {
  codec::Payload payload{};
  codec::SmartTagAdv adv;
  GeoFix reported_position;
  /// What the server learns from the connection itself.
  GeoFix ip_position;
  std::string helper_token;
  std::int64_t time = 0;
};

struct ReportUpload {
  std::string helper_id;
  std::variant<AirTagUpload, SmartTagUpload> body;

  Architecture kind() const {
    return body.index() == 0 ? Architecture::kAirTag : Architecture::kSmartTag;
  }
};

enum class ObserveDrop { kUndecodable, kInvalidPoint, kDuplicate };

const char* to_string(ObserveDrop d);

/// Turns one sighted frame into a cloud upload. AirTag frames are encrypted
/// to the key they carry without any check of who sent them.
Expected<ReportUpload, ObserveDrop> helper_observe(HelperDevice& h,
                                                   const codec::AdvertisementFrame& f,
                                                   std::int64_t now, RecipientCache& keys);

struct StoredSmartTagReport {
  GeoFix fix;
  std::uint32_t aging_counter = 0;
  std::string helper_token;
  std::int64_t time = 0;
};

enum class IngestResult { kAccepted, kSignatureMismatch, kIpInconsistency };

const char* to_string(IngestResult r);

struct IngestOutcome {
  IngestResult result = IngestResult::kAccepted;
  std::uint64_t cost = 0;
  std::string matched_tag;  // SmartTag path only
};

struct CloudConfig {
  double ip_consistency_threshold_km = 25.0;
};

class CloudServer {
 public:
  explicit CloudServer(CloudConfig cfg = {}) : cfg_(cfg) {}

  void register_smarttag(const std::string& tag_id, const crypto::SmartTagSecrets& secrets);

  IngestOutcome ingest(const ReportUpload& u, std::int64_t now);

  /// Reports under `index` with t0 < server_time <= t1, in arrival order.
  std::vector<const crypto::EncryptedLocationReport*> fetch_airtag(
      const crypto::KeyIndex& index, std::int64_t t0, std::int64_t t1) const;
  std::vector<StoredSmartTagReport> fetch_smarttag(const std::string& tag_id,
                                                   std::int64_t t0, std::int64_t t1) const;
  bool has_airtag_index(const crypto::KeyIndex& index) const;

  std::uint64_t verify_cost_units() const { return verify_cost_units_; }
  std::size_t airtag_report_count() const;
  std::size_t smarttag_report_count() const;
  const CloudConfig& config() const { return cfg_; }

  /// The whole server state as JSON text, as a breach would expose it.
  std::string serialize() const;

 private:
  struct TagKeys {
    std::string tag_id;
    crypto::SmartTagSecrets secrets;
    std::uint32_t cached_counter = 0;
    std::optional<crypto::PrivacyId> cached_id;
  };

  CloudConfig cfg_;
  std::map<crypto::KeyIndex, std::vector<crypto::EncryptedLocationReport>> airtag_store_;
  std::map<std::string, std::vector<StoredSmartTagReport>> smarttag_store_;
  std::vector<TagKeys> smarttag_keys_;
  std::uint64_t verify_cost_units_ = 0;
};

inline IngestOutcome cloud_ingest(CloudServer& c, const ReportUpload& u, std::int64_t now) {
  return c.ingest(u, now);
}

struct LocatedFix {
  GeoFix fix;
  std::int64_t observed_at = 0;
  std::int64_t server_time = 0;
};

/// What an owner holds for one paired tracker.
struct OwnedTracker {
  std::string tracker_id;
  Architecture kind = Architecture::kAirTag;
  std::optional<crypto::MasterKeySet> master;
  TrackerConfig config;
  std::vector<LocatedFix> estimates;
  std::map<std::uint64_t, std::pair<crypto::EpochKeys, crypto::KeyIndex>> epoch_cache;
};

struct OwnerDevice {
  std::string id;
  GeoFix position;
  std::int64_t poll_interval_s = 60;
  std::vector<OwnedTracker> owned;
  std::uint64_t decrypt_attempts = 0;
  std::uint64_t decrypt_failures = 0;

  OwnedTracker* find(const std::string& tracker_id);
};

/// Located fixes for one owned tracker with t0 < time <= t1, ordered by
/// server time (arrival order breaks ties); they are also appended to the
/// tracker's estimate list, whose last element is the current estimate.
std::vector<LocatedFix> owner_query(OwnerDevice& o, OwnedTracker& tracker,
                                    const CloudServer& c, std::int64_t t0, std::int64_t t1);

}  // namespace blefind::device
