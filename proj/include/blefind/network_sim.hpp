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


// The simulated world: a one-second clock, BLE delivery inside a fixed range,
// jam zones, and an append-only trace whose digest pins a whole run.

#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "blefind/crypto/primitives.hpp"
#include "blefind/device_model.hpp"
#include "blefind/geo.hpp"
#include "blefind/rng.hpp"

namespace blefind::sim {

inline constexpr std::int64_t kNever = std::numeric_limits<std::int64_t>::max();

inline double distance(const GeoFix& a, const GeoFix& b) { return distance_m(a, b); }

/// A disc in which all reception is suppressed while active.
struct JamZone {
  std::string id;
  GeoFix center;
  double radius_m = 0.0;
  /// Active for t_start <= t <= t_end.
  std::int64_t t_start = 0;
  std::int64_t t_end = 0;

  bool active_at(std::int64_t t) const { return t >= t_start && t <= t_end; }
  bool contains(const GeoFix& p) const { return distance(center, p) <= radius_m; }
};

enum class Delivery { kDelivered, kSuppressed };

/// Suppressed iff some zone active at `now` contains either end of the link.
Delivery apply_jamming(const std::vector<JamZone>& zones, const GeoFix& emitter,
                       const GeoFix& receiver, std::int64_t now);

struct TraceField {
  std::string_view key;
  std::string value;
};

/// Newline-delimited `time \t kind \t actor \t k=v k=v ...` records.
/// Lines are hashed as they are appended; keeping them is optional.
class Trace {
 public:
  explicit Trace(bool keep_lines = false);

  void record(std::int64_t time, std::string_view kind, std::string_view actor,
              const std::vector<TraceField>& details = {});

  std::string digest_hex() const;
  std::uint64_t size() const { return size_; }
  std::uint64_t count(std::string_view kind) const;
  bool keeps_lines() const { return keep_lines_; }
  const std::vector<std::string>& lines() const { return lines_; }

 private:
  bool keep_lines_;
  std::unique_ptr<crypto::Sha256Stream> hash_;
  std::uint64_t size_ = 0;
  std::int64_t last_time_ = std::numeric_limits<std::int64_t>::min();
  std::map<std::string, std::uint64_t, std::less<>> counts_;
  std::vector<std::string> lines_;
  std::string scratch_;
};

class World;

/// Anything beyond the built-in devices that the loop must wake: attackers,
/// bots, transmitters.
class Actor {
 public:
  virtual ~Actor() = default;

  virtual const std::string& id() const = 0;
  virtual GeoFix position() const = 0;
  virtual void move_to(const GeoFix& p) = 0;
  /// Earliest time >= now at which step() has work, or kNever.
  virtual std::int64_t next_wake(std::int64_t now) const = 0;
  virtual void step(World& w, std::int64_t now) = 0;

  /// Listening actors receive every frame that reaches their position.
  virtual bool listening() const { return false; }
  virtual void on_frame(World& /*w*/, const codec::AdvertisementFrame& /*f*/,
                        std::int64_t /*now*/) {}
};

struct WorldConfig {
  std::uint64_t seed = 0;
  std::int64_t start = 0;
  std::int64_t duration_s = 3600;
  double ble_range_m = 50.0;
  bool keep_trace_lines = false;
  device::CloudConfig cloud;
};

struct Counters {
  std::uint64_t events = 0;
  std::uint64_t emitted = 0;
  std::uint64_t delivered = 0;
  std::uint64_t suppressed = 0;
  std::uint64_t uploads = 0;
  std::uint64_t direct_uploads = 0;
  std::uint64_t accepted = 0;
  std::uint64_t rejected_signature = 0;
  std::uint64_t rejected_ip = 0;
  std::uint64_t dropped_undecodable = 0;
  std::uint64_t dropped_invalid_point = 0;
  std::uint64_t dropped_duplicate = 0;
  std::uint64_t polls = 0;
  std::uint64_t fixes = 0;
  std::uint64_t cost_airtag = 0;
  std::uint64_t cost_smarttag = 0;
};

/// Per-emitter outcome tallies, keyed by emitter id.
struct EmitterStats {
  std::uint64_t emitted = 0;
  std::uint64_t delivered = 0;
  std::uint64_t uploaded = 0;
  std::uint64_t accepted = 0;
  std::uint64_t rejected = 0;
};

struct PollRecord {
  std::int64_t time = 0;
  std::string owner;
  std::string tracker;
  std::size_t fixes = 0;
  std::optional<GeoFix> estimate;
  GeoFix truth;
};

class World {
 public:
  /// Sees every ingest with the id of the emitter (or uploader) it came from.
  using IngestHook = std::function<void(const std::string& source, const device::ReportUpload&,
                                        const device::IngestOutcome&)>;

  explicit World(WorldConfig cfg);

  World(const World&) = delete;
  World& operator=(const World&) = delete;

  // Setup. Ids share one namespace; duplicates throw.
  device::Tracker& add_tracker(device::Tracker t);
  device::HelperDevice& add_helper(device::HelperDevice h);
  device::OwnerDevice& add_owner(device::OwnerDevice o);
  void add_zone(JamZone z);
  Actor& add_actor(std::unique_ptr<Actor> a);
  /// Runs `fn` at time `at`, before anything else that second. Directives at
  /// the same time run in scheduling order.
  void schedule(std::int64_t at, std::function<void(World&)> fn);
  void add_ingest_hook(IngestHook hook) { ingest_hooks_.push_back(std::move(hook)); }

  // Called from inside a step.
  void broadcast(const codec::AdvertisementFrame& f);
  device::IngestOutcome direct_upload(const std::string& actor, const std::string& source,
                                      const device::ReportUpload& u);
  void move_device(const std::string& id, const GeoFix& p);
  void record(std::string_view kind, std::string_view actor,
              const std::vector<TraceField>& details = {});

  /// Advances to the next event time and processes it. False once the clock
  /// would pass the end of the scenario.
  bool step();
  void run();

  std::int64_t now() const { return now_; }
  std::int64_t start() const { return cfg_.start; }
  std::int64_t end() const { return cfg_.start + cfg_.duration_s; }
  const WorldConfig& config() const { return cfg_; }

  device::CloudServer& cloud() { return cloud_; }
  const device::CloudServer& cloud() const { return cloud_; }
  device::RecipientCache& recipient_cache() { return recipients_; }
  Rng& rng() { return rng_; }
  Trace& trace() { return trace_; }
  const Trace& trace() const { return trace_; }
  const Counters& counters() const { return counters_; }
  const std::map<std::string, EmitterStats>& emitter_stats() const { return emitter_stats_; }
  const std::vector<PollRecord>& polls() const { return polls_; }
  /// First time the tracker entered lost mode, if it ever did.
  std::optional<std::int64_t> first_lost(std::string_view tracker_id) const;

  std::vector<device::Tracker>& trackers() { return trackers_; }
  const std::vector<device::Tracker>& trackers() const { return trackers_; }
  std::vector<device::HelperDevice>& helpers() { return helpers_; }
  const std::vector<device::HelperDevice>& helpers() const { return helpers_; }
  std::vector<device::OwnerDevice>& owners() { return owners_; }
  const std::vector<device::OwnerDevice>& owners() const { return owners_; }
  const std::vector<JamZone>& zones() const { return zones_; }

  device::Tracker* find_tracker(std::string_view id);
  device::HelperDevice* find_helper(std::string_view id);
  device::OwnerDevice* find_owner(std::string_view id);
  Actor* find_actor(std::string_view id);

 private:
  struct Sighting {
    codec::AdvertisementFrame frame;
  };

  void claim_id(const std::string& id);
  std::int64_t next_event_time() const;
  void process(std::int64_t now);
  void check_owner_contact(std::int64_t now);
  void scan_helpers(std::int64_t now);
  void poll_owners(std::int64_t now);
  device::IngestOutcome ingest(const device::ReportUpload& u, std::string_view uploader,
                               const std::string& source, std::string_view via,
                               std::int64_t now);

  WorldConfig cfg_;
  std::int64_t now_;
  bool started_ = false;
  device::CloudServer cloud_;
  device::RecipientCache recipients_;
  Rng rng_;
  Trace trace_;
  Counters counters_;
  std::map<std::string, EmitterStats> emitter_stats_;
  std::vector<PollRecord> polls_;
  std::map<std::string, std::int64_t, std::less<>> first_lost_;

  std::vector<device::Tracker> trackers_;
  std::vector<bool> in_contact_;
  std::vector<device::HelperDevice> helpers_;
  std::vector<std::map<codec::Address, Sighting>> scan_buffers_;
  std::vector<device::OwnerDevice> owners_;
  std::vector<std::int64_t> last_poll_;
  std::vector<JamZone> zones_;
  std::vector<std::unique_ptr<Actor>> actors_;
  std::map<std::pair<std::int64_t, std::uint64_t>, std::function<void(World&)>> directives_;
  std::uint64_t directive_order_ = 0;
  std::vector<IngestHook> ingest_hooks_;
  std::map<std::string, int, std::less<>> ids_;
};

}  // namespace blefind::sim
