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


#include "blefind/device_model.hpp"

#include <algorithm>
#include <stdexcept>

#include "json.hpp"

namespace blefind::device {

namespace {

constexpr std::uint8_t kSmartTagStateLost = 0x01;
constexpr std::uint8_t kSmartTagRegion = 0x01;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

codec::AdvertisementFrame airtag_frame(Tracker& t, std::int64_t now) {
  const std::uint64_t epoch = epoch_of(now, t.config);
  if (!t.keys || t.keys->epoch != epoch) {
    if (t.keys && t.keys->epoch < epoch && epoch - t.keys->epoch < 8) {
      while (t.keys->epoch < epoch) t.keys = crypto::advance_epoch(*t.keys, *t.master);
    } else {
      t.keys = crypto::keys_at(*t.master, epoch);
    }
  }
  t.current_epoch = epoch;
  const std::int64_t window = floor_div(now - t.config.epoch_origin, kCounterWindowSeconds);
  if (window != t.counter_window) {
    t.current_counter = t.counter_rng.byte();
    t.counter_window = window;
  }
  const crypto::FieldBytes x = crypto::p224().x_bytes(t.keys->public_key);
  const codec::PackedKey packed = codec::pack_airtag_key(x);
  const codec::AirTagAdv adv{codec::kAirTagStatusLost, packed.key_payload, packed.key_top_bits,
                             t.current_counter, packed.adv_address};
  const codec::EncodedFrame enc = codec::encode_airtag(adv);
  return {enc.address, enc.payload, now, t.position, t.id};
}

codec::AdvertisementFrame smarttag_frame(Tracker& t, std::int64_t now) {
  const std::uint32_t counter = codec::aging_counter(now);
  if (!t.smarttag_frame || counter != t.smarttag_counter) {
    codec::SmartTagAdv s;
    s.tag_state = kSmartTagStateLost;
    s.aging_counter = counter;
    s.privacy_id = crypto::derive_privacy_id(t.secrets->id_secret, counter);
    s.region_flags = codec::make_region_flags(kSmartTagRegion, true, false);
    const codec::Payload unsigned_payload = codec::encode_smarttag(s);
    s.signature = crypto::smarttag_sign(codec::smarttag_signed_prefix(unsigned_payload),
                                        t.secrets->device_key);
    codec::EncodedFrame f;
    f.payload = codec::encode_smarttag(s);
    // The random-static address rotates together with the privacy ID.
    f.address = {static_cast<std::uint8_t>(0xC0 | (s.privacy_id[0] & 0x3F)), s.privacy_id[1],
                 s.privacy_id[2], s.privacy_id[3], s.privacy_id[4], s.privacy_id[5]};
    t.smarttag_frame = f;
    t.smarttag_counter = counter;
  }
  return {t.smarttag_frame->address, t.smarttag_frame->payload, now, t.position, t.id};
}

}  // namespace

const char* to_string(Architecture a) {
  return a == Architecture::kAirTag ? "airtag-path" : "smarttag-path";
}

const char* to_string(TrackerMode m) { return m == TrackerMode::kPaired ? "paired" : "lost"; }

const char* to_string(ObserveDrop d) {
  switch (d) {
    case ObserveDrop::kUndecodable:
      return "undecodable";
    case ObserveDrop::kInvalidPoint:
      return "invalid-point";
    case ObserveDrop::kDuplicate:
      return "duplicate";
  }
  return "unknown";
}

const char* to_string(IngestResult r) {
  switch (r) {
    case IngestResult::kAccepted:
      return "accepted";
    case IngestResult::kSignatureMismatch:
      return "signature-mismatch";
    case IngestResult::kIpInconsistency:
      return "ip-inconsistency";
  }
  return "unknown";
}

std::uint64_t epoch_of(std::int64_t now, const TrackerConfig& cfg) {
  if (now <= cfg.epoch_origin) return 0;
  return static_cast<std::uint64_t>((now - cfg.epoch_origin) / kEpochSeconds);
}

Tracker::Tracker(std::uint64_t seed, const std::string& id)
    : counter_rng(seed, "counter/" + id) {}

Tracker Tracker::airtag(std::string id, const GeoFix& pos, crypto::MasterKeySet master,
                        std::int64_t now, const TrackerConfig& cfg, std::uint64_t seed) {
  Tracker t(seed, id);
  t.id = std::move(id);
  t.kind = Architecture::kAirTag;
  t.position = pos;
  t.master = std::move(master);
  t.last_owner_contact = now;
  t.config = cfg;
  return t;
}

Tracker Tracker::smarttag(std::string id, const GeoFix& pos,
                          const crypto::SmartTagSecrets& secrets, std::int64_t now,
                          const TrackerConfig& cfg) {
  Tracker t(0, id);
  t.id = std::move(id);
  t.kind = Architecture::kSmartTag;
  t.position = pos;
  t.secrets = secrets;
  t.last_owner_contact = now;
  t.config = cfg;
  return t;
}

std::optional<codec::AdvertisementFrame> tracker_step(Tracker& t, std::int64_t now) {
  const std::int64_t gap = now - t.last_owner_contact;
  if (gap >= t.config.lost_threshold_s) {
    if (t.mode == TrackerMode::kPaired) {
      t.mode = TrackerMode::kLost;
      t.lost_since = now;
      t.next_emit = now;
    }
  } else if (t.mode == TrackerMode::kLost) {
    t.mode = TrackerMode::kPaired;
    t.lost_since = -1;
  }
  if (t.mode == TrackerMode::kPaired || now < t.next_emit) return std::nullopt;
  t.next_emit = now + t.config.advertising_interval_s;
  return t.kind == Architecture::kAirTag ? airtag_frame(t, now) : smarttag_frame(t, now);
}

std::int64_t tracker_next_wake(const Tracker& t, std::int64_t now) {
  if (t.mode == TrackerMode::kPaired) {
    return std::max(now, t.last_owner_contact + t.config.lost_threshold_s);
  }
  return std::max(now, t.next_emit);
}

const crypto::RecipientKey* RecipientCache::lookup(const crypto::FieldBytes& x) {
  auto it = entries_.find(x);
  if (it == entries_.end()) {
    it = entries_.emplace(x, Entry{crypto::RecipientKey::from_x(x), 0}).first;
  }
  Entry& e = it->second;
  if (!e.key) return nullptr;
  if (++e.uses == precompute_after_) e.key->precompute();
  return &*e.key;
}

HelperDevice::HelperDevice(std::uint64_t seed, const std::string& id)
    : rng(seed, "ephemeral/" + id) {}

HelperDevice HelperDevice::make(std::string id, const GeoFix& pos, std::uint64_t seed,
                                double ip_grid_m) {
  HelperDevice h(seed, id);
  Rng token_rng(seed, "token/" + id);
  h.auth_token = to_hex(token_rng.bytes<16>());
  h.id = std::move(id);
  h.position = pos;
  h.reported_position = pos;
  h.ip_position = quantize_to_grid(pos, ip_grid_m);
  return h;
}

Expected<ReportUpload, ObserveDrop> helper_observe(HelperDevice& h,
                                                   const codec::AdvertisementFrame& f,
                                                   std::int64_t now, RecipientCache& keys) {
  if (h.dedupe) {
    const auto it = h.last_uploaded.find(f.adv_address);
    if (it != h.last_uploaded.end() && it->second == f.payload) {
      return unexpected(ObserveDrop::kDuplicate);
    }
  }
  if (const auto at = codec::decode_airtag(f.payload, f.adv_address)) {
    const crypto::RecipientKey* rk = keys.lookup(codec::unpack_airtag_key(*at));
    if (rk == nullptr) return unexpected(ObserveDrop::kInvalidPoint);
    const crypto::U256 e = crypto::scalar_from_bytes(h.rng.bytes<32>());
    AirTagUpload body{crypto::encrypt_location({h.reported_position, now}, *rk, e, now)};
    if (h.dedupe) h.last_uploaded[f.adv_address] = f.payload;
    return ReportUpload{h.id, std::move(body)};
  }
  if (const auto st = codec::decode_smarttag(f.payload)) {
    SmartTagUpload body{f.payload, *st, h.reported_position, h.ip_position, h.auth_token, now};
    if (h.dedupe) h.last_uploaded[f.adv_address] = f.payload;
    return ReportUpload{h.id, std::move(body)};
  }
  return unexpected(ObserveDrop::kUndecodable);
}

void CloudServer::register_smarttag(const std::string& tag_id,
                                    const crypto::SmartTagSecrets& secrets) {
  for (const auto& k : smarttag_keys_) {
    if (k.tag_id == tag_id) throw std::invalid_argument("tag already registered: " + tag_id);
  }
  smarttag_keys_.push_back({tag_id, secrets, 0, std::nullopt});
}

IngestOutcome CloudServer::ingest(const ReportUpload& u, std::int64_t now) {
  if (const auto* at = std::get_if<AirTagUpload>(&u.body)) {
    crypto::EncryptedLocationReport stored = at->report;
    stored.server_time = now;
    airtag_store_[stored.key_index].push_back(std::move(stored));
    return {IngestResult::kAccepted, 0, {}};
  }
  const auto& st = std::get<SmartTagUpload>(u.body);
  const std::uint32_t counter = codec::aging_counter(now);
  std::uint64_t cost = 0;
  for (auto& tag : smarttag_keys_) {
    ++cost;
    if (!tag.cached_id || tag.cached_counter != counter) {
      tag.cached_id = crypto::derive_privacy_id(tag.secrets.id_secret, counter);
      tag.cached_counter = counter;
    }
    if (*tag.cached_id != st.adv.privacy_id) continue;
    verify_cost_units_ += cost;
    const auto expected_sig = crypto::smarttag_sign(codec::smarttag_signed_prefix(st.payload),
                                                    tag.secrets.device_key);
    if (st.adv.aging_counter != counter || expected_sig != st.adv.signature) {
      return {IngestResult::kSignatureMismatch, cost, tag.tag_id};
    }
    if (distance_m(st.reported_position, st.ip_position) >
        cfg_.ip_consistency_threshold_km * 1000.0) {
      return {IngestResult::kIpInconsistency, cost, tag.tag_id};
    }
    smarttag_store_[tag.tag_id].push_back({st.reported_position, counter, st.helper_token, now});
    return {IngestResult::kAccepted, cost, tag.tag_id};
  }
  verify_cost_units_ += cost;
  return {IngestResult::kSignatureMismatch, cost, {}};
}

std::vector<const crypto::EncryptedLocationReport*> CloudServer::fetch_airtag(
    const crypto::KeyIndex& index, std::int64_t t0, std::int64_t t1) const {
  std::vector<const crypto::EncryptedLocationReport*> out;
  const auto it = airtag_store_.find(index);
  if (it == airtag_store_.end()) return out;
  for (const auto& r : it->second) {
    if (r.server_time > t0 && r.server_time <= t1) out.push_back(&r);
  }
  return out;
}

std::vector<StoredSmartTagReport> CloudServer::fetch_smarttag(const std::string& tag_id,
                                                              std::int64_t t0,
                                                              std::int64_t t1) const {
  std::vector<StoredSmartTagReport> out;
  const auto it = smarttag_store_.find(tag_id);
  if (it == smarttag_store_.end()) return out;
  for (const auto& r : it->second) {
    if (r.time > t0 && r.time <= t1) out.push_back(r);
  }
  return out;
}

bool CloudServer::has_airtag_index(const crypto::KeyIndex& index) const {
  return airtag_store_.count(index) != 0;
}

std::size_t CloudServer::airtag_report_count() const {
  std::size_t n = 0;
  for (const auto& [k, v] : airtag_store_) n += v.size();
  return n;
}

std::size_t CloudServer::smarttag_report_count() const {
  std::size_t n = 0;
  for (const auto& [k, v] : smarttag_store_) n += v.size();
  return n;
}

std::string CloudServer::serialize() const {
  using nlohmann::ordered_json;
  ordered_json j;
  ordered_json airtag = ordered_json::array();
  for (const auto& [index, reports] : airtag_store_) {
    ordered_json rs = ordered_json::array();
    for (const auto& r : reports) {
      rs.push_back({{"ephemeral_share", to_hex(r.ephemeral_share)},
                    {"ciphertext", to_hex(r.ciphertext)},
                    {"auth_tag", to_hex(r.auth_tag)},
                    {"server_time", r.server_time}});
    }
    airtag.push_back({{"key_index", to_hex(index)}, {"reports", std::move(rs)}});
  }
  ordered_json smarttag = ordered_json::array();
  for (const auto& [tag, reports] : smarttag_store_) {
    ordered_json rs = ordered_json::array();
    for (const auto& r : reports) {
      rs.push_back({{"lat", format_coord(r.fix.lat)},
                    {"lon", format_coord(r.fix.lon)},
                    {"aging_counter", r.aging_counter},
                    {"helper_token", r.helper_token},
                    {"time", r.time}});
    }
    smarttag.push_back({{"tag", tag}, {"reports", std::move(rs)}});
  }
  ordered_json keys = ordered_json::array();
  for (const auto& k : smarttag_keys_) {
    keys.push_back({{"tag", k.tag_id},
                    {"device_key", to_hex(k.secrets.device_key)},
                    {"id_secret", to_hex(k.secrets.id_secret)}});
  }
  j["airtag_store"] = std::move(airtag);
  j["smarttag_store"] = std::move(smarttag);
  j["smarttag_keys"] = std::move(keys);
  j["verify_cost_units"] = verify_cost_units_;
  return j.dump();
}

OwnedTracker* OwnerDevice::find(const std::string& tracker_id) {
  for (auto& o : owned) {
    if (o.tracker_id == tracker_id) return &o;
  }
  return nullptr;
}

std::vector<LocatedFix> owner_query(OwnerDevice& o, OwnedTracker& tracker,
                                    const CloudServer& c, std::int64_t t0, std::int64_t t1) {
  std::vector<LocatedFix> out;
  if (t1 <= t0) return out;
  if (tracker.kind == Architecture::kSmartTag) {
    for (const auto& r : c.fetch_smarttag(tracker.tracker_id, t0, t1)) {
      out.push_back({r.fix, r.time, r.time});
    }
  } else {
    const std::uint64_t first = epoch_of(t0 + 1, tracker.config);
    const std::uint64_t last = epoch_of(t1, tracker.config);
    for (std::uint64_t e = first; e <= last; ++e) {
      auto it = tracker.epoch_cache.find(e);
      if (it == tracker.epoch_cache.end()) {
        const auto prev = tracker.epoch_cache.find(e - 1);
        const crypto::EpochKeys keys =
            (e > 0 && prev != tracker.epoch_cache.end())
                ? crypto::advance_epoch(prev->second.first, *tracker.master)
                : crypto::keys_at(*tracker.master, e);
        it = tracker.epoch_cache.emplace(e, std::make_pair(keys, crypto::key_index(keys.public_key)))
                 .first;
      }
      const auto& [keys, index] = it->second;
      for (const auto* rep : c.fetch_airtag(index, t0, t1)) {
        ++o.decrypt_attempts;
        const auto plain = crypto::decrypt_location(*rep, keys.d);
        if (!plain) {
          ++o.decrypt_failures;
          continue;
        }
        out.push_back({plain->fix, plain->observed_at, rep->server_time});
      }
    }
    std::stable_sort(out.begin(), out.end(), [](const LocatedFix& a, const LocatedFix& b) {
      return a.server_time < b.server_time;
    });
  }
  tracker.estimates.insert(tracker.estimates.end(), out.begin(), out.end());
  return out;
}

}  // namespace blefind::device
