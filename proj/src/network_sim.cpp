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

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace blefind::sim {

namespace {

std::string fmt_m(double meters) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", meters);
  return buf;
}

std::string hex_byte(std::uint8_t b) {
  char buf[4];
  std::snprintf(buf, sizeof buf, "%02x", b);
  return buf;
}

std::int64_t next_multiple(std::int64_t t, std::int64_t origin, std::int64_t step) {
  const std::int64_t off = t - origin;
  if (off <= 0) return origin;
  return origin + ((off + step - 1) / step) * step;
}

}  // namespace

Delivery apply_jamming(const std::vector<JamZone>& zones, const GeoFix& emitter,
                       const GeoFix& receiver, std::int64_t now) {
  for (const auto& z : zones) {
    if (z.active_at(now) && (z.contains(emitter) || z.contains(receiver))) {
      return Delivery::kSuppressed;
    }
  }
  return Delivery::kDelivered;
}

Trace::Trace(bool keep_lines)
    : keep_lines_(keep_lines), hash_(std::make_unique<crypto::Sha256Stream>()) {}

void Trace::record(std::int64_t time, std::string_view kind, std::string_view actor,
                   const std::vector<TraceField>& details) {
  if (time < last_time_) throw std::logic_error("trace record out of time order");
  last_time_ = time;
  scratch_.clear();
  scratch_ += std::to_string(time);
  scratch_ += '\t';
  scratch_ += kind;
  scratch_ += '\t';
  scratch_ += actor;
  scratch_ += '\t';
  for (std::size_t i = 0; i < details.size(); ++i) {
    if (i != 0) scratch_ += ' ';
    scratch_ += details[i].key;
    scratch_ += '=';
    scratch_ += details[i].value;
  }
  scratch_ += '\n';
  hash_->update(std::string_view(scratch_));
  ++size_;
  auto it = counts_.find(kind);
  if (it == counts_.end()) it = counts_.emplace(std::string(kind), 0).first;
  ++it->second;
  if (keep_lines_) lines_.emplace_back(scratch_.data(), scratch_.size() - 1);
}

std::string Trace::digest_hex() const { return to_hex(hash_->peek()); }

std::uint64_t Trace::count(std::string_view kind) const {
  const auto it = counts_.find(kind);
  return it == counts_.end() ? 0 : it->second;
}

World::World(WorldConfig cfg)
    : cfg_(cfg),
      now_(cfg.start),
      cloud_(cfg.cloud),
      rng_(cfg.seed, "world/upload-order"),
      trace_(cfg.keep_trace_lines) {
  if (cfg_.duration_s < 0) throw std::invalid_argument("negative duration");
  if (!(cfg_.ble_range_m > 0)) throw std::invalid_argument("ble range must be positive");
}

void World::claim_id(const std::string& id) {
  if (id.empty()) throw std::invalid_argument("empty device id");
  if (!ids_.emplace(id, 0).second) throw std::invalid_argument("duplicate device id: " + id);
}

device::Tracker& World::add_tracker(device::Tracker t) {
  claim_id(t.id);
  trackers_.push_back(std::move(t));
  in_contact_.push_back(false);
  return trackers_.back();
}

device::HelperDevice& World::add_helper(device::HelperDevice h) {
  claim_id(h.id);
  if (h.scan_interval_s <= 0) throw std::invalid_argument("scan interval must be positive");
  helpers_.push_back(std::move(h));
  scan_buffers_.emplace_back();
  return helpers_.back();
}

device::OwnerDevice& World::add_owner(device::OwnerDevice o) {
  claim_id(o.id);
  if (o.poll_interval_s <= 0) throw std::invalid_argument("poll interval must be positive");
  owners_.push_back(std::move(o));
  last_poll_.push_back(cfg_.start);
  return owners_.back();
}

void World::add_zone(JamZone z) {
  if (!(z.radius_m > 0)) throw std::invalid_argument("jam zone radius must be positive");
  if (z.t_start >= z.t_end) throw std::invalid_argument("jam zone needs t_start < t_end");
  zones_.push_back(std::move(z));
}

Actor& World::add_actor(std::unique_ptr<Actor> a) {
  claim_id(a->id());
  actors_.push_back(std::move(a));
  return *actors_.back();
}

void World::schedule(std::int64_t at, std::function<void(World&)> fn) {
  directives_.emplace(std::make_pair(at, directive_order_++), std::move(fn));
}

void World::record(std::string_view kind, std::string_view actor,
                   const std::vector<TraceField>& details) {
  trace_.record(now_, kind, actor, details);
}

void World::broadcast(const codec::AdvertisementFrame& f) {
  ++counters_.emitted;
  EmitterStats& stats = emitter_stats_[f.emitter_id];
  ++stats.emitted;
  record("emit", f.emitter_id,
         {{"addr", to_hex(f.adv_address)},
          {"b31", hex_byte(f.payload[31])},
          {"pos", format_fix(f.emit_position)}});
  const double range = cfg_.ble_range_m;
  for (std::size_t i = 0; i < helpers_.size(); ++i) {
    const auto& h = helpers_[i];
    const double d = distance(f.emit_position, h.position);
    if (d > range) continue;
    if (apply_jamming(zones_, f.emit_position, h.position, now_) == Delivery::kSuppressed) {
      ++counters_.suppressed;
      record("suppress", h.id, {{"from", f.emitter_id}, {"reason", "jam"}});
      continue;
    }
    ++counters_.delivered;
    ++stats.delivered;
    record("deliver", h.id, {{"from", f.emitter_id}, {"dist", fmt_m(d)}});
    scan_buffers_[i][f.adv_address] = Sighting{f};
  }
  for (std::size_t i = 0; i < actors_.size(); ++i) {
    Actor& a = *actors_[i];
    if (!a.listening() || a.id() == f.emitter_id) continue;
    const GeoFix pos = a.position();
    const double d = distance(f.emit_position, pos);
    if (d > range) continue;
    if (apply_jamming(zones_, f.emit_position, pos, now_) == Delivery::kSuppressed) {
      ++counters_.suppressed;
      record("suppress", a.id(), {{"from", f.emitter_id}, {"reason", "jam"}});
      continue;
    }
    ++counters_.delivered;
    record("deliver", a.id(), {{"from", f.emitter_id}, {"dist", fmt_m(d)}});
    a.on_frame(*this, f, now_);
  }
}

device::IngestOutcome World::ingest(const device::ReportUpload& u, std::string_view uploader,
                                    const std::string& source, std::string_view via,
                                    std::int64_t now) {
  ++counters_.uploads;
  EmitterStats& stats = emitter_stats_[source];
  ++stats.uploaded;
  record("upload", uploader,
         {{"arch", device::to_string(u.kind())},
          {"src", source},
          {"helper", u.helper_id},
          {"via", std::string(via)}});
  const device::IngestOutcome out = cloud_.ingest(u, now);
  (u.kind() == device::Architecture::kAirTag ? counters_.cost_airtag : counters_.cost_smarttag) +=
      out.cost;
  for (const auto& hook : ingest_hooks_) hook(source, u, out);
  std::vector<TraceField> details{{"arch", device::to_string(u.kind())},
                                  {"helper", u.helper_id},
                                  {"src", source},
                                  {"cost", std::to_string(out.cost)}};
  if (!out.matched_tag.empty()) details.push_back({"tag", out.matched_tag});
  if (out.result == device::IngestResult::kAccepted) {
    ++counters_.accepted;
    ++stats.accepted;
    record("accept", "cloud", details);
  } else {
    if (out.result == device::IngestResult::kSignatureMismatch) {
      ++counters_.rejected_signature;
    } else {
      ++counters_.rejected_ip;
    }
    ++stats.rejected;
    details.push_back({"cause", device::to_string(out.result)});
    record("reject", "cloud", details);
  }
  return out;
}

device::IngestOutcome World::direct_upload(const std::string& actor, const std::string& source,
                                           const device::ReportUpload& u) {
  ++counters_.direct_uploads;
  return ingest(u, actor, source, "direct", now_);
}

void World::move_device(const std::string& id, const GeoFix& p) {
  if (auto* t = find_tracker(id)) {
    t->position = p;
  } else if (auto* h = find_helper(id)) {
    if (h->reported_position == h->position) h->reported_position = p;
    h->position = p;
    h->ip_position = quantize_to_grid(p, 10000.0);
  } else if (auto* o = find_owner(id)) {
    o->position = p;
  } else if (auto* a = find_actor(id)) {
    a->move_to(p);
  } else {
    throw std::invalid_argument("move of unknown device: " + id);
  }
  record("move", id, {{"pos", format_fix(p)}});
}

std::optional<std::int64_t> World::first_lost(std::string_view tracker_id) const {
  const auto it = first_lost_.find(tracker_id);
  if (it == first_lost_.end()) return std::nullopt;
  return it->second;
}

device::Tracker* World::find_tracker(std::string_view id) {
  for (auto& t : trackers_) {
    if (t.id == id) return &t;
  }
  return nullptr;
}

device::HelperDevice* World::find_helper(std::string_view id) {
  for (auto& h : helpers_) {
    if (h.id == id) return &h;
  }
  return nullptr;
}

device::OwnerDevice* World::find_owner(std::string_view id) {
  for (auto& o : owners_) {
    if (o.id == id) return &o;
  }
  return nullptr;
}

Actor* World::find_actor(std::string_view id) {
  for (auto& a : actors_) {
    if (a->id() == id) return a.get();
  }
  return nullptr;
}

std::int64_t World::next_event_time() const {
  const std::int64_t after = now_ + 1;
  std::int64_t t = kNever;
  if (!directives_.empty()) t = std::max(after, directives_.begin()->first.first);
  for (const auto& z : zones_) {
    if (z.t_start >= after) t = std::min(t, z.t_start);
    if (z.t_end + 1 >= after) t = std::min(t, z.t_end + 1);
  }
  for (const auto& tr : trackers_) t = std::min(t, device::tracker_next_wake(tr, after));
  for (const auto& a : actors_) t = std::min(t, a->next_wake(after));
  for (std::size_t i = 0; i < helpers_.size(); ++i) {
    if (scan_buffers_[i].empty()) continue;
    t = std::min(t, next_multiple(after, cfg_.start, helpers_[i].scan_interval_s));
  }
  for (std::size_t j = 0; j < owners_.size(); ++j) {
    t = std::min(t, std::max(after, last_poll_[j] + owners_[j].poll_interval_s));
  }
  return t;
}

bool World::step() {
  const std::int64_t t = started_ ? next_event_time() : cfg_.start;
  started_ = true;
  if (t == kNever || t > end()) {
    now_ = std::max(now_, end());
    return false;
  }
  now_ = t;
  process(t);
  return true;
}

void World::run() {
  while (step()) {
  }
}

void World::process(std::int64_t now) {
  ++counters_.events;
  while (!directives_.empty() && directives_.begin()->first.first <= now) {
    auto fn = std::move(directives_.begin()->second);
    directives_.erase(directives_.begin());
    fn(*this);
  }
  check_owner_contact(now);
  for (auto& t : trackers_) {
    const device::TrackerMode before = t.mode;
    const auto frame = device::tracker_step(t, now);
    if (t.mode != before) {
      if (t.mode == device::TrackerMode::kLost) first_lost_.emplace(t.id, now);
      record("mode", t.id,
             {{"mode", device::to_string(t.mode)},
              {"gap", std::to_string(now - t.last_owner_contact)}});
    }
    if (frame) broadcast(*frame);
  }
  for (std::size_t i = 0; i < actors_.size(); ++i) {
    if (actors_[i]->next_wake(now) <= now) actors_[i]->step(*this, now);
  }
  scan_helpers(now);
  poll_owners(now);
}

void World::check_owner_contact(std::int64_t now) {
  for (std::size_t i = 0; i < trackers_.size(); ++i) {
    auto& t = trackers_[i];
    bool contact = false;
    for (const auto& o : owners_) {
      const bool owns = std::any_of(o.owned.begin(), o.owned.end(),
                                    [&](const auto& ot) { return ot.tracker_id == t.id; });
      if (!owns || distance(t.position, o.position) > cfg_.ble_range_m) continue;
      if (apply_jamming(zones_, t.position, o.position, now) == Delivery::kDelivered) {
        contact = true;
        break;
      }
    }
    // Contact state only changes at event times, so an unbroken spell of
    // contact lasted until the second before this one.
    if (in_contact_[i] && !contact) t.last_owner_contact = std::max(t.last_owner_contact, now - 1);
    if (contact) t.last_owner_contact = now;
    in_contact_[i] = contact;
  }
}

void World::scan_helpers(std::int64_t now) {
  struct Pending {
    device::ReportUpload upload;
    std::string source;
  };
  std::vector<Pending> batch;
  for (std::size_t i = 0; i < helpers_.size(); ++i) {
    auto& buffer = scan_buffers_[i];
    auto& h = helpers_[i];
    if (buffer.empty() || (now - cfg_.start) % h.scan_interval_s != 0) continue;
    for (const auto& [addr, s] : buffer) {
      auto r = device::helper_observe(h, s.frame, now, recipients_);
      if (!r) {
        switch (r.error()) {
          case device::ObserveDrop::kUndecodable:
            ++counters_.dropped_undecodable;
            break;
          case device::ObserveDrop::kInvalidPoint:
            ++counters_.dropped_invalid_point;
            break;
          case device::ObserveDrop::kDuplicate:
            ++counters_.dropped_duplicate;
            break;
        }
        record("drop", h.id, {{"src", s.frame.emitter_id}, {"reason", device::to_string(r.error())}});
        continue;
      }
      batch.push_back({std::move(*r), s.frame.emitter_id});
    }
    buffer.clear();
  }
  // Arrival order at the server is not a function of helper order.
  rng_.shuffle(batch.begin(), batch.end());
  for (const auto& p : batch) ingest(p.upload, p.upload.helper_id, p.source, "scan", now);
}

void World::poll_owners(std::int64_t now) {
  for (std::size_t j = 0; j < owners_.size(); ++j) {
    auto& o = owners_[j];
    if (now - last_poll_[j] < o.poll_interval_s) continue;
    const std::int64_t since = last_poll_[j];
    last_poll_[j] = now;
    for (auto& ot : o.owned) {
      const std::uint64_t attempts = o.decrypt_attempts;
      const std::uint64_t failures = o.decrypt_failures;
      const auto fixes = device::owner_query(o, ot, cloud_, since, now);
      for (const auto& f : fixes) {
        record("fix", o.id,
               {{"tracker", ot.tracker_id},
                {"pos", format_fix(f.fix)},
                {"observed", std::to_string(f.observed_at)},
                {"server", std::to_string(f.server_time)}});
      }
      counters_.fixes += fixes.size();
      ++counters_.polls;
      PollRecord rec;
      rec.time = now;
      rec.owner = o.id;
      rec.tracker = ot.tracker_id;
      rec.fixes = fixes.size();
      if (!ot.estimates.empty()) rec.estimate = ot.estimates.back().fix;
      if (const auto* t = find_tracker(ot.tracker_id)) rec.truth = t->position;
      std::vector<TraceField> details{{"tracker", ot.tracker_id},
                                      {"fixes", std::to_string(fixes.size())},
                                      {"attempts", std::to_string(o.decrypt_attempts - attempts)},
                                      {"failures", std::to_string(o.decrypt_failures - failures)},
                                      {"truth", format_fix(rec.truth)}};
      if (rec.estimate) {
        details.push_back({"est", format_fix(*rec.estimate)});
        details.push_back({"err", fmt_m(distance(*rec.estimate, rec.truth))});
      } else {
        details.push_back({"est", "none"});
      }
      record("poll", o.id, details);
      polls_.push_back(std::move(rec));
    }
  }
}

}  // namespace blefind::sim
