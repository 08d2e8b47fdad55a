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


#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "blefind/cli_report.hpp"

namespace blefind::report {

namespace {

using attack::Attacker;
using attack::AttackRecord;

// Fixes as they appear in the trace, so metrics and the audit agree exactly.
GeoFix rounded(const GeoFix& f) {
  return {std::stod(format_coord(f.lat)), std::stod(format_coord(f.lon))};
}

Bytes secret_bytes(const std::string& text) { return Bytes(text.begin(), text.end()); }

std::string join(const std::vector<std::string>& ids) {
  std::string out;
  for (const auto& id : ids) {
    if (!out.empty()) out += ',';
    out += id;
  }
  return out;
}

struct Runner {
  const Scenario& s;
  std::uint64_t seed;
  sim::World world;
  attack::AttackLog log;
  device::TrackerConfig tracker_cfg;
  // Per record: the tracker whose beacon an attack replays, if any.
  std::map<std::size_t, std::string> replayed;
  // Per sendmy record: bits sent and the secret, for decoding at the end.
  std::map<std::size_t, std::pair<std::string, std::string>> channels;

  Runner(const Scenario& sc, const RunOptions& opts)
      : s(sc), seed(opts.seed.value_or(sc.seed)), world([&] {
          sim::WorldConfig c;
          c.seed = opts.seed.value_or(sc.seed);
          c.start = sc.start;
          c.duration_s = sc.duration_s;
          c.ble_range_m = sc.ble_range_m;
          c.keep_trace_lines = opts.keep_trace;
          c.cloud.ip_consistency_threshold_km = sc.ip_threshold_km;
          return c;
        }()) {
    tracker_cfg.lost_threshold_s = s.lost_threshold_s;
    tracker_cfg.advertising_interval_s = s.advertising_interval_s;
    tracker_cfg.epoch_origin = s.start;
  }

  Attacker* attacker(const std::string& id) {
    return dynamic_cast<Attacker*>(world.find_actor(id));
  }

  void build() {
    std::map<std::string, device::OwnerDevice> owners;
    for (const auto& o : s.owners) {
      owners.emplace(o.id, device::OwnerDevice{o.id, o.position, o.poll_interval_s, {}, 0, 0});
    }
    for (const auto& t : s.trackers) {
      device::OwnedTracker owned{t.id, t.kind, std::nullopt, tracker_cfg, {}, {}};
      if (t.kind == device::Architecture::kAirTag) {
        Rng r(seed, "master/" + t.id);
        const auto d = r.bytes<32>();
        const auto sk = r.bytes<32>();
        const auto master = crypto::MasterKeySet::from_seed_bytes(d, sk, t.owner.value_or(""));
        world.add_tracker(device::Tracker::airtag(t.id, t.position, master, s.start, tracker_cfg, seed));
        owned.master = master;
      } else {
        Rng r(seed, "secrets/" + t.id);
        const crypto::SmartTagSecrets secrets{r.bytes<16>(), r.bytes<16>()};
        world.add_tracker(device::Tracker::smarttag(t.id, t.position, secrets, s.start, tracker_cfg));
        world.cloud().register_smarttag(t.id, secrets);
      }
      if (t.owner) owners.at(*t.owner).owned.push_back(std::move(owned));
    }
    // Owners go in declaration order.
    for (const auto& o : s.owners) world.add_owner(std::move(owners.at(o.id)));
    for (const auto& h : s.helpers) {
      auto dev = device::HelperDevice::make(h.id, h.position, seed);
      dev.scan_interval_s = h.scan_interval_s;
      dev.dedupe = h.dedupe;
      world.add_helper(std::move(dev));
    }
    for (const auto& a : s.attackers) {
      world.add_actor(std::make_unique<Attacker>(a.id, a.capabilities, a.position, a.rate, &log));
    }
    for (const auto& z : s.zones) {
      world.add_zone({z.id, z.center, z.radius_m, s.start + z.from, s.start + z.to});
    }
    log.attach(world);
    for (const auto& a : s.attacks) schedule(a);
  }

  void announce(std::size_t rec, std::vector<sim::TraceField> extra = {}) {
    const AttackRecord& r = log.record(rec);
    std::vector<sim::TraceField> details{
        {"verb", r.verb}, {"record", std::to_string(rec)}, {"status", r.status}};
    for (auto& f : extra) details.push_back(std::move(f));
    world.record("attack", r.attacker, details);
  }

  void miss(std::size_t rec, const std::string& why) {
    AttackRecord& r = log.record(rec);
    r.status = "missed";
    r.note("reason", why);
    announce(rec, {{"reason", why}});
  }

  std::string who(const AttackSpec& a) {
    if (a.verb == "botnet") return a.get("source");
    if (a.verb == "gps_spoof") return a.get("helper");
    if (a.verb == "move") return a.get("device");
    return a.get("attacker");
  }

  void schedule(const AttackSpec& a) {
    AttackRecord r;
    r.verb = a.verb;
    r.attacker = who(a);
    r.at = a.at;
    r.until = a.at;
    const std::size_t rec = log.open(std::move(r));
    const std::int64_t t = s.start + a.at;
    world.schedule(t, [this, a, rec](sim::World& w) { fire(w, a, rec); });
  }

  void fire(sim::World& w, const AttackSpec& a, std::size_t rec) {
    AttackRecord& r = log.record(rec);
    const std::int64_t now = w.now();
    if (a.verb == "capture") {
      const std::int64_t window = std::stoll(a.get_or("window", std::to_string(s.duration_s - a.at)));
      r.until = std::min(a.at + window, s.duration_s);
      r.status = "armed";
      attacker(r.attacker)->arm_capture(a.get("target"), s.start + r.until, rec);
      announce(rec, {{"target", a.get("target")}});
    } else if (a.verb == "spoof") {
      Attacker* m = attacker(r.attacker);
      const auto cb = m->latest_capture();
      if (!cb) return miss(rec, "no-capture");
      const std::int64_t duration = std::stoll(a.get("duration"));
      const double rate = std::stod(a.get_or("rate", std::to_string(m->broadcast_rate())));
      const auto sweep = *parse_sweep_spec(a.get_or("sweep", "0-255"));
      attack::BroadcastProgram p;
      p.frames = sweep.empty()
                     ? std::vector<codec::EncodedFrame>{{cb->frame.adv_address, cb->frame.payload}}
                     : attack::spoof_broadcast(*cb, sweep);
      p.t0 = now;
      p.rate = rate;
      p.total = static_cast<std::uint64_t>(
          std::max<long long>(1, std::llround(rate * static_cast<double>(duration))));
      p.record = rec;
      r.until = std::min(a.at + duration, s.duration_s);
      r.status = "running";
      r.note("target", cb->frame.emitter_id);
      replayed[rec] = cb->frame.emitter_id;
      announce(rec, {{"sources", r.attacker}, {"target", cb->frame.emitter_id}});
      m->add_program(std::move(p));
    } else if (a.verb == "botnet") {
      const auto cb = attacker(r.attacker)->latest_capture();
      if (!cb) return miss(rec, "no-capture");
      const auto ids = resolve_ids(s, a.get("bots"));
      std::vector<Attacker*> bots;
      for (const auto& id : ids) bots.push_back(attacker(id));
      const std::int64_t duration = std::stoll(a.get("duration"));
      r.until = std::min(a.at + duration, s.duration_s);
      r.status = "running";
      r.note("target", cb->frame.emitter_id);
      r.note("bots", std::to_string(bots.size()));
      replayed[rec] = cb->frame.emitter_id;
      announce(rec, {{"sources", join(ids)}, {"target", cb->frame.emitter_id}});
      attack::botnet_campaign(w, *cb, bots, duration, rec);
    } else if (a.verb == "gps_spoof") {
      const GeoFix fake{std::stod(a.get("lat")), std::stod(a.get("lon"))};
      const bool vpn = a.get_or("vpn", "no") == "yes" || a.get_or("vpn", "no") == "true" ||
                       a.get_or("vpn", "no") == "1";
      device::HelperDevice* h = w.find_helper(r.attacker);
      attack::gps_spoof(*h, fake, vpn);
      r.until = s.duration_s;
      r.status = "applied";
      r.note("fake", format_fix(fake));
      r.note("vpn", vpn ? "yes" : "no");
      log.bind_helper(r.attacker, rec);
      announce(rec, {{"helper", r.attacker}, {"fake", format_fix(fake)}, {"vpn", vpn ? "yes" : "no"}});
    } else if (a.verb == "sendmy") {
      Attacker* m = attacker(r.attacker);
      const std::string bits = a.get("bits");
      const Bytes secret = secret_bytes(a.get("secret"));
      const double rate = std::stod(a.get_or("rate", std::to_string(m->broadcast_rate())));
      channels[rec] = {bits, a.get("secret")};
      r.note("bits", std::to_string(bits.size()));
      attack::BroadcastProgram p;
      p.frames = attack::sendmy_frames(attack::sendmy_encode(attack::parse_bits(bits), secret));
      p.t0 = now;
      p.rate = rate;
      p.total = p.frames.size();
      p.record = rec;
      r.until = p.frames.empty() ? a.at : std::min<std::int64_t>(a.at + p.due(p.total - 1) - now, s.duration_s);
      r.status = "running";
      announce(rec, {{"sources", r.attacker}, {"bits", std::to_string(bits.size())}});
      m->add_program(std::move(p));
    } else if (a.verb == "flood") {
      flood(w, a, rec);
    } else if (a.verb == "move") {
      const GeoFix to{std::stod(a.get("lat")), std::stod(a.get("lon"))};
      r.status = "applied";
      announce(rec, {{"pos", format_fix(to)}});
      w.move_device(r.attacker, to);
    }
  }

  void flood(sim::World& w, const AttackSpec& a, std::size_t rec) {
    AttackRecord& r = log.record(rec);
    Attacker* m = attacker(r.attacker);
    const std::string arch = a.get_or("arch", s.architecture);
    const auto n = static_cast<std::size_t>(std::stoll(a.get("count")));
    const double spread = std::stod(a.get_or("spread_m", "1000"));
    Rng rng(seed, "flood/" + std::to_string(rec));
    std::vector<device::ReportUpload> uploads;
    if (arch == "airtag-path") {
      const auto cb = m->latest_capture();
      if (!cb) return miss(rec, "no-capture");
      r.note("target", cb->frame.emitter_id);
      uploads = attack::flood_airtag(*cb, n, rng, m->position(), spread, w.now(),
                                     w.recipient_cache(), r.attacker);
    } else {
      uploads = attack::flood_smarttag(n, rng, m->position(), w.now(), r.attacker);
    }
    const auto& c = w.counters();
    const std::uint64_t before = c.cost_airtag + c.cost_smarttag;
    r.status = "done";
    r.note("arch", arch);
    log.bind_source(r.attacker, rec);
    announce(rec, {{"sources", r.attacker}, {"arch", arch}, {"count", std::to_string(n)}});
    for (const auto& u : uploads) w.direct_upload(r.attacker, r.attacker, u);
    r.note("server_cost", std::to_string(c.cost_airtag + c.cost_smarttag - before));
  }

  void finish(const std::vector<OwnerMetrics>& owners) {
    for (std::size_t i = 0; i < log.records().size(); ++i) {
      AttackRecord& r = log.record(i);
      if (r.status == "armed" || r.status == "scheduled") {
        r.status = r.status == "armed" ? "missed" : "pending";
      } else if (r.status == "running") {
        r.status = "done";
      }
      for (auto& [k, v] : r.notes) {
        if (k == "capture_time") v = std::to_string(std::stoll(v) - s.start);
      }
      if (const auto it = replayed.find(i); it != replayed.end()) {
        bool alternated = false;
        for (const auto& o : owners) alternated |= o.tracker == it->second && o.alternations > 0;
        r.note("estimate_alternation", alternated ? "true" : "false");
      }
      if (const auto it = channels.find(i); it != channels.end()) {
        const auto secret = secret_bytes(it->second.second);
        const auto d = attack::sendmy_decode(world.cloud(), secret, it->second.first.size());
        const std::string got = attack::format_bits(d);
        r.note("decoded", got.empty() ? "-" : got);
        r.note("erasures", std::to_string(d.erasures));
        r.note("match", got == it->second.first ? "true" : "false");
      }
    }
  }
};

}  // namespace

std::size_t count_clusters(const std::vector<GeoFix>& fixes, double radius_m) {
  std::vector<GeoFix> seeds;
  for (const auto& f : fixes) {
    const bool joined = std::any_of(seeds.begin(), seeds.end(),
                                    [&](const GeoFix& c) { return distance_m(c, f) <= radius_m; });
    if (!joined) seeds.push_back(f);
  }
  return seeds.size();
}

RunResult run_scenario(const Scenario& s, const RunOptions& opts) {
  Runner run(s, opts);
  run.build();
  run.world.run();
  const sim::World& w = run.world;

  RunResult out;
  MetricsReport& m = out.metrics;
  m.scenario = s.name;
  m.seed = run.seed;
  m.architecture = s.architecture;
  m.start = s.start;
  m.duration_s = s.duration_s;
  m.counts = w.counters();
  m.cost = attack::dos_report(w);

  for (const auto& t : w.trackers()) {
    TrackerMetrics tm{t.id, device::to_string(t.kind), device::to_string(t.mode), std::nullopt};
    if (const auto lost = w.first_lost(t.id)) tm.lost_at = *lost - s.start;
    m.trackers.push_back(tm);
  }

  for (const auto& p : w.polls()) {
    ErrorSample e;
    e.time = p.time - s.start;
    e.owner = p.owner;
    e.tracker = p.tracker;
    e.fixes = p.fixes;
    e.truth = rounded(p.truth);
    if (p.estimate) {
      e.estimate = rounded(*p.estimate);
      e.error_m = distance_m(*e.estimate, e.truth);
    }
    m.location_error.push_back(e);
  }

  for (const auto& o : w.owners()) {
    for (const auto& ot : o.owned) {
      OwnerMetrics om;
      om.owner = o.id;
      om.tracker = ot.tracker_id;
      std::vector<GeoFix> fixes;
      for (const auto& f : ot.estimates) fixes.push_back(rounded(f.fix));
      om.fix_clusters = count_clusters(fixes);
      std::optional<bool> last_near;
      std::uint64_t with_estimate = 0, near = 0;
      for (const auto& e : m.location_error) {
        if (e.owner != o.id || e.tracker != ot.tracker_id) continue;
        ++om.polls;
        om.fixes += e.fixes;
        if (!e.estimate) continue;
        ++with_estimate;
        if (*e.error_m <= 100.0) ++near;
        const bool is_near = *e.error_m <= 1000.0;
        if (last_near && *last_near != is_near) ++om.alternations;
        last_near = is_near;
        om.final_estimate = e.estimate;
        om.final_error_m = e.error_m;
      }
      om.near_fraction = with_estimate == 0 ? 0.0
                                            : static_cast<double>(near) / static_cast<double>(with_estimate);
      m.owners.push_back(om);
    }
  }

  run.finish(m.owners);
  m.attacks = run.log.records();
  m.trace_events = w.trace().size();
  m.trace_sha256 = w.trace().digest_hex();
  out.trace = w.trace().lines();
  out.cloud_dump = w.cloud().serialize();
  return out;
}

}  // namespace blefind::report
