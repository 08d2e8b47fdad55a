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


// Acceptance run: one PASS/FAIL line per criterion. Exits nonzero if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "blefind/attack_harness.hpp"
#include "blefind/beacon_codec.hpp"
#include "blefind/cli_report.hpp"
#include "blefind/crypto/key_schedule.hpp"
#include "blefind/crypto/location_crypto.hpp"
#include "blefind/crypto/smarttag_crypto.hpp"
#include "blefind/network_sim.hpp"
#include "blefind/rng.hpp"
#include "json.hpp"

namespace {

using namespace blefind;
using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string printf_str(const char* fmt, ...) __attribute__((format(printf, 1, 2)));
std::string printf_str(const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  return buf;
}

report::Scenario load(const std::string& name) {
  std::ifstream in(std::string(BLEFIND_SCENARIO_DIR) + "/" + name + ".scn");
  std::ostringstream text;
  text << in.rdbuf();
  auto s = report::parse_scenario(text.str());
  if (!s) throw std::runtime_error("scenario " + name + " does not parse: " + s.error()[0].to_string());
  return *s;
}

report::RunResult run(const std::string& name, std::optional<std::uint64_t> seed = std::nullopt,
                      bool keep_trace = false) {
  return report::run_scenario(load(name), {seed, keep_trace});
}

const attack::AttackRecord* find_attack(const report::MetricsReport& m, const std::string& verb,
                                        std::int64_t at) {
  for (const auto& r : m.attacks) {
    if (r.verb == verb && r.at == at) return &r;
  }
  return nullptr;
}

// 1. Key schedule: d_i G == P_i for epochs 1..1000 of ten masters.
Verdict key_schedule_identity() {
  Rng rng(1, "acceptance/masters");
  std::size_t checked = 0, mismatched = 0;
  for (int m = 0; m < 10; ++m) {
    const auto d = rng.bytes<32>();
    const auto sk = rng.bytes<32>();
    const auto master = crypto::MasterKeySet::from_seed_bytes(d, sk);
    crypto::EpochKeys k = crypto::first_epoch(master);
    for (int i = 1; i <= 1000; ++i) {
      if (i > 1) k = crypto::advance_epoch(k, master);
      ++checked;
      if (!(crypto::p224().mul_base(k.d) == k.public_key)) ++mismatched;
    }
  }
  return {mismatched == 0 && checked == 10000,
          printf_str("%zu keypairs over 10 masters, %zu mismatches", checked, mismatched)};
}

// 2. Location report crypto.
Verdict crypto_round_trip() {
  Rng rng(2, "acceptance/crypto");
  std::vector<crypto::MasterKeySet> masters;
  for (int m = 0; m < 10; ++m) {
    const auto d = rng.bytes<32>();
    const auto sk = rng.bytes<32>();
    masters.push_back(crypto::MasterKeySet::from_seed_bytes(d, sk));
  }
  std::size_t ok = 0, wrong_failed = 0, wrong_tried = 0;
  crypto::EncryptedLocationReport sample;
  for (int i = 0; i < 1000; ++i) {
    const auto& master = masters[rng.below(masters.size())];
    const std::uint64_t epoch = rng.below(30);
    const auto keys = crypto::keys_at(master, epoch);
    const crypto::LocationPlaintext loc{
        {static_cast<double>(rng.between(-89000000, 89000000)) / 1e6,
         static_cast<double>(rng.between(-179000000, 179000000)) / 1e6},
        rng.between(1600000000, 1800000000)};
    const auto enc = crypto::encrypt_location(loc, keys.public_key,
                                              crypto::scalar_from_bytes(rng.bytes<32>()));
    if (!enc) continue;
    if (i == 0) sample = *enc;
    const auto dec = crypto::decrypt_location(*enc, keys.d);
    if (dec && *dec == loc) ++ok;
    if (wrong_tried < 100) {
      ++wrong_tried;
      const auto other = crypto::keys_at(master, epoch + 1);
      const auto bad = crypto::decrypt_location(*enc, other.d);
      if (!bad && bad.error() == crypto::LocationCryptoError::kAuthFailure) ++wrong_failed;
    }
  }
  // Every single-bit flip of the sealed part of one report must fail.
  const auto sample_keys = crypto::keys_at(masters[0], 0);
  const auto probe = crypto::encrypt_location({{40.4168, -3.7038}, 1700000000}, sample_keys.public_key,
                                              crypto::scalar_from_bytes(rng.bytes<32>()));
  std::size_t flips = 0, flips_failed = 0;
  if (probe) {
    sample = *probe;
    for (std::size_t byte = 0; byte < sample.ciphertext.size() + sample.auth_tag.size(); ++byte) {
      for (int bit = 0; bit < 8; ++bit) {
        auto t = sample;
        if (byte < t.ciphertext.size()) {
          t.ciphertext[byte] ^= static_cast<std::uint8_t>(1u << bit);
        } else {
          t.auth_tag[byte - t.ciphertext.size()] ^= static_cast<std::uint8_t>(1u << bit);
        }
        ++flips;
        if (!crypto::decrypt_location(t, sample_keys.d)) ++flips_failed;
      }
    }
  }
  const bool untouched = probe && crypto::decrypt_location(sample, sample_keys.d).has_value();
  return {ok == 1000 && wrong_tried == 100 && wrong_failed == 100 && flips > 0 &&
              flips_failed == flips && untouched,
          printf_str("%zu/1000 round trips, %zu/%zu wrong-epoch auth failures, %zu/%zu bit flips "
                     "rejected",
                     ok, wrong_failed, wrong_tried, flips_failed, flips)};
}

// Records the first six payload octets of every frame it hears.
class FrameTap : public sim::Actor {
 public:
  FrameTap(const GeoFix& p) : pos_(p) {}
  const std::string& id() const override { return id_; }
  GeoFix position() const override { return pos_; }
  void move_to(const GeoFix& p) override { pos_ = p; }
  std::int64_t next_wake(std::int64_t) const override { return sim::kNever; }
  void step(sim::World&, std::int64_t) override {}
  bool listening() const override { return true; }
  void on_frame(sim::World&, const codec::AdvertisementFrame& f, std::int64_t) override {
    heads.push_back({f.payload.begin(), f.payload.begin() + 6});
  }

  std::vector<std::vector<std::uint8_t>> heads;

 private:
  std::string id_ = "tap";
  GeoFix pos_;
};

// 3. Codec bit-exactness.
Verdict codec_bit_exact() {
  const GeoFix site{40.4168, -3.7038};
  sim::WorldConfig cfg;
  cfg.seed = 3;
  cfg.start = 1700000000;
  cfg.duration_s = 3600;
  sim::World w(cfg);
  device::TrackerConfig tc;
  tc.epoch_origin = cfg.start;
  Rng mrng(3, "acceptance/codec-master");
  const auto d = mrng.bytes<32>();
  const auto sk = mrng.bytes<32>();
  w.add_tracker(device::Tracker::airtag("tag", site, crypto::MasterKeySet::from_seed_bytes(d, sk),
                                        cfg.start, tc, 3));
  auto& tap = static_cast<FrameTap&>(w.add_actor(std::make_unique<FrameTap>(site)));
  w.run();
  const std::vector<std::uint8_t> header{0x1E, 0xFF, 0x00, 0x4C, 0x12, 0x19};
  const auto good_heads = static_cast<std::size_t>(
      std::count(tap.heads.begin(), tap.heads.end(), header));
  const bool every_emission = tap.heads.size() == w.counters().emitted && w.counters().emitted > 0;

  Rng rng(3, "acceptance/codec");
  std::size_t air_ok = 0, tag_ok = 0;
  for (int i = 0; i < 10000; ++i) {
    crypto::FieldBytes x{};
    for (auto& b : x) b = rng.byte();
    const auto packed = codec::pack_airtag_key(x);
    codec::AirTagAdv adv;
    adv.status_byte = rng.byte();
    adv.key_payload = packed.key_payload;
    adv.key_top_bits = packed.key_top_bits;
    adv.crypto_counter = rng.byte();
    adv.adv_address = packed.adv_address;
    const auto enc = codec::encode_airtag(adv);
    const auto dec = codec::decode_airtag(enc.payload, enc.address);
    if (dec && *dec == adv && codec::unpack_airtag_key(*dec) == x) ++air_ok;

    codec::SmartTagAdv st;
    st.tag_state = rng.byte();
    st.aging_counter = static_cast<std::uint32_t>(rng.below(1u << 24));
    st.privacy_id = rng.bytes<8>();
    st.region_flags = rng.byte();
    st.signature = rng.bytes<4>();
    const auto payload = codec::encode_smarttag(st);
    const auto back = codec::decode_smarttag(payload);
    if (back && *back == st && codec::encode_smarttag(*back) == payload) ++tag_ok;
  }
  const std::uint32_t a0 = codec::aging_counter(1593648000);
  const std::uint32_t a1 = codec::aging_counter(1593648000 + 900);
  const std::uint32_t a899 = codec::aging_counter(1593648000 + 899);
  return {every_emission && good_heads == tap.heads.size() && air_ok == 10000 && tag_ok == 10000 &&
              a0 == 0 && a1 == 1 && a899 == 0,
          printf_str("header ok on %zu/%zu emissions (%llu emitted), round trips %zu + %zu of 10000 "
                     "each, aging counter %u/%u/%u at +0/+899/+900",
                     good_heads, tap.heads.size(),
                     static_cast<unsigned long long>(w.counters().emitted), air_ok, tag_ok, a0, a899, a1)};
}

// 4. Spoofing reproduction.
Verdict spoofing() {
  const auto s = load("spoofing");
  const auto r = report::run_scenario(s);
  const GeoFix genuine = s.trackers[0].position;
  GeoFix spoofer_site{};
  for (const auto& a : s.attacks) {
    if (a.verb == "move") spoofer_site = {std::stod(a.get("lat")), std::stod(a.get("lon"))};
  }
  const double separation = distance_m(genuine, spoofer_site);
  bool near_a = false, near_b = false;
  for (const auto& e : r.metrics.location_error) {
    if (!e.estimate) continue;
    near_a |= distance_m(*e.estimate, genuine) < 1000.0;
    near_b |= distance_m(*e.estimate, spoofer_site) < 1000.0;
  }
  const auto& o = r.metrics.owners.at(0);
  const auto* spoof = find_attack(r.metrics, "spoof", 1200);
  const double rate = spoof && spoof->uploads > 0
                          ? static_cast<double>(spoof->accepted) / static_cast<double>(spoof->uploads)
                          : 0.0;
  const bool valid_in_range = r.metrics.counts.dropped_undecodable == 0 &&
                              r.metrics.counts.dropped_invalid_point == 0;
  return {separation >= 100000.0 && near_a && near_b && o.alternations >= 1 && spoof &&
              spoof->uploads > 0 && rate == 1.0 && valid_in_range,
          printf_str("sites %.1f km apart, fixes near genuine %s and spoofer %s, %llu alternations, "
                     "acceptance %llu/%llu = %.3f",
                     separation / 1000.0, near_a ? "yes" : "no", near_b ? "yes" : "no",
                     static_cast<unsigned long long>(o.alternations),
                     static_cast<unsigned long long>(spoof ? spoof->accepted : 0),
                     static_cast<unsigned long long>(spoof ? spoof->uploads : 0), rate)};
}

// 5. SmartTag replay window.
Verdict smarttag_replay() {
  int early_ok = 0, late_ok = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto r = run("smarttag-replay", seed);
    const auto* cap = find_attack(r.metrics, "capture", 0);
    const auto* early = find_attack(r.metrics, "spoof", 960);
    const auto* late = find_attack(r.metrics, "spoof", 2700);
    const bool captured_at_900 =
        cap && cap->status == "captured" &&
        std::find(cap->notes.begin(), cap->notes.end(),
                  std::pair<std::string, std::string>{"capture_time", "900"}) != cap->notes.end();
    if (captured_at_900 && early && early->uploads == 1 && early->accepted == 1) ++early_ok;
    if (captured_at_900 && late && late->uploads == 1 && late->accepted == 0 &&
        late->rejected_signature == 1) {
      ++late_ok;
    }
  }
  return {early_ok == 20 && late_ok == 20,
          printf_str("+60 s accepted in %d/20 runs, +1800 s rejected in %d/20 runs", early_ok, late_ok)};
}

// 6. Botnet untraceability.
Verdict botnet() {
  const auto t0 = Clock::now();
  const auto s = load("botnet");
  const report::AttackSpec* campaign = nullptr;
  for (const auto& a : s.attacks) {
    if (a.verb == "botnet") campaign = &a;
  }
  const std::int64_t from = campaign->at;
  const std::int64_t to = campaign->at + std::stoll(campaign->get("duration"));
  const std::size_t bots = report::resolve_ids(s, campaign->get("bots")).size();
  std::size_t min_clusters = SIZE_MAX;
  double fraction_sum = 0.0;
  std::size_t campaign_polls = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const auto r = report::run_scenario(s, {seed, false});
    min_clusters = std::min(min_clusters, r.metrics.owners.at(0).fix_clusters);
    std::size_t polls = 0, near = 0;
    for (const auto& e : r.metrics.location_error) {
      if (e.time <= from || e.time > to || !e.error_m) continue;
      ++polls;
      if (*e.error_m <= 100.0) ++near;
    }
    campaign_polls += polls;
    fraction_sum += polls == 0 ? 1.0 : static_cast<double>(near) / static_cast<double>(polls);
  }
  const double fraction = fraction_sum / 50.0;
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  return {bots == 20 && min_clusters >= 21 && fraction <= 0.10 && secs < 120.0,
          printf_str("%zu bots, min clusters %zu (need >= 21), near fraction %.4f over %zu "
                     "campaign polls (need <= 0.10), %.1f s (need < 120)",
                     bots, min_clusters == SIZE_MAX ? 0 : min_clusters, fraction, campaign_polls,
                     secs)};
}

// 7. Jamming.
Verdict jamming() {
  const auto s = load("jamming");
  const auto jammed = report::run_scenario(s);
  const auto open = run("jamming-nozone");
  const auto lost = jammed.metrics.trackers.at(0).lost_at;
  return {s.duration_s >= 3600 && jammed.metrics.counts.accepted == 0 && lost &&
              *lost == s.lost_threshold_s && open.metrics.counts.accepted >= 1,
          printf_str("jammed: %llu accepted, lost at +%lld s (threshold %lld); unjammed: %llu accepted",
                     static_cast<unsigned long long>(jammed.metrics.counts.accepted),
                     static_cast<long long>(lost.value_or(-1)),
                     static_cast<long long>(s.lost_threshold_s),
                     static_cast<unsigned long long>(open.metrics.counts.accepted))};
}

// 8. Location spoofing through a helper.
Verdict gps_spoofing() {
  auto fake_of = [](const report::Scenario& s) {
    const auto& a = s.attacks.at(0);
    return GeoFix{std::stod(a.get("lat")), std::stod(a.get("lon"))};
  };
  auto observed = [](const report::MetricsReport& m, const GeoFix& fake) {
    const auto& o = m.owners.at(0);
    return o.final_estimate && format_fix(*o.final_estimate) == format_fix(fake);
  };
  const auto s1 = load("gps-spoof-1km");
  const auto s500 = load("gps-spoof-500km");
  const auto svpn = load("gps-spoof-vpn");
  const auto r1 = report::run_scenario(s1);
  const auto r500 = report::run_scenario(s500);
  const auto rvpn = report::run_scenario(svpn);
  const double d1 = distance_m(s1.helpers[0].position, fake_of(s1));
  const double d500 = distance_m(s500.helpers[0].position, fake_of(s500));
  const bool near_ok = r1.metrics.counts.accepted > 0 && r1.metrics.counts.rejected_ip == 0 &&
                       observed(r1.metrics, fake_of(s1));
  const bool far_rejected = r500.metrics.counts.accepted == 0 && r500.metrics.counts.rejected_ip > 0;
  const bool vpn_ok = rvpn.metrics.counts.accepted > 0 && rvpn.metrics.counts.rejected_ip == 0 &&
                      observed(rvpn.metrics, fake_of(svpn));
  return {near_ok && far_rejected && vpn_ok,
          printf_str("%.2f km: %s; %.0f km: %llu accepted, %llu ip-rejected; %.0f km with VPN: %s",
                     d1 / 1000.0, near_ok ? "accepted, owner sees fake" : "not accepted",
                     d500 / 1000.0, static_cast<unsigned long long>(r500.metrics.counts.accepted),
                     static_cast<unsigned long long>(r500.metrics.counts.rejected_ip), d500 / 1000.0,
                     vpn_ok ? "accepted, owner sees fake" : "not accepted")};
}

// 9. DoS asymmetry.
Verdict dos() {
  const auto air = run("dos-airtag");
  const auto* flood = find_attack(air.metrics, "flood", 950);
  const auto s5 = run("dos-smarttag-5k");
  const auto s10 = run("dos-smarttag-10k");
  const double n5 = 5000, n10 = 10000;
  const double c5 = static_cast<double>(s5.metrics.cost.smarttag_server_cost);
  const double c10 = static_cast<double>(s10.metrics.cost.smarttag_server_cost);
  const double per5 = c5 / n5, per10 = c10 / n10, slope = (c10 - c5) / (n10 - n5);
  const bool linear = per5 > 0 && std::abs(slope - per5) / per5 <= 0.01 &&
                      std::abs(per10 - per5) / per5 <= 0.01;
  const bool air_ok = flood && flood->uploads == 10000 && air.metrics.cost.airtag_server_cost == 0 &&
                      air.metrics.cost.airtag_owner_decrypt_attempts >= 10000;
  return {air_ok && c10 >= 10000 && linear,
          printf_str("AirTag path: %llu uploads, server cost %llu, owner decrypts %llu; SmartTag path: "
                     "cost %.0f at 5k, %.0f at 10k, slope %.3f vs %.3f per upload",
                     static_cast<unsigned long long>(flood ? flood->uploads : 0),
                     static_cast<unsigned long long>(air.metrics.cost.airtag_server_cost),
                     static_cast<unsigned long long>(air.metrics.cost.airtag_owner_decrypt_attempts),
                     c5, c10, slope, per5)};
}

// 10. Four-octet signature collisions.
Verdict signature_collisions() {
  const auto t0 = Clock::now();
  int with_collision = 0;
  for (int trial = 0; trial < 10; ++trial) {
    Rng rng(10, "acceptance/collision/" + std::to_string(trial));
    const auto key = rng.bytes<16>();
    std::vector<std::pair<std::uint32_t, ByteArray<16>>> sigs;
    sigs.reserve(1u << 17);
    for (std::size_t i = 0; i < (1u << 17); ++i) {
      const auto prefix = rng.bytes<16>();
      const auto sig = crypto::smarttag_sign(prefix, key);
      const std::uint32_t v = (std::uint32_t{sig[0]} << 24) | (std::uint32_t{sig[1]} << 16) |
                              (std::uint32_t{sig[2]} << 8) | sig[3];
      sigs.emplace_back(v, prefix);
    }
    std::sort(sigs.begin(), sigs.end());
    bool hit = false;
    for (std::size_t i = 1; i < sigs.size() && !hit; ++i) {
      hit = sigs[i].first == sigs[i - 1].first && sigs[i].second != sigs[i - 1].second;
    }
    with_collision += hit ? 1 : 0;
  }
  const double fraction = with_collision / 10.0;
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  return {fraction >= 0.70 && fraction <= 0.99 && secs < 60.0,
          printf_str("%d/10 trials of 2^17 prefixes collide, fraction %.2f (need [0.70, 0.99]), "
                     "%.1f s (need < 60)",
                     with_collision, fraction, secs)};
}

// 11. Breach asymmetry.
Verdict breach() {
  const auto sa = load("baseline");
  const auto ra = report::run_scenario(sa);
  std::size_t leaked = 0;
  for (const auto& h : sa.helpers) {
    for (const double c : {h.position.lat, h.position.lon}) {
      for (const char* fmt : {"%.6f", "%.4f", "%.2f"}) {
        if (ra.cloud_dump.find(printf_str(fmt, c)) != std::string::npos) ++leaked;
      }
    }
  }

  const auto st = load("smarttag-baseline");
  const auto rs = report::run_scenario(st, {std::nullopt, true});
  std::set<std::string> tokens;
  std::set<std::string> helper_coords;
  for (const auto& h : st.helpers) {
    tokens.insert(device::HelperDevice::make(h.id, h.position, st.seed).auth_token);
    helper_coords.insert(format_fix(h.position));
  }
  const auto dump = nlohmann::json::parse(rs.cloud_dump);
  std::size_t stored = 0, linked = 0, located = 0;
  for (const auto& entry : dump["smarttag_store"]) {
    for (const auto& rep : entry["reports"]) {
      ++stored;
      if (tokens.count(rep["helper_token"].get<std::string>()) != 0) ++linked;
      const std::string fix = rep["lat"].get<std::string>() + "," + rep["lon"].get<std::string>();
      if (helper_coords.count(fix) != 0) ++located;
    }
  }
  const std::uint64_t accepted = rs.metrics.counts.accepted;
  return {ra.metrics.counts.accepted > 0 && leaked == 0 && accepted > 0 && stored == accepted &&
              located == accepted && linked == stored,
          printf_str("AirTag path: %zu helper coordinate strings in a %zu-byte dump; SmartTag path: "
                     "%zu/%llu accepted reports stored with helper coordinates, %zu linked to a token",
                     leaked, ra.cloud_dump.size(), located,
                     static_cast<unsigned long long>(accepted), linked)};
}

// 12. Determinism of every bundled scenario.
Verdict determinism() {
  std::vector<std::string> names;
  for (const auto& e : std::filesystem::directory_iterator(BLEFIND_SCENARIO_DIR)) {
    if (e.path().extension() == ".scn") names.push_back(e.path().stem().string());
  }
  std::sort(names.begin(), names.end());
  std::vector<std::string> differ;
  for (const auto& n : names) {
    const auto s = load(n);
    const auto a = report::run_scenario(s);
    const auto b = report::run_scenario(s);
    if (a.metrics.trace_sha256 != b.metrics.trace_sha256 ||
        report::to_json(a.metrics) != report::to_json(b.metrics)) {
      differ.push_back(n);
    }
  }
  std::string list;
  for (const auto& n : differ) list += " " + n;
  return {!names.empty() && differ.empty(),
          printf_str("%zu scenarios run twice, %zu differ%s", names.size(), differ.size(),
                     list.c_str())};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"key schedule identity", key_schedule_identity},
      {"location crypto round trip", crypto_round_trip},
      {"codec bit-exactness", codec_bit_exact},
      {"beacon spoofing", spoofing},
      {"smarttag replay window", smarttag_replay},
      {"botnet untraceability", botnet},
      {"jamming", jamming},
      {"helper location spoofing", gps_spoofing},
      {"dos asymmetry", dos},
      {"signature collisions", signature_collisions},
      {"breach asymmetry", breach},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = Clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    std::printf("%s %2zu %s: %s [%.1f s]\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                v.detail.c_str(), secs);
    std::fflush(stdout);
    failures += v.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
