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


#include "blefind/attack_harness.hpp"

#include <cmath>
#include <stdexcept>

namespace blefind::attack {

Expected<Capabilities, std::string> parse_capabilities(std::string_view text) {
  Capabilities caps = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string_view tok = text.substr(pos, comma - pos);
    if (tok.size() != 2 || (tok[0] != 'A' && tok[0] != 'a') || tok[1] < '1' || tok[1] > '4') {
      return unexpected(std::string("unknown adversary class '") + std::string(tok) + "'");
    }
    caps |= 1u << (tok[1] - '1');
    pos = comma + 1;
  }
  return caps;
}

std::string to_string_capabilities(Capabilities c) {
  std::string out;
  for (int i = 0; i < 4; ++i) {
    if ((c & (1u << i)) == 0) continue;
    if (!out.empty()) out += ',';
    out += 'A';
    out += static_cast<char>('1' + i);
  }
  return out;
}

std::size_t AttackLog::open(AttackRecord r) {
  records_.push_back(std::move(r));
  return records_.size() - 1;
}

void AttackLog::bind_source(const std::string& source, std::size_t record) {
  by_source_[source] = record;
}

void AttackLog::bind_helper(const std::string& helper_id, std::size_t record) {
  by_helper_[helper_id] = record;
}

void AttackLog::tally_frame(const std::string& source) {
  const auto it = by_source_.find(source);
  if (it != by_source_.end()) ++records_[it->second].frames;
}

void AttackLog::attach(sim::World& w) {
  w.add_ingest_hook([this](const std::string& source, const device::ReportUpload& u,
                           const device::IngestOutcome& out) { on_ingest(source, u, out); });
}

void AttackLog::on_ingest(const std::string& source, const device::ReportUpload& u,
                          const device::IngestOutcome& out) {
  auto tally = [&](std::size_t i) {
    AttackRecord& r = records_[i];
    ++r.uploads;
    switch (out.result) {
      case device::IngestResult::kAccepted:
        ++r.accepted;
        break;
      case device::IngestResult::kSignatureMismatch:
        ++r.rejected_signature;
        break;
      case device::IngestResult::kIpInconsistency:
        ++r.rejected_ip;
        break;
    }
  };
  std::optional<std::size_t> first;
  if (const auto it = by_source_.find(source); it != by_source_.end()) {
    first = it->second;
    tally(it->second);
  }
  if (const auto it = by_helper_.find(u.helper_id); it != by_helper_.end() && it->second != first) {
    tally(it->second);
  }
}

std::int64_t BroadcastProgram::due(std::uint64_t n) const {
  return t0 + static_cast<std::int64_t>(std::floor(static_cast<double>(n) / rate + 1e-9));
}

Attacker::Attacker(std::string id, Capabilities caps, const GeoFix& pos, double broadcast_rate,
                   AttackLog* log)
    : id_(std::move(id)), caps_(caps), position_(pos), rate_(broadcast_rate), log_(log) {
  if (!(broadcast_rate > 0)) throw std::invalid_argument("broadcast rate must be positive");
}

std::int64_t Attacker::next_wake(std::int64_t now) const {
  std::int64_t t = sim::kNever;
  for (const auto& p : programs_) {
    if (p.sent < p.total) t = std::min(t, std::max(now, p.due(p.sent)));
  }
  return t;
}

bool Attacker::broadcasting(std::int64_t now) const {
  for (const auto& p : programs_) {
    if (p.sent < p.total && p.t0 <= now) return true;
  }
  return false;
}

void Attacker::step(sim::World& w, std::int64_t now) {
  for (auto& p : programs_) {
    while (p.sent < p.total && p.due(p.sent) <= now) {
      const auto& f = p.frames[p.sent % p.frames.size()];
      w.broadcast({f.address, f.payload, now, position_, id_});
      ++p.sent;
      if (log_ != nullptr) log_->tally_frame(id_);
    }
  }
  std::erase_if(programs_, [](const BroadcastProgram& p) { return p.sent >= p.total; });
}

void Attacker::on_frame(sim::World& w, const codec::AdvertisementFrame& f, std::int64_t now) {
  if (!capture_target_) return;
  if (now > capture_until_) {
    capture_target_.reset();
    return;
  }
  if (f.emitter_id != *capture_target_) return;
  captured_.push_back({f, now});
  w.record("capture", id_, {{"target", f.emitter_id}, {"addr", to_hex(f.adv_address)}});
  if (capture_record_ && log_ != nullptr) {
    AttackRecord& r = log_->record(*capture_record_);
    r.status = "captured";
    r.note("capture_time", std::to_string(now));
  }
  capture_target_.reset();
}

std::optional<CapturedBeacon> Attacker::latest_capture() const {
  if (captured_.empty()) return std::nullopt;
  return captured_.back();
}

void Attacker::arm_capture(std::string target, std::int64_t until,
                           std::optional<std::size_t> record) {
  capture_target_ = std::move(target);
  capture_until_ = until;
  capture_record_ = record;
}

void Attacker::add_program(BroadcastProgram p) {
  if (p.frames.empty() || p.total == 0) return;
  if (!(p.rate > 0)) throw std::invalid_argument("broadcast rate must be positive");
  if (p.record && log_ != nullptr) log_->bind_source(id_, *p.record);
  programs_.push_back(std::move(p));
}

std::vector<std::uint8_t> full_sweep() {
  std::vector<std::uint8_t> out(256);
  for (int i = 0; i < 256; ++i) out[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(i);
  return out;
}

std::vector<codec::EncodedFrame> spoof_broadcast(const CapturedBeacon& cb,
                                                 const std::vector<std::uint8_t>& sweep) {
  const codec::EncodedFrame base{cb.frame.adv_address, cb.frame.payload};
  if (!codec::decode_airtag(cb.frame.payload, cb.frame.adv_address) || sweep.empty()) {
    return {base};
  }
  std::vector<codec::EncodedFrame> out;
  out.reserve(sweep.size());
  for (const std::uint8_t v : sweep) {
    codec::EncodedFrame f = base;
    f.payload[31] = v;
    out.push_back(f);
  }
  return out;
}

void botnet_campaign(sim::World& w, const CapturedBeacon& target,
                     const std::vector<Attacker*>& bots, std::int64_t duration_s,
                     std::optional<std::size_t> record) {
  if (bots.empty()) throw std::invalid_argument("botnet campaign needs at least one bot");
  const auto frames = spoof_broadcast(target, full_sweep());
  for (Attacker* bot : bots) {
    BroadcastProgram p;
    p.frames = frames;
    p.t0 = w.now();
    p.rate = bot->broadcast_rate();
    p.total = static_cast<std::uint64_t>(
        std::max<long long>(1, std::llround(p.rate * static_cast<double>(duration_s))));
    p.record = record;
    bot->add_program(std::move(p));
  }
}

void gps_spoof(device::HelperDevice& h, const GeoFix& fake, bool vpn) {
  h.reported_position = fake;
  if (vpn) h.ip_position = quantize_to_grid(fake, 10000.0);
}

crypto::AffinePoint sendmy_point(std::span<const std::uint8_t> secret, std::uint64_t bit_index,
                                 bool value) {
  std::string info = "sendmy";
  for (int shift = 56; shift >= 0; shift -= 8) {
    info.push_back(static_cast<char>((bit_index >> shift) & 0xFF));
  }
  info.push_back(value ? '\x01' : '\x00');
  const Bytes okm = crypto::hkdf_sha256(secret, {}, info, 32);
  return crypto::p224().mul_base(crypto::scalar_from_bytes(okm));
}

std::vector<crypto::AffinePoint> sendmy_encode(const std::vector<bool>& bits,
                                               std::span<const std::uint8_t> secret) {
  if (bits.size() > kSendMyMaxBits) throw std::invalid_argument("send-my payload too long");
  std::vector<crypto::AffinePoint> out;
  out.reserve(bits.size());
  for (std::size_t k = 0; k < bits.size(); ++k) out.push_back(sendmy_point(secret, k, bits[k]));
  return out;
}

std::vector<codec::EncodedFrame> sendmy_frames(const std::vector<crypto::AffinePoint>& points) {
  std::vector<codec::EncodedFrame> out;
  out.reserve(points.size());
  for (const auto& pt : points) {
    const auto packed = codec::pack_airtag_key(crypto::p224().x_bytes(pt));
    out.push_back(codec::encode_airtag(
        {codec::kAirTagStatusLost, packed.key_payload, packed.key_top_bits, 0, packed.adv_address}));
  }
  return out;
}

SendMyDecoded sendmy_decode(const device::CloudServer& c, std::span<const std::uint8_t> secret,
                            std::size_t length) {
  SendMyDecoded d;
  d.bits.reserve(length);
  for (std::size_t k = 0; k < length; ++k) {
    const bool zero = c.has_airtag_index(crypto::key_index(sendmy_point(secret, k, false)));
    const bool one = c.has_airtag_index(crypto::key_index(sendmy_point(secret, k, true)));
    if (zero == one) {
      d.bits.push_back(std::nullopt);
      ++d.erasures;
    } else {
      d.bits.push_back(one);
    }
  }
  return d;
}

std::vector<bool> parse_bits(std::string_view text) {
  std::vector<bool> out;
  out.reserve(text.size());
  for (const char ch : text) {
    if (ch != '0' && ch != '1') throw std::invalid_argument("bit string may hold only 0 and 1");
    out.push_back(ch == '1');
  }
  return out;
}

std::string format_bits(const SendMyDecoded& d) {
  std::string out;
  out.reserve(d.bits.size());
  for (const auto& b : d.bits) out.push_back(!b ? '?' : (*b ? '1' : '0'));
  return out;
}

std::vector<device::ReportUpload> flood_airtag(const CapturedBeacon& cb, std::size_t n, Rng& rng,
                                               const GeoFix& around, double spread_m,
                                               std::int64_t now, device::RecipientCache& keys,
                                               const std::string& uploader) {
  const auto adv = codec::decode_airtag(cb.frame.payload, cb.frame.adv_address);
  if (!adv) throw std::invalid_argument("flood needs an AirTag-format capture");
  const crypto::RecipientKey* rk = keys.lookup(codec::unpack_airtag_key(*adv));
  if (rk == nullptr) throw std::invalid_argument("captured key is not on the curve");
  std::vector<device::ReportUpload> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double north = (rng.unit() * 2.0 - 1.0) * spread_m;
    const double east = (rng.unit() * 2.0 - 1.0) * spread_m;
    const crypto::LocationPlaintext loc{offset_m(around, north, east), now};
    const crypto::U256 e = crypto::scalar_from_bytes(rng.bytes<32>());
    out.push_back({uploader, device::AirTagUpload{crypto::encrypt_location(loc, *rk, e, now)}});
  }
  return out;
}

std::vector<device::ReportUpload> flood_smarttag(std::size_t n, Rng& rng, const GeoFix& from,
                                                 std::int64_t now, const std::string& uploader) {
  const std::string token = to_hex(rng.bytes<16>());
  const GeoFix ip = quantize_to_grid(from, 10000.0);
  std::vector<device::ReportUpload> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    codec::SmartTagAdv s;
    s.tag_state = 0x01;
    s.aging_counter = codec::aging_counter(now);
    s.privacy_id = rng.bytes<8>();
    s.region_flags = codec::make_region_flags(1, true, false);
    s.signature = rng.bytes<4>();
    const codec::Payload payload = codec::encode_smarttag(s);
    out.push_back({uploader, device::SmartTagUpload{payload, s, from, ip, token, now}});
  }
  return out;
}

DosReport dos_report(const sim::World& w) {
  DosReport r;
  r.airtag_server_cost = w.counters().cost_airtag;
  r.smarttag_server_cost = w.counters().cost_smarttag;
  for (const auto& o : w.owners()) {
    r.airtag_owner_decrypt_attempts += o.decrypt_attempts;
    r.airtag_owner_decrypt_failures += o.decrypt_failures;
  }
  r.airtag_reports_stored = w.cloud().airtag_report_count();
  r.smarttag_reports_stored = w.cloud().smarttag_report_count();
  return r;
}

}  // namespace blefind::attack
