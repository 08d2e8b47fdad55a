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
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "blefind/cli_report.hpp"

namespace blefind::report {

namespace {

enum class Section { kHeader, kTrackers, kHelpers, kOwners, kAttackers, kZones, kAttacks };

struct KeySpec {
  std::vector<std::string> required;
  std::vector<std::string> optional;

  bool known(const std::string& k) const {
    return std::find(required.begin(), required.end(), k) != required.end() ||
           std::find(optional.begin(), optional.end(), k) != optional.end();
  }
};

const std::map<std::string, Section>& section_names() {
  static const std::map<std::string, Section> names{
      {"trackers", Section::kTrackers}, {"helpers", Section::kHelpers},
      {"owners", Section::kOwners},     {"attackers", Section::kAttackers},
      {"zones", Section::kZones},       {"attacks", Section::kAttacks}};
  return names;
}

const std::map<Section, KeySpec>& device_keys() {
  static const std::map<Section, KeySpec> keys{
      {Section::kTrackers, {{"lat", "lon"}, {"owner", "kind"}}},
      {Section::kHelpers, {{"lat", "lon"}, {"scan", "dedupe", "count", "spacing_m"}}},
      {Section::kOwners, {{"lat", "lon"}, {"poll"}}},
      {Section::kAttackers, {{"class"}, {"lat", "lon", "rate", "host", "count", "spacing_m"}}},
      {Section::kZones, {{"lat", "lon", "radius_m"}, {"from", "to"}}}};
  return keys;
}

const std::map<std::string, KeySpec>& verb_keys() {
  static const std::map<std::string, KeySpec> keys{
      {"capture", {{"attacker", "target"}, {"window"}}},
      {"spoof", {{"attacker", "duration"}, {"rate", "sweep"}}},
      {"botnet", {{"source", "bots", "duration"}, {}}},
      {"gps_spoof", {{"helper", "lat", "lon"}, {"vpn"}}},
      {"sendmy", {{"attacker", "bits", "secret"}, {"rate"}}},
      {"flood", {{"attacker", "count"}, {"arch", "spread_m"}}},
      {"move", {{"device", "lat", "lon"}, {}}}};
  return keys;
}

const std::vector<std::string>& header_keys() {
  static const std::vector<std::string> keys{
      "scenario", "seed", "start", "duration", "ble_range_m", "lost_threshold_s",
      "advertising_interval_s", "ip_threshold_km", "architecture"};
  return keys;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string> tokens(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

bool valid_id(const std::string& id) {
  if (id.empty()) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  });
}

std::optional<double> to_double(const std::string& s) {
  double v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<std::int64_t> to_int(const std::string& s) {
  std::int64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<std::uint64_t> to_uint(const std::string& s) {
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<bool> to_bool(const std::string& s) {
  if (s == "yes" || s == "true" || s == "1") return true;
  if (s == "no" || s == "false" || s == "0") return false;
  return std::nullopt;
}

std::optional<device::Architecture> to_arch(const std::string& s) {
  if (s == "airtag-path") return device::Architecture::kAirTag;
  if (s == "smarttag-path") return device::Architecture::kSmartTag;
  return std::nullopt;
}

// Key/value entry of a device section or directive, with its line.
struct Entry {
  int line = 0;
  std::string id;
  std::map<std::string, std::string> kv;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expected<Scenario, std::vector<ParseError>> run() {
    read_lines();
    build_header();
    build_devices();
    build_attacks();
    if (!errors_.empty()) return unexpected(errors_);
    return s_;
  }

 private:
  void error(int line, std::string field, std::string msg) {
    errors_.push_back({line, std::move(field), std::move(msg)});
  }

  void read_lines() {
    Section section = Section::kHeader;
    int lineno = 0;
    std::size_t pos = 0;
    while (pos <= text_.size()) {
      const std::size_t nl = std::min(text_.find('\n', pos), text_.size());
      std::string_view raw = text_.substr(pos, nl - pos);
      pos = nl + 1;
      ++lineno;
      if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
      const std::string_view line = trim(raw);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') {
          error(lineno, "", "malformed section header");
          continue;
        }
        const std::string name(trim(line.substr(1, line.size() - 2)));
        const auto it = section_names().find(name);
        if (it == section_names().end()) {
          error(lineno, name, "unknown section '" + name + "'");
          section = Section::kHeader;
          skip_section_ = true;
          continue;
        }
        skip_section_ = false;
        section = it->second;
        continue;
      }
      if (skip_section_) continue;
      const auto tok = tokens(line);
      if (section == Section::kHeader) {
        read_header(lineno, tok);
      } else if (section == Section::kAttacks) {
        read_attack(lineno, tok);
      } else {
        read_device(section, lineno, tok);
      }
    }
  }

  void read_header(int line, const std::vector<std::string>& tok) {
    const std::string& key = tok[0];
    if (std::find(header_keys().begin(), header_keys().end(), key) == header_keys().end()) {
      error(line, key, "unknown key '" + key + "'");
      return;
    }
    if (tok.size() != 2) {
      error(line, key, "expected exactly one value");
      return;
    }
    if (!header_.emplace(key, std::make_pair(line, tok[1])).second) {
      error(line, key, "duplicate key '" + key + "'");
    }
  }

  bool read_kv(int line, const std::vector<std::string>& tok, std::size_t from, Entry& e) {
    bool ok = true;
    for (std::size_t i = from; i < tok.size(); ++i) {
      const auto eq = tok[i].find('=');
      if (eq == std::string::npos || eq == 0) {
        error(line, tok[i], "expected key=value, got '" + tok[i] + "'");
        ok = false;
        continue;
      }
      const std::string k = tok[i].substr(0, eq);
      if (!e.kv.emplace(k, tok[i].substr(eq + 1)).second) {
        error(line, k, "duplicate key '" + k + "'");
        ok = false;
      }
    }
    return ok;
  }

  void check_keys(const Entry& e, const KeySpec& spec) {
    for (const auto& [k, v] : e.kv) {
      if (!spec.known(k)) error(e.line, k, "unknown key '" + k + "'");
    }
    for (const auto& k : spec.required) {
      if (e.kv.count(k) == 0) error(e.line, k, "missing required key '" + k + "'");
    }
  }

  void read_device(Section section, int line, const std::vector<std::string>& tok) {
    Entry e;
    e.line = line;
    e.id = tok[0];
    if (!valid_id(e.id) || e.id.find('=') != std::string::npos) {
      error(line, "id", "invalid device id '" + e.id + "'");
      return;
    }
    read_kv(line, tok, 1, e);
    check_keys(e, device_keys().at(section));
    devices_[section].push_back(std::move(e));
  }

  void read_attack(int line, const std::vector<std::string>& tok) {
    if (tok.size() < 3 || tok[0] != "at") {
      error(line, "", "expected 'at <seconds> <verb> key=value ...'");
      return;
    }
    AttackSpec a;
    a.line = line;
    const auto t = to_int(tok[1]);
    if (!t) {
      error(line, "at", "invalid time '" + tok[1] + "'");
      return;
    }
    a.at = *t;
    a.verb = tok[2];
    const auto spec = verb_keys().find(a.verb);
    if (spec == verb_keys().end()) {
      error(line, "verb", "unknown attack verb '" + a.verb + "'");
      return;
    }
    Entry e;
    e.line = line;
    read_kv(line, tok, 3, e);
    check_keys(e, spec->second);
    a.params = std::move(e.kv);
    s_.attacks.push_back(std::move(a));
  }

  // Header.

  std::optional<std::string> header(const std::string& key) {
    const auto it = header_.find(key);
    if (it == header_.end()) return std::nullopt;
    return it->second.second;
  }
  int header_line(const std::string& key) {
    const auto it = header_.find(key);
    return it == header_.end() ? 0 : it->second.first;
  }

  template <typename T, typename F>
  void header_num(const std::string& key, T& out, F conv, bool positive) {
    const auto v = header(key);
    if (!v) return;
    const auto parsed = conv(*v);
    if (!parsed || (positive && !(*parsed > 0))) {
      error(header_line(key), key,
            std::string("invalid ") + (positive ? "positive " : "") + "number '" + *v + "'");
      return;
    }
    out = *parsed;
  }

  void build_header() {
    if (const auto name = header("scenario")) {
      if (!valid_id(*name)) error(header_line("scenario"), "scenario", "invalid scenario name");
      s_.name = *name;
    } else {
      error(0, "scenario", "missing required key 'scenario'");
    }
    header_num("seed", s_.seed, to_uint, false);
    header_num("start", s_.start, to_int, false);
    if (header("duration")) {
      header_num("duration", s_.duration_s, to_int, true);
    } else {
      error(0, "duration", "missing required key 'duration'");
    }
    header_num("ble_range_m", s_.ble_range_m, to_double, true);
    header_num("lost_threshold_s", s_.lost_threshold_s, to_int, true);
    header_num("advertising_interval_s", s_.advertising_interval_s, to_int, true);
    header_num("ip_threshold_km", s_.ip_threshold_km, to_double, true);
    if (const auto a = header("architecture")) {
      if (*a != "airtag-path" && *a != "smarttag-path" && *a != "both") {
        error(header_line("architecture"), "architecture", "unknown architecture '" + *a + "'");
      } else {
        s_.architecture = *a;
      }
    }
  }

  // Devices.

  std::optional<GeoFix> position(const Entry& e, bool required) {
    const bool has_lat = e.kv.count("lat") != 0, has_lon = e.kv.count("lon") != 0;
    if (!has_lat && !has_lon && !required) return std::nullopt;
    if (has_lat != has_lon) {
      if (!required) error(e.line, has_lat ? "lon" : "lat", "lat and lon go together");
      return std::nullopt;
    }
    if (!has_lat) return std::nullopt;
    const auto lat = to_double(e.kv.at("lat"));
    const auto lon = to_double(e.kv.at("lon"));
    bool ok = true;
    if (!lat || *lat < -90 || *lat > 90) {
      error(e.line, "lat", "latitude must be a number in [-90, 90]");
      ok = false;
    }
    if (!lon || *lon < -180 || *lon > 180) {
      error(e.line, "lon", "longitude must be a number in [-180, 180]");
      ok = false;
    }
    if (!ok) return std::nullopt;
    return GeoFix{*lat, *lon};
  }

  template <typename T, typename F>
  std::optional<T> num(const Entry& e, const std::string& key, F conv, bool positive) {
    const auto it = e.kv.find(key);
    if (it == e.kv.end()) return std::nullopt;
    const auto v = conv(it->second);
    if (!v || (positive && !(*v > 0))) {
      error(e.line, key,
            std::string("invalid ") + (positive ? "positive " : "") + "number '" + it->second + "'");
      return std::nullopt;
    }
    return static_cast<T>(*v);
  }

  std::optional<bool> flag(const Entry& e, const std::string& key) {
    const auto it = e.kv.find(key);
    if (it == e.kv.end()) return std::nullopt;
    const auto v = to_bool(it->second);
    if (!v) error(e.line, key, "expected yes or no, got '" + it->second + "'");
    return v;
  }

  void claim(const std::string& id, int line) {
    if (!ids_.emplace(id, line).second) {
      error(line, "id", "duplicate device id '" + id + "' (first defined on line " +
                            std::to_string(ids_[id]) + ")");
    }
  }

  // Expands `count=N spacing_m=M` into N ids stepping east from the base fix.
  std::vector<std::pair<std::string, GeoFix>> expand(const Entry& e, const GeoFix& base) {
    const auto count = num<std::int64_t>(e, "count", to_int, true);
    const double spacing = num<double>(e, "spacing_m", to_double, false).value_or(0.0);
    if (count && *count > 1000) error(e.line, "count", "count may not exceed 1000");
    if (!count || *count == 1 || *count > 1000) {
      claim(e.id, e.line);
      return {{e.id, base}};
    }
    std::vector<std::pair<std::string, GeoFix>> out;
    claim(e.id, e.line);
    for (std::int64_t i = 0; i < *count; ++i) {
      const std::string id = e.id + "-" + std::to_string(i);
      claim(id, e.line);
      out.emplace_back(id, offset_m(base, 0, spacing * static_cast<double>(i)));
      s_.groups[e.id].push_back(id);
    }
    return out;
  }

  void build_devices() {
    for (const auto& e : devices_[Section::kOwners]) {
      claim(e.id, e.line);
      OwnerSpec o;
      o.line = e.line;
      o.id = e.id;
      o.position = position(e, true).value_or(GeoFix{});
      o.poll_interval_s = num<std::int64_t>(e, "poll", to_int, true).value_or(60);
      s_.owners.push_back(o);
    }
    for (const auto& e : devices_[Section::kTrackers]) {
      claim(e.id, e.line);
      TrackerSpec t;
      t.line = e.line;
      t.id = e.id;
      t.position = position(e, true).value_or(GeoFix{});
      if (const auto it = e.kv.find("kind"); it != e.kv.end()) {
        const auto k = to_arch(it->second);
        if (!k) {
          error(e.line, "kind", "unknown tracker kind '" + it->second + "'");
        } else if (s_.architecture != "both" && it->second != s_.architecture) {
          error(e.line, "kind", "tracker kind '" + it->second + "' conflicts with architecture '" +
                                    s_.architecture + "'");
        } else {
          t.kind = *k;
        }
      } else if (s_.architecture == "both") {
        error(e.line, "kind", "architecture 'both' needs a kind on every tracker");
      } else {
        t.kind = *to_arch(s_.architecture);
      }
      if (const auto it = e.kv.find("owner"); it != e.kv.end()) {
        const bool found = std::any_of(s_.owners.begin(), s_.owners.end(),
                                       [&](const OwnerSpec& o) { return o.id == it->second; });
        if (!found) error(e.line, "owner", "unknown owner '" + it->second + "'");
        t.owner = it->second;
      }
      s_.trackers.push_back(t);
    }
    for (const auto& e : devices_[Section::kHelpers]) {
      const auto pos = position(e, true).value_or(GeoFix{});
      const auto scan = num<std::int64_t>(e, "scan", to_int, true).value_or(1);
      const bool dedupe = flag(e, "dedupe").value_or(false);
      for (const auto& [id, p] : expand(e, pos)) {
        s_.helpers.push_back({e.line, id, p, scan, dedupe});
      }
    }
    for (const auto& e : devices_[Section::kAttackers]) {
      attack::Capabilities caps = 0;
      if (const auto it = e.kv.find("class"); it != e.kv.end()) {
        const auto c = attack::parse_capabilities(it->second);
        if (!c) {
          error(e.line, "class", c.error());
        } else {
          caps = *c;
        }
      }
      std::optional<std::string> host;
      std::optional<GeoFix> pos = position(e, false);
      if (const auto it = e.kv.find("host"); it != e.kv.end()) {
        host = it->second;
        const auto h = std::find_if(s_.helpers.begin(), s_.helpers.end(),
                                    [&](const HelperSpec& x) { return x.id == *host; });
        if (h == s_.helpers.end()) {
          error(e.line, "host", "unknown helper '" + *host + "'");
        } else {
          pos = h->position;
        }
        if (caps != 0 && !attack::has(caps, attack::AdversaryClass::kA1)) {
          error(e.line, "host", "only an A1 attacker runs on a helper");
        }
      } else if (attack::has(caps, attack::AdversaryClass::kA1) && !pos) {
        error(e.line, "host", "an A1 attacker without a position needs a host helper");
      }
      if (!pos && !host) error(e.line, "lat", "attacker needs lat/lon or a host");
      const double rate = num<double>(e, "rate", to_double, true).value_or(1.0);
      for (const auto& [id, p] : expand(e, pos.value_or(GeoFix{}))) {
        s_.attackers.push_back({e.line, id, caps, p, rate, host});
      }
    }
    for (const auto& e : devices_[Section::kZones]) {
      claim(e.id, e.line);
      ZoneSpec z;
      z.line = e.line;
      z.id = e.id;
      z.center = position(e, true).value_or(GeoFix{});
      z.radius_m = num<double>(e, "radius_m", to_double, true).value_or(0.0);
      z.from = num<std::int64_t>(e, "from", to_int, false).value_or(0);
      z.to = num<std::int64_t>(e, "to", to_int, false).value_or(s_.duration_s);
      if (z.from < 0 || z.from > s_.duration_s) error(e.line, "from", "time outside [0, duration]");
      if (z.to < 0 || z.to > s_.duration_s) error(e.line, "to", "time outside [0, duration]");
      if (z.from >= z.to) error(e.line, "to", "zone must end after it starts");
      s_.zones.push_back(z);
    }
  }

  // Attacks.

  const AttackerSpec* attacker(const AttackSpec& a, const std::string& key) {
    const auto it = a.params.find(key);
    if (it == a.params.end()) return nullptr;
    for (const auto& x : s_.attackers) {
      if (x.id == it->second) return &x;
    }
    error(a.line, key, "unknown attacker '" + it->second + "'");
    return nullptr;
  }

  void need(const AttackSpec& a, const AttackerSpec* who, bool ok, const std::string& what) {
    if (who != nullptr && !ok) {
      error(a.line, "class", "attacker '" + who->id + "' (" +
                                 attack::to_string_capabilities(who->capabilities) +
                                 ") cannot " + what);
    }
  }

  template <typename T, typename F>
  std::optional<T> param(const AttackSpec& a, const std::string& key, F conv, bool positive) {
    Entry e;
    e.line = a.line;
    e.kv = a.params;
    return num<T>(e, key, conv, positive);
  }

  void build_attacks() {
    for (const auto& a : s_.attacks) {
      if (a.at < 0 || a.at > s_.duration_s) {
        error(a.line, "at", "time " + std::to_string(a.at) + " outside [0, " +
                                std::to_string(s_.duration_s) + "]");
      }
      const auto& p = a.params;
      if (a.verb == "capture") {
        const auto* who = attacker(a, "attacker");
        need(a, who, who && attack::can_capture(who->capabilities), "capture beacons");
        if (p.count("target") != 0) {
          const bool found = std::any_of(s_.trackers.begin(), s_.trackers.end(),
                                         [&](const TrackerSpec& t) { return t.id == p.at("target"); });
          if (!found) error(a.line, "target", "unknown tracker '" + p.at("target") + "'");
        }
        param<std::int64_t>(a, "window", to_int, true);
      } else if (a.verb == "spoof") {
        const auto* who = attacker(a, "attacker");
        need(a, who, who && attack::can_broadcast(who->capabilities), "broadcast");
        param<std::int64_t>(a, "duration", to_int, true);
        param<double>(a, "rate", to_double, true);
        if (p.count("sweep") != 0 && !parse_sweep(p.at("sweep"))) {
          error(a.line, "sweep", "expected none, A-B or a comma list of bytes");
        }
      } else if (a.verb == "botnet") {
        const auto* src = attacker(a, "source");
        need(a, src, src && attack::can_capture(src->capabilities), "capture beacons");
        param<std::int64_t>(a, "duration", to_int, true);
        if (p.count("bots") != 0) {
          for (const auto& id : resolve_ids(s_, p.at("bots"))) {
            const auto bot = std::find_if(s_.attackers.begin(), s_.attackers.end(),
                                          [&](const AttackerSpec& x) { return x.id == id; });
            if (bot == s_.attackers.end()) {
              error(a.line, "bots", "unknown attacker '" + id + "'");
            } else {
              need(a, &*bot, attack::can_broadcast(bot->capabilities), "broadcast");
            }
          }
        }
      } else if (a.verb == "gps_spoof") {
        if (p.count("helper") != 0) {
          const bool found = std::any_of(s_.helpers.begin(), s_.helpers.end(),
                                         [&](const HelperSpec& h) { return h.id == p.at("helper"); });
          if (!found) error(a.line, "helper", "unknown helper '" + p.at("helper") + "'");
        }
        Entry e;
        e.line = a.line;
        e.kv = p;
        position(e, true);
        flag(e, "vpn");
      } else if (a.verb == "sendmy") {
        const auto* who = attacker(a, "attacker");
        need(a, who, who && attack::can_broadcast(who->capabilities), "broadcast");
        param<double>(a, "rate", to_double, true);
        if (p.count("bits") != 0) {
          const auto& bits = p.at("bits");
          if (bits.find_first_not_of("01") != std::string::npos) {
            error(a.line, "bits", "bits may hold only 0 and 1");
          } else if (bits.size() > attack::kSendMyMaxBits) {
            error(a.line, "bits", "payload longer than " + std::to_string(attack::kSendMyMaxBits));
          }
        }
      } else if (a.verb == "flood") {
        const auto* who = attacker(a, "attacker");
        need(a, who, who && attack::can_upload(who->capabilities), "upload to the cloud");
        const auto n = param<std::int64_t>(a, "count", to_int, true);
        if (n && *n > 1000000) error(a.line, "count", "count may not exceed 1000000");
        param<double>(a, "spread_m", to_double, true);
        if (p.count("arch") != 0) {
          if (!to_arch(p.at("arch"))) error(a.line, "arch", "unknown architecture '" + p.at("arch") + "'");
        } else if (s_.architecture == "both") {
          error(a.line, "arch", "architecture 'both' needs arch on every flood");
        }
      } else if (a.verb == "move") {
        if (p.count("device") != 0 && ids_.count(p.at("device")) == 0) {
          error(a.line, "device", "unknown device '" + p.at("device") + "'");
        }
        Entry e;
        e.line = a.line;
        e.kv = p;
        position(e, true);
      }
    }
    std::stable_sort(s_.attacks.begin(), s_.attacks.end(),
                     [](const AttackSpec& x, const AttackSpec& y) { return x.at < y.at; });
  }

 public:
  static std::optional<std::vector<std::uint8_t>> parse_sweep(const std::string& text) {
    std::vector<std::uint8_t> out;
    if (text == "none") return out;
    if (const auto dash = text.find('-'); dash != std::string::npos) {
      const auto lo = to_int(text.substr(0, dash));
      const auto hi = to_int(text.substr(dash + 1));
      if (!lo || !hi || *lo < 0 || *hi > 255 || *lo > *hi) return std::nullopt;
      for (auto v = *lo; v <= *hi; ++v) out.push_back(static_cast<std::uint8_t>(v));
      return out;
    }
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t comma = std::min(text.find(',', pos), text.size());
      const auto v = to_int(text.substr(pos, comma - pos));
      if (!v || *v < 0 || *v > 255) return std::nullopt;
      out.push_back(static_cast<std::uint8_t>(*v));
      pos = comma + 1;
    }
    return out;
  }

 private:
  std::string_view text_;
  bool skip_section_ = false;
  std::map<std::string, std::pair<int, std::string>> header_;
  std::map<Section, std::vector<Entry>> devices_;
  std::map<std::string, int> ids_;
  Scenario s_;
  std::vector<ParseError> errors_;
};

}  // namespace

std::string ParseError::to_string() const {
  std::string out;
  if (line > 0) out += "line " + std::to_string(line) + ": ";
  if (!field.empty()) out += field + ": ";
  return out + message;
}

std::string AttackSpec::get_or(const std::string& key, std::string fallback) const {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

Expected<Scenario, std::vector<ParseError>> parse_scenario(std::string_view text) {
  return Parser(text).run();
}

std::optional<std::vector<std::uint8_t>> parse_sweep_spec(const std::string& text) {
  return Parser::parse_sweep(text);
}

std::vector<std::string> resolve_ids(const Scenario& s, const std::string& list) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    const std::size_t comma = std::min(list.find(',', pos), list.size());
    const std::string tok = list.substr(pos, comma - pos);
    pos = comma + 1;
    if (const auto g = s.groups.find(tok); g != s.groups.end()) {
      out.insert(out.end(), g->second.begin(), g->second.end());
    } else {
      out.push_back(tok);
    }
  }
  return out;
}

}  // namespace blefind::report
