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


#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "blefind/cli_report.hpp"
#include "json.hpp"

namespace blefind::report {

namespace {

using nlohmann::ordered_json;

ordered_json fix_json(const std::optional<GeoFix>& f) {
  if (!f) return nullptr;
  return ordered_json{{"lat", f->lat}, {"lon", f->lon}};
}

ordered_json opt_json(const std::optional<double>& v) {
  if (!v) return nullptr;
  return *v;
}

double rate(std::uint64_t accepted, std::uint64_t uploads) {
  return uploads == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(uploads);
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace

Expected<ReportFormat, std::string> parse_format(std::string_view name) {
  if (name == "json") return ReportFormat::kJson;
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "text") return ReportFormat::kText;
  return unexpected("unknown format '" + std::string(name) + "' (json, csv or text)");
}

const char* extension(ReportFormat f) {
  switch (f) {
    case ReportFormat::kJson:
      return "json";
    case ReportFormat::kCsv:
      return "csv";
    case ReportFormat::kText:
      return "txt";
  }
  return "out";
}

std::string to_json(const MetricsReport& m) {
  const auto& c = m.counts;
  ordered_json j;
  j["scenario"] = m.scenario;
  j["seed"] = m.seed;
  j["architecture"] = m.architecture;
  j["start"] = m.start;
  j["duration_s"] = m.duration_s;
  j["counts"] = {{"emitted", c.emitted},
                 {"delivered", c.delivered},
                 {"suppressed", c.suppressed},
                 {"uploads", c.uploads},
                 {"direct_uploads", c.direct_uploads},
                 {"accepted", c.accepted},
                 {"rejected", {{"signature_mismatch", c.rejected_signature},
                               {"ip_inconsistency", c.rejected_ip}}},
                 {"dropped", {{"undecodable", c.dropped_undecodable},
                              {"invalid_point", c.dropped_invalid_point},
                              {"duplicate", c.dropped_duplicate}}},
                 {"polls", c.polls},
                 {"fixes", c.fixes}};
  j["cost"] = {{"airtag_server_cost", m.cost.airtag_server_cost},
               {"smarttag_server_cost", m.cost.smarttag_server_cost},
               {"airtag_owner_decrypt_attempts", m.cost.airtag_owner_decrypt_attempts},
               {"airtag_owner_decrypt_failures", m.cost.airtag_owner_decrypt_failures},
               {"airtag_reports_stored", m.cost.airtag_reports_stored},
               {"smarttag_reports_stored", m.cost.smarttag_reports_stored}};

  attack::AttackRecord total;
  ordered_json attacks = ordered_json::array();
  for (const auto& r : m.attacks) {
    total.frames += r.frames;
    total.uploads += r.uploads;
    total.accepted += r.accepted;
    total.rejected_signature += r.rejected_signature;
    total.rejected_ip += r.rejected_ip;
    ordered_json notes = ordered_json::object();
    for (const auto& [k, v] : r.notes) notes[k] = v;
    attacks.push_back({{"verb", r.verb},
                       {"attacker", r.attacker},
                       {"at", r.at},
                       {"until", r.until},
                       {"status", r.status},
                       {"frames", r.frames},
                       {"uploads", r.uploads},
                       {"accepted", r.accepted},
                       {"rejected_signature", r.rejected_signature},
                       {"rejected_ip", r.rejected_ip},
                       {"acceptance_rate", rate(r.accepted, r.uploads)},
                       {"notes", notes}});
  }
  j["attack_totals"] = {{"directives", m.attacks.size()},
                        {"frames", total.frames},
                        {"uploads", total.uploads},
                        {"accepted", total.accepted},
                        {"rejected_signature", total.rejected_signature},
                        {"rejected_ip", total.rejected_ip},
                        {"acceptance_rate", rate(total.accepted, total.uploads)}};
  j["attacks"] = attacks;

  ordered_json trackers = ordered_json::array();
  for (const auto& t : m.trackers) {
    ordered_json lost = nullptr;
    if (t.lost_at) lost = *t.lost_at;
    trackers.push_back({{"id", t.id}, {"kind", t.kind}, {"mode", t.mode}, {"lost_at", lost}});
  }
  j["trackers"] = trackers;

  ordered_json owners = ordered_json::array();
  for (const auto& o : m.owners) {
    owners.push_back({{"owner", o.owner},
                      {"tracker", o.tracker},
                      {"polls", o.polls},
                      {"fixes", o.fixes},
                      {"fix_clusters", o.fix_clusters},
                      {"alternations", o.alternations},
                      {"estimate_alternation", o.alternations > 0},
                      {"near_fraction", o.near_fraction},
                      {"final_estimate", fix_json(o.final_estimate)},
                      {"final_error_m", opt_json(o.final_error_m)}});
  }
  j["owners"] = owners;

  ordered_json series = ordered_json::array();
  for (const auto& e : m.location_error) {
    series.push_back({{"time", e.time},
                      {"owner", e.owner},
                      {"tracker", e.tracker},
                      {"fixes", e.fixes},
                      {"estimate", fix_json(e.estimate)},
                      {"truth", fix_json(e.truth)},
                      {"error_m", opt_json(e.error_m)}});
  }
  j["location_error"] = series;
  j["trace"] = {{"events", m.trace_events}, {"sha256", m.trace_sha256}};
  return j.dump(2) + "\n";
}

std::string to_csv(const MetricsReport& m) {
  std::ostringstream out;
  out << "time,owner,tracker,fixes,est_lat,est_lon,truth_lat,truth_lon,error_m\n";
  for (const auto& e : m.location_error) {
    out << e.time << ',' << e.owner << ',' << e.tracker << ',' << e.fixes << ',';
    if (e.estimate) {
      out << format_coord(e.estimate->lat) << ',' << format_coord(e.estimate->lon) << ',';
    } else {
      out << ",,";
    }
    out << format_coord(e.truth.lat) << ',' << format_coord(e.truth.lon) << ',';
    if (e.error_m) out << fmt("%.3f", *e.error_m);
    out << '\n';
  }
  return out.str();
}

std::string to_text(const MetricsReport& m) {
  const auto& c = m.counts;
  std::ostringstream out;
  out << "scenario " << m.scenario << " (seed " << m.seed << ", " << m.architecture << ", "
      << m.duration_s << " s)\n";
  out << "  frames   emitted " << c.emitted << ", delivered " << c.delivered << ", suppressed "
      << c.suppressed << "\n";
  out << "  uploads  " << c.uploads << " (" << c.direct_uploads << " direct): accepted "
      << c.accepted << ", signature-mismatch " << c.rejected_signature << ", ip-inconsistency "
      << c.rejected_ip << "\n";
  out << "  dropped  undecodable " << c.dropped_undecodable << ", invalid-point "
      << c.dropped_invalid_point << ", duplicate " << c.dropped_duplicate << "\n";
  out << "  cost     server airtag " << m.cost.airtag_server_cost << ", smarttag "
      << m.cost.smarttag_server_cost << "; owner decrypts " << m.cost.airtag_owner_decrypt_attempts
      << " (" << m.cost.airtag_owner_decrypt_failures << " failed)\n";
  for (const auto& t : m.trackers) {
    out << "tracker " << t.id << " [" << t.kind << "] " << t.mode;
    if (t.lost_at) out << ", lost at +" << *t.lost_at << " s";
    out << "\n";
  }
  for (const auto& o : m.owners) {
    out << "owner " << o.owner << " -> " << o.tracker << ": " << o.polls << " polls, " << o.fixes
        << " fixes in " << o.fix_clusters << " clusters, " << o.alternations
        << " alternations, near " << fmt("%.3f", o.near_fraction);
    if (o.final_error_m) {
      out << ", final error " << fmt("%.1f", *o.final_error_m) << " m";
    } else {
      out << ", no estimate";
    }
    out << "\n";
  }
  for (const auto& r : m.attacks) {
    out << "attack " << r.verb << " by " << r.attacker << " at +" << r.at << ": " << r.status
        << ", frames " << r.frames << ", uploads " << r.uploads << ", accepted " << r.accepted;
    for (const auto& [k, v] : r.notes) out << ", " << k << "=" << v;
    out << "\n";
  }
  out << "trace " << m.trace_events << " events, sha256 " << m.trace_sha256 << "\n";
  return out.str();
}

std::string render(const MetricsReport& m, ReportFormat f) {
  switch (f) {
    case ReportFormat::kJson:
      return to_json(m);
    case ReportFormat::kCsv:
      return to_csv(m);
    case ReportFormat::kText:
      return to_text(m);
  }
  return {};
}

Expected<std::string, std::string> emit_report(const MetricsReport& m, ReportFormat f,
                                               const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) return unexpected("cannot create " + dir + ": " + ec.message());
  const fs::path path = fs::path(dir) / (m.scenario + "." + extension(f));
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) return unexpected("cannot open " + path.string() + " for writing");
  file << render(m, f);
  file.close();
  if (!file) return unexpected("write to " + path.string() + " failed");
  return path.string();
}

// Audit.

namespace {

struct Line {
  std::int64_t time = 0;
  std::string kind;
  std::string actor;
  std::map<std::string, std::string> kv;

  const std::string& at(const std::string& k) const {
    static const std::string empty;
    const auto it = kv.find(k);
    return it == kv.end() ? empty : it->second;
  }
};

std::optional<Line> split(const std::string& raw) {
  const auto a = raw.find('\t');
  const auto b = a == std::string::npos ? a : raw.find('\t', a + 1);
  const auto c = b == std::string::npos ? b : raw.find('\t', b + 1);
  if (c == std::string::npos) return std::nullopt;
  Line l;
  l.time = std::stoll(raw.substr(0, a));
  l.kind = raw.substr(a + 1, b - a - 1);
  l.actor = raw.substr(b + 1, c - b - 1);
  std::istringstream rest(raw.substr(c + 1));
  std::string tok;
  while (rest >> tok) {
    const auto eq = tok.find('=');
    if (eq != std::string::npos) l.kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return l;
}

std::optional<GeoFix> parse_fix(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) return std::nullopt;
  return GeoFix{std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
}

std::vector<std::string> split_ids(const std::string& list) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < list.size()) {
    const std::size_t comma = std::min(list.find(',', pos), list.size());
    out.push_back(list.substr(pos, comma - pos));
    pos = comma + 1;
  }
  return out;
}

class Checker {
 public:
  void eq(const std::string& what, std::uint64_t trace, std::uint64_t report) {
    if (trace != report) {
      problems.push_back(what + ": trace " + std::to_string(trace) + ", report " +
                         std::to_string(report));
    }
  }
  void fail(std::string msg) { problems.push_back(std::move(msg)); }

  std::vector<std::string> problems;
};

}  // namespace

std::vector<std::string> audit_trace(const std::vector<std::string>& trace,
                                     const MetricsReport& m) {
  Checker ck;
  sim::Counters c;
  attack::DosReport cost;
  std::map<std::string, std::size_t> by_source, by_helper;
  std::vector<attack::AttackRecord> attacks(m.attacks.size());
  std::map<std::pair<std::string, std::string>, std::vector<GeoFix>> fixes;
  std::vector<ErrorSample> series;
  std::map<std::string, std::int64_t> lost_at;
  std::map<std::string, std::string> mode;
  const std::int64_t start = m.start;

  for (const auto& raw : trace) {
    const auto parsed = split(raw);
    if (!parsed) {
      ck.fail("malformed trace line: " + raw);
      continue;
    }
    const Line& l = *parsed;
    if (l.kind == "emit") {
      ++c.emitted;
      if (const auto it = by_source.find(l.actor); it != by_source.end()) ++attacks[it->second].frames;
    } else if (l.kind == "deliver") {
      ++c.delivered;
    } else if (l.kind == "suppress") {
      ++c.suppressed;
    } else if (l.kind == "upload") {
      ++c.uploads;
      if (l.at("via") == "direct") ++c.direct_uploads;
    } else if (l.kind == "accept" || l.kind == "reject") {
      const bool airtag = l.at("arch") == "airtag-path";
      const std::uint64_t units = std::stoull(l.at("cost"));
      (airtag ? cost.airtag_server_cost : cost.smarttag_server_cost) += units;
      const bool ok = l.kind == "accept";
      if (ok) {
        ++c.accepted;
        ++(airtag ? cost.airtag_reports_stored : cost.smarttag_reports_stored);
      } else if (l.at("cause") == "ip-inconsistency") {
        ++c.rejected_ip;
      } else {
        ++c.rejected_signature;
      }
      auto tally = [&](std::size_t i) {
        auto& r = attacks[i];
        ++r.uploads;
        if (ok) {
          ++r.accepted;
        } else if (l.at("cause") == "ip-inconsistency") {
          ++r.rejected_ip;
        } else {
          ++r.rejected_signature;
        }
      };
      std::optional<std::size_t> first;
      if (const auto it = by_source.find(l.at("src")); it != by_source.end()) {
        first = it->second;
        tally(it->second);
      }
      if (const auto it = by_helper.find(l.at("helper")); it != by_helper.end() && it->second != first) {
        tally(it->second);
      }
    } else if (l.kind == "drop") {
      const auto& why = l.at("reason");
      if (why == "undecodable") ++c.dropped_undecodable;
      if (why == "invalid-point") ++c.dropped_invalid_point;
      if (why == "duplicate") ++c.dropped_duplicate;
    } else if (l.kind == "fix") {
      ++c.fixes;
      if (auto f = parse_fix(l.at("pos"))) fixes[{l.actor, l.at("tracker")}].push_back(*f);
    } else if (l.kind == "poll") {
      ++c.polls;
      cost.airtag_owner_decrypt_attempts += std::stoull(l.at("attempts"));
      cost.airtag_owner_decrypt_failures += std::stoull(l.at("failures"));
      ErrorSample e;
      e.time = l.time;
      e.owner = l.actor;
      e.tracker = l.at("tracker");
      e.fixes = std::stoull(l.at("fixes"));
      e.truth = parse_fix(l.at("truth")).value_or(GeoFix{});
      e.estimate = parse_fix(l.at("est"));
      if (e.estimate) e.error_m = distance_m(*e.estimate, e.truth);
      series.push_back(e);
    } else if (l.kind == "mode") {
      mode[l.actor] = l.at("mode");
      if (l.at("mode") == "lost") lost_at.emplace(l.actor, l.time);
    } else if (l.kind == "attack") {
      const std::size_t rec = std::stoull(l.at("record"));
      if (rec >= attacks.size()) {
        ck.fail("attack line names record " + std::to_string(rec) + " not in the report");
        continue;
      }
      for (const auto& id : split_ids(l.at("sources"))) by_source[id] = rec;
      if (!l.at("helper").empty()) by_helper[l.at("helper")] = rec;
    }
  }

  const auto& r = m.counts;
  ck.eq("emitted", c.emitted, r.emitted);
  ck.eq("delivered", c.delivered, r.delivered);
  ck.eq("suppressed", c.suppressed, r.suppressed);
  ck.eq("uploads", c.uploads, r.uploads);
  ck.eq("direct uploads", c.direct_uploads, r.direct_uploads);
  ck.eq("accepted", c.accepted, r.accepted);
  ck.eq("rejected signature", c.rejected_signature, r.rejected_signature);
  ck.eq("rejected ip", c.rejected_ip, r.rejected_ip);
  ck.eq("dropped undecodable", c.dropped_undecodable, r.dropped_undecodable);
  ck.eq("dropped invalid point", c.dropped_invalid_point, r.dropped_invalid_point);
  ck.eq("dropped duplicate", c.dropped_duplicate, r.dropped_duplicate);
  ck.eq("polls", c.polls, r.polls);
  ck.eq("fixes", c.fixes, r.fixes);
  ck.eq("airtag server cost", cost.airtag_server_cost, m.cost.airtag_server_cost);
  ck.eq("smarttag server cost", cost.smarttag_server_cost, m.cost.smarttag_server_cost);
  ck.eq("owner decrypt attempts", cost.airtag_owner_decrypt_attempts,
        m.cost.airtag_owner_decrypt_attempts);
  ck.eq("owner decrypt failures", cost.airtag_owner_decrypt_failures,
        m.cost.airtag_owner_decrypt_failures);
  ck.eq("airtag reports stored", cost.airtag_reports_stored, m.cost.airtag_reports_stored);
  ck.eq("smarttag reports stored", cost.smarttag_reports_stored, m.cost.smarttag_reports_stored);
  ck.eq("trace events", trace.size(), m.trace_events);

  for (std::size_t i = 0; i < attacks.size(); ++i) {
    const auto& a = attacks[i];
    const auto& b = m.attacks[i];
    const std::string tag = "attack " + std::to_string(i) + " (" + b.verb + ") ";
    ck.eq(tag + "frames", a.frames, b.frames);
    ck.eq(tag + "uploads", a.uploads, b.uploads);
    ck.eq(tag + "accepted", a.accepted, b.accepted);
    ck.eq(tag + "rejected signature", a.rejected_signature, b.rejected_signature);
    ck.eq(tag + "rejected ip", a.rejected_ip, b.rejected_ip);
  }

  ck.eq("error series length", series.size(), m.location_error.size());
  for (std::size_t i = 0; i < std::min(series.size(), m.location_error.size()); ++i) {
    const auto& a = series[i];
    const auto& b = m.location_error[i];
    const bool same = a.time - start == b.time && a.owner == b.owner && a.tracker == b.tracker &&
                      a.fixes == b.fixes && a.truth == b.truth && a.estimate == b.estimate &&
                      a.error_m == b.error_m;
    if (!same) ck.fail("poll " + std::to_string(i) + " differs from the report");
  }

  for (const auto& o : m.owners) {
    const auto& f = fixes[{o.owner, o.tracker}];
    ck.eq("clusters " + o.owner + "/" + o.tracker, count_clusters(f), o.fix_clusters);
    std::uint64_t polls = 0, alternations = 0, with_est = 0, near = 0;
    std::optional<bool> last;
    for (const auto& e : series) {
      if (e.owner != o.owner || e.tracker != o.tracker) continue;
      ++polls;
      if (!e.error_m) continue;
      ++with_est;
      if (*e.error_m <= 100.0) ++near;
      const bool is_near = *e.error_m <= 1000.0;
      if (last && *last != is_near) ++alternations;
      last = is_near;
    }
    ck.eq("polls " + o.owner + "/" + o.tracker, polls, o.polls);
    ck.eq("alternations " + o.owner + "/" + o.tracker, alternations, o.alternations);
    const double frac = with_est == 0 ? 0.0 : static_cast<double>(near) / static_cast<double>(with_est);
    if (frac != o.near_fraction) ck.fail("near fraction " + o.owner + "/" + o.tracker + " differs");
  }

  for (const auto& t : m.trackers) {
    const auto it = lost_at.find(t.id);
    const std::optional<std::int64_t> traced =
        it == lost_at.end() ? std::nullopt : std::optional<std::int64_t>(it->second - start);
    if (traced != t.lost_at) ck.fail("lost_at of " + t.id + " differs");
    const std::string final_mode = mode.count(t.id) != 0 ? mode[t.id] : "paired";
    if (final_mode != t.mode) ck.fail("mode of " + t.id + " differs");
  }
  return ck.problems;
}

}  // namespace blefind::report
