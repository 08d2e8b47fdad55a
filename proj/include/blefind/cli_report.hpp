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


// Scenario files in, metrics out.
//
// A scenario is a line-oriented text file. Header lines are `key value`;
// device sections hold `id key=value ...` entries; the [attacks] section
// holds `at <seconds> <verb> key=value ...` directives with times relative to
// the scenario start. `#` starts a comment.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "blefind/attack_harness.hpp"
#include "blefind/device_model.hpp"
#include "blefind/expected.hpp"
#include "blefind/network_sim.hpp"

namespace blefind::report {

struct ParseError {
  int line = 0;  // 0 when the problem is not tied to one line
  std::string field;
  std::string message;

  std::string to_string() const;
};

struct TrackerSpec {
  int line = 0;
  std::string id;
  device::Architecture kind = device::Architecture::kAirTag;
  GeoFix position;
  std::optional<std::string> owner;
};

struct HelperSpec {
  int line = 0;
  std::string id;
  GeoFix position;
  std::int64_t scan_interval_s = 1;
  bool dedupe = false;
};

struct OwnerSpec {
  int line = 0;
  std::string id;
  GeoFix position;
  std::int64_t poll_interval_s = 60;
};

struct AttackerSpec {
  int line = 0;
  std::string id;
  attack::Capabilities capabilities = 0;
  GeoFix position;
  double rate = 1.0;
  std::optional<std::string> host;  // helper an A1 attacker runs on
};

struct ZoneSpec {
  int line = 0;
  std::string id;
  GeoFix center;
  double radius_m = 0.0;
  std::int64_t from = 0;
  std::int64_t to = 0;
};

struct AttackSpec {
  int line = 0;
  std::int64_t at = 0;
  std::string verb;
  std::map<std::string, std::string> params;

  const std::string& get(const std::string& key) const { return params.at(key); }
  std::string get_or(const std::string& key, std::string fallback) const;
};

struct Scenario {
  std::string name;
  std::uint64_t seed = 0;
  std::int64_t start = 1683648000;
  std::int64_t duration_s = 0;
  double ble_range_m = 50.0;
  std::int64_t lost_threshold_s = 900;
  std::int64_t advertising_interval_s = 2;
  double ip_threshold_km = 25.0;
  /// "airtag-path", "smarttag-path" or "both".
  std::string architecture = "airtag-path";

  std::vector<TrackerSpec> trackers;
  std::vector<HelperSpec> helpers;
  std::vector<OwnerSpec> owners;
  std::vector<AttackerSpec> attackers;
  std::vector<ZoneSpec> zones;
  std::vector<AttackSpec> attacks;
  /// Replicated entries (`count=N`) expand to `<id>-0 .. <id>-(N-1)`; the
  /// bare id names the whole group.
  std::map<std::string, std::vector<std::string>> groups;
};

/// All validation problems, not just the first.
Expected<Scenario, std::vector<ParseError>> parse_scenario(std::string_view text);

/// "none", "A-B" or "a,b,c" over 0..255. "none" yields an empty list, which
/// means a verbatim replay.
std::optional<std::vector<std::uint8_t>> parse_sweep_spec(const std::string& text);

/// Comma list of ids where a group name stands for all its members.
std::vector<std::string> resolve_ids(const Scenario& s, const std::string& list);

struct OwnerMetrics {
  std::string owner;
  std::string tracker;
  std::uint64_t polls = 0;
  std::uint64_t fixes = 0;
  std::size_t fix_clusters = 0;
  std::uint64_t alternations = 0;
  /// Polls with an estimate within 100 m of the tracker, over polls with any
  /// estimate.
  double near_fraction = 0.0;
  std::optional<GeoFix> final_estimate;
  std::optional<double> final_error_m;
};

struct TrackerMetrics {
  std::string id;
  std::string kind;
  std::string mode;
  std::optional<std::int64_t> lost_at;  // relative to start
};

struct ErrorSample {
  std::int64_t time = 0;  // relative to start
  std::string owner;
  std::string tracker;
  std::size_t fixes = 0;
  std::optional<GeoFix> estimate;
  GeoFix truth;
  std::optional<double> error_m;
};

struct MetricsReport {
  std::string scenario;
  std::uint64_t seed = 0;
  std::string architecture;
  std::int64_t start = 0;  // unix seconds; other times are relative to it
  std::int64_t duration_s = 0;
  sim::Counters counts;
  attack::DosReport cost;
  std::vector<TrackerMetrics> trackers;
  std::vector<attack::AttackRecord> attacks;
  std::vector<OwnerMetrics> owners;
  std::vector<ErrorSample> location_error;
  std::uint64_t trace_events = 0;
  std::string trace_sha256;
};

struct RunOptions {
  std::optional<std::uint64_t> seed;  // overrides the scenario's
  bool keep_trace = false;
};

struct RunResult {
  MetricsReport metrics;
  std::vector<std::string> trace;  // empty unless keep_trace
  std::string cloud_dump;          // serialized cloud state at the end
};

/// Runs a validated scenario to its end.
RunResult run_scenario(const Scenario& s, const RunOptions& opts = {});

/// Greedy clustering: each fix joins the first cluster whose seed lies within
/// `radius_m`, else starts one.
std::size_t count_clusters(const std::vector<GeoFix>& fixes, double radius_m = 100.0);

enum class ReportFormat { kJson, kCsv, kText };

Expected<ReportFormat, std::string> parse_format(std::string_view name);
const char* extension(ReportFormat f);

std::string to_json(const MetricsReport& m);
std::string to_csv(const MetricsReport& m);
std::string to_text(const MetricsReport& m);
std::string render(const MetricsReport& m, ReportFormat f);

/// Writes `<dir>/<scenario>.<ext>` and returns the path, or an error message
/// if the destination cannot be written.
Expected<std::string, std::string> emit_report(const MetricsReport& m, ReportFormat f,
                                               const std::string& dir);

/// Recomputes the report's counters, costs, poll series and clusters from
/// trace lines alone. Returns one message per disagreement.
std::vector<std::string> audit_trace(const std::vector<std::string>& trace,
                                     const MetricsReport& m);

}  // namespace blefind::report
