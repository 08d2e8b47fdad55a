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


#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "blefind/cli_report.hpp"
#include "json.hpp"

namespace blefind::report {
namespace {

std::string scenario_text(const std::string& name) {
  std::ifstream in(std::string(BLEFIND_SCENARIO_DIR) + "/" + name + ".scn");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

Scenario load(const std::string& name) {
  auto s = parse_scenario(scenario_text(name));
  if (!s) {
    for (const auto& e : s.error()) ADD_FAILURE() << name << ": " << e.to_string();
    throw std::runtime_error("bundled scenario does not parse");
  }
  return *s;
}

const char* kMinimal = R"(scenario tiny
seed 4
duration 1200

[owners]
o lat=40.3 lon=-3.7
[trackers]
t lat=40.4168 lon=-3.7038 owner=o
[helpers]
h lat=40.41689 lon=-3.7038
)";

std::vector<ParseError> errors_of(const std::string& text) {
  const auto s = parse_scenario(text);
  return s ? std::vector<ParseError>{} : s.error();
}

bool has_error(const std::vector<ParseError>& errs, const std::string& field,
               const std::string& needle) {
  for (const auto& e : errs) {
    if (e.field == field && e.message.find(needle) != std::string::npos) return true;
  }
  return false;
}

TEST(ParseScenario, MinimalScenarioParses) {
  const auto s = parse_scenario(kMinimal);
  ASSERT_TRUE(s.has_value());
  EXPECT_EQ(s->name, "tiny");
  EXPECT_EQ(s->seed, 4u);
  EXPECT_EQ(s->duration_s, 1200);
  ASSERT_EQ(s->trackers.size(), 1u);
  EXPECT_EQ(s->trackers[0].owner, "o");
  EXPECT_EQ(s->trackers[0].kind, device::Architecture::kAirTag);
  EXPECT_EQ(s->helpers[0].scan_interval_s, 1);
  EXPECT_FALSE(s->helpers[0].dedupe);
  EXPECT_EQ(s->owners[0].poll_interval_s, 60);
}

TEST(ParseScenario, DanglingTargetIsNamed) {
  const auto errs = errors_of(std::string(kMinimal) +
                              "[attackers]\nm class=A2 lat=40.4 lon=-3.7\n"
                              "[attacks]\nat 5 capture attacker=m target=ghost\n");
  ASSERT_EQ(errs.size(), 1u);
  EXPECT_EQ(errs[0].line, 14);
  EXPECT_EQ(errs[0].field, "target");
  EXPECT_NE(errs[0].message.find("ghost"), std::string::npos);
}

TEST(ParseScenario, DuplicateIdsAcrossSections) {
  const auto errs = errors_of(std::string(kMinimal) + "[attackers]\nt class=A2 lat=1 lon=1\n");
  ASSERT_EQ(errs.size(), 1u);
  EXPECT_NE(errs[0].message.find("duplicate device id 't'"), std::string::npos);
}

TEST(ParseScenario, ReportsEveryErrorNotJustTheFirst) {
  const auto errs = errors_of("scenario x\nduration 10\nwat 3\n[trackers]\nt lat=99 lon=0\n"
                              "[attacks]\nat 50 move device=nobody lat=0 lon=0\n");
  EXPECT_EQ(errs.size(), 4u);
  EXPECT_TRUE(has_error(errs, "wat", "unknown key"));
  EXPECT_TRUE(has_error(errs, "lat", "latitude"));
  EXPECT_TRUE(has_error(errs, "at", "outside [0, 10]"));
  EXPECT_TRUE(has_error(errs, "device", "nobody"));
}

struct Rule {
  const char* name;
  std::string addition;
  const char* field;
  const char* needle;
};

// One scenario per validation rule; each must fail for that reason alone.
TEST(ParseScenario, ValidationMatrix) {
  const std::string atk = "[attackers]\nm class=A2 lat=40.4 lon=-3.7\n"
                          "net class=A3 lat=40.4 lon=-3.7\n";
  const std::vector<Rule> rules{
      {"unknown header key", "colour blue\n", "colour", "unknown key"},
      {"duplicate header key", "seed 5\n", "seed", "duplicate key"},
      {"unknown section", "[gadgets]\nx a=1\n", "gadgets", "unknown section"},
      {"unknown device key", "[helpers]\nh2 lat=1 lon=1 colour=red\n", "colour", "unknown key"},
      {"missing position", "[helpers]\nh2 lat=1\n", "lon", "missing required"},
      {"bad number", "[helpers]\nh2 lat=1 lon=1 scan=fast\n", "scan", "invalid positive"},
      {"nonpositive poll", "[owners]\no2 lat=1 lon=1 poll=0\n", "poll", "invalid positive"},
      {"bad flag", "[helpers]\nh2 lat=1 lon=1 dedupe=maybe\n", "dedupe", "yes or no"},
      {"duplicate device", "[helpers]\nh lat=1 lon=1\n", "id", "duplicate device id"},
      {"group member clash", "[helpers]\nh2 lat=1 lon=1 count=2\nh2-1 lat=1 lon=1\n", "id",
       "duplicate device id 'h2-1'"},
      {"unknown owner", "[trackers]\nt2 lat=1 lon=1 owner=zed\n", "owner", "zed"},
      {"unknown class", "[attackers]\nx class=A7 lat=1 lon=1\n", "class", "A7"},
      {"unknown host", "[attackers]\nx class=A1 host=zed\n", "host", "zed"},
      {"zone ends first", "[zones]\nz lat=1 lon=1 radius_m=5 from=100 to=50\n", "to", "end after"},
      {"zone past end", "[zones]\nz lat=1 lon=1 radius_m=5 from=0 to=5000\n", "to", "outside"},
      {"attack past end", atk + "[attacks]\nat 1300 capture attacker=m target=t\n", "at", "outside"},
      {"negative attack time", atk + "[attacks]\nat -1 capture attacker=m target=t\n", "at", "outside"},
      {"unknown verb", "[attacks]\nat 1 dance\n", "verb", "dance"},
      {"missing verb key", atk + "[attacks]\nat 1 spoof attacker=m\n", "duration", "missing"},
      {"unknown verb key", atk + "[attacks]\nat 1 capture attacker=m target=t x=1\n", "x", "unknown"},
      {"capture without radio", atk + "[attacks]\nat 1 capture attacker=net target=t\n", "class",
       "cannot capture"},
      {"broadcast without radio", atk + "[attacks]\nat 1 spoof attacker=net duration=5\n", "class",
       "cannot broadcast"},
      {"upload without network", atk + "[attacks]\nat 1 flood attacker=m count=5\n", "class",
       "cannot upload"},
      {"bad sweep", atk + "[attacks]\nat 1 spoof attacker=m duration=5 sweep=9-3\n", "sweep", "A-B"},
      {"bad bits", atk + "[attacks]\nat 1 sendmy attacker=m bits=10a secret=s\n", "bits", "0 and 1"},
      {"unknown bot", atk + "[attacks]\nat 1 botnet source=m bots=m,zz duration=5\n", "bots", "zz"},
      {"unknown helper", "[attacks]\nat 1 gps_spoof helper=zz lat=1 lon=1\n", "helper", "zz"},
      {"kind conflicts", "[trackers]\nt2 lat=1 lon=1 kind=smarttag-path\n", "kind", "conflicts"},
  };
  for (const auto& r : rules) {
    // Header lines must precede the first section.
    const bool header = r.addition.front() != '[';
    const auto errs = errors_of(header ? r.addition + kMinimal : kMinimal + r.addition);
    EXPECT_EQ(errs.size(), 1u) << r.name;
    EXPECT_TRUE(has_error(errs, r.field, r.needle)) << r.name << ": "
                                                    << (errs.empty() ? "" : errs[0].to_string());
  }
}

TEST(ParseScenario, BothArchitecturesNeedKinds) {
  std::string text = kMinimal;
  text.replace(text.find("duration"), 0, "architecture both\n");
  const auto errs = errors_of(text);
  ASSERT_EQ(errs.size(), 1u);
  EXPECT_EQ(errs[0].field, "kind");
}

TEST(ParseScenario, CountExpandsIntoAGroup) {
  const auto s = parse_scenario(std::string(kMinimal) +
                                "[attackers]\nbot class=A2 lat=40 lon=-3 count=3 spacing_m=500\n");
  ASSERT_TRUE(s.has_value());
  ASSERT_EQ(s->attackers.size(), 3u);
  EXPECT_EQ(s->attackers[2].id, "bot-2");
  EXPECT_NEAR(distance_m(s->attackers[0].position, s->attackers[2].position), 1000.0, 1.0);
  EXPECT_EQ(resolve_ids(*s, "bot,t"), (std::vector<std::string>{"bot-0", "bot-1", "bot-2", "t"}));
}

TEST(ParseScenario, SweepSpecs) {
  EXPECT_EQ(parse_sweep_spec("none")->size(), 0u);
  EXPECT_EQ(parse_sweep_spec("0-255")->size(), 256u);
  EXPECT_EQ(*parse_sweep_spec("3,7"), (std::vector<std::uint8_t>{3, 7}));
  EXPECT_FALSE(parse_sweep_spec("256").has_value());
  EXPECT_FALSE(parse_sweep_spec("").has_value());
}

TEST(ParseScenario, BundledScenariosParse) {
  for (const auto& entry : std::filesystem::directory_iterator(BLEFIND_SCENARIO_DIR)) {
    std::ifstream in(entry.path());
    std::ostringstream text;
    text << in.rdbuf();
    const auto s = parse_scenario(text.str());
    EXPECT_TRUE(s.has_value()) << entry.path();
    if (s) EXPECT_EQ(s->name + ".scn", entry.path().filename().string());
  }
}

TEST(RunScenario, BaselineEstimateWithinRange) {
  const Scenario s = load("baseline");
  const auto r = run_scenario(s);
  ASSERT_EQ(r.metrics.owners.size(), 1u);
  const auto& o = r.metrics.owners[0];
  ASSERT_TRUE(o.final_error_m.has_value());
  EXPECT_LE(*o.final_error_m, s.ble_range_m);
  EXPECT_EQ(o.polls, 60u);
  EXPECT_EQ(o.fix_clusters, 1u);
  EXPECT_EQ(r.metrics.trackers[0].lost_at, 900);
}

TEST(RunScenario, SameSeedSameReport) {
  const Scenario s = load("spoofing");
  const auto a = run_scenario(s);
  const auto b = run_scenario(s);
  EXPECT_EQ(a.metrics.trace_sha256, b.metrics.trace_sha256);
  EXPECT_EQ(to_json(a.metrics), to_json(b.metrics));
  RunOptions other;
  other.seed = s.seed + 1;
  EXPECT_NE(run_scenario(s, other).metrics.trace_sha256, a.metrics.trace_sha256);
}

TEST(RunScenario, SpoofingFlagsAlternation) {
  const auto r = run_scenario(load("spoofing"));
  EXPECT_GE(r.metrics.owners[0].alternations, 1u);
  EXPECT_EQ(r.metrics.owners[0].fix_clusters, 2u);
  const auto& spoof = r.metrics.attacks.back();
  EXPECT_EQ(spoof.verb, "spoof");
  EXPECT_EQ(spoof.status, "done");
  EXPECT_GT(spoof.uploads, 0u);
  EXPECT_EQ(spoof.accepted, spoof.uploads);
  EXPECT_NE(std::find(spoof.notes.begin(), spoof.notes.end(),
                      std::pair<std::string, std::string>{"estimate_alternation", "true"}),
            spoof.notes.end());
  const auto j = nlohmann::json::parse(to_json(r.metrics));
  EXPECT_TRUE(j["owners"][0]["estimate_alternation"].get<bool>());
}

TEST(RunScenario, SpoofWithoutCaptureIsMissed) {
  auto s = parse_scenario(std::string(kMinimal) +
                          "[attackers]\nm class=A2 lat=10 lon=10\n"
                          "[attacks]\nat 5 capture attacker=m target=t window=100\n"
                          "at 200 spoof attacker=m duration=10\n");
  ASSERT_TRUE(s.has_value());
  const auto r = run_scenario(*s);
  ASSERT_EQ(r.metrics.attacks.size(), 2u);
  EXPECT_EQ(r.metrics.attacks[0].status, "missed");
  EXPECT_EQ(r.metrics.attacks[1].status, "missed");
  EXPECT_EQ(r.metrics.attacks[1].frames, 0u);
}

TEST(Report, EmptyAttackListGivesZeroedCounters) {
  const auto r = run_scenario(*parse_scenario(kMinimal));
  const auto j = nlohmann::json::parse(to_json(r.metrics));
  EXPECT_TRUE(j["attacks"].empty());
  for (const char* k : {"directives", "frames", "uploads", "accepted", "rejected_signature",
                        "rejected_ip"}) {
    EXPECT_EQ(j["attack_totals"][k].get<int>(), 0) << k;
  }
  EXPECT_EQ(j["attack_totals"]["acceptance_rate"].get<double>(), 0.0);
}

TEST(Report, JsonRoundTripIsByteIdentical) {
  for (const char* name : {"baseline", "spoofing", "jamming", "sendmy", "smarttag-replay"}) {
    const std::string text = to_json(run_scenario(load(name)).metrics);
    EXPECT_EQ(nlohmann::ordered_json::parse(text).dump(2) + "\n", text) << name;
  }
}

TEST(Report, CsvHasOneRowPerPoll) {
  const auto r = run_scenario(load("spoofing"), {std::nullopt, true});
  const std::string csv = to_csv(r.metrics);
  const auto rows = std::count(csv.begin(), csv.end(), '\n') - 1;
  const auto polls = std::count_if(r.trace.begin(), r.trace.end(), [](const std::string& l) {
    return l.find("\tpoll\t") != std::string::npos;
  });
  EXPECT_EQ(rows, polls);
  EXPECT_EQ(static_cast<std::uint64_t>(rows), r.metrics.counts.polls);
}

TEST(Report, TextNamesTheScenario) {
  const auto r = run_scenario(*parse_scenario(kMinimal));
  const std::string t = to_text(r.metrics);
  EXPECT_EQ(t.rfind("scenario tiny", 0), 0u);
  EXPECT_NE(t.find(r.metrics.trace_sha256), std::string::npos);
}

TEST(Report, EmitWritesAndFailsCleanly) {
  const auto r = run_scenario(*parse_scenario(kMinimal));
  const auto dir = std::filesystem::temp_directory_path() / "blefind_emit_test";
  std::filesystem::remove_all(dir);
  for (const auto f : {ReportFormat::kJson, ReportFormat::kCsv, ReportFormat::kText}) {
    const auto path = emit_report(r.metrics, f, dir.string());
    ASSERT_TRUE(path.has_value()) << path.error();
    std::ifstream in(*path);
    std::ostringstream body;
    body << in.rdbuf();
    EXPECT_EQ(body.str(), render(r.metrics, f));
  }
  std::ofstream(dir / "blocker") << "x";
  EXPECT_FALSE(emit_report(r.metrics, ReportFormat::kJson, (dir / "blocker" / "sub").string()));
  std::filesystem::remove_all(dir);
  EXPECT_FALSE(parse_format("xml").has_value());
  EXPECT_STREQ(extension(*parse_format("text")), "txt");
}

TEST(Audit, EveryBundledScenarioMatchesItsTrace) {
  for (const char* name : {"baseline", "spoofing", "jamming", "gps-spoof-500km", "sendmy",
                           "smarttag-replay", "dos-smarttag-5k"}) {
    const auto r = run_scenario(load(name), {std::nullopt, true});
    const auto problems = audit_trace(r.trace, r.metrics);
    EXPECT_TRUE(problems.empty()) << name << ": " << problems.front();
  }
}

TEST(Audit, TamperedReportIsCaught) {
  auto r = run_scenario(load("spoofing"), {std::nullopt, true});
  auto m = r.metrics;
  ++m.counts.accepted;
  m.attacks.back().frames -= 1;
  m.owners[0].fix_clusters = 5;
  const auto problems = audit_trace(r.trace, m);
  EXPECT_EQ(problems.size(), 3u);
  r.trace.pop_back();
  EXPECT_FALSE(audit_trace(r.trace, r.metrics).empty());
}

TEST(Clusters, GreedyWithinRadius) {
  const GeoFix a{40.0, -3.0};
  EXPECT_EQ(count_clusters({}), 0u);
  EXPECT_EQ(count_clusters({a, offset_m(a, 50, 0), offset_m(a, 0, 99)}), 1u);
  EXPECT_EQ(count_clusters({a, offset_m(a, 150, 0), offset_m(a, 300, 0)}), 3u);
  // Joins the first seed in range, not the nearest.
  EXPECT_EQ(count_clusters({a, offset_m(a, 180, 0), offset_m(a, 90, 0)}), 2u);
}

}  // namespace
}  // namespace blefind::report
