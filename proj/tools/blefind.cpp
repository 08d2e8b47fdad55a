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


// blefind: run, validate or trace a scenario file.
//
// Exit codes: 0 ok, 1 usage, 2 scenario did not parse, 3 I/O failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "blefind/cli_report.hpp"

namespace {

constexpr int kUsage = 1;
constexpr int kParse = 2;
constexpr int kIo = 3;

struct Loaded {
  int code = 0;
  blefind::report::Scenario scenario;
};

Loaded load(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) {
    std::cerr << "blefind: cannot read " << file << "\n";
    return {kIo, {}};
  }
  std::ostringstream text;
  text << in.rdbuf();
  auto parsed = blefind::report::parse_scenario(text.str());
  if (!parsed) {
    for (const auto& e : parsed.error()) std::cerr << file << ": " << e.to_string() << "\n";
    return {kParse, {}};
  }
  return {0, std::move(*parsed)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulate offline finding networks and attacks on them"};
  app.require_subcommand(1);

  std::string file;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::string format = "json";

  auto* run = app.add_subcommand("run", "Run a scenario and write its report");
  run->add_option("scenario", file, "Scenario file")->required();
  run->add_option("--seed", seed, "Override the scenario seed");
  run->add_option("--out", out_dir, "Report directory (default $BLEFIND_OUT_DIR or .)");
  run->add_option("--format", format, "json, csv or text")
      ->check(CLI::IsMember({"json", "csv", "text"}));

  auto* validate = app.add_subcommand("validate", "Check a scenario file and report every problem");
  validate->add_option("scenario", file, "Scenario file")->required();

  auto* trace = app.add_subcommand("trace", "Run a scenario and print its event log");
  trace->add_option("scenario", file, "Scenario file")->required();
  trace->add_option("--seed", seed, "Override the scenario seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  const Loaded l = load(file);
  if (l.code != 0) return l.code;

  if (*validate) {
    std::cout << file << ": ok (" << l.scenario.trackers.size() << " trackers, "
              << l.scenario.helpers.size() << " helpers, " << l.scenario.attacks.size()
              << " attacks)\n";
    return 0;
  }

  blefind::report::RunOptions opts;
  opts.seed = seed;
  opts.keep_trace = static_cast<bool>(*trace);
  const auto result = blefind::report::run_scenario(l.scenario, opts);

  if (*trace) {
    for (const auto& line : result.trace) std::cout << line << "\n";
    std::cout.flush();
    return std::cout ? 0 : kIo;
  }

  if (out_dir.empty()) {
    const char* env = std::getenv("BLEFIND_OUT_DIR");
    out_dir = env != nullptr && *env != '\0' ? env : ".";
  }
  const auto f = blefind::report::parse_format(format);
  const auto written = blefind::report::emit_report(result.metrics, *f, out_dir);
  if (!written) {
    std::cerr << "blefind: " << written.error() << "\n";
    return kIo;
  }
  std::cout << *written << "\n";
  return 0;
}
