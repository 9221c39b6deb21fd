// Copyright 2026 The geogate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "geogate/plot.hpp"
#include "geogate/runner.hpp"

namespace {

struct Args {
  std::string config;
  std::string out = "results";
  bool plots = false;
  int threads = 0;
};

int resolve_threads(int flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("GEOGATE_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
    throw geogate::ConfigError(std::string("GEOGATE_THREADS must be a positive integer, got '") + env + "'");
  }
  return 1;
}

void report_error(const char* category, const std::string& message) {
  nlohmann::json j{{"error", category}, {"message", message}};
  std::cerr << j.dump() << "\n";
}

int run(geogate::ScenarioKind kind, const Args& a) {
  try {
    const geogate::Scenario s = geogate::parse_config(a.config, kind);
    geogate::RunOptions opt;
    opt.threads = resolve_threads(a.threads);
    const geogate::ResultBundle b = geogate::run_scenario(s, opt);
    for (const auto& p : geogate::emit_csv(b, a.out)) std::cout << p.string() << "\n";
    if (a.plots) {
      for (const auto& p : geogate::emit_plot(b, a.out)) std::cout << p.string() << "\n";
    }
    return 0;
  } catch (const geogate::Error& e) {
    report_error(e.category(), std::string(geogate::kind_name(kind)) + " " + a.config + ": " + e.what());
    return e.exit_code();
  } catch (const std::exception& e) {
    report_error("internal", e.what());
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geometric gate synthesis and device-level simulation"};
  app.set_version_flag("--version", std::string("geogate ") + geogate::kVersion);
  app.require_subcommand(1);

  Args args;
  geogate::ScenarioKind chosen = geogate::ScenarioKind::kSynth;
  const std::pair<geogate::ScenarioKind, const char*> commands[] = {
      {geogate::ScenarioKind::kSynth, "Path parameters, pulse areas and gate times"},
      {geogate::ScenarioKind::kSimulate, "Two-level propagation against the ideal gates"},
      {geogate::ScenarioKind::kScan, "Control-error robustness scans"},
      {geogate::ScenarioKind::kMaster, "Device model with the master equation, optional sweeps"},
      {geogate::ScenarioKind::kReport, "Summary table of every pipeline without sweeps"},
  };
  for (const auto& [kind, help] : commands) {
    CLI::App* sub = app.add_subcommand(geogate::kind_name(kind), help);
    sub->add_option("--config", args.config, "Scenario JSON file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", args.out, "Output directory")->capture_default_str();
    sub->add_flag("--plots", args.plots, "Also write SVG plots");
    sub->add_option("--threads", args.threads, "Worker threads (falls back to GEOGATE_THREADS)")
        ->check(CLI::PositiveNumber);
    sub->callback([&chosen, kind = kind] { chosen = kind; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() != 0) {
      report_error("usage", e.what());
      return app.exit(e) == 0 ? 0 : 9;
    }
    return app.exit(e);
  }
  return run(chosen, args);
}
