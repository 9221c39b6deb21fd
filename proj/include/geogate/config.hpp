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

#pragma once

#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "geogate/lindblad.hpp"
#include "geogate/robustness.hpp"
#include "json.hpp"

namespace geogate {

enum class ScenarioKind { kSynth, kSimulate, kScan, kMaster, kReport };

inline ScenarioKind parse_kind(const std::string& s) {
  if (s == "synth") return ScenarioKind::kSynth;
  if (s == "simulate") return ScenarioKind::kSimulate;
  if (s == "scan") return ScenarioKind::kScan;
  if (s == "master") return ScenarioKind::kMaster;
  if (s == "report") return ScenarioKind::kReport;
  throw ConfigError("unknown scenario kind '" + s + "'");
}

inline const char* kind_name(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::kSynth: return "synth";
    case ScenarioKind::kSimulate: return "simulate";
    case ScenarioKind::kScan: return "scan";
    case ScenarioKind::kMaster: return "master";
    case ScenarioKind::kReport: return "report";
  }
  return "?";
}

struct GridSpec {
  double min = 0.0;
  double max = 0.0;
  int points = 1;

  std::vector<double> values() const { return linspace(min, max, points); }
};

/// Device-level computations run by `master` and `report`.
enum class Target { kSingle, kCp };

struct Scenario {
  ScenarioKind kind = ScenarioKind::kSynth;
  std::string name;
  std::vector<Gate> gates{Gate::kH, Gate::kS, Gate::kT};
  std::vector<Scheme> schemes{Scheme::kGeometric, Scheme::kDynamical};
  AmplitudeProfile profile{};
  GridSpec epsilon{-0.1, 0.1, 41};
  GridSpec eta{-0.1, 0.1, 41};
  FidelityMode fidelity_mode = FidelityMode::kMagnitude;
  DeviceParams device{};
  double beta1 = 2.1;
  double beta2 = 1.2;
  BetaMode beta_mode = BetaMode::kPinned;
  bool continuous_phase = true;
  bool calibrate = true;
  double zeta = kPi / 2.0;
  double chi2 = 0.56 * kPi;
  NoiseParams noise{};
  MasterOptions master{};
  std::vector<Target> targets{Target::kSingle, Target::kCp};
  std::optional<GridSpec> kappa_sweep;   // rad/us after conversion
  std::optional<GridSpec> delta1_sweep;  // rad/us after conversion
  std::optional<GridSpec> delta2_sweep;  // rad/us after conversion
  std::string source;                    // canonical JSON text of the parsed config
};

namespace detail {

using json = nlohmann::json;

inline void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [k, v] : obj.items()) {
    if (!keys.count(k)) throw ConfigError(where + ": unknown key '" + k + "'");
  }
}

inline double number(const json& obj, const std::string& key, const std::string& where, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(where + "." + key + ": non-finite value");
  return x;
}

inline int integer(const json& obj, const std::string& key, const std::string& where, int fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
  return v.get<int>();
}

inline bool boolean(const json& obj, const std::string& key, const std::string& where, bool fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_boolean()) throw ConfigError(where + "." + key + ": expected true or false");
  return obj.at(key).get<bool>();
}

inline std::string text(const json& obj, const std::string& key, const std::string& where, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_string()) throw ConfigError(where + "." + key + ": expected a string");
  return obj.at(key).get<std::string>();
}

/// Frequency in MHz (omega / 2 pi), returned in rad/us.
inline double megahertz(const json& obj, const std::string& key, const std::string& where, double fallback_rad) {
  return obj.contains(key) ? mhz(number(obj, key, where, 0.0)) : fallback_rad;
}

inline double nonnegative_kilohertz(const json& obj, const std::string& key, const std::string& where, double fallback_rad) {
  if (!obj.contains(key)) return fallback_rad;
  const double v = number(obj, key, where, 0.0);
  if (v < 0.0) throw ConfigError(where + "." + key + ": rates must be >= 0");
  return khz(v);
}

inline GridSpec grid(const json& obj, const std::string& where, GridSpec fallback, double unit = 1.0) {
  reject_unknown(obj, where, {"min", "max", "points"});
  GridSpec g;
  g.min = number(obj, "min", where, fallback.min / unit) * unit;
  g.max = number(obj, "max", where, fallback.max / unit) * unit;
  g.points = integer(obj, "points", where, fallback.points);
  if (g.points < 1) throw ConfigError(where + ".points: must be >= 1");
  if (g.points > 1 && !(g.max > g.min)) throw ConfigError(where + ": max must exceed min");
  return g;
}

template <typename T, typename Parse>
std::vector<T> one_or_many(const json& root, const char* single, const char* many, std::vector<T> fallback, Parse parse) {
  if (root.contains(single) && root.contains(many)) {
    throw ConfigError(std::string("'") + single + "' and '" + many + "' are mutually exclusive");
  }
  auto conv = [&](const json& v, const std::string& where) {
    if (!v.is_string()) throw ConfigError(where + ": expected a string");
    try {
      return parse(v.get<std::string>());
    } catch (const InvalidArgument& e) {
      throw ConfigError(where + ": " + e.what());
    }
  };
  if (root.contains(single)) return {conv(root.at(single), single)};
  if (root.contains(many)) {
    const json& arr = root.at(many);
    if (!arr.is_array() || arr.empty()) throw ConfigError(std::string(many) + ": expected a nonempty array");
    std::vector<T> out;
    for (std::size_t k = 0; k < arr.size(); ++k) out.push_back(conv(arr[k], std::string(many) + "[" + std::to_string(k) + "]"));
    return out;
  }
  return fallback;
}

}  // namespace detail

/// Parses and validates a scenario from JSON text; `origin` labels errors.
/// `expected` supplies the kind when the config omits it and must match it
/// otherwise.
inline Scenario parse_config_text(const std::string& content, const std::string& origin = "<config>",
                                  std::optional<ScenarioKind> expected = std::nullopt) {
  using detail::json;
  json root;
  try {
    root = json::parse(content);
  } catch (const json::parse_error& e) {
    throw ConfigError(origin + ": malformed JSON: " + e.what());
  }
  Scenario s;
  try {
    detail::reject_unknown(root, origin,
                           {"kind", "name", "gate", "gates", "scheme", "schemes", "pulse", "scan", "device", "modulation",
                            "cp", "noise", "master", "targets", "sweeps"});
    if (root.contains("kind")) {
      s.kind = parse_kind(detail::text(root, "kind", origin, ""));
      if (expected && *expected != s.kind) {
        throw ConfigError(origin + ": config kind '" + kind_name(s.kind) + "' does not match subcommand '" +
                          kind_name(*expected) + "'");
      }
    } else if (expected) {
      s.kind = *expected;
    } else {
      throw ConfigError(origin + ": missing 'kind'");
    }
    s.name = detail::text(root, "name", origin, kind_name(s.kind));
    if (s.name.empty() || s.name.find_first_of("/\\") != std::string::npos) {
      throw ConfigError(origin + ".name: must be a nonempty file stem");
    }
    s.gates = detail::one_or_many<Gate>(root, "gate", "gates", s.gates, [](const std::string& g) { return parse_gate(g); });
    s.schemes = detail::one_or_many<Scheme>(root, "scheme", "schemes", s.schemes,
                                            [](const std::string& v) { return parse_scheme(v); });

    if (root.contains("pulse")) {
      const json& p = root.at("pulse");
      detail::reject_unknown(p, "pulse", {"envelope", "amplitude"});
      const std::string env = detail::text(p, "envelope", "pulse", "square");
      if (env != "square" && env != "sine") throw ConfigError("pulse.envelope: expected 'square' or 'sine'");
      s.profile.envelope = env == "square" ? Envelope::kSquare : Envelope::kSine;
      s.profile.peak = detail::number(p, "amplitude", "pulse", s.profile.peak);
      if (!(s.profile.peak > 0.0)) throw ConfigError("pulse.amplitude: must be > 0");
    }

    if (root.contains("scan")) {
      const json& sc = root.at("scan");
      detail::reject_unknown(sc, "scan", {"epsilon", "eta", "fidelity"});
      if (sc.contains("epsilon")) s.epsilon = detail::grid(sc.at("epsilon"), "scan.epsilon", s.epsilon);
      if (sc.contains("eta")) s.eta = detail::grid(sc.at("eta"), "scan.eta", s.eta);
      try {
        s.fidelity_mode = parse_fidelity_mode(detail::text(sc, "fidelity", "scan", "magnitude"));
      } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("scan.fidelity: ") + e.what());
      }
    }

    if (root.contains("device")) {
      const json& d = root.at("device");
      const std::string w = "device";
      detail::reject_unknown(d, w,
                             {"g_1a_mhz", "g_a2_mhz", "delta1_mhz", "delta2_mhz", "alpha1_mhz", "alpha2_mhz",
                              "levels_transmon", "levels_resonator"});
      s.device.g_1a = detail::megahertz(d, "g_1a_mhz", w, s.device.g_1a);
      s.device.g_a2 = detail::megahertz(d, "g_a2_mhz", w, s.device.g_a2);
      s.device.delta1 = detail::megahertz(d, "delta1_mhz", w, s.device.delta1);
      s.device.delta2 = detail::megahertz(d, "delta2_mhz", w, s.device.delta2);
      s.device.alpha1 = detail::megahertz(d, "alpha1_mhz", w, s.device.alpha1);
      s.device.alpha2 = detail::megahertz(d, "alpha2_mhz", w, s.device.alpha2);
      s.device.levels_transmon = detail::integer(d, "levels_transmon", w, s.device.levels_transmon);
      s.device.levels_resonator = detail::integer(d, "levels_resonator", w, s.device.levels_resonator);
      try {
        s.device.validate();
      } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("device: ") + e.what());
      }
    }

    if (root.contains("modulation")) {
      const json& m = root.at("modulation");
      detail::reject_unknown(m, "modulation", {"beta1", "beta2", "beta_mode", "continuous_phase", "calibrate"});
      s.beta1 = detail::number(m, "beta1", "modulation", s.beta1);
      s.beta2 = detail::number(m, "beta2", "modulation", s.beta2);
      if (s.beta1 < 0.0 || s.beta2 < 0.0) throw ConfigError("modulation: beta must be >= 0");
      const std::string mode = detail::text(m, "beta_mode", "modulation", "pinned");
      if (mode != "pinned" && mode != "amplitude_match") {
        throw ConfigError("modulation.beta_mode: expected 'pinned' or 'amplitude_match'");
      }
      s.beta_mode = mode == "pinned" ? BetaMode::kPinned : BetaMode::kAmplitudeMatch;
      s.continuous_phase = detail::boolean(m, "continuous_phase", "modulation", s.continuous_phase);
      s.calibrate = detail::boolean(m, "calibrate", "modulation", s.calibrate);
    }

    if (root.contains("cp")) {
      const json& c = root.at("cp");
      detail::reject_unknown(c, "cp", {"zeta_over_pi", "chi2_over_pi"});
      s.zeta = kPi * detail::number(c, "zeta_over_pi", "cp", s.zeta / kPi);
      s.chi2 = kPi * detail::number(c, "chi2_over_pi", "cp", s.chi2 / kPi);
      if (!(s.zeta > 0.0 && s.zeta < kTwoPi)) throw ConfigError("cp.zeta_over_pi: must lie in (0, 2)");
      if (!(s.chi2 > 0.0 && s.chi2 < kPi)) throw ConfigError("cp.chi2_over_pi: must lie in (0, 1)");
    }

    if (root.contains("noise")) {
      const json& n = root.at("noise");
      const std::string w = "noise";
      detail::reject_unknown(n, w, {"kappa_minus_khz", "kappa_z_khz", "kappa_a_khz", "kappa_b_khz"});
      s.noise.kappa_minus = detail::nonnegative_kilohertz(n, "kappa_minus_khz", w, s.noise.kappa_minus);
      s.noise.kappa_z = detail::nonnegative_kilohertz(n, "kappa_z_khz", w, s.noise.kappa_z);
      s.noise.kappa_a = detail::nonnegative_kilohertz(n, "kappa_a_khz", w, s.noise.kappa_a);
      s.noise.kappa_b = detail::nonnegative_kilohertz(n, "kappa_b_khz", w, s.noise.kappa_b);
    }

    if (root.contains("master")) {
      const json& m = root.at("master");
      detail::reject_unknown(m, "master", {"phase_step", "theta_points"});
      s.master.phase_step = detail::number(m, "phase_step", "master", s.master.phase_step);
      s.master.theta_points = detail::integer(m, "theta_points", "master", s.master.theta_points);
      if (!(s.master.phase_step > 0.0)) throw ConfigError("master.phase_step: must be > 0");
      if (s.master.theta_points != 0 && s.master.theta_points < 3) throw ConfigError("master.theta_points: 0 or >= 3");
    }

    if (root.contains("targets")) {
      const json& t = root.at("targets");
      if (!t.is_array() || t.empty()) throw ConfigError("targets: expected a nonempty array");
      s.targets.clear();
      for (const auto& v : t) {
        const std::string name = v.is_string() ? v.get<std::string>() : "";
        if (name == "single") s.targets.push_back(Target::kSingle);
        else if (name == "cp") s.targets.push_back(Target::kCp);
        else throw ConfigError("targets: expected 'single' or 'cp'");
      }
    }

    if (root.contains("sweeps")) {
      const json& w = root.at("sweeps");
      detail::reject_unknown(w, "sweeps", {"kappa_khz", "delta1_mhz", "delta2_mhz"});
      if (w.contains("kappa_khz")) {
        s.kappa_sweep = detail::grid(w.at("kappa_khz"), "sweeps.kappa_khz", {}, khz(1.0));
        if (s.kappa_sweep->min < 0.0) throw ConfigError("sweeps.kappa_khz: rates must be >= 0");
      }
      if (w.contains("delta1_mhz")) s.delta1_sweep = detail::grid(w.at("delta1_mhz"), "sweeps.delta1_mhz", {}, mhz(1.0));
      if (w.contains("delta2_mhz")) s.delta2_sweep = detail::grid(w.at("delta2_mhz"), "sweeps.delta2_mhz", {}, mhz(1.0));
    }
  } catch (const json::exception& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  root["kind"] = kind_name(s.kind);
  s.source = root.dump();
  return s;
}

inline Scenario parse_config(const std::string& path, std::optional<ScenarioKind> expected = std::nullopt) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path, expected);
}

}  // namespace geogate
