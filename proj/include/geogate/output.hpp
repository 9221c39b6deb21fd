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

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "geogate/error.hpp"
#include "json.hpp"

namespace geogate {

/// Values on axis1 x axis2; one-dimensional data carries axis2 = {0}.
struct Grid {
  std::string name;
  std::string axis1_label;
  std::string axis2_label;
  std::vector<double> axis1;
  std::vector<double> axis2;
  Eigen::MatrixXd values;
};

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct LinePlot {
  std::string name;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
};

struct ResultBundle {
  std::string scenario;
  std::vector<std::pair<std::string, double>> scalars;
  std::vector<Grid> grids;
  std::vector<LinePlot> plots;
  nlohmann::ordered_json provenance = nlohmann::ordered_json::object();

  void add(std::string name, double value) { scalars.emplace_back(std::move(name), value); }
};

/// Twelve significant digits, locale independent.
inline std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline std::string scalars_csv(const std::vector<std::pair<std::string, double>>& rows) {
  std::string out = "name,value\n";
  for (const auto& [name, v] : rows) out += name + "," + format_number(v) + "\n";
  return out;
}

inline std::string grid_csv(const Grid& g) {
  std::string out = "axis1,axis2,value\n";
  for (std::size_t i = 0; i < g.axis1.size(); ++i) {
    for (std::size_t j = 0; j < g.axis2.size(); ++j) {
      out += format_number(g.axis1[i]) + "," + format_number(g.axis2[j]) + "," +
             format_number(g.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) + "\n";
    }
  }
  return out;
}

/// 64-bit FNV-1a, used as the config fingerprint.
inline std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << content;
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

inline void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw IoError("cannot create output directory '" + dir.string() + "'");
}

/// Writes <scenario>_scalars.csv, one CSV per grid and the provenance JSON;
/// returns the written paths in order.
inline std::vector<std::filesystem::path> emit_csv(const ResultBundle& b, const std::filesystem::path& dir) {
  ensure_directory(dir);
  std::vector<std::filesystem::path> written;
  const auto scalars = dir / (b.scenario + "_scalars.csv");
  write_text(scalars, scalars_csv(b.scalars));
  written.push_back(scalars);
  for (const auto& g : b.grids) {
    const auto p = dir / (b.scenario + "_" + g.name + ".csv");
    write_text(p, grid_csv(g));
    written.push_back(p);
  }
  const auto prov = dir / (b.scenario + "_provenance.json");
  write_text(prov, b.provenance.dump(2) + "\n");
  written.push_back(prov);
  return written;
}

}  // namespace geogate
