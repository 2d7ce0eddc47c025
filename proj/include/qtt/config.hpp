// Copyright 2026 The qttsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <map>

#include "qtt/models.hpp"

// Declarative run configuration: a sectioned key-value text file with a
// whitelisted drive-expression grammar (sums of A*cos(w*t+p) and
// A*sin(w*t+p) terms). Unknown keys are rejected with the line number.

namespace qtt::config {

struct DriveTerm {
  bool is_sin = false;
  double amplitude = 0.0;
  double omega = 0.0;
  double phase = 0.0;
};

struct DriveSpec {
  std::vector<DriveTerm> terms;
  std::string source;

  double operator()(double t) const;
  bool empty() const { return terms.empty(); }
};

/// Parses "0.02*cos(1.41*t) + 0.0628*sin(2*t+0.5)"; throws on anything
/// outside the grammar.
DriveSpec parse_drive(const std::string& text);

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SimulationConfig {
  std::string model_kind;  // kerr | cat | transmon
  models::KerrParams kerr;
  models::CatParams cat;
  models::TransmonParams transmon;
  DriveSpec kerr_drive;        // optional override of the Kerr two-tone drive
  size_t transmon_initial = 0;  // dressed |i_t, 0> to start from

  std::string integrator = "rk4";  // kerr: rk4|cn|tdvp_plain|tdvp_magnus; open: order1|order2
  double h_t = 1e-3;
  double t_final = 1.0;
  purified::CompressionBudget budget = purified::CompressionBudget::uniform(1e-8);

  std::vector<std::string> observables;  // model-defined names; empty = telemetry only
  std::vector<double> snapshot_times;
  std::string out_dir = ".";
  std::uint64_t seed = 20260501;

  // every resolved key, for the run manifest
  std::map<std::string, std::string> resolved;
};

SimulationConfig parse_config_text(const std::string& text, const std::string& filename);
SimulationConfig parse_config_file(const std::string& path);

}  // namespace qtt::config
