// Copyright 2026 The nbell Authors
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

// Scenario description shared by the command-line front end and its manifests.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "nbell/experiment.hpp"
#include "nbell/io.hpp"

namespace nbell {

enum class ScenarioKind { analytic, surface, simulate, beam_block, scan_polar, scan_azimuthal };

std::string_view to_string(ScenarioKind kind);
/// Accepts the subcommand names and the long forms (e.g. "polar-scan").
std::optional<ScenarioKind> parse_scenario_kind(std::string_view name);

/// Angle value: a number with optional unit suffix `rad` (default) or `deg`.
double parse_angle(std::string_view field, std::string_view text);
std::vector<double> parse_angle_list(std::string_view field, std::string_view text);

struct Scenario {
  ScenarioKind kind = ScenarioKind::analytic;
  ExperimentConfig config;

  std::vector<double> gammas;
  double gamma = 0.0;
  double delta = 0.0;
  std::vector<double> deltas;
  std::size_t chi_points = 32;
  double chi_periods = 2.0;
  bool flipper_on = true;
  PathBranch blocked_path = PathBranch::II;
  bool exact = false;
  bool reference_phase = true;
  bool reference_contrast = false;
  double reference_delta = 0.0;
  double coarse_step = 0.0;
  double refine_tol = 0.0;
  double surface_step = 0.0;

  /// Fills defaults for `kind`, applies `kv`, validates. Keys that do not apply to the
  /// kind, unknown keys and malformed values raise ConfigError naming the key.
  static Scenario from_key_values(ScenarioKind kind, const KeyValues& kv);

  /// Manifest form: every parameter of the kind, including defaults and the seed.
  KeyValues to_key_values() const;
};

/// Reads a manifest (or config) file whose `kind` key selects the scenario.
Scenario scenario_from_manifest(const KeyValues& kv);

/// Writes the artifacts of `scenario` plus `manifest.txt` into `output_dir` (created if
/// missing). Throws ConfigError for invalid scenarios and std::runtime_error on I/O failure.
void run_scenario(const Scenario& scenario, const std::filesystem::path& output_dir);

}  // namespace nbell
