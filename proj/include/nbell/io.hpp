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

// Plain-text artifacts: CSV tables and `key = value` records (UTF-8, LF line endings).
// Doubles are written in shortest round-trip form, so write → read is bit-exact.

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nbell/analysis.hpp"
#include "nbell/experiment.hpp"

namespace nbell {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

std::string format_double(double v);
double parse_double(std::string_view text);  // throws std::invalid_argument

void write_key_values(const std::filesystem::path& path, const KeyValues& kv);
KeyValues read_key_values(const std::filesystem::path& path);
KeyValues parse_key_values(std::string_view text);

/// Writes `<stem>.csv` (header `chi_rad,counts`) and the sidecar `<stem>.meta`.
void write_interferogram(const std::filesystem::path& stem, const Interferogram& gram,
                         const ExperimentConfig& config);

struct InterferogramRecord {
  Interferogram gram;
  ExperimentConfig config;
};

InterferogramRecord read_interferogram(const std::filesystem::path& stem);

/// Writes `<stem>.csv` (header `delta_rad,counts`) and the sidecar `<stem>.meta`.
void write_beam_block(const std::filesystem::path& stem, const BeamBlockScan& scan,
                      const ExperimentConfig& config);

void write_scan_results(const std::filesystem::path& path, const std::vector<ScanResult>& rows);

/// Appends `.csv` / `.meta` to a stem without treating dots in it as an extension.
std::filesystem::path with_suffix(const std::filesystem::path& stem, std::string_view suffix);

}  // namespace nbell
