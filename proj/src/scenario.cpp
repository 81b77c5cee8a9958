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

#include "nbell/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <string>

#include "nbell/analysis.hpp"
#include "nbell/angles.hpp"
#include "nbell/chsh.hpp"
#include "nbell/errors.hpp"
#include "nbell/rng.hpp"
#include "nbell/sinusoid_fit.hpp"

namespace nbell {

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::analytic:
      return "analytic";
    case ScenarioKind::surface:
      return "surface";
    case ScenarioKind::simulate:
      return "simulate";
    case ScenarioKind::beam_block:
      return "beam-block";
    case ScenarioKind::scan_polar:
      return "scan-polar";
    case ScenarioKind::scan_azimuthal:
      return "scan-azimuthal";
  }
  return "unknown";
}

std::optional<ScenarioKind> parse_scenario_kind(std::string_view name) {
  if (name == "analytic") return ScenarioKind::analytic;
  if (name == "surface") return ScenarioKind::surface;
  if (name == "simulate" || name == "simulate-interferogram") return ScenarioKind::simulate;
  if (name == "beam-block") return ScenarioKind::beam_block;
  if (name == "scan-polar" || name == "polar-scan") return ScenarioKind::scan_polar;
  if (name == "scan-azimuthal" || name == "azimuthal-scan") return ScenarioKind::scan_azimuthal;
  return std::nullopt;
}

namespace {

std::string_view strip(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view field, std::string_view text) {
  try {
    const double v = parse_double(text);
    if (!std::isfinite(v)) throw std::invalid_argument("not finite");
    return v;
  } catch (const std::invalid_argument&) {
    throw ConfigError(std::string(field), "expected a number, got '" + std::string(text) + "'");
  }
}

bool parse_bool(std::string_view field, std::string_view text) {
  const std::string_view t = strip(text);
  if (t == "true" || t == "on" || t == "yes" || t == "1") return true;
  if (t == "false" || t == "off" || t == "no" || t == "0") return false;
  throw ConfigError(std::string(field), "expected true/false, got '" + std::string(text) + "'");
}

std::uint64_t parse_uint(std::string_view field, std::string_view text) {
  const std::string_view t = strip(text);
  std::uint64_t v = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc{} || res.ptr != t.data() + t.size()) {
    throw ConfigError(std::string(field),
                      "expected a non-negative integer, got '" + std::string(text) + "'");
  }
  return v;
}

std::string angle_text(double rad) { return format_double(rad) + "rad"; }

std::string angle_list_text(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += angle_text(v[i]);
  }
  return s;
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

// Keys accepted per kind in addition to the experiment configuration and `kind`.
const std::set<std::string>& kind_keys(ScenarioKind kind) {
  static const std::set<std::string> analytic{"gammas"};
  static const std::set<std::string> surface{"gamma", "coarse_step", "refine_tol", "surface_step"};
  static const std::set<std::string> simulate{"gamma", "delta", "chi_points", "chi_periods",
                                              "flipper"};
  static const std::set<std::string> beam{"gamma", "deltas", "blocked_path"};
  static const std::set<std::string> polar{"gammas",          "deltas",          "chi_points",
                                           "chi_periods",     "exact",           "reference_phase",
                                           "reference_contrast", "reference_delta", "coarse_step",
                                           "refine_tol"};
  static const std::set<std::string> azimuthal{
      "gammas",          "chi_points",      "chi_periods", "exact",     "reference_phase",
      "reference_contrast", "reference_delta", "coarse_step", "refine_tol"};
  switch (kind) {
    case ScenarioKind::analytic:
      return analytic;
    case ScenarioKind::surface:
      return surface;
    case ScenarioKind::simulate:
      return simulate;
    case ScenarioKind::beam_block:
      return beam;
    case ScenarioKind::scan_polar:
      return polar;
    case ScenarioKind::scan_azimuthal:
      return azimuthal;
  }
  return analytic;
}


std::vector<double> full_circle_deltas() {
  std::vector<double> d;
  for (int i = 0; i < 16; ++i) d.push_back(i * kPi / 8.0);
  return d;
}

std::vector<double> analytic_gammas() {
  std::vector<double> g;
  for (int i = 0; i <= 24; ++i) g.push_back(i * kPi / 12.0);
  return g;
}

}  // namespace

double parse_angle(std::string_view field, std::string_view text) {
  std::string_view t = strip(text);
  double scale = 1.0;
  if (t.ends_with("deg")) {
    t.remove_suffix(3);
    scale = kPi / 180.0;
  } else if (t.ends_with("rad")) {
    t.remove_suffix(3);
  }
  return parse_number(field, strip(t)) * scale;
}

std::vector<double> parse_angle_list(std::string_view field, std::string_view text) {
  std::vector<double> out;
  std::string_view rest = strip(text);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    out.push_back(parse_angle(field, rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
    if (strip(rest).empty()) throw ConfigError(std::string(field), "trailing comma");
  }
  return out;
}

Scenario Scenario::from_key_values(ScenarioKind kind, const KeyValues& kv) {
  Scenario s;
  s.kind = kind;
  s.coarse_step = kDefaultCoarseStep;
  s.refine_tol = kDefaultRefineTol;
  s.surface_step = kPi / 36.0;
  switch (kind) {
    case ScenarioKind::analytic:
      s.gammas = analytic_gammas();
      break;
    case ScenarioKind::beam_block:
      s.deltas = full_circle_deltas();
      break;
    case ScenarioKind::scan_polar:
      s.gammas = default_gamma_list();
      s.deltas = default_delta_grid();
      break;
    case ScenarioKind::scan_azimuthal:
      s.gammas = default_gamma_list();
      break;
    default:
      break;
  }

  const auto& allowed = kind_keys(kind);
  std::set<std::string> seen;
  for (const auto& [key, value] : kv) {
    if (!seen.insert(key).second) throw ConfigError(key, "given more than once");
    if (key == "kind") {
      const auto k = parse_scenario_kind(strip(value));
      if (!k || *k != kind) {
        throw ConfigError("kind", "'" + value + "' does not match scenario '" +
                                      std::string(to_string(kind)) + "'");
      }
    } else if (key == "max_rate") {
      s.config.max_rate = parse_number(key, value);
    } else if (key == "measure_time") {
      s.config.measure_time = parse_number(key, value);
    } else if (key == "visibility") {
      s.config.visibility = parse_number(key, value);
    } else if (key == "theta") {
      s.config.theta = parse_angle(key, value);
    } else if (key == "dyn_offset") {
      s.config.dyn_offset = parse_angle(key, value);
    } else if (key == "seed") {
      s.config.seed = parse_uint(key, value);
    } else if (!allowed.contains(key)) {
      throw ConfigError(key, "unknown or not applicable to '" + std::string(to_string(kind)) + "'");
    } else if (key == "gammas") {
      s.gammas = parse_angle_list(key, value);
    } else if (key == "gamma") {
      s.gamma = parse_angle(key, value);
    } else if (key == "delta") {
      s.delta = parse_angle(key, value);
    } else if (key == "deltas") {
      s.deltas = parse_angle_list(key, value);
    } else if (key == "chi_points") {
      s.chi_points = parse_uint(key, value);
    } else if (key == "chi_periods") {
      s.chi_periods = parse_number(key, value);
    } else if (key == "flipper") {
      s.flipper_on = parse_bool(key, value);
    } else if (key == "blocked_path") {
      const std::string_view v = strip(value);
      if (v == "I") {
        s.blocked_path = PathBranch::I;
      } else if (v == "II") {
        s.blocked_path = PathBranch::II;
      } else {
        throw ConfigError(key, "expected I or II, got '" + value + "'");
      }
    } else if (key == "exact") {
      s.exact = parse_bool(key, value);
    } else if (key == "reference_phase") {
      s.reference_phase = parse_bool(key, value);
    } else if (key == "reference_contrast") {
      s.reference_contrast = parse_bool(key, value);
    } else if (key == "reference_delta") {
      s.reference_delta = parse_angle(key, value);
    } else if (key == "coarse_step") {
      s.coarse_step = parse_angle(key, value);
    } else if (key == "refine_tol") {
      s.refine_tol = parse_number(key, value);
    } else if (key == "surface_step") {
      s.surface_step = parse_angle(key, value);
    }
  }

  s.config.validate();
  if (allowed.contains("gamma") && kind != ScenarioKind::surface && !seen.contains("gamma")) {
    throw ConfigError("gamma", "required for '" + std::string(to_string(kind)) + "'");
  }
  if (kind == ScenarioKind::surface && !seen.contains("gamma")) {
    throw ConfigError("gamma", "required for 'surface'");
  }
  if (kind == ScenarioKind::simulate && !seen.contains("delta")) {
    throw ConfigError("delta", "required for 'simulate'");
  }
  if (allowed.contains("gammas") && s.gammas.empty()) {
    throw ConfigError("gammas", "must not be empty");
  }
  if (allowed.contains("deltas") && s.deltas.empty()) {
    throw ConfigError("deltas", "must not be empty");
  }
  if (allowed.contains("chi_points") && s.chi_points < 5) {
    throw ConfigError("chi_points", "at least 5 points are required");
  }
  if (allowed.contains("chi_periods") && !(s.chi_periods >= 1.0)) {
    throw ConfigError("chi_periods", "must be at least one period");
  }
  if (allowed.contains("coarse_step") && !(s.coarse_step > 0.0 && s.coarse_step <= kPi / 64.0)) {
    throw ConfigError("coarse_step", "must lie in (0, pi/64]");
  }
  if (allowed.contains("refine_tol") && !(s.refine_tol > 0.0 && s.refine_tol <= 1e-6)) {
    throw ConfigError("refine_tol", "must lie in (0, 1e-6]");
  }
  if (allowed.contains("surface_step") && !(s.surface_step > 0.0 && s.surface_step <= kPi / 4.0)) {
    throw ConfigError("surface_step", "must lie in (0, pi/4]");
  }
  return s;
}

KeyValues Scenario::to_key_values() const {
  KeyValues kv{{"kind", std::string(to_string(kind))},
               {"seed", std::to_string(config.seed)},
               {"max_rate", format_double(config.max_rate)},
               {"measure_time", format_double(config.measure_time)},
               {"visibility", format_double(config.visibility)},
               {"theta", angle_text(config.theta)},
               {"dyn_offset", angle_text(config.dyn_offset)}};
  const auto& keys = kind_keys(kind);
  const auto add = [&](const std::string& key, std::string value) {
    if (keys.contains(key)) kv.emplace_back(key, std::move(value));
  };
  add("gammas", angle_list_text(gammas));
  add("gamma", angle_text(gamma));
  add("delta", angle_text(delta));
  add("deltas", angle_list_text(deltas));
  add("chi_points", std::to_string(chi_points));
  add("chi_periods", format_double(chi_periods));
  add("flipper", bool_text(flipper_on));
  add("blocked_path", blocked_path == PathBranch::I ? "I" : "II");
  add("exact", bool_text(exact));
  add("reference_phase", bool_text(reference_phase));
  add("reference_contrast", bool_text(reference_contrast));
  add("reference_delta", angle_text(reference_delta));
  add("coarse_step", angle_text(coarse_step));
  add("refine_tol", format_double(refine_tol));
  add("surface_step", angle_text(surface_step));
  return kv;
}

Scenario scenario_from_manifest(const KeyValues& kv) {
  for (const auto& [k, v] : kv) {
    if (k == "kind") {
      const auto kind = parse_scenario_kind(strip(v));
      if (!kind) throw ConfigError("kind", "unknown scenario kind '" + v + "'");
      return Scenario::from_key_values(*kind, kv);
    }
  }
  throw ConfigError("kind", "missing");
}

namespace {

std::ofstream open_csv(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

ScanOptions scan_options(const Scenario& s) {
  ScanOptions o;
  o.chi_grid = default_chi_grid(s.chi_points, s.chi_periods);
  o.exact = s.exact;
  o.reference = {.contrast = s.reference_contrast, .phase = s.reference_phase};
  o.reference_delta = s.reference_delta;
  o.coarse_step = s.coarse_step;
  o.refine_tol = s.refine_tol;
  return o;
}

void run_analytic(const Scenario& s, const std::filesystem::path& dir) {
  const auto path = dir / "analytic.csv";
  auto out = open_csv(path);
  out << "gamma_rad,s_no_adjust,s_polar_max,s_azimuthal_max\n";
  for (double g : s.gammas) {
    out << format_double(g) << ',' << format_double(s_standard_angles(g)) << ','
        << format_double(s_polar_max(g)) << ',' << format_double(s_azimuthal(g, 0.0, 0.0, g))
        << '\n';
  }
  finish(out, path);
}

void run_surface(const Scenario& s, const std::filesystem::path& dir) {
  const auto n = static_cast<std::size_t>(std::llround(kTwoPi / s.surface_step));
  const double step = kTwoPi / static_cast<double>(n);
  {
    const auto path = dir / "surface.csv";
    auto out = open_csv(path);
    out << "beta1_rad,beta1p_rad,s\n";
    for (std::size_t i = 0; i < n; ++i) {
      const double b1 = -kPi + step * static_cast<double>(i);
      for (std::size_t j = 0; j < n; ++j) {
        const double b1p = -kPi + step * static_cast<double>(j);
        out << format_double(b1) << ',' << format_double(b1p) << ','
            << format_double(s_polar(kPi / 2.0, b1, b1p, s.gamma)) << '\n';
      }
    }
    finish(out, path);
  }
  const SurfaceMaximum best = grid_maximize_s(s.gamma, s.coarse_step, s.refine_tol);
  const PolarAngles principal = polar_optimal_angles(s.gamma);
  const auto path = dir / "surface_max.csv";
  auto out = open_csv(path);
  out << "gamma_rad,beta1_rad,beta1p_rad,s,method\n";
  out << format_double(s.gamma) << ',' << format_double(best.beta1) << ','
      << format_double(best.beta1_p) << ',' << format_double(best.s) << ",grid\n";
  out << format_double(s.gamma) << ',' << format_double(principal.beta1) << ','
      << format_double(wrap_pi(principal.beta1_p)) << ',' << format_double(s_polar_max(s.gamma))
      << ",analytic\n";
  finish(out, path);
}

void run_simulate(const Scenario& s, const std::filesystem::path& dir) {
  const auto chi = default_chi_grid(s.chi_points, s.chi_periods);
  Rng rng = make_rng(s.config.seed, {std::bit_cast<std::uint64_t>(s.gamma),
                                     std::bit_cast<std::uint64_t>(s.delta), s.flipper_on});
  const Interferogram gram = s.flipper_on ? simulate_interferogram(s.config, s.delta, s.gamma, chi, rng)
                                          : reference_run(s.config, s.delta, chi, rng);
  write_interferogram(dir / "interferogram", gram, s.config);

  const auto path = dir / "fit.csv";
  auto out = open_csv(path);
  out << "mean,amplitude,phase_rad,visibility,visibility_sigma,residual_chi2\n";
  try {
    const SinusoidFit f = fit_sinusoid(gram);
    out << format_double(f.mean) << ',' << format_double(f.amplitude) << ','
        << format_double(f.phase) << ',' << format_double(f.visibility) << ','
        << format_double(visibility_sigma(f)) << ',' << format_double(f.residual_chi2) << '\n';
  } catch (const FitError&) {
    // Grid too short for a fit; the raw interferogram is still written.
  }
  finish(out, path);
}

void run_beam_block(const Scenario& s, const std::filesystem::path& dir) {
  Rng rng = make_rng(s.config.seed, {std::bit_cast<std::uint64_t>(s.gamma),
                                     s.blocked_path == PathBranch::I ? 1u : 2u});
  const BeamBlockScan scan = simulate_beam_block(s.config, s.deltas, s.gamma, s.blocked_path, rng);
  write_beam_block(dir / "beam_block", scan, s.config);
}

}  // namespace

void run_scenario(const Scenario& scenario, const std::filesystem::path& output_dir) {
  scenario.config.validate();
  std::error_code ec;
  std::filesystem::create_directories(output_dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory: " + output_dir.string());

  switch (scenario.kind) {
    case ScenarioKind::analytic:
      run_analytic(scenario, output_dir);
      break;
    case ScenarioKind::surface:
      run_surface(scenario, output_dir);
      break;
    case ScenarioKind::simulate:
      run_simulate(scenario, output_dir);
      break;
    case ScenarioKind::beam_block:
      run_beam_block(scenario, output_dir);
      break;
    case ScenarioKind::scan_polar:
      write_scan_results(output_dir / "scan_polar.csv",
                         run_polar_scan(scenario.config, scenario.gammas, scenario.deltas,
                                        scan_options(scenario)));
      break;
    case ScenarioKind::scan_azimuthal:
      write_scan_results(output_dir / "scan_azimuthal.csv",
                         run_azimuthal_scan(scenario.config, scenario.gammas,
                                            scan_options(scenario)));
      break;
  }
  write_key_values(output_dir / "manifest.txt", scenario.to_key_values());
}

}  // namespace nbell
