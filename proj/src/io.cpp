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

#include "nbell/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nbell {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
  return {buf, res.ptr};
}

double parse_double(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  }
  return v;
}

std::filesystem::path with_suffix(const std::filesystem::path& stem, std::string_view suffix) {
  std::filesystem::path p = stem;
  p += std::string(suffix);
  return p;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  return out;
}

void check_written(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string* find(const KeyValues& kv, std::string_view key) {
  for (const auto& [k, v] : kv) {
    if (k == key) return &v;
  }
  return nullptr;
}

const std::string& require(const KeyValues& kv, std::string_view key) {
  const std::string* v = find(kv, key);
  if (!v) throw std::runtime_error("missing metadata key: " + std::string(key));
  return *v;
}

KeyValues config_echo(const ExperimentConfig& c) {
  return {{"max_rate", format_double(c.max_rate)},
          {"measure_time", format_double(c.measure_time)},
          {"visibility", format_double(c.visibility)},
          {"theta", format_double(c.theta)},
          {"dyn_offset", format_double(c.dyn_offset)},
          {"seed", std::to_string(c.seed)}};
}

ExperimentConfig config_from(const KeyValues& kv) {
  ExperimentConfig c;
  c.max_rate = parse_double(require(kv, "max_rate"));
  c.measure_time = parse_double(require(kv, "measure_time"));
  c.visibility = parse_double(require(kv, "visibility"));
  c.theta = parse_double(require(kv, "theta"));
  c.dyn_offset = parse_double(require(kv, "dyn_offset"));
  c.seed = std::stoull(require(kv, "seed"));
  return c;
}

template <class T>
void write_two_column(const std::filesystem::path& path, std::string_view header,
                      const std::vector<double>& x, const std::vector<T>& y) {
  auto out = open_out(path);
  out << header << '\n';
  for (std::size_t i = 0; i < x.size(); ++i) out << format_double(x[i]) << ',' << y[i] << '\n';
  check_written(out, path);
}

}  // namespace

KeyValues parse_key_values(std::string_view text) {
  KeyValues kv;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    std::string key = trim(std::string_view(t).substr(0, eq));
    if (key.empty()) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": empty key");
    }
    kv.emplace_back(std::move(key), trim(std::string_view(t).substr(eq + 1)));
  }
  return kv;
}

void write_key_values(const std::filesystem::path& path, const KeyValues& kv) {
  auto out = open_out(path);
  for (const auto& [k, v] : kv) out << k << " = " << v << '\n';
  check_written(out, path);
}

KeyValues read_key_values(const std::filesystem::path& path) {
  return parse_key_values(slurp(path));
}

void write_interferogram(const std::filesystem::path& stem, const Interferogram& gram,
                         const ExperimentConfig& config) {
  if (gram.chi_values.size() != gram.counts.size()) {
    throw std::invalid_argument("write_interferogram: length mismatch");
  }
  write_two_column(with_suffix(stem, ".csv"), "chi_rad,counts", gram.chi_values, gram.counts);
  KeyValues meta{{"record", "interferogram"},
                 {"delta", format_double(gram.delta)},
                 {"gamma", format_double(gram.gamma)},
                 {"flipper_on", gram.flipper_on ? "true" : "false"}};
  for (auto& e : config_echo(config)) meta.push_back(std::move(e));
  write_key_values(with_suffix(stem, ".meta"), meta);
}

InterferogramRecord read_interferogram(const std::filesystem::path& stem) {
  InterferogramRecord rec;
  const KeyValues meta = read_key_values(with_suffix(stem, ".meta"));
  rec.gram.delta = parse_double(require(meta, "delta"));
  rec.gram.gamma = parse_double(require(meta, "gamma"));
  const std::string& flip = require(meta, "flipper_on");
  if (flip != "true" && flip != "false") throw std::runtime_error("flipper_on must be true/false");
  rec.gram.flipper_on = flip == "true";
  rec.config = config_from(meta);

  std::istringstream csv(slurp(with_suffix(stem, ".csv")));
  std::string line;
  if (!std::getline(csv, line) || trim(line) != "chi_rad,counts") {
    throw std::runtime_error("interferogram csv: bad header");
  }
  while (std::getline(csv, line)) {
    if (trim(line).empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::runtime_error("interferogram csv: bad row");
    rec.gram.chi_values.push_back(parse_double(std::string_view(line).substr(0, comma)));
    const std::string count = trim(std::string_view(line).substr(comma + 1));
    std::int64_t n = 0;
    const auto res = std::from_chars(count.data(), count.data() + count.size(), n);
    if (res.ec != std::errc{} || res.ptr != count.data() + count.size() || n < 0) {
      throw std::runtime_error("interferogram csv: bad count '" + count + "'");
    }
    rec.gram.counts.push_back(n);
  }
  return rec;
}

void write_beam_block(const std::filesystem::path& stem, const BeamBlockScan& scan,
                      const ExperimentConfig& config) {
  write_two_column(with_suffix(stem, ".csv"), "delta_rad,counts", scan.delta_values, scan.counts);
  KeyValues meta{{"record", "beam_block"},
                 {"gamma", format_double(scan.gamma)},
                 {"blocked_path", scan.blocked_path == PathBranch::I ? "I" : "II"}};
  for (auto& e : config_echo(config)) meta.push_back(std::move(e));
  write_key_values(with_suffix(stem, ".meta"), meta);
}

void write_scan_results(const std::filesystem::path& path, const std::vector<ScanResult>& rows) {
  auto out = open_out(path);
  const auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : ""; };
  out << "gamma_rad,beta1_rad,beta1p_rad,alpha2p_rad,s,sigma_s,method\n";
  for (const ScanResult& r : rows) {
    out << format_double(r.gamma) << ',' << opt(r.beta1) << ',' << opt(r.beta1_p) << ','
        << opt(r.alpha2_p) << ',' << format_double(r.s) << ',' << format_double(r.sigma_s) << ','
        << to_string(r.method) << '\n';
  }
  check_written(out, path);
}

}  // namespace nbell
