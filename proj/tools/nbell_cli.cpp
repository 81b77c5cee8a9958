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

// nbell_cli: runs one scenario and writes its CSV artifacts plus manifest.txt.
//
//   nbell_cli <kind> [--config FILE] [--set key=value]... [--seed N] [--out DIR]
//   nbell_cli replay MANIFEST [--out DIR]
//
// Exit codes: 0 success, 1 usage, 2 invalid configuration, 3 I/O or runtime failure.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "nbell/errors.hpp"
#include "nbell/io.hpp"
#include "nbell/scenario.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct Options {
  std::string config_file;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
  std::string manifest;
};

nbell::KeyValues collect(const Options& opt) {
  nbell::KeyValues kv;
  if (!opt.config_file.empty()) kv = nbell::read_key_values(opt.config_file);
  for (const auto& s : opt.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw nbell::ConfigError(s, "--set expects key=value");
    }
    auto parsed = nbell::parse_key_values(s.substr(0, eq) + " = " + s.substr(eq + 1));
    for (auto& [k, v] : parsed) {
      std::erase_if(kv, [&](const auto& e) { return e.first == k; });
      kv.emplace_back(std::move(k), std::move(v));
    }
  }
  if (opt.seed) {
    std::erase_if(kv, [](const auto& e) { return e.first == "seed"; });
    kv.emplace_back("seed", std::to_string(*opt.seed));
  }
  return kv;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Neutron path/spin Bell-inequality simulator"};
  app.require_subcommand(1);
  Options opt;

  const std::vector<std::string> kinds{"analytic",   "surface",    "simulate",
                                       "beam-block", "scan-polar", "scan-azimuthal"};
  for (const auto& name : kinds) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", opt.config_file, "key = value configuration file")
        ->check(CLI::ExistingFile);
    sub->add_option("--set", opt.sets, "override one key, e.g. --set gamma=90deg");
    sub->add_option("--seed", opt.seed, "RNG seed (default 0)");
    sub->add_option("--out", opt.out, "output directory");
  }
  auto* replay = app.add_subcommand("replay", "re-run a scenario from its manifest.txt");
  replay->add_option("manifest", opt.manifest)->required()->check(CLI::ExistingFile);
  replay->add_option("--out", opt.out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    nbell::Scenario scenario;
    if (replay->parsed()) {
      scenario = nbell::scenario_from_manifest(nbell::read_key_values(opt.manifest));
    } else {
      const auto* sub = app.get_subcommands().front();
      const auto kind = nbell::parse_scenario_kind(sub->get_name());
      scenario = nbell::Scenario::from_key_values(*kind, collect(opt));
    }
    nbell::run_scenario(scenario, opt.out);
  } catch (const nbell::ConfigError& e) {
    std::cerr << "nbell_cli: invalid configuration: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "nbell_cli: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
