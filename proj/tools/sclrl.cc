// Copyright 2026 The sclrl Authors.
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

// sclrl: contrastive subgraph link representation pipeline driver.
//
//   sclrl <prepare|train|embed|evaluate|heuristics|all> --config run.cfg
//         [--seed N] [--workers N] [--set key=value ...]

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sclrl/errors.h"
#include "sclrl/pipeline.h"

int main(int argc, char** argv) {
  CLI::App app{"Subgraph contrastive link representation learning"};
  app.require_subcommand(1, 1);

  std::string config_path;
  long long seed = -1;
  int workers = 0;
  std::vector<std::string> overrides;

  for (const char* name :
       {"prepare", "train", "embed", "evaluate", "heuristics", "all"}) {
    CLI::App* sub = app.add_subcommand(name, std::string("run the ") + name +
                                                 " stage");
    sub->add_option("--config,-c", config_path, "run config file")->required();
    sub->add_option("--seed", seed, "override the config seed")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--workers", workers, "worker threads (1 = reproducible)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--set", overrides, "override a config key, key=value");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  sclrl::Stage stage = sclrl::parse_stage(app.get_subcommands().front()->get_name());
  sclrl::RunConfig cfg;
  try {
    cfg = sclrl::RunConfig::load(config_path);
    for (const std::string& kv : overrides) {
      auto eq = kv.find('=');
      if (eq == std::string::npos)
        throw sclrl::ConfigError("--set expects key=value, got '" + kv + "'");
      cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
    if (workers > 0) cfg.workers = workers;
  } catch (const sclrl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  }
  return sclrl::run_command(stage, cfg, std::cout, std::cerr);
}
