// Copyright 2026 The pisim Authors
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

// pisim <command> --scenario <path> [--out <path>] [--seed <u64>]
//
// Exit status: 0 success, 1 parse/validation failure, 2 numerical check
// failure, 3 I/O failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "pisim/scenario.h"

namespace {

struct Options {
  std::string scenario;
  std::string out;
  std::uint64_t seed = 0;
  bool seed_given = false;
};

void AddCommand(CLI::App& app, const std::string& name, const std::string& help,
                Options& opts) {
  CLI::App* sub = app.add_subcommand(name, help);
  sub->add_option("--scenario", opts.scenario, "Scenario file")->required();
  sub->add_option("--out", opts.out, "Output CSV (overrides the scenario's output key)");
  sub->add_option("--seed", opts.seed, "64-bit seed for randomized checks");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-source path-identity interferometer simulator"};
  app.require_subcommand(1);
  Options opts;
  AddCommand(app, "run", "Coincidence probabilities for one configuration", opts);
  AddCommand(app, "sweep", "Interference pattern over a phase sweep", opts);
  AddCommand(app, "entangle", "Visibility, concurrence and fidelity vs transmission", opts);
  AddCommand(app, "oracle-check", "Compare simulation against the closed-form output", opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? pisim::kExitOk : pisim::kExitInvalid;
  }
  const std::string name = app.get_subcommands().front()->get_name();
  opts.seed_given = app.get_subcommands().front()->count("--seed") > 0;

  std::ifstream in(opts.scenario, std::ios::binary);
  if (!in) {
    std::cerr << "pisim: cannot read scenario '" << opts.scenario << "'\n";
    return pisim::kExitIo;
  }
  std::ostringstream text;
  text << in.rdbuf();

  pisim::Scenario scenario;
  try {
    scenario = pisim::ParseScenario(text.str(), pisim::ParseCommand(name));
  } catch (const pisim::Error& e) {
    std::cerr << "pisim: " << opts.scenario << ": " << e.what() << '\n';
    return pisim::kExitInvalid;
  }
  if (!opts.out.empty()) scenario.output_path = opts.out;
  if (opts.seed_given) scenario.seed = opts.seed;
  return pisim::Execute(scenario, std::cerr);
}
