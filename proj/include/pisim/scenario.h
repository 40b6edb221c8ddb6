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

// Scenario files and the commands the pisim tool runs on them.
//
// A scenario is a flat list of `key = value` lines; `#` starts a comment.
// Keys are dotted (scheme.n, scheme.phi.1, scheme.theta.3, sweep.steps, ...).
// Phases accept plain numbers or multiples of pi: `pi`, `-pi/2`, `1.5*pi`.

#ifndef PISIM_SCENARIO_H_
#define PISIM_SCENARIO_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pisim/analysis.h"
#include "pisim/errors.h"
#include "pisim/interferometer.h"

namespace pisim {

enum class Command : std::uint8_t { kRun, kSweep, kEntangle, kOracleCheck };

std::string ToString(Command c);
std::optional<Command> ParseCommand(std::string_view name);

enum ExitCode : int {
  kExitOk = 0,
  kExitInvalid = 1,
  kExitNumerical = 2,
  kExitIo = 3,
};

class ParseError : public Error {
 public:
  // line == 0 means the key is missing from the document.
  ParseError(std::string key, int line, const std::string& what);
  const std::string& key() const { return key_; }
  int line() const { return line_; }

 private:
  std::string key_;
  int line_;
};

struct SweepSpec {
  PhaseVariable variable;
  double start = 0.0;
  double stop = 0.0;
  int steps = 64;
};

struct EntangleSpec {
  std::vector<double> transmissions;
  PhaseVariable variable;
  int steps = 64;
  // Aligned particle whose transmission is stepped; 0 steps all of them.
  int particle = 0;
};

inline constexpr std::uint64_t kDefaultSeed = 20170327;
inline constexpr double kOracleTolerance = 1e-9;

struct OracleSpec {
  int n_max = 5;
  int m_max = 3;
  int cases = 100;
  double tolerance = kOracleTolerance;
};

inline constexpr double kRowSumTolerance = 1e-9;

struct Scenario {
  Command command = Command::kRun;
  SchemeConfig scheme;
  std::optional<SweepSpec> sweep;
  EntangleSpec entangle;
  OracleSpec oracle;
  // Psi+, Phi-, GHZ3, F1..F4.
  std::optional<std::string> target;
  std::optional<std::string> output_path;
  std::uint64_t seed = kDefaultSeed;
};

// Throws ParseError naming the offending key and line. `command` overrides
// (and must agree with) a `command` key in the document.
Scenario ParseScenario(std::string_view text,
                       std::optional<Command> command = std::nullopt);

// Parses a phase written as a number or a multiple of pi.
std::optional<double> ParsePhase(std::string_view text);

// Named target state on n detected particles. Throws ArgumentError if the
// name is unknown or does not fit n.
PureState TargetState(const std::string& name, int n);

// "%.12g", with negative zero printed as 0.
std::string FormatNumber(double value);

struct CommandOutput {
  std::string csv;
  // False when a numerical self-check failed (exit status 2).
  bool checks_passed = true;
  std::string message;
};

CommandOutput RunCommand(const Scenario& scenario);

// Runs the scenario and writes its CSV to output_path (stdout when unset).
// Returns an ExitCode; diagnostics go to `log`.
int Execute(const Scenario& scenario, std::ostream& log);

}  // namespace pisim

#endif  // PISIM_SCENARIO_H_
