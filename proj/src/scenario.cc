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

#include "pisim/scenario.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "pisim/closed_form.h"

namespace pisim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
std::optional<T> ParseNumber(std::string_view text) {
  text = Trim(text);
  if (text.empty() || text.front() == '+') return std::nullopt;
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

std::string LineTag(int line) {
  return line > 0 ? "line " + std::to_string(line) : "document";
}

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

class Document {
 public:
  explicit Document(std::string_view text) {
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto end = std::min(text.find('\n', pos), text.size());
      std::string_view line = text.substr(pos, end - pos);
      pos = end + 1;
      ++line_no;
      if (auto hash = line.find('#'); hash != std::string_view::npos) {
        line = line.substr(0, hash);
      }
      line = Trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) {
        throw ParseError(std::string(line), line_no, "expected 'key = value'");
      }
      const std::string key(Trim(line.substr(0, eq)));
      const std::string value(Trim(line.substr(eq + 1)));
      if (key.empty()) throw ParseError("", line_no, "empty key");
      if (value.empty()) throw ParseError(key, line_no, "empty value");
      if (!entries_.emplace(key, Entry{value, line_no}).second) {
        throw ParseError(key, line_no, "duplicate key");
      }
    }
  }

  Entry* Find(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return nullptr;
    it->second.used = true;
    return &it->second;
  }

  Entry& Require(const std::string& key) {
    if (Entry* e = Find(key)) return *e;
    throw ParseError(key, 0, "missing required key");
  }

  // Keys with the given prefix, marked used.
  std::vector<std::pair<std::string, Entry*>> WithPrefix(const std::string& prefix) {
    std::vector<std::pair<std::string, Entry*>> out;
    for (auto& [key, entry] : entries_) {
      if (key.starts_with(prefix)) {
        entry.used = true;
        out.emplace_back(key, &entry);
      }
    }
    return out;
  }

  bool HasPrefix(const std::string& prefix) const {
    return std::any_of(entries_.begin(), entries_.end(),
                       [&](const auto& kv) { return kv.first.starts_with(prefix); });
  }

  void RejectUnused() const {
    for (const auto& [key, entry] : entries_) {
      if (!entry.used) throw ParseError(key, entry.line, "unknown key");
    }
  }

 private:
  std::map<std::string, Entry> entries_;
};

int IntValue(const std::string& key, const Entry& e) {
  auto v = ParseNumber<int>(e.value);
  if (!v) throw ParseError(key, e.line, "expected an integer, got '" + e.value + "'");
  return *v;
}

double RealValue(const std::string& key, const Entry& e) {
  auto v = ParsePhase(e.value);
  if (!v || !std::isfinite(*v)) {
    throw ParseError(key, e.line, "expected a number, got '" + e.value + "'");
  }
  return *v;
}

double TransmissionValue(const std::string& key, const Entry& e, std::string_view text) {
  auto v = ParseNumber<double>(text);
  if (!v) throw ParseError(key, e.line, "expected a number, got '" + std::string(text) + "'");
  if (!(*v >= 0.0 && *v <= 1.0)) {
    throw ParseError(key, e.line,
                     "transmission " + std::string(Trim(text)) + " outside [0, 1]");
  }
  return *v;
}

int SuffixIndex(const std::string& key, const std::string& prefix, const Entry& e) {
  auto v = ParseNumber<int>(std::string_view(key).substr(prefix.size()));
  if (!v) throw ParseError(key, e.line, "expected a particle index after '" + prefix + "'");
  return *v;
}

SchemeConfig ParseScheme(Document& doc) {
  Entry& n_entry = doc.Require("scheme.n");
  const int n = IntValue("scheme.n", n_entry);
  if (n < 1 || n > kMaxParticles) {
    throw ParseError("scheme.n", n_entry.line,
                     "particle count must be in 1.." + std::to_string(kMaxParticles));
  }
  Entry& m_entry = doc.Require("scheme.m");
  const int m = IntValue("scheme.m", m_entry);
  if (m < 0 || m > n) {
    throw ParseError("scheme.m", m_entry.line, "aligned count must be in 0..scheme.n");
  }
  SchemeConfig cfg = SchemeConfig::Zero(n, m);
  if (Entry* e = doc.Find("scheme.phi0")) cfg.phi0 = RealValue("scheme.phi0", *e);

  for (auto& [key, e] : doc.WithPrefix("scheme.phi.")) {
    const int j = SuffixIndex(key, "scheme.phi.", *e);
    if (j < 1 || j > cfg.n_detected()) {
      throw ParseError(key, e->line, "beam-splitter phases exist for particles 1.." +
                                         std::to_string(cfg.n_detected()));
    }
    cfg.phi_at(j) = RealValue(key, *e);
  }
  for (auto& [key, e] : doc.WithPrefix("scheme.theta.")) {
    const int l = SuffixIndex(key, "scheme.theta.", *e);
    if (l < cfg.first_aligned() || l > n) {
      throw ParseError(key, e->line, "particle " + std::to_string(l) + " is not aligned");
    }
    cfg.theta_at(l) = RealValue(key, *e);
  }
  for (auto& [key, e] : doc.WithPrefix("scheme.transmission.")) {
    const int l = SuffixIndex(key, "scheme.transmission.", *e);
    if (l < cfg.first_aligned() || l > n) {
      throw ParseError(key, e->line, "particle " + std::to_string(l) + " is not aligned");
    }
    cfg.transmission_at(l) = TransmissionValue(key, *e, e->value);
  }
  cfg.Validate();
  return cfg;
}

PhaseVariable VariableValue(const std::string& key, const Entry& e,
                            const SchemeConfig& cfg) {
  try {
    PhaseVariable var = PhaseVariable::Parse(e.value);
    SchemeConfig probe = cfg;
    var.in(probe);
    return var;
  } catch (const ArgumentError& err) {
    throw ParseError(key, e.line, err.what());
  }
}

void RejectSection(Document& doc, const std::string& prefix, Command command) {
  for (auto& [key, e] : doc.WithPrefix(prefix)) {
    throw ParseError(key, e->line, "not valid for command " + ToString(command));
  }
}

// Uniform double in [0, 1) from the top 53 bits; independent of the
// standard library's distribution implementation.
double UnitInterval(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::string ProbabilityHeader(int n) {
  std::string header;
  for (const auto& outcome : AllDetectionOutcomes(n)) {
    header += "P_" + outcome.ToString() + ",";
  }
  return header + "P_loss";
}

bool RowSumsToOne(const std::vector<double>& probs) {
  double total = 0.0;
  for (double p : probs) total += p;
  return std::abs(total - 1.0) <= kRowSumTolerance;
}

void AppendProbabilities(std::ostringstream& os, const std::vector<double>& probs,
                         double loss) {
  for (double p : probs) os << FormatNumber(p) << ',';
  os << FormatNumber(loss) << '\n';
}

CommandOutput RunSingle(const Scenario& s) {
  const PureState psi = RunScheme(s.scheme);
  const auto probs = OutcomeProbabilities(psi);
  std::ostringstream os;
  os << ProbabilityHeader(s.scheme.n_detected()) << '\n';
  AppendProbabilities(os, probs, LossProbability(psi));
  CommandOutput out{os.str(), RowSumsToOne(probs), ""};
  if (!out.checks_passed) out.message = "coincidence probabilities do not sum to 1";
  return out;
}

CommandOutput RunSweep(const Scenario& s) {
  const auto& spec = *s.sweep;
  const auto grid = UniformGrid(spec.start, spec.stop, spec.steps);
  const PatternCurve curve = SweepPattern(s.scheme, spec.variable, grid);
  std::ostringstream os;
  os << "phase," << ProbabilityHeader(curve.n_detected) << '\n';
  CommandOutput out;
  for (const auto& sample : curve.samples) {
    os << FormatNumber(sample.phase) << ',';
    AppendProbabilities(os, sample.probabilities, sample.loss_probability);
    if (!RowSumsToOne(sample.probabilities)) {
      out.checks_passed = false;
      out.message = "coincidence probabilities do not sum to 1 at phase " +
                    FormatNumber(sample.phase);
    }
  }
  out.csv = os.str();
  return out;
}

CommandOutput RunEntangle(const Scenario& s) {
  const auto& spec = s.entangle;
  const int n = s.scheme.n_detected();
  const std::string t_column =
      spec.particle > 0 || s.scheme.n_aligned == 1
          ? "T" + std::to_string(spec.particle > 0 ? spec.particle : s.scheme.n_particles)
          : "T";
  std::ostringstream os;
  os << t_column << ",visibility,concurrence,fidelity\n";
  for (double t : spec.transmissions) {
    SchemeConfig cfg = s.scheme;
    if (spec.particle > 0) {
      cfg.transmission_at(spec.particle) = t;
    } else {
      std::fill(cfg.transmission.begin(), cfg.transmission.end(), t);
    }
    const PureState target = s.target ? TargetState(*s.target, n)
                                      : PredictedOutputState(n, cfg.total_phase());
    const EntanglementReport report =
        AnalyzeEntanglement(cfg, spec.variable, spec.steps, target);
    os << FormatNumber(t) << ',' << FormatNumber(*report.visibility) << ','
       << (report.concurrence ? FormatNumber(*report.concurrence) : "") << ','
       << FormatNumber(*report.fidelity_vs_target) << '\n';
  }
  return {os.str(), true, ""};
}

CommandOutput RunOracleCheck(const Scenario& s) {
  const auto& spec = s.oracle;
  std::mt19937_64 rng(s.seed);
  std::ostringstream os;
  os << "# seed=" << s.seed << '\n';
  os << "n,m,cases,min_fidelity,max_deviation,pass\n";
  CommandOutput out;
  for (int n = 1; n <= spec.n_max; ++n) {
    for (int m = 0; m <= spec.m_max; ++m) {
      double min_fidelity = 1.0;
      double max_deviation = 0.0;
      for (int c = 0; c < spec.cases; ++c) {
        SchemeConfig cfg = SchemeConfig::Zero(n + m, m);
        cfg.phi0 = kTwoPi * UnitInterval(rng);
        for (double& v : cfg.phi) v = kTwoPi * UnitInterval(rng);
        for (double& v : cfg.theta) v = kTwoPi * UnitInterval(rng);
        const PureState psi = RunScheme(cfg);
        const double xi = cfg.total_phase();
        const double f = PureFidelity(DetectedPureState(psi), PredictedOutputState(n, xi));
        double deviation = std::abs(1.0 - f);
        const auto probs = OutcomeProbabilities(psi);
        for (std::uint64_t k = 0; k < probs.size(); ++k) {
          const int r = DetectionOutcome::FromIndex(n, k).primed_count();
          deviation = std::max(deviation,
                               std::abs(probs[k] - PredictedProbability(n, r, xi)));
        }
        min_fidelity = std::min(min_fidelity, f);
        max_deviation = std::max(max_deviation, deviation);
      }
      const bool pass = max_deviation <= spec.tolerance;
      if (!pass) {
        out.checks_passed = false;
        out.message = "oracle deviation above tolerance at n=" + std::to_string(n) +
                      ", m=" + std::to_string(m);
      }
      os << n << ',' << m << ',' << spec.cases << ',' << FormatNumber(min_fidelity)
         << ',' << FormatNumber(max_deviation) << ',' << (pass ? "pass" : "fail")
         << '\n';
    }
  }
  out.csv = os.str();
  return out;
}

}  // namespace

ParseError::ParseError(std::string key, int line, const std::string& what)
    : Error((key.empty() ? std::string("scenario") : "key '" + key + "'") + " (" +
            LineTag(line) + "): " + what),
      key_(std::move(key)),
      line_(line) {}

std::string ToString(Command c) {
  switch (c) {
    case Command::kRun:
      return "run";
    case Command::kSweep:
      return "sweep";
    case Command::kEntangle:
      return "entangle";
    case Command::kOracleCheck:
      return "oracle-check";
  }
  return "?";
}

std::optional<Command> ParseCommand(std::string_view name) {
  if (name == "run") return Command::kRun;
  if (name == "sweep") return Command::kSweep;
  if (name == "entangle") return Command::kEntangle;
  if (name == "oracle-check") return Command::kOracleCheck;
  return std::nullopt;
}

std::optional<double> ParsePhase(std::string_view text) {
  std::string body;
  for (char ch : Trim(text)) {
    if (ch != ' ' && ch != '\t') body += ch;
  }
  if (body.empty()) return std::nullopt;
  double sign = 1.0;
  if (body.front() == '-' || body.front() == '+') {
    sign = body.front() == '-' ? -1.0 : 1.0;
    body.erase(0, 1);
  }
  if (body.empty() || body.front() == '-' || body.front() == '+') return std::nullopt;

  const auto pi = body.find("pi");
  if (pi == std::string::npos) {
    auto v = ParseNumber<double>(body);
    if (!v) return std::nullopt;
    return sign * *v;
  }
  std::string_view coef(body.data(), pi);
  std::string_view rest(body.data() + pi + 2, body.size() - pi - 2);
  double factor = 1.0;
  if (!coef.empty()) {
    if (coef.back() != '*') return std::nullopt;
    auto v = ParseNumber<double>(coef.substr(0, coef.size() - 1));
    if (!v) return std::nullopt;
    factor = *v;
  }
  double divisor = 1.0;
  if (!rest.empty()) {
    if (rest.front() != '/') return std::nullopt;
    auto v = ParseNumber<double>(rest.substr(1));
    if (!v || *v == 0.0) return std::nullopt;
    divisor = *v;
  }
  return sign * factor * std::numbers::pi / divisor;
}

PureState TargetState(const std::string& name, int n) {
  const double r = 1.0 / std::numbers::sqrt2;
  if (name == "Psi+" || name == "Phi-") {
    if (n != 2) throw ArgumentError(name + " needs two detected particles");
    if (name == "Psi+") {
      return PureStateFromTerms({{DetectorOutcome(2, 0b01), r}, {DetectorOutcome(2, 0b10), r}});
    }
    return PureStateFromTerms({{DetectorOutcome(2, 0b00), r}, {DetectorOutcome(2, 0b11), -r}});
  }
  if (name == "GHZ3") {
    if (n != 3) throw ArgumentError("GHZ3 needs three detected particles");
    // The GHZ-class state the scheme produces at n = 3.
    return EntangledClassState({ClassId::kF3, 3});
  }
  return EntangledClassState({ParseClassId(name), n});
}

std::string FormatNumber(double value) {
  if (value == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

Scenario ParseScenario(std::string_view text, std::optional<Command> command) {
  Document doc(text);
  Scenario s;

  Entry* cmd_entry = doc.Find("command");
  if (cmd_entry) {
    auto parsed = ParseCommand(cmd_entry->value);
    if (!parsed) {
      throw ParseError("command", cmd_entry->line,
                       "unknown command '" + cmd_entry->value + "'");
    }
    if (command && *command != *parsed) {
      throw ParseError("command", cmd_entry->line,
                       "scenario says '" + cmd_entry->value +
                           "' but '" + ToString(*command) + "' was requested");
    }
    s.command = *parsed;
  } else if (command) {
    s.command = *command;
  } else {
    throw ParseError("command", 0, "missing required key");
  }

  const bool needs_scheme = s.command != Command::kOracleCheck;
  if (needs_scheme || doc.HasPrefix("scheme.")) {
    s.scheme = ParseScheme(doc);
    if (s.scheme.n_detected() < 1) {
      throw ParseError("scheme.m", doc.Find("scheme.m")->line,
                       "at least one particle must reach the beam splitters");
    }
  }

  if (Entry* e = doc.Find("output")) s.output_path = e->value;
  if (Entry* e = doc.Find("seed")) {
    auto v = ParseNumber<std::uint64_t>(e->value);
    if (!v) throw ParseError("seed", e->line, "expected an unsigned 64-bit integer");
    s.seed = *v;
  }

  if (s.command == Command::kSweep) {
    SweepSpec spec;
    Entry& var = doc.Require("sweep.variable");
    spec.variable = VariableValue("sweep.variable", var, s.scheme);
    spec.stop = kTwoPi;
    if (Entry* e = doc.Find("sweep.start")) spec.start = RealValue("sweep.start", *e);
    if (Entry* e = doc.Find("sweep.stop")) spec.stop = RealValue("sweep.stop", *e);
    if (Entry* e = doc.Find("sweep.steps")) {
      spec.steps = IntValue("sweep.steps", *e);
      if (spec.steps < 8) throw ParseError("sweep.steps", e->line, "need at least 8 steps");
    }
    if (!(spec.stop > spec.start)) {
      const Entry* e = doc.Find("sweep.stop");
      throw ParseError("sweep.stop", e ? e->line : 0, "sweep.stop must exceed sweep.start");
    }
    s.sweep = spec;
  } else {
    RejectSection(doc, "sweep.", s.command);
  }

  if (s.command == Command::kEntangle) {
    if (s.scheme.n_aligned < 1) {
      throw ParseError("scheme.m", doc.Find("scheme.m")->line,
                       "entangle needs at least one aligned particle");
    }
    auto& spec = s.entangle;
    spec.variable = PhaseVariable{PhaseVariable::Kind::kTheta, s.scheme.n_particles};
    if (Entry* e = doc.Find("entangle.variable")) {
      spec.variable = VariableValue("entangle.variable", *e, s.scheme);
    }
    if (Entry* e = doc.Find("entangle.steps")) {
      spec.steps = IntValue("entangle.steps", *e);
      if (spec.steps < 8) throw ParseError("entangle.steps", e->line, "need at least 8 steps");
    }
    if (Entry* e = doc.Find("entangle.particle")) {
      spec.particle = IntValue("entangle.particle", *e);
      if (spec.particle < s.scheme.first_aligned() || spec.particle > s.scheme.n_particles) {
        throw ParseError("entangle.particle", e->line, "not an aligned particle");
      }
    }
    if (Entry* e = doc.Find("entangle.transmissions")) {
      std::string_view rest = e->value;
      while (true) {
        const auto comma = rest.find(',');
        spec.transmissions.push_back(
            TransmissionValue("entangle.transmissions", *e, rest.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
      }
    } else {
      for (int k = 0; k <= 10; ++k) spec.transmissions.push_back(k / 10.0);
    }
  } else {
    RejectSection(doc, "entangle.", s.command);
  }

  if (s.command == Command::kOracleCheck) {
    auto& spec = s.oracle;
    Entry* n_max = doc.Find("oracle.n_max");
    Entry* m_max = doc.Find("oracle.m_max");
    if (n_max) spec.n_max = IntValue("oracle.n_max", *n_max);
    if (m_max) spec.m_max = IntValue("oracle.m_max", *m_max);
    if (spec.n_max < 1) {
      throw ParseError("oracle.n_max", n_max ? n_max->line : 0, "must be at least 1");
    }
    if (spec.m_max < 0 || spec.n_max + spec.m_max > kMaxParticles) {
      throw ParseError("oracle.m_max", m_max ? m_max->line : 0,
                       "need m_max >= 0 and n_max + m_max <= " +
                           std::to_string(kMaxParticles));
    }
    if (Entry* e = doc.Find("oracle.cases")) {
      spec.cases = IntValue("oracle.cases", *e);
      if (spec.cases < 1) throw ParseError("oracle.cases", e->line, "need at least one case");
    }
    if (Entry* e = doc.Find("oracle.tolerance")) {
      spec.tolerance = RealValue("oracle.tolerance", *e);
      if (!(spec.tolerance >= 0.0)) {
        throw ParseError("oracle.tolerance", e->line, "must be non-negative");
      }
    }
  } else {
    RejectSection(doc, "oracle.", s.command);
  }

  if (Entry* e = doc.Find("target")) {
    if (s.command != Command::kEntangle) {
      throw ParseError("target", e->line, "only used by the entangle command");
    }
    try {
      TargetState(e->value, s.scheme.n_detected());
    } catch (const ArgumentError& err) {
      throw ParseError("target", e->line, err.what());
    }
    s.target = e->value;
  }

  doc.RejectUnused();
  return s;
}

CommandOutput RunCommand(const Scenario& scenario) {
  switch (scenario.command) {
    case Command::kRun:
      return RunSingle(scenario);
    case Command::kSweep:
      return RunSweep(scenario);
    case Command::kEntangle:
      return RunEntangle(scenario);
    case Command::kOracleCheck:
      return RunOracleCheck(scenario);
  }
  throw ArgumentError("unknown command");
}

int Execute(const Scenario& scenario, std::ostream& log) {
  CommandOutput out;
  try {
    out = RunCommand(scenario);
  } catch (const Error& err) {
    log << "pisim: " << err.what() << '\n';
    return kExitInvalid;
  }

  if (scenario.output_path) {
    std::ofstream file(*scenario.output_path, std::ios::binary | std::ios::trunc);
    if (!file) {
      log << "pisim: cannot open '" << *scenario.output_path << "' for writing\n";
      return kExitIo;
    }
    file << out.csv;
    file.flush();
    if (!file) {
      log << "pisim: failed writing '" << *scenario.output_path << "'\n";
      return kExitIo;
    }
  } else {
    std::cout << out.csv;
  }

  if (!out.checks_passed) {
    log << "pisim: " << out.message << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace pisim
