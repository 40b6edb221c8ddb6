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

#include "pisim/interferometer.h"

#include <cmath>
#include <numbers>

#include "pisim/errors.h"

namespace pisim {

namespace {

constexpr Complex kI{0.0, 1.0};
const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

Complex Phase(double angle) { return std::polar(1.0, angle); }

void CheckParticle(const PureState& psi, int p) {
  if (p < 1 || p > psi.particle_count()) {
    throw ArgumentError("particle " + std::to_string(p) + " outside 1.." +
                        std::to_string(psi.particle_count()));
  }
}

}  // namespace

double& SchemeConfig::phi_at(int j) {
  if (j < 1 || j > n_detected() || j > static_cast<int>(phi.size())) {
    throw ArgumentError("no beam-splitter phase for particle " +
                        std::to_string(j));
  }
  return phi[j - 1];
}

double SchemeConfig::phi_at(int j) const {
  return const_cast<SchemeConfig*>(this)->phi_at(j);
}

double& SchemeConfig::theta_at(int l) {
  const int k = l - first_aligned();
  if (k < 0 || k >= n_aligned || k >= static_cast<int>(theta.size())) {
    throw ArgumentError("no alignment phase for particle " + std::to_string(l));
  }
  return theta[k];
}

double SchemeConfig::theta_at(int l) const {
  return const_cast<SchemeConfig*>(this)->theta_at(l);
}

double& SchemeConfig::transmission_at(int l) {
  const int k = l - first_aligned();
  if (k < 0 || k >= n_aligned || k >= static_cast<int>(transmission.size())) {
    throw ArgumentError("no transmission for particle " + std::to_string(l));
  }
  return transmission[k];
}

double SchemeConfig::transmission_at(int l) const {
  return const_cast<SchemeConfig*>(this)->transmission_at(l);
}

void SchemeConfig::Validate() const {
  if (n_particles < 1 || n_particles > kMaxParticles) {
    throw ConfigError("particle count " + std::to_string(n_particles) +
                      " outside 1.." + std::to_string(kMaxParticles));
  }
  if (n_aligned < 0 || n_aligned > n_particles) {
    throw ConfigError("aligned count " + std::to_string(n_aligned) +
                      " outside 0.." + std::to_string(n_particles));
  }
  if (static_cast<int>(phi.size()) != n_detected()) {
    throw ConfigError("expected " + std::to_string(n_detected()) +
                      " beam-splitter phases, got " +
                      std::to_string(phi.size()));
  }
  if (static_cast<int>(theta.size()) != n_aligned ||
      static_cast<int>(transmission.size()) != n_aligned) {
    throw ConfigError("expected " + std::to_string(n_aligned) +
                      " alignment phases and transmissions");
  }
  if (!std::isfinite(phi0)) throw ConfigError("phi0 is not finite");
  for (double v : phi) {
    if (!std::isfinite(v)) throw ConfigError("beam-splitter phase not finite");
  }
  for (double v : theta) {
    if (!std::isfinite(v)) throw ConfigError("alignment phase not finite");
  }
  for (std::size_t k = 0; k < transmission.size(); ++k) {
    const double t = transmission[k];
    if (!(t >= 0.0 && t <= 1.0)) {
      throw ConfigError("transmission of particle " +
                        std::to_string(first_aligned() + static_cast<int>(k)) +
                        " = " + std::to_string(t) + " outside [0, 1]");
    }
  }
}

double SchemeConfig::total_phase() const {
  double xi = phi0;
  for (double v : phi) xi += v;
  for (double v : theta) xi -= v;
  return xi;
}

SchemeConfig SchemeConfig::Zero(int n_particles, int n_aligned) {
  SchemeConfig cfg;
  cfg.n_particles = n_particles;
  cfg.n_aligned = n_aligned;
  cfg.phi.assign(std::max(0, n_particles - n_aligned), 0.0);
  cfg.theta.assign(std::max(0, n_aligned), 0.0);
  cfg.transmission.assign(std::max(0, n_aligned), 1.0);
  return cfg;
}

DetectionOutcome DetectionOutcome::FromIndex(int n, std::uint64_t index) {
  DetectionOutcome out;
  out.ports.resize(n);
  for (int k = 1; k <= n; ++k) {
    out.ports[k - 1] = ((index >> (n - k)) & 1U) ? Port::kPrimed
                                                 : Port::kUnprimed;
  }
  return out;
}

std::uint64_t DetectionOutcome::index() const {
  std::uint64_t idx = 0;
  for (Port p : ports) idx = (idx << 1) | (p == Port::kPrimed ? 1U : 0U);
  return idx;
}

std::string DetectionOutcome::ToString() const {
  std::string s;
  for (Port p : ports) s += (p == Port::kPrimed ? '1' : '0');
  return s;
}

int DetectionOutcome::primed_count() const {
  int r = 0;
  for (Port p : ports) r += (p == Port::kPrimed);
  return r;
}

std::vector<DetectionOutcome> AllDetectionOutcomes(int n) {
  std::vector<DetectionOutcome> out;
  const std::uint64_t count = std::uint64_t{1} << n;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    out.push_back(DetectionOutcome::FromIndex(n, i));
  }
  return out;
}

PureState BuildTwoSourceState(const SchemeConfig& cfg) {
  cfg.Validate();
  const int n = cfg.n_particles;
  std::vector<PathLabel> unprimed;
  std::vector<PathLabel> primed;
  for (int j = 1; j <= n; ++j) {
    unprimed.push_back(PathLabel::Source(j));
    primed.push_back(PathLabel::PrimedSource(j));
  }
  return PureStateFromTerms({
      {BasisOutcome(std::move(unprimed)), kInvSqrt2},
      {BasisOutcome(std::move(primed)), kInvSqrt2 * Phase(cfg.phi0)},
  });
}

PureState ApplyPathIdentity(const PureState& psi, int l, double theta,
                            double transmission) {
  CheckParticle(psi, l);
  if (!(transmission >= 0.0 && transmission <= 1.0)) {
    throw ArgumentError("transmission " + std::to_string(transmission) +
                        " outside [0, 1]");
  }
  if (!std::isfinite(theta)) throw ArgumentError("alignment phase not finite");
  const Complex propagate = Phase(theta);
  const double lost = std::sqrt(1.0 - transmission * transmission);
  const PathLabel aligned = PathLabel::Aligned(l);

  std::vector<std::pair<BasisOutcome, Complex>> out;
  out.reserve(psi.term_count() * 2);
  for (const auto& [outcome, amp] : psi.terms()) {
    const PathLabel& label = outcome.particle(l);
    switch (label.kind) {
      case LabelKind::kSourceBeam:
        out.emplace_back(outcome.with_particle(l, aligned),
                         amp * propagate * transmission);
        out.emplace_back(outcome.with_particle(l, PathLabel::Loss(l)),
                         amp * propagate * lost);
        break;
      case LabelKind::kPrimedSourceBeam:
        out.emplace_back(outcome.with_particle(l, aligned), amp);
        break;
      case LabelKind::kAlignedBeam:
      case LabelKind::kLoss:
        throw StageOrderError("particle " + std::to_string(l) +
                              " is already aligned");
      case LabelKind::kDetectorUnprimed:
      case LabelKind::kDetectorPrimed:
        throw StageOrderError("particle " + std::to_string(l) +
                              " is already detected");
    }
  }
  PureState result = PureStateFromTerms(out);
  if (std::abs(result.norm_squared() - psi.norm_squared()) > kNormTolerance) {
    throw NormalizationError(
        "aligning particle " + std::to_string(l) +
        " merged branches that no other particle distinguishes");
  }
  return result;
}

PureState ApplyBeamSplitter(const PureState& psi, int j, double phi) {
  CheckParticle(psi, j);
  if (!std::isfinite(phi)) throw ArgumentError("beam-splitter phase not finite");
  const PathLabel d = PathLabel::Detector(j);
  const PathLabel dp = PathLabel::PrimedDetector(j);
  const Complex arm = Phase(phi) * kInvSqrt2;

  std::vector<std::pair<BasisOutcome, Complex>> out;
  out.reserve(psi.term_count() * 2);
  for (const auto& [outcome, amp] : psi.terms()) {
    const PathLabel& label = outcome.particle(j);
    switch (label.kind) {
      case LabelKind::kSourceBeam:
        out.emplace_back(outcome.with_particle(j, d), amp * kInvSqrt2);
        out.emplace_back(outcome.with_particle(j, dp), amp * kI * kInvSqrt2);
        break;
      case LabelKind::kPrimedSourceBeam:
        out.emplace_back(outcome.with_particle(j, dp), amp * arm);
        out.emplace_back(outcome.with_particle(j, d), amp * kI * arm);
        break;
      case LabelKind::kDetectorUnprimed:
      case LabelKind::kDetectorPrimed:
        throw StageOrderError("particle " + std::to_string(j) +
                              " is already detected");
      case LabelKind::kAlignedBeam:
      case LabelKind::kLoss:
        throw StageOrderError("particle " + std::to_string(j) +
                              " was used for path identity");
    }
  }
  return PureStateFromTerms(out);
}

PureState RunScheme(const SchemeConfig& cfg) {
  PureState psi = BuildTwoSourceState(cfg);
  if (cfg.n_detected() == 0) {
    throw ArgumentError("no detected particles (N = M)");
  }
  for (int l = cfg.first_aligned(); l <= cfg.n_particles; ++l) {
    psi = ApplyPathIdentity(psi, l, cfg.theta_at(l), cfg.transmission_at(l));
  }
  for (int j = 1; j <= cfg.n_detected(); ++j) {
    psi = ApplyBeamSplitter(psi, j, cfg.phi_at(j));
  }
  return psi;
}

std::vector<int> DetectedParticles(const PureState& psi) {
  std::vector<int> detected;
  const auto& first = psi.terms().begin()->first;
  for (int p = 1; p <= psi.particle_count(); ++p) {
    if (first.particle(p).is_detector()) detected.push_back(p);
  }
  return detected;
}

double JointProbability(const PureState& psi, const DetectionOutcome& outcome) {
  const auto detected = DetectedParticles(psi);
  if (outcome.ports.size() != detected.size()) {
    throw ArgumentError("outcome names " + std::to_string(outcome.ports.size()) +
                        " detectors but the state has " +
                        std::to_string(detected.size()) + " detected particles");
  }
  double p = 0.0;
  for (const auto& [basis, amp] : psi.terms()) {
    bool match = true;
    for (std::size_t k = 0; k < detected.size() && match; ++k) {
      const bool primed =
          basis.particle(detected[k]).kind == LabelKind::kDetectorPrimed;
      match = primed == (outcome.ports[k] == Port::kPrimed);
    }
    if (match) p += std::norm(amp);
  }
  return p;
}

std::vector<double> OutcomeProbabilities(const PureState& psi) {
  const auto detected = DetectedParticles(psi);
  std::vector<double> probs(std::size_t{1} << detected.size(), 0.0);
  for (const auto& [basis, amp] : psi.terms()) {
    std::uint64_t idx = 0;
    for (int p : detected) {
      idx = (idx << 1) |
            (basis.particle(p).kind == LabelKind::kDetectorPrimed ? 1U : 0U);
    }
    probs[idx] += std::norm(amp);
  }
  return probs;
}

double LossProbability(const PureState& psi) {
  double p = 0.0;
  for (const auto& [basis, amp] : psi.terms()) {
    for (const auto& label : basis.labels()) {
      if (label.kind == LabelKind::kLoss) {
        p += std::norm(amp);
        break;
      }
    }
  }
  return p;
}

DensityMatrix ConditionalDetectedState(const PureState& psi) {
  const auto detected = DetectedParticles(psi);
  if (detected.empty()) {
    throw ArgumentError("no detected particles (N = M)");
  }
  return ReducedDensity(psi, detected);
}

PureState DetectedPureState(const PureState& psi) {
  const auto detected = DetectedParticles(psi);
  if (detected.empty()) {
    throw ArgumentError("no detected particles (N = M)");
  }
  std::vector<int> undetected;
  for (int p = 1; p <= psi.particle_count(); ++p) {
    if (std::find(detected.begin(), detected.end(), p) == detected.end()) {
      undetected.push_back(p);
    }
  }
  const BasisOutcome env = psi.terms().begin()->first.restricted_to(undetected);
  std::vector<std::pair<BasisOutcome, Complex>> terms;
  for (const auto& [basis, amp] : psi.terms()) {
    if (basis.restricted_to(undetected) != env) {
      throw ArgumentError(
          "undetected particles do not factor out; use the density operator");
    }
    terms.emplace_back(basis.restricted_to(detected), amp);
  }
  return PureStateFromTerms(terms);
}

}  // namespace pisim
