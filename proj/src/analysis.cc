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

#include "pisim/analysis.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

#include "pisim/errors.h"

namespace pisim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Eigenvalues of rho below this are treated as zero in the concurrence
// factorisation.
constexpr double kSpectrumCutoff = 1e-14;
constexpr double kReportSlack = 1e-9;

int ParseIndex(const std::string& text, const std::string& name) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || value < 1) {
    throw ArgumentError("bad phase variable '" + name + "'");
  }
  return value;
}

double Clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

PhaseVariable PhaseVariable::Parse(const std::string& name) {
  if (name == "phi0") return {Kind::kPhi0, 0};
  if (name.starts_with("phi.")) return {Kind::kPhi, ParseIndex(name.substr(4), name)};
  if (name.starts_with("theta.")) {
    return {Kind::kTheta, ParseIndex(name.substr(6), name)};
  }
  throw ArgumentError("unknown phase variable '" + name + "'");
}

std::string PhaseVariable::ToString() const {
  switch (kind) {
    case Kind::kPhi0:
      return "phi0";
    case Kind::kPhi:
      return "phi." + std::to_string(index);
    case Kind::kTheta:
      return "theta." + std::to_string(index);
  }
  return "?";
}

double& PhaseVariable::in(SchemeConfig& cfg) const {
  switch (kind) {
    case Kind::kPhi0:
      return cfg.phi0;
    case Kind::kPhi:
      return cfg.phi_at(index);
    case Kind::kTheta:
      return cfg.theta_at(index);
  }
  throw ArgumentError("unknown phase variable");
}

void PatternCurve::Validate() const {
  if (samples.size() < 8) {
    throw ArgumentError("pattern needs at least 8 samples, has " +
                        std::to_string(samples.size()));
  }
  for (std::size_t k = 0; k < samples.size(); ++k) {
    if (k > 0 && !(samples[k].phase > samples[k - 1].phase)) {
      throw ArgumentError("pattern phases must be strictly increasing");
    }
    for (double p : samples[k].probabilities) {
      if (!(p >= -kNormTolerance && p <= 1.0 + kNormTolerance)) {
        throw ArgumentError("probability " + std::to_string(p) +
                            " outside [0, 1]");
      }
    }
  }
}

std::vector<double> PatternCurve::phases() const {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.phase);
  return out;
}

std::vector<double> PatternCurve::column(const DetectionOutcome& outcome) const {
  if (static_cast<int>(outcome.ports.size()) != n_detected) {
    throw ArgumentError("outcome length " + std::to_string(outcome.ports.size()) +
                        " does not match " + std::to_string(n_detected) +
                        " detected particles");
  }
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.probabilities.at(outcome.index()));
  return out;
}

void EntanglementReport::Validate() const {
  for (const auto& field :
       {concurrence, three_tangle, fidelity_vs_target, visibility}) {
    if (field && !(*field >= 0.0 && *field <= 1.0 + kReportSlack)) {
      throw ValidationError("report value " + std::to_string(*field) +
                            " outside [0, 1]");
    }
  }
}

std::vector<double> UniformGrid(double start, double stop, int steps) {
  if (steps < 1) throw ArgumentError("grid needs at least one step");
  std::vector<double> grid(steps);
  const double step = (stop - start) / steps;
  for (int k = 0; k < steps; ++k) grid[k] = start + k * step;
  return grid;
}

PatternCurve SweepPattern(const SchemeConfig& cfg, const PhaseVariable& variable,
                          std::span<const double> grid) {
  cfg.Validate();
  SchemeConfig point = cfg;
  double& slot = variable.in(point);

  PatternCurve curve;
  curve.variable = variable;
  curve.n_detected = cfg.n_detected();
  curve.samples.reserve(grid.size());
  for (double x : grid) {
    slot = x;
    const PureState psi = RunScheme(point);
    curve.samples.push_back({x, OutcomeProbabilities(psi), LossProbability(psi)});
  }
  curve.Validate();
  return curve;
}

double Visibility(const PatternCurve& curve, const DetectionOutcome& outcome) {
  curve.Validate();
  const auto x = curve.phases();
  const auto y = curve.column(outcome);
  const auto n = static_cast<Eigen::Index>(x.size());
  const double span = x.back() - x.front();
  if (span + span / static_cast<double>(n - 1) < kTwoPi * (1.0 - 1e-9)) {
    throw ArgumentError("sweep does not cover a full 2 pi period");
  }

  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd values(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    design(k, 0) = 1.0;
    design(k, 1) = std::cos(x[k]);
    design(k, 2) = std::sin(x[k]);
    values(k) = y[k];
  }
  const Eigen::Vector3d fit = design.colPivHouseholderQr().solve(values);
  const double mean = fit(0);
  const double amplitude = std::hypot(fit(1), fit(2));
  if (std::abs(mean) <= 1e-15) {
    throw UndefinedVisibilityError("pattern for outcome " + outcome.ToString() +
                                   " has zero mean");
  }
  return amplitude / mean;
}

double Concurrence(const Eigen::MatrixXcd& rho) {
  if (rho.rows() != 4 || rho.cols() != 4) {
    throw ArgumentError("concurrence needs a 4x4 two-qubit operator, got " +
                        std::to_string(rho.rows()) + "x" +
                        std::to_string(rho.cols()));
  }
  if (auto problem = CheckDensityInvariants(rho)) {
    throw ValidationError("invalid density matrix: " + *problem);
  }

  // With rho = F F^dagger, the square roots of the eigenvalues of
  // rho (Y x Y) rho* (Y x Y) are the singular values of F^T (Y x Y) F.
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(
      Eigen::Matrix4cd(0.5 * (rho + rho.adjoint())));
  const auto& ev = solver.eigenvalues();
  Eigen::MatrixXcd factor(4, 0);
  for (int k = 0; k < 4; ++k) {
    if (ev(k) > kSpectrumCutoff) {
      factor.conservativeResize(Eigen::NoChange, factor.cols() + 1);
      factor.col(factor.cols() - 1) = solver.eigenvectors().col(k) * std::sqrt(ev(k));
    }
  }
  Eigen::Matrix4cd flip = Eigen::Matrix4cd::Zero();
  flip(0, 3) = -1.0;
  flip(1, 2) = 1.0;
  flip(2, 1) = 1.0;
  flip(3, 0) = -1.0;

  const Eigen::MatrixXcd overlap = factor.transpose() * flip * factor;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(overlap);
  std::vector<double> lambda(svd.singularValues().data(),
                             svd.singularValues().data() + svd.singularValues().size());
  lambda.resize(4, 0.0);
  std::sort(lambda.begin(), lambda.end(), std::greater<>());
  return Clamp01(lambda[0] - lambda[1] - lambda[2] - lambda[3]);
}

double Concurrence(const DensityMatrix& rho) {
  if (rho.kept_particles().size() != 2) {
    throw ArgumentError("concurrence needs exactly two particles");
  }
  return Concurrence(rho.matrix());
}

double OneVsRestConcurrence(const PureState& psi, int p) {
  const int keep[] = {p};
  const DensityMatrix single = ReducedDensity(psi, keep);
  if (single.dim() != 2) {
    throw ArgumentError("particle " + std::to_string(p) + " is not a qubit");
  }
  const auto& m = single.matrix();
  const double det = (m(0, 0) * m(1, 1) - std::norm(m(0, 1))).real();
  return Clamp01(2.0 * std::sqrt(std::max(det, 0.0)));
}

double ThreeTangle(const PureState& psi) {
  if (psi.particle_count() != 3) {
    throw ArgumentError("three-tangle needs three particles, got " +
                        std::to_string(psi.particle_count()));
  }
  for (int p = 1; p <= 3; ++p) {
    if (LocalBasis(psi, p).size() != 2) {
      throw ArgumentError("particle " + std::to_string(p) + " is not a qubit");
    }
  }
  const double c1 = OneVsRestConcurrence(psi, 1);
  const int pair12[] = {1, 2};
  const int pair13[] = {1, 3};
  const double c12 = Concurrence(ReducedDensity(psi, pair12));
  const double c13 = Concurrence(ReducedDensity(psi, pair13));
  return Clamp01(c1 * c1 - c12 * c12 - c13 * c13);
}

double Fidelity(const DensityMatrix& rho, const PureState& target) {
  if (static_cast<std::size_t>(target.particle_count()) !=
      rho.kept_particles().size()) {
    throw ArgumentError("target has " + std::to_string(target.particle_count()) +
                        " particles, operator has " +
                        std::to_string(rho.kept_particles().size()));
  }
  if (!target.is_normalized()) {
    throw NormalizationError("fidelity target must be normalized");
  }
  Eigen::VectorXcd t = Eigen::VectorXcd::Zero(rho.dim());
  for (const auto& [outcome, amp] : target.terms()) {
    if (auto idx = rho.index_of(outcome)) t(*idx) = amp;
  }
  return Clamp01(t.dot(rho.matrix() * t).real());
}

EntanglementReport AnalyzeEntanglement(const SchemeConfig& cfg,
                                       const PhaseVariable& variable, int steps,
                                       const std::optional<PureState>& target) {
  const PureState psi = RunScheme(cfg);
  const DensityMatrix rho = ConditionalDetectedState(psi);
  EntanglementReport report;
  const int n = cfg.n_detected();
  if (n == 2) report.concurrence = Concurrence(rho);
  const bool lossless = std::all_of(cfg.transmission.begin(), cfg.transmission.end(),
                                    [](double t) { return t == 1.0; });
  if (n == 3 && lossless) report.three_tangle = ThreeTangle(DetectedPureState(psi));
  if (target) report.fidelity_vs_target = Fidelity(rho, *target);

  const auto grid = UniformGrid(0.0, kTwoPi, steps);
  const PatternCurve curve = SweepPattern(cfg, variable, grid);
  report.visibility = Visibility(curve, DetectionOutcome::FromIndex(n, 0));
  report.Validate();
  return report;
}

}  // namespace pisim
