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

// Observables linking interferometer output to entanglement: interference
// sweeps and their visibility, concurrence, three-tangle and fidelity.

#ifndef PISIM_ANALYSIS_H_
#define PISIM_ANALYSIS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pisim/interferometer.h"
#include "pisim/state_core.h"

namespace pisim {

// Names one phase of a SchemeConfig: "phi0", "phi.<j>" or "theta.<l>".
struct PhaseVariable {
  enum class Kind : std::uint8_t { kPhi0, kPhi, kTheta };
  Kind kind = Kind::kPhi0;
  int index = 0;

  // Throws ArgumentError for an unrecognised name.
  static PhaseVariable Parse(const std::string& name);
  std::string ToString() const;

  // Throws ArgumentError if cfg has no such phase.
  double& in(SchemeConfig& cfg) const;
};

struct PatternSample {
  double phase = 0.0;
  // Indexed by DetectionOutcome::index().
  std::vector<double> probabilities;
  double loss_probability = 0.0;
};

struct PatternCurve {
  PhaseVariable variable;
  int n_detected = 0;
  std::vector<PatternSample> samples;

  // At least 8 samples, strictly increasing phases, probabilities in [0, 1].
  void Validate() const;
  std::vector<double> phases() const;
  std::vector<double> column(const DetectionOutcome& outcome) const;
};

struct EntanglementReport {
  // Present for two detected particles.
  std::optional<double> concurrence;
  // Present for three detected particles in a pure state.
  std::optional<double> three_tangle;
  std::optional<double> fidelity_vs_target;
  std::optional<double> visibility;

  // Every present field within [0, 1 + 1e-9].
  void Validate() const;
};

// `steps` points on [start, stop), endpoint excluded.
std::vector<double> UniformGrid(double start, double stop, int steps);

// Runs the scheme at each grid value of `variable` and records every
// coincidence probability plus the loss probability.
PatternCurve SweepPattern(const SchemeConfig& cfg, const PhaseVariable& variable,
                          std::span<const double> grid);

// Least-squares fit p(x) = c + a cos x + b sin x over the curve; returns the
// fitted (max - min) / (max + min) = sqrt(a^2 + b^2) / c. The sweep must
// cover one full period.
double Visibility(const PatternCurve& curve, const DetectionOutcome& outcome);

// Wootters concurrence of a two-qubit operator in the computational basis
// (unprimed -> 0, primed -> 1).
double Concurrence(const DensityMatrix& rho);
double Concurrence(const Eigen::MatrixXcd& rho);

// 2 sqrt(det rho_p): concurrence of qubit p with the rest of a pure state.
double OneVsRestConcurrence(const PureState& psi, int p);

// Residual tangle C^2_{1(23)} - C^2_{12} - C^2_{13} of a pure 3-qubit state.
double ThreeTangle(const PureState& psi);

// <target| rho |target>.
double Fidelity(const DensityMatrix& rho, const PureState& target);

// Report for the scheme as configured; the visibility comes from sweeping
// `variable` over one period with `steps` samples, using the all-unprimed
// coincidence pattern.
EntanglementReport AnalyzeEntanglement(const SchemeConfig& cfg,
                                       const PhaseVariable& variable, int steps,
                                       const std::optional<PureState>& target);

}  // namespace pisim

#endif  // PISIM_ANALYSIS_H_
