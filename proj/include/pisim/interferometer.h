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

// Two-source path-identity interferometer.
//
// Two identical N-particle sources emit in equal-weight superposition. The
// beams of the last M particles are sent through the second source and
// aligned with their primed partners (optionally through an attenuator);
// the first N - M particles meet their primed partners on 50:50 beam
// splitters and are detected. Stages run in that fixed order.

#ifndef PISIM_INTERFEROMETER_H_
#define PISIM_INTERFEROMETER_H_

#include <cstdint>
#include <string>
#include <vector>

#include "pisim/state_core.h"

namespace pisim {

inline constexpr int kMaxParticles = 16;

struct SchemeConfig {
  int n_particles = 1;  // N
  int n_aligned = 0;    // M
  double phi0 = 0.0;
  // Beam-splitter arm phases for particles 1..N-M.
  std::vector<double> phi;
  // Propagation phases and amplitude transmissions for particles N-M+1..N.
  std::vector<double> theta;
  std::vector<double> transmission;

  int n_detected() const { return n_particles - n_aligned; }
  int first_aligned() const { return n_particles - n_aligned + 1; }

  // 1-based particle accessors; throw ArgumentError when `j` is not a
  // detected (resp. aligned) particle.
  double& phi_at(int j);
  double phi_at(int j) const;
  double& theta_at(int l);
  double theta_at(int l) const;
  double& transmission_at(int l);
  double transmission_at(int l) const;

  // Throws ConfigError describing the first violated invariant.
  void Validate() const;

  // phi0 + sum(phi) - sum(theta): the only phase combination the lossless
  // output depends on.
  double total_phase() const;

  // Lossless config with every phase zero.
  static SchemeConfig Zero(int n_particles, int n_aligned);
};

enum class Port : std::uint8_t { kUnprimed, kPrimed };

// Which detector of each pair (d_j, d_j') fired, j = 1..N-M.
struct DetectionOutcome {
  std::vector<Port> ports;

  // Bit string convention of DetectorOutcome(): particle 1 is the most
  // significant bit, primed -> 1.
  static DetectionOutcome FromIndex(int n, std::uint64_t index);
  std::uint64_t index() const;
  // "00", "01", ...
  std::string ToString() const;
  int primed_count() const;
};

// All 2^n outcomes in index order.
std::vector<DetectionOutcome> AllDetectionOutcomes(int n);

PureState BuildTwoSourceState(const SchemeConfig& cfg);

// |b_l> -> e^{i theta} (T |b_l'> + sqrt(1 - T^2) |v_l>), |b_l'> unchanged.
// Both branches end in the shared aligned mode, so the particle's source is
// no longer recorded. Throws NormalizationError if that merge changes the
// norm, which happens once no other particle tells the branches apart.
PureState ApplyPathIdentity(const PureState& psi, int l, double theta,
                            double transmission);

// |b_j>  -> (|d_j> + i |d_j'>) / sqrt(2)
// |b_j'> -> e^{i phi} (|d_j'> + i |d_j>) / sqrt(2)
PureState ApplyBeamSplitter(const PureState& psi, int j, double phi);

// Throws ArgumentError when N = M.
PureState RunScheme(const SchemeConfig& cfg);

// 1-based indices of particles sitting at detectors, ascending.
std::vector<int> DetectedParticles(const PureState& psi);

// Probability of the coincidence `outcome`, marginalised over every
// undetected label (aligned beam and loss alike).
double JointProbability(const PureState& psi, const DetectionOutcome& outcome);

// JointProbability for every outcome, indexed by DetectionOutcome::index().
std::vector<double> OutcomeProbabilities(const PureState& psi);

// Probability that at least one aligned particle was absorbed by its
// attenuator.
double LossProbability(const PureState& psi);

// Reduced state of the detected particles (aligned and loss modes traced
// out). Throws ArgumentError when nothing is detected.
DensityMatrix ConditionalDetectedState(const PureState& psi);

// The detected particles' pure state when the undetected particles factor
// out (every aligned particle lossless). Throws ArgumentError otherwise.
PureState DetectedPureState(const PureState& psi);

}  // namespace pisim

#endif  // PISIM_INTERFEROMETER_H_
