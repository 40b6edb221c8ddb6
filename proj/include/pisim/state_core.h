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

// Sparse multi-particle path states and their density operators.
//
// Particles are distinguishable and carry only a path degree of freedom. A
// basis ket assigns one PathLabel to every particle; two kets are orthogonal
// unless all labels agree.

#ifndef PISIM_STATE_CORE_H_
#define PISIM_STATE_CORE_H_

#include <compare>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace pisim {

using Complex = std::complex<double>;

// Amplitudes with magnitude at or below this are dropped from sparse storage.
inline constexpr double kAmplitudeEpsilon = 1e-14;
// |<psi|psi> - 1| allowed for a state to count as normalized.
inline constexpr double kNormTolerance = 1e-12;
// Density-operator invariant tolerances.
inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kTraceTolerance = 1e-12;
inline constexpr double kEigenvalueFloor = -1e-10;
// Largest dense density-matrix dimension we are willing to allocate.
inline constexpr std::int64_t kMaxDenseDimension = 1024;

// Order matters: within a particle's local basis, labels sort by kind, so the
// unprimed member of each pair precedes the primed one.
enum class LabelKind : std::uint8_t {
  kSourceBeam,        // b_j
  kPrimedSourceBeam,  // b_j'
  kDetectorUnprimed,  // d_j
  kDetectorPrimed,    // d_j'
  kAlignedBeam,       // b_l' downstream of the second source (shared mode)
  kLoss,              // v_l, particle absorbed by the attenuator
};

struct PathLabel {
  LabelKind kind = LabelKind::kSourceBeam;
  int index = 1;

  friend auto operator<=>(const PathLabel&, const PathLabel&) = default;

  static PathLabel Source(int j) { return {LabelKind::kSourceBeam, j}; }
  static PathLabel PrimedSource(int j) {
    return {LabelKind::kPrimedSourceBeam, j};
  }
  static PathLabel Detector(int j) { return {LabelKind::kDetectorUnprimed, j}; }
  static PathLabel PrimedDetector(int j) {
    return {LabelKind::kDetectorPrimed, j};
  }
  static PathLabel Aligned(int l) { return {LabelKind::kAlignedBeam, l}; }
  static PathLabel Loss(int l) { return {LabelKind::kLoss, l}; }

  bool is_source() const {
    return kind == LabelKind::kSourceBeam ||
           kind == LabelKind::kPrimedSourceBeam;
  }
  bool is_detector() const {
    return kind == LabelKind::kDetectorUnprimed ||
           kind == LabelKind::kDetectorPrimed;
  }
  bool is_aligned() const {
    return kind == LabelKind::kAlignedBeam || kind == LabelKind::kLoss;
  }

  // The other member of this label's two-mode family (b <-> b', d <-> d',
  // aligned <-> loss), same index.
  PathLabel partner() const;

  // "b1", "b1'", "d2", "d2'", "a3" (aligned b3'), "v3".
  std::string ToString() const;
};

// One label per particle; position k holds particle k+1.
class BasisOutcome {
 public:
  BasisOutcome() = default;
  explicit BasisOutcome(std::vector<PathLabel> labels)
      : labels_(std::move(labels)) {}
  BasisOutcome(std::initializer_list<PathLabel> labels) : labels_(labels) {}

  std::size_t size() const { return labels_.size(); }
  // 1-based particle index.
  const PathLabel& particle(int p) const { return labels_.at(p - 1); }
  const std::vector<PathLabel>& labels() const { return labels_; }

  BasisOutcome with_particle(int p, PathLabel label) const;
  // Labels of the listed particles (1-based), in the given order.
  BasisOutcome restricted_to(std::span<const int> particles) const;

  std::string ToString() const;

  friend auto operator<=>(const BasisOutcome&, const BasisOutcome&) = default;

 private:
  std::vector<PathLabel> labels_;
};

// Product ket |d_1 ... d_n> with particle k primed iff bit (n - k) of `bits`
// is set, i.e. the bit string read left to right is the qubit string with
// unprimed -> 0 and primed -> 1.
BasisOutcome DetectorOutcome(int n, std::uint64_t bits);

class PureState {
 public:
  using Terms = std::map<BasisOutcome, Complex>;

  int particle_count() const { return particle_count_; }
  const Terms& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }

  Complex amplitude(const BasisOutcome& outcome) const;
  double norm_squared() const;
  bool is_normalized() const;
  PureState normalized() const;
  PureState scaled(Complex factor) const;

  std::string ToString() const;

 private:
  friend PureState PureStateFromTerms(
      std::span<const std::pair<BasisOutcome, Complex>> terms);
  PureState(int particle_count, Terms terms)
      : particle_count_(particle_count), terms_(std::move(terms)) {}

  int particle_count_ = 0;
  Terms terms_;
};

// Sums duplicate outcomes and prunes near-zero amplitudes. Throws
// StructuralError for an empty list or mixed outcome lengths, and
// EmptyStateError when everything cancels.
PureState PureStateFromTerms(
    std::span<const std::pair<BasisOutcome, Complex>> terms);
PureState PureStateFromTerms(
    std::initializer_list<std::pair<BasisOutcome, Complex>> terms);

// <a|b>, conjugate-linear in `a`.
Complex InnerProduct(const PureState& a, const PureState& b);

// |<a|b>|^2 for normalized states; insensitive to global phase.
double PureFidelity(const PureState& a, const PureState& b);

// Hermitian, unit-trace, positive semidefinite operator on a subset of the
// particles. Rows and columns enumerate the product of per-particle local
// bases with the first kept particle most significant.
class DensityMatrix {
 public:
  // Validates all invariants; throws ValidationError on violation and
  // StructuralError when the shape disagrees with the local bases.
  DensityMatrix(std::vector<int> kept_particles,
                std::vector<std::vector<PathLabel>> local_bases,
                Eigen::MatrixXcd entries);

  const std::vector<int>& kept_particles() const { return kept_particles_; }
  const std::vector<std::vector<PathLabel>>& local_bases() const {
    return local_bases_;
  }
  const Eigen::MatrixXcd& matrix() const { return entries_; }
  Eigen::Index dim() const { return entries_.rows(); }

  std::optional<Eigen::Index> index_of(const BasisOutcome& outcome) const;
  BasisOutcome outcome_at(Eigen::Index i) const;
  // Zero for outcomes outside the local bases.
  Complex entry(const BasisOutcome& row, const BasisOutcome& col) const;

  Eigen::VectorXd eigenvalues() const;
  // Number of eigenvalues above `tolerance`.
  int rank(double tolerance = 1e-10) const;

 private:
  std::vector<int> kept_particles_;
  std::vector<std::vector<PathLabel>> local_bases_;
  Eigen::MatrixXcd entries_;
};

// Empty when `m` satisfies the density-operator invariants, otherwise a
// description of the first violation.
std::optional<std::string> CheckDensityInvariants(const Eigen::MatrixXcd& m);

// |psi><psi| over all particles. Throws NormalizationError for unnormalized
// input.
DensityMatrix ToDensity(const PureState& psi);

// Reduced operator on `keep` (1-based particle indices, a subset of
// rho.kept_particles()). The result lists kept particles in rho's order.
DensityMatrix PartialTrace(const DensityMatrix& rho, std::span<const int> keep);

// Reduced operator of |psi><psi| on `keep`, accumulated directly from the
// sparse terms without forming the full matrix.
DensityMatrix ReducedDensity(const PureState& psi, std::span<const int> keep);

// Local basis of particle p as used by ToDensity / ReducedDensity: every
// label the particle takes in psi, completed with its family partner.
std::vector<PathLabel> LocalBasis(const PureState& psi, int p);

}  // namespace pisim

#endif  // PISIM_STATE_CORE_H_
