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

#include "pisim/state_core.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "pisim/errors.h"

namespace pisim {

PathLabel PathLabel::partner() const {
  switch (kind) {
    case LabelKind::kSourceBeam:
      return PrimedSource(index);
    case LabelKind::kPrimedSourceBeam:
      return Source(index);
    case LabelKind::kDetectorUnprimed:
      return PrimedDetector(index);
    case LabelKind::kDetectorPrimed:
      return Detector(index);
    case LabelKind::kAlignedBeam:
      return Loss(index);
    case LabelKind::kLoss:
      return Aligned(index);
  }
  return *this;
}

std::string PathLabel::ToString() const {
  const std::string n = std::to_string(index);
  switch (kind) {
    case LabelKind::kSourceBeam:
      return "b" + n;
    case LabelKind::kPrimedSourceBeam:
      return "b" + n + "'";
    case LabelKind::kDetectorUnprimed:
      return "d" + n;
    case LabelKind::kDetectorPrimed:
      return "d" + n + "'";
    case LabelKind::kAlignedBeam:
      return "a" + n;
    case LabelKind::kLoss:
      return "v" + n;
  }
  return "?";
}

BasisOutcome BasisOutcome::with_particle(int p, PathLabel label) const {
  BasisOutcome out = *this;
  out.labels_.at(p - 1) = label;
  return out;
}

BasisOutcome BasisOutcome::restricted_to(std::span<const int> particles) const {
  std::vector<PathLabel> out;
  out.reserve(particles.size());
  for (int p : particles) out.push_back(particle(p));
  return BasisOutcome(std::move(out));
}

std::string BasisOutcome::ToString() const {
  std::string s = "|";
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (i) s += ' ';
    s += labels_[i].ToString();
  }
  return s + ">";
}

BasisOutcome DetectorOutcome(int n, std::uint64_t bits) {
  std::vector<PathLabel> labels;
  labels.reserve(n);
  for (int k = 1; k <= n; ++k) {
    const bool primed = (bits >> (n - k)) & 1U;
    labels.push_back(primed ? PathLabel::PrimedDetector(k)
                            : PathLabel::Detector(k));
  }
  return BasisOutcome(std::move(labels));
}

Complex PureState::amplitude(const BasisOutcome& outcome) const {
  auto it = terms_.find(outcome);
  return it == terms_.end() ? Complex{} : it->second;
}

double PureState::norm_squared() const {
  double sum = 0.0;
  for (const auto& [outcome, amp] : terms_) sum += std::norm(amp);
  return sum;
}

bool PureState::is_normalized() const {
  return std::abs(norm_squared() - 1.0) <= kNormTolerance;
}

PureState PureState::normalized() const {
  return scaled(1.0 / std::sqrt(norm_squared()));
}

PureState PureState::scaled(Complex factor) const {
  Terms out;
  for (const auto& [outcome, amp] : terms_) {
    const Complex a = amp * factor;
    if (std::abs(a) > kAmplitudeEpsilon) out.emplace(outcome, a);
  }
  if (out.empty()) throw EmptyStateError("scaling removed every term");
  return PureState(particle_count_, std::move(out));
}

std::string PureState::ToString() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [outcome, amp] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << amp.real() << (amp.imag() < 0 ? "" : "+") << amp.imag()
       << "i)" << outcome.ToString();
  }
  return os.str();
}

PureState PureStateFromTerms(
    std::span<const std::pair<BasisOutcome, Complex>> terms) {
  if (terms.empty()) throw StructuralError("state needs at least one term");
  const std::size_t n = terms.front().first.size();
  if (n == 0) throw StructuralError("basis outcome has no particles");
  PureState::Terms summed;
  for (const auto& [outcome, amp] : terms) {
    if (outcome.size() != n) {
      throw StructuralError("outcome " + outcome.ToString() + " has " +
                            std::to_string(outcome.size()) +
                            " particles, expected " + std::to_string(n));
    }
    summed[outcome] += amp;
  }
  std::erase_if(summed, [](const auto& kv) {
    return std::abs(kv.second) <= kAmplitudeEpsilon;
  });
  if (summed.empty()) throw EmptyStateError("all amplitudes cancel");
  return PureState(static_cast<int>(n), std::move(summed));
}

PureState PureStateFromTerms(
    std::initializer_list<std::pair<BasisOutcome, Complex>> terms) {
  return PureStateFromTerms(
      std::span<const std::pair<BasisOutcome, Complex>>(terms.begin(),
                                                        terms.size()));
}

Complex InnerProduct(const PureState& a, const PureState& b) {
  if (a.particle_count() != b.particle_count()) {
    throw StructuralError("inner product of states with " +
                          std::to_string(a.particle_count()) + " and " +
                          std::to_string(b.particle_count()) + " particles");
  }
  const auto& small = a.term_count() <= b.term_count() ? a : b;
  const auto& large = a.term_count() <= b.term_count() ? b : a;
  Complex sum{};
  for (const auto& [outcome, amp] : small.terms()) {
    const Complex other = large.amplitude(outcome);
    sum += (&small == &a) ? std::conj(amp) * other : std::conj(other) * amp;
  }
  return sum;
}

double PureFidelity(const PureState& a, const PureState& b) {
  return std::norm(InnerProduct(a, b));
}

namespace {

std::int64_t ProductDimension(
    const std::vector<std::vector<PathLabel>>& bases) {
  std::int64_t dim = 1;
  for (const auto& basis : bases) {
    dim *= static_cast<std::int64_t>(basis.size());
    if (dim > kMaxDenseDimension) {
      throw CapacityError("dense density matrix would exceed dimension " +
                          std::to_string(kMaxDenseDimension));
    }
  }
  return dim;
}

// Mixed-radix digits of a flat index, most significant first.
std::vector<int> Digits(Eigen::Index i,
                        const std::vector<std::vector<PathLabel>>& bases) {
  std::vector<int> digits(bases.size());
  for (std::size_t k = bases.size(); k-- > 0;) {
    const auto radix = static_cast<Eigen::Index>(bases[k].size());
    digits[k] = static_cast<int>(i % radix);
    i /= radix;
  }
  return digits;
}

std::optional<Eigen::Index> FlatIndex(
    const BasisOutcome& outcome,
    const std::vector<std::vector<PathLabel>>& bases) {
  if (outcome.size() != bases.size()) return std::nullopt;
  Eigen::Index flat = 0;
  for (std::size_t k = 0; k < bases.size(); ++k) {
    const auto& basis = bases[k];
    auto it = std::find(basis.begin(), basis.end(), outcome.labels()[k]);
    if (it == basis.end()) return std::nullopt;
    flat = flat * static_cast<Eigen::Index>(basis.size()) +
           static_cast<Eigen::Index>(it - basis.begin());
  }
  return flat;
}

// Validates `keep` against the available particles and returns it as a list
// of positions into `available`, ordered as `available` is.
std::vector<std::size_t> KeepPositions(std::span<const int> keep,
                                       std::span<const int> available) {
  if (keep.empty()) throw ArgumentError("partial trace needs a nonempty keep set");
  std::set<int> wanted;
  for (int p : keep) {
    if (!wanted.insert(p).second) {
      throw ArgumentError("particle " + std::to_string(p) +
                          " listed twice in keep set");
    }
    if (std::find(available.begin(), available.end(), p) == available.end()) {
      throw ArgumentError("particle " + std::to_string(p) +
                          " is not present in the operator");
    }
  }
  std::vector<std::size_t> positions;
  for (std::size_t k = 0; k < available.size(); ++k) {
    if (wanted.contains(available[k])) positions.push_back(k);
  }
  return positions;
}

}  // namespace

std::optional<std::string> CheckDensityInvariants(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols() || m.rows() == 0) return "matrix is not square";
  const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kHermitianTolerance) {
    return "not Hermitian (max deviation " + std::to_string(asym) + ")";
  }
  const Complex tr = m.trace();
  if (std::abs(tr - 1.0) > kTraceTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "trace " << tr.real() << (tr.imag() < 0 ? "" : "+") << tr.imag()
       << "i differs from 1";
    return os.str();
  }
  const Eigen::MatrixXcd herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
      herm, Eigen::EigenvaluesOnly);
  const double lowest = solver.eigenvalues().minCoeff();
  if (lowest < kEigenvalueFloor) {
    return "negative eigenvalue " + std::to_string(lowest);
  }
  return std::nullopt;
}

DensityMatrix::DensityMatrix(std::vector<int> kept_particles,
                             std::vector<std::vector<PathLabel>> local_bases,
                             Eigen::MatrixXcd entries)
    : kept_particles_(std::move(kept_particles)),
      local_bases_(std::move(local_bases)),
      entries_(std::move(entries)) {
  if (kept_particles_.empty() || kept_particles_.size() != local_bases_.size()) {
    throw StructuralError("one local basis per kept particle required");
  }
  if (ProductDimension(local_bases_) != entries_.rows()) {
    throw StructuralError("matrix dimension " + std::to_string(entries_.rows()) +
                          " does not match local bases");
  }
  if (auto problem = CheckDensityInvariants(entries_)) {
    throw ValidationError("invalid density matrix: " + *problem);
  }
}

std::optional<Eigen::Index> DensityMatrix::index_of(
    const BasisOutcome& outcome) const {
  return FlatIndex(outcome, local_bases_);
}

BasisOutcome DensityMatrix::outcome_at(Eigen::Index i) const {
  const auto digits = Digits(i, local_bases_);
  std::vector<PathLabel> labels;
  for (std::size_t k = 0; k < digits.size(); ++k) {
    labels.push_back(local_bases_[k][digits[k]]);
  }
  return BasisOutcome(std::move(labels));
}

Complex DensityMatrix::entry(const BasisOutcome& row,
                             const BasisOutcome& col) const {
  const auto r = index_of(row);
  const auto c = index_of(col);
  if (!r || !c) return {};
  return entries_(*r, *c);
}

Eigen::VectorXd DensityMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
      entries_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

int DensityMatrix::rank(double tolerance) const {
  const auto ev = eigenvalues();
  return static_cast<int>((ev.array() > tolerance).count());
}

std::vector<PathLabel> LocalBasis(const PureState& psi, int p) {
  std::set<PathLabel> labels;
  for (const auto& [outcome, amp] : psi.terms()) {
    const PathLabel& l = outcome.particle(p);
    labels.insert(l);
    labels.insert(l.partner());
  }
  return {labels.begin(), labels.end()};
}

DensityMatrix ToDensity(const PureState& psi) {
  std::vector<int> all(psi.particle_count());
  for (int p = 1; p <= psi.particle_count(); ++p) all[p - 1] = p;
  return ReducedDensity(psi, all);
}

DensityMatrix ReducedDensity(const PureState& psi, std::span<const int> keep) {
  if (!psi.is_normalized()) {
    throw NormalizationError("density operator needs a normalized state (norm^2 = " +
                             std::to_string(psi.norm_squared()) + ")");
  }
  std::vector<int> particles(psi.particle_count());
  for (int p = 1; p <= psi.particle_count(); ++p) particles[p - 1] = p;
  const auto positions = KeepPositions(keep, particles);

  std::vector<int> kept;
  std::vector<int> traced;
  for (std::size_t k = 0; k < particles.size(); ++k) {
    if (std::find(positions.begin(), positions.end(), k) != positions.end()) {
      kept.push_back(particles[k]);
    } else {
      traced.push_back(particles[k]);
    }
  }
  std::vector<std::vector<PathLabel>> bases;
  for (int p : kept) bases.push_back(LocalBasis(psi, p));
  const auto dim = ProductDimension(bases);

  // Group amplitudes by the configuration of the traced-out particles; each
  // group contributes one rank-1 term to the reduced operator.
  std::map<BasisOutcome, std::vector<std::pair<Eigen::Index, Complex>>> groups;
  for (const auto& [outcome, amp] : psi.terms()) {
    const auto idx = FlatIndex(outcome.restricted_to(kept), bases);
    groups[outcome.restricted_to(traced)].emplace_back(*idx, amp);
  }
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [env, column] : groups) {
    for (const auto& [i, ai] : column) {
      for (const auto& [j, aj] : column) rho(i, j) += ai * std::conj(aj);
    }
  }
  return DensityMatrix(std::move(kept), std::move(bases), std::move(rho));
}

DensityMatrix PartialTrace(const DensityMatrix& rho,
                           std::span<const int> keep) {
  const auto& available = rho.kept_particles();
  const auto positions = KeepPositions(keep, available);
  if (positions.size() == available.size()) return rho;

  const auto& bases = rho.local_bases();
  std::vector<int> kept;
  std::vector<std::vector<PathLabel>> kept_bases;
  for (std::size_t k : positions) {
    kept.push_back(available[k]);
    kept_bases.push_back(bases[k]);
  }
  const auto dim = ProductDimension(kept_bases);

  std::vector<bool> is_kept(available.size(), false);
  for (std::size_t k : positions) is_kept[k] = true;

  // Split every full index into (kept index, traced index) once.
  const Eigen::Index full = rho.dim();
  std::vector<Eigen::Index> kept_index(full);
  std::vector<Eigen::Index> traced_index(full);
  for (Eigen::Index i = 0; i < full; ++i) {
    const auto digits = Digits(i, bases);
    Eigen::Index ki = 0;
    Eigen::Index ti = 0;
    for (std::size_t k = 0; k < digits.size(); ++k) {
      const auto radix = static_cast<Eigen::Index>(bases[k].size());
      if (is_kept[k]) {
        ki = ki * radix + digits[k];
      } else {
        ti = ti * radix + digits[k];
      }
    }
    kept_index[i] = ki;
    traced_index[i] = ti;
  }

  Eigen::MatrixXcd reduced = Eigen::MatrixXcd::Zero(dim, dim);
  const auto& m = rho.matrix();
  for (Eigen::Index i = 0; i < full; ++i) {
    for (Eigen::Index j = 0; j < full; ++j) {
      if (traced_index[i] == traced_index[j]) {
        reduced(kept_index[i], kept_index[j]) += m(i, j);
      }
    }
  }
  return DensityMatrix(std::move(kept), std::move(kept_bases),
                       std::move(reduced));
}

}  // namespace pisim
