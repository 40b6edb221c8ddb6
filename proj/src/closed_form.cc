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

#include "pisim/closed_form.h"

#include <bit>
#include <cmath>
#include <numbers>
#include <vector>

#include "pisim/errors.h"

namespace pisim {

namespace {

constexpr double kPi = std::numbers::pi;

// i^k, exact.
Complex IPower(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0:
      return {1.0, 0.0};
    case 1:
      return {0.0, 1.0};
    case 2:
      return {-1.0, 0.0};
    default:
      return {0.0, -1.0};
  }
}

void CheckDetectedCount(int n) {
  if (n < 1 || n > 16) {
    throw ArgumentError("detected-particle count " + std::to_string(n) +
                        " outside 1..16");
  }
}

bool IsEvenClass(ClassId id) {
  return id == ClassId::kF1 || id == ClassId::kF3;
}

void CheckParity(int n, ClassId id) {
  const bool needs_even_n = id == ClassId::kF1 || id == ClassId::kF2;
  if (needs_even_n && (n < 2 || n % 2 != 0)) {
    throw ArgumentError(ToString(id) + " needs an even particle count >= 2, got " +
                        std::to_string(n));
  }
  if (!needs_even_n && (n < 1 || n % 2 != 1)) {
    throw ArgumentError(ToString(id) + " needs an odd particle count, got " +
                        std::to_string(n));
  }
}

}  // namespace

std::string ToString(ClassId id) {
  switch (id) {
    case ClassId::kF1:
      return "F1";
    case ClassId::kF2:
      return "F2";
    case ClassId::kF3:
      return "F3";
    case ClassId::kF4:
      return "F4";
  }
  return "?";
}

ClassId ParseClassId(const std::string& name) {
  if (name == "F1") return ClassId::kF1;
  if (name == "F2") return ClassId::kF2;
  if (name == "F3") return ClassId::kF3;
  if (name == "F4") return ClassId::kF4;
  throw ArgumentError("unknown entangled class '" + name + "'");
}

std::uint64_t Binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t c = 1;
  for (int i = 1; i <= k; ++i) c = c * static_cast<std::uint64_t>(n - k + i) / i;
  return c;
}

PureState DickeState(const DickeIndex& idx) {
  CheckDetectedCount(idx.n);
  if (idx.r < 0 || idx.r > idx.n) {
    throw ArgumentError("excitation number " + std::to_string(idx.r) +
                        " outside 0.." + std::to_string(idx.n));
  }
  const double amp = 1.0 / std::sqrt(static_cast<double>(Binomial(idx.n, idx.r)));
  std::vector<std::pair<BasisOutcome, Complex>> terms;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << idx.n); ++bits) {
    if (std::popcount(bits) == idx.r) {
      terms.emplace_back(DetectorOutcome(idx.n, bits), amp);
    }
  }
  return PureStateFromTerms(terms);
}

PureState PredictedOutputState(int n, double xi) {
  CheckDetectedCount(n);
  const Complex source_phase = std::polar(1.0, xi);
  const double scale = std::pow(std::numbers::sqrt2, -(n + 1));
  std::vector<std::pair<BasisOutcome, Complex>> terms;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
    const int r = std::popcount(bits);
    terms.emplace_back(DetectorOutcome(n, bits),
                       scale * (IPower(r) + IPower(n - r) * source_phase));
  }
  // Unit norm analytically; renormalizing only absorbs rounding.
  return PureStateFromTerms(terms).normalized();
}

double PredictedProbability(int n, int r, double xi) {
  CheckDetectedCount(n);
  if (r < 0 || r > n) {
    throw ArgumentError("excitation number " + std::to_string(r) +
                        " outside 0.." + std::to_string(n));
  }
  // cos(xi + k pi/2) by quadrant.
  double c = 0.0;
  switch ((((n - 2 * r) % 4) + 4) % 4) {
    case 0:
      c = std::cos(xi);
      break;
    case 1:
      c = -std::sin(xi);
      break;
    case 2:
      c = -std::cos(xi);
      break;
    default:
      c = std::sin(xi);
      break;
  }
  return (1.0 + c) / std::ldexp(1.0, n);
}

PureState EntangledClassState(const EntangledClass& cls) {
  CheckParity(cls.n, cls.id);
  const int parity = IsEvenClass(cls.id) ? 0 : 1;
  std::vector<std::pair<BasisOutcome, Complex>> terms;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << cls.n); ++bits) {
    const int r = std::popcount(bits);
    if (r % 2 != parity) continue;
    const int r_half = (r - parity) / 2;
    terms.emplace_back(DetectorOutcome(cls.n, bits), r_half % 2 ? -1.0 : 1.0);
  }
  return PureStateFromTerms(terms).normalized();
}

double XiForClass(int n, ClassId cls, int m) {
  CheckParity(n, cls);
  const double even = 2.0 * m * kPi;          // 2 m pi
  const double odd = (2.0 * m + 1.0) * kPi;   // (2m + 1) pi
  const double plus = (2.0 * m + 0.5) * kPi;  // (2m + 1/2) pi
  const double minus = (2.0 * m - 0.5) * kPi; // (2m - 1/2) pi
  switch (n % 4) {
    case 0:
      return cls == ClassId::kF1 ? even : odd;
    case 2:
      return cls == ClassId::kF1 ? odd : even;
    case 1:
      return cls == ClassId::kF3 ? minus : plus;
    default:
      return cls == ClassId::kF3 ? plus : minus;
  }
}

}  // namespace pisim
