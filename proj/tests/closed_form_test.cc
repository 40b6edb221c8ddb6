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
#include <random>

#include "gtest/gtest.h"
#include "pisim/errors.h"
#include "pisim/interferometer.h"
#include "test_util.h"

namespace pisim {
namespace {

using testing::kI;
using testing::kPi;
using testing::kR;
using testing::Ket;

constexpr double kTwoPi = 2.0 * kPi;

bool IsValidClass(int n, ClassId id) {
  const bool even_class = id == ClassId::kF1 || id == ClassId::kF2;
  return even_class ? (n >= 2 && n % 2 == 0) : (n % 2 == 1);
}

// Per-outcome weights written out from the class definitions: F1/F3 keep the
// even excitation numbers 0, 2, 4, ... with signs +, -, +; F2/F4 keep 1, 3, 5
// with the same alternation.
PureState ClassOracle(int n, ClassId id) {
  const bool odd_r = id == ClassId::kF2 || id == ClassId::kF4;
  std::vector<std::pair<BasisOutcome, Complex>> terms;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
    const int r = std::popcount(bits);
    if ((r % 2 == 1) != odd_r) continue;
    const int k = odd_r ? (r - 1) / 2 : r / 2;
    terms.emplace_back(DetectorOutcome(n, bits), k % 2 == 0 ? 1.0 : -1.0);
  }
  return PureStateFromTerms(terms).normalized();
}

TEST(BinomialTest, SmallValues) {
  EXPECT_EQ(Binomial(0, 0), 1u);
  EXPECT_EQ(Binomial(5, 2), 10u);
  EXPECT_EQ(Binomial(16, 8), 12870u);
  EXPECT_EQ(Binomial(3, 4), 0u);
}

TEST(DickeStateTest, TwoParticlesOneExcitationIsPsiPlus) {
  EXPECT_NEAR(PureFidelity(DickeState({2, 1}), testing::PsiPlus()), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(DickeState({2, 1}).amplitude(Ket("01")) - kR), 0.0, 1e-16);
}

TEST(DickeStateTest, ExtremesHaveOneTerm) {
  const PureState d0 = DickeState({3, 0});
  ASSERT_EQ(d0.term_count(), 1u);
  EXPECT_NEAR(std::abs(d0.amplitude(Ket("000")) - 1.0), 0.0, 1e-16);
  EXPECT_EQ(DickeState({3, 3}).term_count(), 1u);
}

TEST(DickeStateTest, EqualAmplitudeTerms) {
  const PureState d = DickeState({3, 2});
  ASSERT_EQ(d.term_count(), 3u);
  for (const char* bits : {"110", "101", "011"}) {
    EXPECT_NEAR(std::abs(d.amplitude(Ket(bits)) - 1.0 / std::sqrt(3.0)), 0.0, 1e-15);
  }
}

TEST(DickeStateTest, Errors) {
  EXPECT_THROW(DickeState({3, 4}), ArgumentError);
  EXPECT_THROW(DickeState({3, -1}), ArgumentError);
  EXPECT_THROW(DickeState({0, 0}), ArgumentError);
}

TEST(DickeStateTest, MutuallyOrthonormal) {
  for (int n = 1; n <= 8; ++n) {
    for (int r = 0; r <= n; ++r) {
      const PureState a = DickeState({n, r});
      EXPECT_NEAR(a.norm_squared(), 1.0, 1e-12);
      EXPECT_EQ(a.term_count(), Binomial(n, r));
      for (int s = r + 1; s <= n; ++s) {
        EXPECT_LE(std::abs(InnerProduct(a, DickeState({n, s}))), 1e-12);
      }
    }
  }
}

TEST(PredictedOutputStateTest, TwoParticlesZeroPhaseSuppressesUnprimedPair) {
  const PureState s = PredictedOutputState(2, 0.0);
  EXPECT_LE(std::abs(s.amplitude(Ket("00"))), 1e-15);
  EXPECT_NEAR(PureFidelity(s, testing::PsiPlus()), 1.0, 1e-12);
}

TEST(PredictedOutputStateTest, TwoParticlesPiPhaseIsPhiMinus) {
  EXPECT_NEAR(PureFidelity(PredictedOutputState(2, kPi), testing::PhiMinus()), 1.0, 1e-12);
}

TEST(PredictedOutputStateTest, ThreeParticlesQuarterTurnIsGhzClass) {
  EXPECT_NEAR(PureFidelity(PredictedOutputState(3, kPi / 2), testing::CaseThreeState()), 1.0,
              1e-12);
}

TEST(PredictedOutputStateTest, NormalizedAndRejectsEmpty) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> phase(-10.0, 10.0);
  for (int n = 1; n <= 10; ++n) {
    EXPECT_NEAR(PredictedOutputState(n, phase(rng)).norm_squared(), 1.0, 1e-12);
  }
  EXPECT_THROW(PredictedOutputState(0, 0.0), ArgumentError);
}

TEST(EntangledClassStateTest, TwoParticleClasses) {
  EXPECT_NEAR(PureFidelity(EntangledClassState({ClassId::kF2, 2}), testing::PsiPlus()), 1.0,
              1e-15);
  EXPECT_NEAR(PureFidelity(EntangledClassState({ClassId::kF1, 2}), testing::PhiMinus()), 1.0,
              1e-15);
}

TEST(EntangledClassStateTest, ThreeParticleGhzClass) {
  EXPECT_NEAR(PureFidelity(EntangledClassState({ClassId::kF3, 3}), testing::CaseThreeState()),
              1.0, 1e-15);
}

TEST(EntangledClassStateTest, ParityErrors) {
  EXPECT_THROW(EntangledClassState({ClassId::kF1, 3}), ArgumentError);
  EXPECT_THROW(EntangledClassState({ClassId::kF2, 1}), ArgumentError);
  EXPECT_THROW(EntangledClassState({ClassId::kF3, 2}), ArgumentError);
  EXPECT_THROW(EntangledClassState({ClassId::kF4, 4}), ArgumentError);
  EXPECT_THROW(EntangledClassState({ClassId::kF1, 0}), ArgumentError);
}

TEST(EntangledClassStateTest, MatchesWrittenOutWeights) {
  for (int n = 1; n <= 8; ++n) {
    for (ClassId id : {ClassId::kF1, ClassId::kF2, ClassId::kF3, ClassId::kF4}) {
      if (!IsValidClass(n, id)) continue;
      const PureState s = EntangledClassState({id, n});
      const PureState oracle = ClassOracle(n, id);
      EXPECT_NEAR(std::abs(InnerProduct(oracle, s)), 1.0, 1e-12) << ToString(id) << " n=" << n;
    }
  }
}

TEST(ClassIdTest, RoundTrip) {
  for (ClassId id : {ClassId::kF1, ClassId::kF2, ClassId::kF3, ClassId::kF4}) {
    EXPECT_EQ(ParseClassId(ToString(id)), id);
  }
  EXPECT_EQ(ToString(ClassId::kF3), "F3");
  EXPECT_THROW(ParseClassId("F5"), ArgumentError);
  EXPECT_THROW(ParseClassId("f1"), ArgumentError);
}

TEST(XiForClassTest, TableValues) {
  EXPECT_NEAR(XiForClass(2, ClassId::kF2, 0), 0.0, 1e-15);
  EXPECT_NEAR(XiForClass(2, ClassId::kF1, 0), kPi, 1e-15);
  EXPECT_NEAR(XiForClass(3, ClassId::kF3, 0), kPi / 2, 1e-15);
  EXPECT_NEAR(XiForClass(1, ClassId::kF3, 0), -kPi / 2, 1e-15);
  EXPECT_NEAR(XiForClass(4, ClassId::kF1, 1), kTwoPi, 1e-15);
  EXPECT_NEAR(XiForClass(4, ClassId::kF2, 0), kPi, 1e-15);
  EXPECT_NEAR(XiForClass(6, ClassId::kF2, -1), -kTwoPi, 1e-15);
}

TEST(XiForClassTest, Errors) {
  EXPECT_THROW(XiForClass(2, ClassId::kF3, 0), ArgumentError);
  EXPECT_THROW(XiForClass(3, ClassId::kF1, 0), ArgumentError);
  EXPECT_THROW(XiForClass(0, ClassId::kF1, 0), ArgumentError);
}

TEST(PredictedProbabilityTest, TwoParticleExamples) {
  EXPECT_NEAR(PredictedProbability(2, 0, 0.0), 0.0, 1e-15);
  EXPECT_NEAR(PredictedProbability(2, 2, 0.0), 0.0, 1e-15);
  // Each of the two single-primed outcomes carries 1/2.
  EXPECT_NEAR(PredictedProbability(2, 1, 0.0), 0.5, 1e-15);
  EXPECT_NEAR(2 * PredictedProbability(2, 1, 0.0), 1.0, 1e-15);
}

TEST(PredictedProbabilityTest, Errors) {
  EXPECT_THROW(PredictedProbability(2, 3, 0.0), ArgumentError);
  EXPECT_THROW(PredictedProbability(2, -1, 0.0), ArgumentError);
  EXPECT_THROW(PredictedProbability(0, 0, 0.0), ArgumentError);
}

TEST(PredictedProbabilityTest, CompletenessOverOutcomes) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> phase(-20.0, 20.0);
  for (int n = 1; n <= 12; ++n) {
    for (int trial = 0; trial < 10; ++trial) {
      const double xi = phase(rng);
      double total = 0.0;
      for (int r = 0; r <= n; ++r) total += Binomial(n, r) * PredictedProbability(n, r, xi);
      EXPECT_NEAR(total, 1.0, 1e-12);
    }
  }
}

TEST(PredictedProbabilityTest, EqualsSquaredAmplitude) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> phase(-kTwoPi, kTwoPi);
  for (int n = 1; n <= 6; ++n) {
    for (int trial = 0; trial < 20; ++trial) {
      const double xi = trial < 4 ? trial * kPi / 2 : phase(rng);
      const PureState s = PredictedOutputState(n, xi);
      for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
        const int r = std::popcount(bits);
        EXPECT_NEAR(PredictedProbability(n, r, xi),
                    std::norm(s.amplitude(DetectorOutcome(n, bits))), 1e-12);
      }
    }
  }
}

// Unnormalized closed-form amplitudes against the two-branch expansion with
// all phases folded into phi0.
TEST(PredictedOutputStateTest, AmplitudesMatchBranchExpansion) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  for (int n = 1; n <= 6; ++n) {
    const double xi = phase(rng);
    const PureState s = PredictedOutputState(n, xi);
    const std::vector<double> zeros(n, 0.0);
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
      std::vector<bool> primed;
      for (int k = n - 1; k >= 0; --k) primed.push_back((bits >> k) & 1);
      const Complex expected = testing::BruteForceAmplitude(xi, zeros, {}, primed);
      EXPECT_NEAR(std::abs(s.amplitude(DetectorOutcome(n, bits)) - expected), 0.0, 1e-12);
    }
  }
}

TEST(ClosedFormPropertyTest, SimulationMatchesClosedForm) {
  std::mt19937_64 rng(20170327);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  for (int n = 1; n <= 5; ++n) {
    for (int m = 0; m <= 3; ++m) {
      for (int trial = 0; trial < 100; ++trial) {
        SchemeConfig cfg = SchemeConfig::Zero(n + m, m);
        cfg.phi0 = phase(rng);
        for (double& v : cfg.phi) v = phase(rng);
        for (double& v : cfg.theta) v = phase(rng);
        const PureState detected = DetectedPureState(RunScheme(cfg));
        const double f = PureFidelity(detected, PredictedOutputState(n, cfg.total_phase()));
        ASSERT_NEAR(f, 1.0, 1e-9) << "n=" << n << " m=" << m << " trial=" << trial;
      }
    }
  }
}

TEST(ClosedFormPropertyTest, EveryClassIsAttained) {
  for (int n = 1; n <= 6; ++n) {
    for (ClassId id : {ClassId::kF1, ClassId::kF2, ClassId::kF3, ClassId::kF4}) {
      if (!IsValidClass(n, id)) continue;
      const PureState target = EntangledClassState({id, n});
      for (int m = -2; m <= 2; ++m) {
        const double f = PureFidelity(PredictedOutputState(n, XiForClass(n, id, m)), target);
        EXPECT_NEAR(f, 1.0, 1e-9) << ToString(id) << " n=" << n << " m=" << m;
      }
    }
  }
}

}  // namespace
}  // namespace pisim
