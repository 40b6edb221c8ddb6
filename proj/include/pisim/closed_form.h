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

// Analytic predictions for the detected particles, built directly from the
// Dicke-sum expansion rather than by evolving the interferometer. Used as the
// oracle for the simulation.

#ifndef PISIM_CLOSED_FORM_H_
#define PISIM_CLOSED_FORM_H_

#include <cstdint>
#include <string>

#include "pisim/state_core.h"

namespace pisim {

// n detected particles, r of them at primed detectors.
struct DickeIndex {
  int n = 1;
  int r = 0;
};

enum class ClassId : std::uint8_t { kF1, kF2, kF3, kF4 };

struct EntangledClass {
  ClassId id = ClassId::kF1;
  int n = 2;
};

std::string ToString(ClassId id);
// Accepts "F1".."F4"; throws ArgumentError otherwise.
ClassId ParseClassId(const std::string& name);

std::uint64_t Binomial(int n, int k);

// Normalized equal-weight superposition of the C(n, r) detector kets with
// exactly r primed ports.
PureState DickeState(const DickeIndex& idx);

// Normalized detected-particle state for total phase xi: every outcome with
// r primed ports has amplitude (1/sqrt2)^{n+1} (i^r + i^{n-r} e^{i xi}).
PureState PredictedOutputState(int n, double xi);

// Probability of any single outcome with r primed ports under full path
// identity: [1 + cos(xi + (n - 2r) pi/2)] / 2^n.
double PredictedProbability(int n, int r, double xi);

// Alternating-sign Dicke superposition over the even (F1, F3) or odd
// (F2, F4) excitation numbers, each outcome weighted +-1, renormalized.
PureState EntangledClassState(const EntangledClass& cls);

// A total phase at which n detected particles end up in class `cls`; m
// selects the 2 pi branch.
double XiForClass(int n, ClassId cls, int m);

}  // namespace pisim

#endif  // PISIM_CLOSED_FORM_H_
