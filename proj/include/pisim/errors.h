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

#ifndef PISIM_ERRORS_H_
#define PISIM_ERRORS_H_

#include <stdexcept>
#include <string>

namespace pisim {

// Base of every error raised by the library. Each subclass names one failure
// category so callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Outcomes of different lengths, particle-count mismatches.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// A superposition whose amplitudes all cancelled.
class EmptyStateError : public Error {
 public:
  using Error::Error;
};

class NormalizationError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

// An interferometer stage applied to a particle that already passed it
// (or a later stage).
class StageOrderError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// A matrix violating the density-operator invariants.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Visibility of a pattern whose fitted mean is zero.
class UndefinedVisibilityError : public Error {
 public:
  using Error::Error;
};

// Problem size beyond what dense storage supports.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Reading or writing a file failed.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace pisim

#endif  // PISIM_ERRORS_H_
