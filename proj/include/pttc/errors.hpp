// Copyright 2026 The pttc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace pttc {

// Every error class carries a stable name and a process exit code so the CLI
// can report failures machine-readably and exit with a per-class code.
class Error : public std::runtime_error {
 public:
  Error(std::string name, int exit_code, const std::string& message)
      : std::runtime_error(message), name_(std::move(name)), exit_code_(exit_code) {}

  const std::string& name() const noexcept { return name_; }
  int exit_code() const noexcept { return exit_code_; }

 private:
  std::string name_;
  int exit_code_;
};

#define PTTC_DEFINE_ERROR(ClassName, code)              \
  class ClassName : public Error {                      \
   public:                                              \
    explicit ClassName(const std::string& message)      \
        : Error(#ClassName, (code), message) {}         \
  }

// I/O and input validation
PTTC_DEFINE_ERROR(IoError, 3);
PTTC_DEFINE_ERROR(ParseError, 4);
PTTC_DEFINE_ERROR(InvalidInput, 5);

// kinematics / trajectory pipeline
PTTC_DEFINE_ERROR(TimestampMismatch, 10);
PTTC_DEFINE_ERROR(TooFewSamples, 11);
PTTC_DEFINE_ERROR(NoOverlap, 12);
PTTC_DEFINE_ERROR(EmptySeries, 13);
PTTC_DEFINE_ERROR(NoApproachPhase, 14);
PTTC_DEFINE_ERROR(InvalidTrajectory, 15);

// calibration
PTTC_DEFINE_ERROR(TooFewPoints, 20);
PTTC_DEFINE_ERROR(SingularDesign, 21);
PTTC_DEFINE_ERROR(NonPositiveX, 22);
PTTC_DEFINE_ERROR(DegenerateObservations, 23);
PTTC_DEFINE_ERROR(NonPositiveTtc, 24);

// stats
PTTC_DEFINE_ERROR(EmptyInput, 30);

// scenario generation
PTTC_DEFINE_ERROR(InvalidSpec, 40);
PTTC_DEFINE_ERROR(InfeasibleSpec, 41);

// streaming
PTTC_DEFINE_ERROR(TimeRegression, 50);
PTTC_DEFINE_ERROR(OutOfRange, 51);

#undef PTTC_DEFINE_ERROR

}  // namespace pttc
