// Copyright 2026 The LAWNSec Authors
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

#ifndef LAWNSEC_ERRORS_H_
#define LAWNSEC_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lawnsec {

// Bad numeric input to a pure function (non-finite value, out-of-range
// argument, mismatched dimensions).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A configuration document or struct violates its invariants.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An API was called in a state that does not allow it.
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Oracle inputs for which the requested construction does not exist.
class DegenerateGeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// No feasible plan exists under the motion constraints.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// LLM provider failure: transport, HTTP status, or envelope format.
class ProviderError : public std::runtime_error {
 public:
  ProviderError(const std::string& what, int attempts = 0)
      : std::runtime_error(what), attempts_(attempts) {}
  int attempts() const { return attempts_; }

 private:
  int attempts_;
};

// An LLM reply that cannot be turned into an augmentation.
class AugmentationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite loss or parameter during training.
class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lawnsec

#endif  // LAWNSEC_ERRORS_H_
