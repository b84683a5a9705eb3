// Copyright 2026 The swfair Authors
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

#ifndef SWFAIR_ERRORS_HPP_
#define SWFAIR_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace swfair {

// Malformed input: unknown users, bad subsets, wrong lengths, parse failures.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidSubsetError : public InputError {
 public:
  using InputError::InputError;
};

class IncompleteTableError : public InputError {
 public:
  using InputError::InputError;
};

class InvalidReductionError : public InputError {
 public:
  using InputError::InputError;
};

class PreconditionError : public InputError {
 public:
  using InputError::InputError;
};

class LoadError : public InputError {
 public:
  using InputError::InputError;
};

// An exhaustive (2^n) operation was requested above the configured size limit.
class SizeLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a solver result fails its own consistency checks, which
// normally points at tolerance problems or a non-submodular input.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Base for iterative-solver failures. Concrete payloads carry the best
// iterate so callers can continue with a warning.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace swfair

#endif  // SWFAIR_ERRORS_HPP_
