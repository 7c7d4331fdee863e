// Copyright 2026 The CRMS Authors
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

namespace crms {

// Base of every error raised by the library. The CLI maps each subclass to a
// distinct exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or insufficient caller input (sample counts, budgets, sizes).
class InputError : public Error {
 public:
  using Error::Error;
};

// A resource value outside its admissible range (non-positive quota, memory
// outside [r_min, r_max]).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Model coefficients that violate the model's sign constraints.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Ill-conditioned data, e.g. all samples identical.
class ConditioningError : public Error {
 public:
  using Error::Error;
};

// Queue with utilization >= 1 asked for a steady-state metric.
class InstabilityError : public Error {
 public:
  using Error::Error;
};

// No allocation satisfies the budgets and stability. `binding()` names the
// constraint that could not be met ("cpu", "memory", "stability", ...).
class InfeasibleError : public Error {
 public:
  InfeasibleError(std::string binding, const std::string& what)
      : Error(what), binding_(std::move(binding)) {}
  const std::string& binding() const { return binding_; }

 private:
  std::string binding_;
};

// An iterative solver stopped without meeting its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// The objective has no finite minimizer, e.g. a delay-only objective without a
// CPU cap.
class UnboundedError : public Error {
 public:
  using Error::Error;
};

// Text input that does not follow a documented file format.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, int line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace crms
