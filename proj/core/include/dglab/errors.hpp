// Copyright 2026 The dglab Authors
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

#ifndef DGLAB_ERRORS_HPP_
#define DGLAB_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <vector>

namespace dglab {

// Input failed structural validation. Carries the list of violations.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

// A numerical procedure did not reach its target (LP cycling, iteration cap,
// singular system that should not be singular).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The sampled family is not described by a single leading term.
class FitRejected : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace dglab

#endif  // DGLAB_ERRORS_HPP_
