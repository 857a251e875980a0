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

#ifndef DGLAB_RATIONAL_HPP_
#define DGLAB_RATIONAL_HPP_

#include <compare>
#include <cstdint>
#include <string>

namespace dglab {

// Exact rational with an explicit +infinity. Heights of cycles are compared
// with this type, never with doubles.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  static Rational infinity();

  bool is_infinite() const { return den_ == 0; }
  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const;

  // "m/N" or "m" or "inf".
  std::string str() const;

  // Numerator over the given denominator; throws if not representable.
  std::int64_t numerator_over(std::int64_t n) const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a,
                                          const Rational& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;  // 0 marks +infinity (num_ == 1)
};

std::int64_t lcm64(std::int64_t a, std::int64_t b);

}  // namespace dglab

#endif  // DGLAB_RATIONAL_HPP_
