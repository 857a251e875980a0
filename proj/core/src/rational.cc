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

#include "dglab/rational.hpp"

#include <limits>
#include <numeric>
#include <stdexcept>

namespace dglab {

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("Rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  std::int64_t g = std::gcd(num, den);
  if (g == 0) g = 1;
  num_ = num / g;
  den_ = den / g;
}

Rational Rational::infinity() {
  Rational r;
  r.num_ = 1;
  r.den_ = 0;
  return r;
}

double Rational::to_double() const {
  if (is_infinite()) return std::numeric_limits<double>::infinity();
  return static_cast<double>(num_) / static_cast<double>(den_);
}

std::string Rational::str() const {
  if (is_infinite()) return "inf";
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::int64_t Rational::numerator_over(std::int64_t n) const {
  if (is_infinite() || n <= 0 || n % den_ != 0) {
    throw std::invalid_argument("Rational " + str() +
                                " is not a multiple of 1/" + std::to_string(n));
  }
  return num_ * (n / den_);
}

Rational operator+(const Rational& a, const Rational& b) {
  if (a.is_infinite() || b.is_infinite()) return Rational::infinity();
  std::int64_t l = lcm64(a.den_, b.den_);
  return Rational(a.num_ * (l / a.den_) + b.num_ * (l / b.den_), l);
}

Rational operator-(const Rational& a, const Rational& b) {
  if (b.is_infinite()) throw std::invalid_argument("Rational: x - inf");
  if (a.is_infinite()) return a;
  std::int64_t l = lcm64(a.den_, b.den_);
  return Rational(a.num_ * (l / a.den_) - b.num_ * (l / b.den_), l);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  if (a.is_infinite() || b.is_infinite()) {
    return static_cast<int>(a.is_infinite()) <=> static_cast<int>(b.is_infinite());
  }
  // Denominators stay small (heights are multiples of 1/N), so the cross
  // products cannot overflow.
  return a.num_ * b.den_ <=> b.num_ * a.den_;
}

std::int64_t lcm64(std::int64_t a, std::int64_t b) { return std::lcm(a, b); }

}  // namespace dglab
