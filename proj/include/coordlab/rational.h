// Copyright 2026 The Coordlab Authors
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

#ifndef COORDLAB_RATIONAL_H_
#define COORDLAB_RATIONAL_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace coordlab {

using Rational = boost::rational<std::int64_t>;

// Parses "p/q", "p" or a finite decimal such as "0.25".
Rational ParseRational(std::string_view text);

std::string ToString(const Rational& value);

// Recovers a small-denominator rational that reproduces `value` to within
// one part in 1e15. Returns nullopt if no denominator up to `max_denominator`
// does.
std::optional<Rational> RationalFromDouble(double value,
                                           std::int64_t max_denominator =
                                               1'000'000'000);

inline double ToDouble(const Rational& value) {
  return static_cast<double>(value.numerator()) /
         static_cast<double>(value.denominator());
}

}  // namespace coordlab

#endif  // COORDLAB_RATIONAL_H_
