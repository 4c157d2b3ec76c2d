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

#include "coordlab/rational.h"

#include <cmath>
#include <cstdlib>
#include <limits>

#include "coordlab/error.h"

namespace coordlab {
namespace {

std::int64_t ParseInteger(std::string_view digits, std::string_view whole) {
  if (digits.empty()) {
    throw InvalidParameterError("malformed rational: '" + std::string(whole) +
                                "'");
  }
  std::int64_t value = 0;
  for (char ch : digits) {
    if (ch < '0' || ch > '9') {
      throw InvalidParameterError("malformed rational: '" +
                                  std::string(whole) + "'");
    }
    if (value > (std::numeric_limits<std::int64_t>::max() - 9) / 10) {
      throw InvalidParameterError("rational out of range: '" +
                                  std::string(whole) + "'");
    }
    value = value * 10 + (ch - '0');
  }
  return value;
}

}  // namespace

Rational ParseRational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  Rational result;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    std::int64_t num = ParseInteger(body.substr(0, slash), text);
    std::int64_t den = ParseInteger(body.substr(slash + 1), text);
    if (den == 0) {
      throw InvalidParameterError("zero denominator in '" + std::string(text) +
                                  "'");
    }
    result = Rational(num, den);
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = body.substr(0, dot);
    std::string_view frac_part = body.substr(dot + 1);
    if (frac_part.size() > 17) {
      throw InvalidParameterError("too many decimals in '" +
                                  std::string(text) + "'");
    }
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i) den *= 10;
    std::int64_t whole = int_part.empty() ? 0 : ParseInteger(int_part, text);
    std::int64_t frac = frac_part.empty() ? 0 : ParseInteger(frac_part, text);
    result = Rational(whole) + Rational(frac, den);
  } else {
    result = Rational(ParseInteger(body, text));
  }
  return negative ? -result : result;
}

std::string ToString(const Rational& value) {
  if (value.denominator() == 1) return std::to_string(value.numerator());
  return std::to_string(value.numerator()) + "/" +
         std::to_string(value.denominator());
}

std::optional<Rational> RationalFromDouble(double value,
                                           std::int64_t max_denominator) {
  if (!std::isfinite(value)) return std::nullopt;
  const long double target = value;
  const long double tol = 1e-15L * std::max(1.0L, std::fabs(target));
  // Continued-fraction convergents h/k.
  long double rest = target;
  std::int64_t h_prev = 1, h = 0, k_prev = 0, k = 1;
  for (int iter = 0; iter < 64; ++iter) {
    long double whole = std::floor(rest);
    if (std::fabs(whole) > 9e17L) return std::nullopt;
    auto a = static_cast<std::int64_t>(whole);
    std::int64_t h_next = a * h_prev + h;
    std::int64_t k_next = a * k_prev + k;
    if (k_next > max_denominator || k_next <= 0) return std::nullopt;
    h = h_prev;
    k = k_prev;
    h_prev = h_next;
    k_prev = k_next;
    long double approx =
        static_cast<long double>(h_prev) / static_cast<long double>(k_prev);
    if (std::fabs(approx - target) <= tol) return Rational(h_prev, k_prev);
    long double frac = rest - whole;
    if (frac == 0.0L) break;
    rest = 1.0L / frac;
  }
  return std::nullopt;
}

}  // namespace coordlab
