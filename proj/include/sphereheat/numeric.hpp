/*
   Copyright 2026 The sphereheat Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

/**
 * @file numeric.hpp
 * @brief Scalar types shared by every module.
 *
 * Exact quantities live in `Rational` (GMP rationals). Floating work is
 * templated on a `Real` that is either `double` or `Extended`
 * (50 significant digits, MPFR). `SeriesReal` carries the truncated
 * exponential series, where alternating terms cancel heavily.
 */

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <cstdio>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace sphereheat {

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;
using Extended = boost::multiprecision::mpfr_float_50;
using SeriesReal = boost::multiprecision::mpfr_float_100;

/// Working precision selector exposed on the command line.
enum class Precision { Double, Extended };

template <class Real>
inline constexpr bool is_builtin_real_v = std::is_floating_point_v<Real>;

/// Significant decimal digits carried by `Real`.
template <class Real>
constexpr int decimal_digits() {
  return std::numeric_limits<Real>::digits10;
}

/// Rational -> Real. Rounds once (GMP for double, MPFR for the rest).
template <class Real>
Real to_real(const Rational& q) {
  if constexpr (std::is_same_v<Real, double>) {
    return q.template convert_to<double>();
  } else {
    return static_cast<Real>(q);
  }
}

template <class Real>
double to_double(const Real& x) {
  if constexpr (std::is_same_v<Real, double>) {
    return x;
  } else {
    return static_cast<double>(x);
  }
}

/// Exact rational image of a finite double.
inline Rational exact_rational(double x) {
  if (!std::isfinite(x)) throw std::domain_error("exact_rational: non-finite input");
  return Rational(x);
}

/// z (z-1) ... (z-j+1); empty product is 1.
inline Rational falling_factorial(const Rational& z, unsigned j) {
  Rational r = 1;
  for (unsigned i = 0; i < j; ++i) r *= (z - i);
  return r;
}

/// z (z+1) ... (z+j-1); empty product is 1.
inline Rational rising_factorial(const Rational& z, unsigned j) {
  Rational r = 1;
  for (unsigned i = 0; i < j; ++i) r *= (z + i);
  return r;
}

inline Integer factorial(unsigned n) {
  Integer r = 1;
  for (unsigned i = 2; i <= n; ++i) r *= i;
  return r;
}

inline Integer binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  Integer r = 1;
  for (unsigned i = 1; i <= k; ++i) {
    r *= (n - k + i);
    r /= i;
  }
  return r;
}

/// (n-1)!! for even n, written as n! / (2^{n/2} (n/2)!); zero for odd n.
inline Integer gaussian_moment_factor(unsigned n) {
  if (n % 2 != 0) return 0;
  Integer two_pow = 1;
  for (unsigned i = 0; i < n / 2; ++i) two_pow *= 2;
  return factorial(n) / (two_pow * factorial(n / 2));
}

template <class Real>
Real pow_int(const Real& x, unsigned n) {
  Real r = 1;
  Real b = x;
  while (n != 0) {
    if (n & 1u) r *= b;
    b *= b;
    n >>= 1u;
  }
  return r;
}

inline Rational pow_int(const Rational& x, unsigned n) {
  Rational r = 1;
  for (unsigned i = 0; i < n; ++i) r *= x;
  return r;
}

/// Printed with 17 significant digits, the round-trip width for doubles.
template <class Real>
std::string format_real(const Real& x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", to_double(x));
  return buf;
}

}  // namespace sphereheat
