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
 * @file matrix_exp.hpp
 * @brief Scaling-and-squaring diagonal Padé exponential for any Real.
 *
 * The argument is scaled by 2^-s until its 1-norm is at most 1/2; the Padé
 * degree q is the smallest whose truncation constant
 * (q!)^2 / ((2q)! (2q+1)!) * (1/2)^(2q+1) is below the unit roundoff of Real.
 * That gives q = 8 for double and larger q for the MPFR types.
 */

#include "sphereheat/dense_matrix.hpp"

#include <cmath>
#include <cstddef>
#include <vector>

namespace sphereheat {

/// Padé degree needed for `digits` significant decimal digits at norm <= 1/2.
inline unsigned pade_degree_for_digits(int digits) {
  const double target = -(digits + 2) * std::log(10.0);
  for (unsigned q = 1; q < 64; ++q) {
    double log_c = 2 * std::lgamma(q + 1.0) - std::lgamma(2.0 * q + 1) - std::lgamma(2.0 * q + 2) +
                   (2.0 * q + 1) * std::log(0.5);
    if (log_c < target) return q;
  }
  return 64;
}

template <class Real>
DenseMatrix<Real> matrix_exponential(const DenseMatrix<Real>& a) {
  if (!a.square()) throw std::invalid_argument("matrix_exponential: matrix must be square");
  const std::size_t n = a.rows();
  if (n == 0) return a;

  const double norm = to_double(norm1(a));
  unsigned squarings = 0;
  if (norm > 0.5) squarings = static_cast<unsigned>(std::ceil(std::log2(norm / 0.5)));
  Real scale = 1;
  for (unsigned i = 0; i < squarings; ++i) scale /= 2;
  DenseMatrix<Real> x = a * scale;

  const unsigned q = pade_degree_for_digits(decimal_digits<Real>());
  // c_j = (2q-j)! q! / ((2q)! j! (q-j)!), built by the ratio c_j / c_{j-1}.
  std::vector<Real> c(q + 1);
  c[0] = 1;
  for (unsigned j = 1; j <= q; ++j) {
    c[j] = c[j - 1] * Real(q - j + 1) / Real(j * (2 * q - j + 1));
  }

  auto num = DenseMatrix<Real>::identity(n);
  auto den = DenseMatrix<Real>::identity(n);
  DenseMatrix<Real> power = DenseMatrix<Real>::identity(n);
  for (unsigned j = 1; j <= q; ++j) {
    power = power * x;
    DenseMatrix<Real> term = power * c[j];
    num += term;
    if (j % 2 == 1) {
      den -= term;
    } else {
      den += term;
    }
  }
  DenseMatrix<Real> r = solve(den, num);
  for (unsigned i = 0; i < squarings; ++i) r = r * r;
  return r;
}

}  // namespace sphereheat
