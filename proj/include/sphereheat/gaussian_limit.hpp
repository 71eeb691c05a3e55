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
 * @file gaussian_limit.hpp
 * @brief The N -> infinity Gaussian kernel: variances, density, moments.
 *
 * The first coordinate has variance 1 - e^{-t} - t e^{-t}, the others
 * 1 - e^{-t}, and the coordinates are independent.
 */

#include "sphereheat/numeric.hpp"
#include "sphereheat/polynomial.hpp"

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace sphereheat {

/// 1 - e^{-t}(1 + t), accurate for small t where it behaves like t^2/2.
inline double var_first(double t) {
  if (t < 1.0) {
    // sum_{n>=2} (-1)^n (n-1) t^n / n!
    double term = t * t / 2;
    double sum = 0;
    for (int n = 2; n < 40; ++n) {
      sum += (n - 1) * term;
      term *= -t / (n + 1);
      if (std::abs(term) * n < 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  return -std::expm1(-t) - t * std::exp(-t);
}

inline double var_rest(double t) { return -std::expm1(-t); }

struct LimitKernelParams {
  double t = 0;
  std::size_t k = 1;
  double var_first = 0;
  double var_rest = 0;
  double norm_const = 0;  // (2 pi)^{-k/2} var_first^{-1/2} var_rest^{(1-k)/2}
};

inline LimitKernelParams make_limit_params(double t, std::size_t k) {
  if (!(t > 0) || !std::isfinite(t)) throw std::invalid_argument("limit kernel: t must be positive");
  if (k == 0) throw std::invalid_argument("limit kernel: k must be >= 1");
  LimitKernelParams p;
  p.t = t;
  p.k = k;
  p.var_first = sphereheat::var_first(t);
  p.var_rest = sphereheat::var_rest(t);
  p.norm_const = std::pow(2 * std::numbers::pi, -0.5 * static_cast<double>(k)) / std::sqrt(p.var_first) *
                 std::pow(p.var_rest, 0.5 * (1.0 - static_cast<double>(k)));
  return p;
}

inline double limit_density(const LimitKernelParams& p, std::span<const double> x) {
  if (x.size() != p.k) throw std::invalid_argument("limit_density: point must have k coordinates");
  double q = x[0] * x[0] / p.var_first;
  for (std::size_t j = 1; j < x.size(); ++j) q += x[j] * x[j] / p.var_rest;
  return p.norm_const * std::exp(-0.5 * q);
}

/// prod_j (n_j - 1)!! sigma_j^{n_j}, zero when some n_j is odd.
inline double gaussian_moment(const MultiIndex& alpha, double t) {
  if (!(t > 0)) throw std::invalid_argument("gaussian_moment: t must be positive");
  double v = 1;
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    const unsigned n = alpha[j];
    if (n % 2 == 1) return 0.0;
    const double var = j == 0 ? var_first(t) : var_rest(t);
    v *= to_double(gaussian_moment_factor(n)) * std::pow(var, n / 2);
  }
  return v;
}

inline double standard_gaussian_moment(const MultiIndex& alpha) {
  double v = 1;
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    if (alpha[j] % 2 == 1) return 0.0;
    v *= to_double(gaussian_moment_factor(alpha[j]));
  }
  return v;
}

/// |gaussian_moment(alpha, t) - standard Gaussian moment|; t must be in the saturated regime.
inline double classical_limit_check(const MultiIndex& alpha, double t_large) {
  if (t_large < 20) throw std::invalid_argument("classical_limit_check: t_large must be >= 20");
  return std::abs(gaussian_moment(alpha, t_large) - standard_gaussian_moment(alpha));
}

/// Gauss-Hermite rule for weight e^{-z^2}, nodes by Newton on the orthonormal recurrence.
struct GaussHermite {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussHermite(unsigned n) : nodes(n), weights(n) {
    if (n == 0) throw std::invalid_argument("GaussHermite: need at least one node");
    const double pim4 = std::pow(std::numbers::pi, -0.25);
    double z = 0;
    for (unsigned i = 0; i < (n + 1) / 2; ++i) {
      // Asymptotic initial guesses for the largest roots, then from the previous ones.
      if (i == 0) {
        z = std::sqrt(2.0 * n + 1) - 1.85575 * std::pow(2.0 * n + 1, -1.0 / 6);
      } else if (i == 1) {
        z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
      } else if (i == 2) {
        z = 1.86 * z - 0.86 * nodes[0];
      } else if (i == 3) {
        z = 1.91 * z - 0.91 * nodes[1];
      } else {
        z = 2.0 * z - nodes[i - 2];
      }
      double pp = 0;
      for (int it = 0; it < 100; ++it) {
        double p1 = pim4, p2 = 0;
        for (unsigned j = 1; j <= n; ++j) {
          const double p3 = p2;
          p2 = p1;
          p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
        }
        pp = std::sqrt(2.0 * n) * p2;
        const double dz = p1 / pp;
        z -= dz;
        if (std::abs(dz) <= 1e-15 * std::max(1.0, std::abs(z))) break;
      }
      nodes[i] = z;
      nodes[n - 1 - i] = -z;
      weights[i] = weights[n - 1 - i] = 2.0 / (pp * pp);
    }
  }
};

/// Integral over R^d of f by tensor Gauss-Hermite, coordinate j scaled by sqrt(2 var_j).
///
/// Exact (to rounding) when f times exp(sum x_j^2 / (2 var_j)) is a polynomial of
/// degree < 2n in each coordinate.
template <class F>
double gaussian_tensor_quadrature(F&& f, std::span<const double> variances, unsigned n = 24) {
  const GaussHermite gh(n);
  const std::size_t d = variances.size();
  std::vector<double> scale(d);
  for (std::size_t j = 0; j < d; ++j) scale[j] = std::sqrt(2 * variances[j]);
  std::vector<unsigned> idx(d, 0);
  std::vector<double> x(d);
  double total = 0;
  while (true) {
    double w = 1;
    for (std::size_t j = 0; j < d; ++j) {
      const double z = gh.nodes[idx[j]];
      x[j] = scale[j] * z;
      w *= gh.weights[idx[j]] * scale[j] * std::exp(z * z);
    }
    total += w * f(std::span<const double>(x));
    std::size_t j = 0;
    while (j < d && ++idx[j] == n) idx[j++] = 0;
    if (j == d) break;
  }
  return total;
}

struct MarginalReport {
  std::size_t k = 0, m = 0;
  double t = 0;
  double max_deviation = 0;
  bool passed = false;
};

/// Integrates the k-variable density over x_{m+1..k} and compares with the m-variable density on a grid.
inline MarginalReport marginal_compatibility(std::size_t k, std::size_t m, double t,
                                             std::span<const double> grid = std::vector<double>{-1, 0, 1},
                                             double tol = 1e-7) {
  if (m < 1 || m > k || k > 4) throw std::invalid_argument("marginal_compatibility: need 1 <= m <= k <= 4");
  const auto pk = make_limit_params(t, k);
  const auto pm = make_limit_params(t, m);
  MarginalReport r{k, m, t, 0.0, false};
  std::vector<double> rest_var(k - m, pk.var_rest);
  std::vector<unsigned> gi(m, 0);
  std::vector<double> head(m), full(k);
  while (true) {
    for (std::size_t j = 0; j < m; ++j) head[j] = grid[gi[j]];
    double marg;
    if (k == m) {
      marg = limit_density(pk, head);
    } else {
      marg = gaussian_tensor_quadrature(
          [&](std::span<const double> tail) {
            std::copy(head.begin(), head.end(), full.begin());
            std::copy(tail.begin(), tail.end(), full.begin() + static_cast<std::ptrdiff_t>(m));
            return limit_density(pk, full);
          },
          rest_var, 16);
    }
    r.max_deviation = std::max(r.max_deviation, std::abs(marg - limit_density(pm, head)));
    std::size_t j = 0;
    while (j < m && ++gi[j] == grid.size()) gi[j++] = 0;
    if (j == m) break;
  }
  r.passed = r.max_deviation <= tol;
  return r;
}

}  // namespace sphereheat
