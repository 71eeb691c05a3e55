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
 * @file pde_appendix.hpp
 * @brief The separated one-dimensional equations of the limiting kernel.
 *
 *     g_t = (1/2)(a(t) g_xx + x g_x + g),   g(0) = delta,
 *
 * with a(t) = 1 - e^{-t} for the first coordinate and a = 1 for the others.
 * The solution is a centred Gaussian whose variance V solves V' = a - V.
 *
 * Fourier convention: g^(xi) = int g(x) e^{-i xi x} dx. Along the
 * characteristics xi(t) = xi_0 e^{t/2},
 *
 *     g^(t, xi) = g^(0, xi e^{-t/2}) exp(-V(t) xi^2 / 2).
 */

#include "sphereheat/gaussian_limit.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace sphereheat {

enum class ParabolicKind { FirstCoordinate, OtherCoordinate };

struct ParabolicVariant {
  ParabolicKind kind = ParabolicKind::OtherCoordinate;

  double diffusion_coeff(double t) const { return kind == ParabolicKind::FirstCoordinate ? -std::expm1(-t) : 1.0; }

  /// V(t) with V(0) = 0.
  double variance(double t) const { return kind == ParabolicKind::FirstCoordinate ? var_first(t) : var_rest(t); }

  double closed_form(double t, double x) const { return gaussian_pdf(variance(t), x); }

  static double gaussian_pdf(double var, double x) {
    return std::exp(-0.5 * x * x / var) / std::sqrt(2 * std::numbers::pi * var);
  }
};

inline constexpr double kResidualTmin = 0.05;

/// |g_t - (1/2)(a g_xx + x g_x + g)| on the closed form with central differences of width h.
inline double residual(const ParabolicVariant& v, double t, double x, double h) {
  if (t < kResidualTmin) throw std::invalid_argument("residual: t below the supported minimum 0.05");
  if (!(h > 0) || h >= t) throw std::invalid_argument("residual: need 0 < h < t");
  const auto g = [&](double tt, double xx) { return v.closed_form(tt, xx); };
  const double g0 = g(t, x);
  const double gt = (g(t + h, x) - g(t - h, x)) / (2 * h);
  const double gx = (g(t, x + h) - g(t, x - h)) / (2 * h);
  const double gxx = (g(t, x + h) - 2 * g0 + g(t, x - h)) / (h * h);
  return std::abs(gt - 0.5 * (v.diffusion_coeff(t) * gxx + x * gx + g0));
}

/// Amplitude at frequency xi and time t transported from the initial transform.
inline double characteristic_transport(const ParabolicVariant& v, double xi, double t,
                                       const std::function<double(double)>& initial = [](double) { return 1.0; }) {
  if (!(t > 0)) throw std::invalid_argument("characteristic_transport: t must be positive");
  return initial(xi * std::exp(-t / 2)) * std::exp(-0.5 * v.variance(t) * xi * xi);
}

/// Transform of the closed form, exp(-V xi^2 / 2).
inline double closed_form_transform(const ParabolicVariant& v, double t, double xi) {
  return std::exp(-0.5 * v.variance(t) * xi * xi);
}

class GridTooCoarse : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Uniform grid of n points on [-L, L]; carries the initial samples and the output.
struct SpectralGrid {
  double L = 0;
  std::size_t n = 0;

  double dx() const { return 2 * L / static_cast<double>(n - 1); }
  double x(std::size_t i) const { return -L + dx() * static_cast<double>(i); }
};

struct SpectralResult {
  SpectralGrid grid;
  std::vector<double> values;
  double mass = 0;       // trapezoid integral of values
  double variance = 0;   // eps e^{-t} + V(t), the analytic variance of the mollified solution
};

/// Grid resolving a variance-eps initial Gaussian and covering 12 final standard deviations.
inline SpectralGrid auto_grid(const ParabolicVariant& v, double eps, double t) {
  const double final_sd = std::sqrt(eps * std::exp(-t) + v.variance(t));
  const double L = 12 * std::max(final_sd, std::sqrt(eps));
  const double dx = std::sqrt(eps) / 4;
  return SpectralGrid{L, static_cast<std::size_t>(std::ceil(2 * L / dx)) + 1};
}

/// Evolves a variance-eps Gaussian to time t through the characteristics in frequency space.
///
/// The forward transform is the trapezoid rule on the grid samples, the inverse
/// a trapezoid rule over [-Xi, Xi]; both converge geometrically for Gaussians
/// once the grid resolves the initial width and covers the final tails.
inline SpectralResult spectral_evolve(const ParabolicVariant& v, double eps, double t, const SpectralGrid& grid) {
  if (!(eps > 0) || eps > 0.01) throw std::invalid_argument("spectral_evolve: eps must lie in (0, 0.01]");
  if (!(t > 0)) throw std::invalid_argument("spectral_evolve: t must be positive");
  if (grid.n < 3 || !(grid.L > 0)) throw std::invalid_argument("spectral_evolve: grid needs L > 0 and n >= 3");

  const double sd0 = std::sqrt(eps);
  const double var_t = eps * std::exp(-t) + v.variance(t);
  const double dx = grid.dx();
  // Trapezoid aliasing error for the initial transform is ~ exp(-2 pi^2 eps / dx^2).
  if (dx > 0.7 * sd0) throw GridTooCoarse("spectral_evolve: grid spacing does not resolve the initial width");
  if (grid.L < 10 * std::sqrt(var_t)) throw GridTooCoarse("spectral_evolve: grid does not cover 10 final standard deviations");

  std::vector<double> g0(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) g0[i] = ParabolicVariant::gaussian_pdf(eps, grid.x(i));

  // Frequencies where the transported amplitude exceeds e^{-40}; spacing keeps periodic images beyond 2L.
  const double xi_max = std::sqrt(80 / var_t);
  const double dxi = std::numbers::pi / (2 * grid.L);
  const std::size_t m = static_cast<std::size_t>(std::ceil(xi_max / dxi));

  // The initial data is even, so every transform is a cosine transform.
  const double shrink = std::exp(-t / 2);
  std::vector<double> amp(m + 1);
  for (std::size_t k = 0; k <= m; ++k) {
    const double xi = dxi * static_cast<double>(k);
    const double eta = xi * shrink;
    double s = 0;
    for (std::size_t i = 0; i < grid.n; ++i) {
      const double w = (i == 0 || i + 1 == grid.n) ? 0.5 : 1.0;
      s += w * g0[i] * std::cos(eta * grid.x(i));
    }
    amp[k] = characteristic_transport(v, xi, t, [&](double) { return s * dx; });
  }

  SpectralResult r;
  r.grid = grid;
  r.variance = var_t;
  r.values.resize(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double x = grid.x(i);
    double s = 0.5 * amp[0];
    for (std::size_t k = 1; k <= m; ++k) s += amp[k] * std::cos(dxi * static_cast<double>(k) * x);
    r.values[i] = s * dxi / std::numbers::pi;
  }
  for (std::size_t i = 0; i < grid.n; ++i) r.mass += ((i == 0 || i + 1 == grid.n) ? 0.5 : 1.0) * r.values[i] * dx;
  return r;
}

struct ExtrapolationReport {
  std::vector<double> x;
  std::vector<double> extrapolated;  // 2 g(eps/2) - g(eps)
  double max_deviation = 0;          // against the delta-data closed form
};

/// Richardson extrapolation eps -> 0 on a common output grid.
inline ExtrapolationReport extrapolate_to_delta(const ParabolicVariant& v, double eps, double t) {
  const SpectralGrid fine = auto_grid(v, eps / 2, t);
  const auto half = spectral_evolve(v, eps / 2, t, fine);
  const auto full = spectral_evolve(v, eps, t, fine);
  ExtrapolationReport rep;
  for (std::size_t i = 0; i < fine.n; ++i) {
    const double x = fine.x(i);
    const double e = 2 * half.values[i] - full.values[i];
    rep.x.push_back(x);
    rep.extrapolated.push_back(e);
    rep.max_deviation = std::max(rep.max_deviation, std::abs(e - v.closed_form(t, x)));
  }
  return rep;
}

}  // namespace sphereheat
