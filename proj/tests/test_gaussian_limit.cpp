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

#include "sphereheat/gaussian_limit.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace sphereheat;

namespace {

double quad_moment(const MultiIndex& a, double t) {
  const auto p = make_limit_params(t, a.size());
  std::vector<double> var(a.size(), p.var_rest);
  var[0] = p.var_first;
  return gaussian_tensor_quadrature(
      [&](std::span<const double> x) {
        double m = limit_density(p, x);
        for (std::size_t j = 0; j < x.size(); ++j) m *= std::pow(x[j], a[j]);
        return m;
      },
      var, 12);
}

}  // namespace

TEST(GaussHermite, IntegratesPolynomialsAgainstWeight) {
  GaussHermite gh(10);
  double s0 = 0, s2 = 0, s8 = 0;
  for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
    s0 += gh.weights[i];
    s2 += gh.weights[i] * gh.nodes[i] * gh.nodes[i];
    s8 += gh.weights[i] * std::pow(gh.nodes[i], 8);
  }
  const double rp = std::sqrt(std::numbers::pi);
  EXPECT_NEAR(s0, rp, 1e-13);
  EXPECT_NEAR(s2, rp / 2, 1e-13);
  EXPECT_NEAR(s8, rp * 105 / 16, 1e-11);
}

TEST(LimitParams, VariancesAndSmallTime) {
  for (double t : {0.01, 0.3, 1.0, 5.0}) {
    const auto p = make_limit_params(t, 2);
    EXPECT_GT(p.var_first, 0);
    EXPECT_LT(p.var_first, p.var_rest);
    EXPECT_LT(p.var_rest, 1);
    EXPECT_NEAR(p.var_first, 1 - std::exp(-t) - t * std::exp(-t), 1e-15);
  }
  double prev1 = 0, prev2 = 0;
  for (double t = 0.05; t < 30; t *= 1.3) {
    EXPECT_GT(var_first(t), prev1);
    EXPECT_GT(var_rest(t), prev2);
    prev1 = var_first(t);
    prev2 = var_rest(t);
  }
  EXPECT_NEAR(var_first(40), 1, 1e-15);
  // Taylor expansion at t -> 0: t^2/2 - t^3/3 + t^4/8.
  EXPECT_NEAR(var_first(1e-2) / (1e-4 / 2), 1, 0.01);
  EXPECT_NEAR(var_first(1e-6), 0.5e-12 - 1e-18 / 3 + 1e-24 / 8, 1e-28);
  EXPECT_THROW(make_limit_params(0, 1), std::invalid_argument);
  EXPECT_THROW(make_limit_params(-1, 1), std::invalid_argument);
}

TEST(LimitDensity, ExamplesAndNormalization) {
  const double t = 1.0;
  const auto p1 = make_limit_params(t, 1);
  EXPECT_NEAR(limit_density(p1, std::vector<double>{0.0}),
              1 / std::sqrt(2 * std::numbers::pi * (1 - 2 * std::exp(-1.0))), 1e-14);
  const auto p3 = make_limit_params(t, 3);
  std::vector<double> x{0.3, -1.2, 0.7}, y{-0.3, 1.2, -0.7}, z{0, 0, 0};
  EXPECT_DOUBLE_EQ(limit_density(p3, x), limit_density(p3, y));
  EXPECT_LT(limit_density(p3, x), limit_density(p3, z));
  EXPECT_THROW(limit_density(p3, std::vector<double>{1.0}), std::invalid_argument);

  for (std::size_t k : {1u, 2u, 3u}) {
    for (double tt : {0.25, 1.0, 4.0}) {
      EXPECT_NEAR(quad_moment(MultiIndex(std::vector<unsigned>(k, 0)), tt), 1.0, 1e-8) << k << " " << tt;
    }
  }
}

TEST(GaussianMoment, ExamplesAndQuadrature) {
  const double t = 1.0;
  EXPECT_NEAR(gaussian_moment(MultiIndex{0, 2}, t), 1 - std::exp(-t), 1e-15);
  EXPECT_EQ(gaussian_moment(MultiIndex{1, 1}, t), 0.0);
  EXPECT_NEAR(gaussian_moment(MultiIndex{2, 2}, 1), (1 - 2 * std::exp(-1.0)) * (1 - std::exp(-1.0)), 1e-15);
  const double ln2 = std::log(2.0);
  EXPECT_NEAR(gaussian_moment(MultiIndex{4, 0}, ln2), 3 * std::pow(0.5 - ln2 / 2, 2), 1e-15);

  for (std::size_t k : {1u, 2u, 3u}) {
    BasisIndexer ix(k, 6);
    for (const auto& a : ix.basis()) {
      for (double tt : {0.5, 2.0}) {
        EXPECT_NEAR(gaussian_moment(a, tt), quad_moment(a, tt), 1e-7) << a.to_string();
      }
    }
  }
}

TEST(ClassicalLimit, SaturatesToStandardGaussian) {
  // 1 - 31 e^{-30} sits 2.9e-12 below 1.
  EXPECT_NEAR(gaussian_moment(MultiIndex{2, 0}, 30), 1 - 31 * std::exp(-30.0), 1e-16);
  EXPECT_NEAR(gaussian_moment(MultiIndex{2, 0}, 30), 1, 3e-12);
  EXPECT_NEAR(gaussian_moment(MultiIndex{0, 2}, 30), 1, 1e-12);
  EXPECT_NEAR(gaussian_moment(MultiIndex{4, 0}, 60), 3, 1e-12);
  BasisIndexer ix(3, 6);
  for (const auto& a : ix.basis()) EXPECT_LE(classical_limit_check(a, 30), 1e-7);
  EXPECT_THROW(classical_limit_check(MultiIndex{2}, 5), std::invalid_argument);
}

TEST(MarginalCompatibility, Examples) {
  auto r = marginal_compatibility(2, 1, 1.0, std::vector<double>{0.0});
  EXPECT_TRUE(r.passed);
  EXPECT_LE(r.max_deviation, 1e-12);
  EXPECT_TRUE(marginal_compatibility(2, 2, 1.0).passed);
  EXPECT_EQ(marginal_compatibility(2, 2, 1.0).max_deviation, 0.0);
  EXPECT_LE(marginal_compatibility(3, 2, 0.5).max_deviation, 1e-7);
  EXPECT_LE(marginal_compatibility(4, 1, 2.0).max_deviation, 1e-7);
  EXPECT_THROW(marginal_compatibility(5, 2, 1.0), std::invalid_argument);
  EXPECT_THROW(marginal_compatibility(2, 3, 1.0), std::invalid_argument);
}
