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

#include "sphereheat/heatop.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace sphereheat;

namespace {

Polynomial mono(std::initializer_list<unsigned> e) { return Polynomial::monomial(MultiIndex(e)); }

// Closed forms from two-term eigen expansions on the shifted sphere.
double x1_squared(int N, double t) { return 1 + (N - 1) * std::exp(-t) - N * std::exp(-t * (1 - 1.0 / N)); }
double x2_squared(double t) { return 1 - std::exp(-t); }

}  // namespace

TEST(HeatApplySeries, EigenvectorOfD) {
  const int N = 7;
  const double t = 1.3;
  auto D = build_D(N, 3u);
  auto r = heat_apply_series(D, t, mono({1}), 1e-25);
  const double expected = std::exp(t / 2 * (-1 + 1.0 / N));
  for (std::size_t i = 0; i < r.coefficients.size(); ++i) {
    const double want = D.indexer.monomial(i) == MultiIndex{1} ? expected : 0.0;
    EXPECT_NEAR(to_double(r.coefficients[i]), want, 1e-15);
  }
  EXPECT_LE(r.tail_bound, 1e-25);
}

TEST(HeatApplySeries, TrivialCases) {
  SphereConfig cfg{12, 2.0, 2, 4};
  auto L = build_sphere_laplacian(cfg, 4);
  Polynomial f = mono({3, 1}) + mono({0, 2});
  auto r0 = heat_apply_series(L, 0.0, f, 1e-12);
  auto c = L.indexer.coordinates(f);
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_EQ(to_double(r0.coefficients[i]), to_double(c[i]));

  auto r1 = heat_apply_series(L, 2.0, mono({0, 0}), 1e-20);
  EXPECT_EQ(to_double(r1.coefficients[0]), 1.0);
  for (std::size_t i = 1; i < r1.coefficients.size(); ++i) EXPECT_EQ(to_double(r1.coefficients[i]), 0.0);

  EXPECT_THROW(heat_apply_series(L, 1.0, f, 0.0), std::invalid_argument);
  // (t/2)||A|| too large for the series precision: explicit failure.
  EXPECT_THROW(heat_apply_series(L, 400.0, f, 1e-20), SeriesFailure);
}

TEST(HeatApplyMatexp, ZeroAndEigenvector) {
  OperatorMatrix zero{DenseMatrix<Rational>(6, 6), BasisIndexer(2, 2), "0", 4};
  EXPECT_EQ(heat_apply_matexp<double>(zero, 1.0), DenseMatrix<double>::identity(6));

  const int N = 5;
  const double t = 0.7;
  auto D = build_D(N, 4u);
  auto ex = heat_apply_matexp<double>(D, t);
  auto col = ex.column(D.indexer.index(MultiIndex{1}));
  for (std::size_t i = 0; i < col.size(); ++i) {
    const double want = i == 1 ? std::exp(t / 2 * (-1 + 1.0 / N)) : 0.0;
    EXPECT_NEAR(col[i], want, 1e-15);
  }
}

TEST(HeatApplyMatexp, AgreesWithSeriesOnEveryMonomial) {
  SphereConfig cfg{10, 1.0, 2, 4};
  auto L = build_sphere_laplacian(cfg, 4);
  auto ex = heat_apply_matexp<double>(L, cfg.t);
  double worst = 0;
  for (std::size_t j = 0; j < L.dimension(); ++j) {
    auto s = heat_apply_series(L, cfg.t, Polynomial::monomial(L.indexer.monomial(j)), 1e-20);
    for (std::size_t i = 0; i < L.dimension(); ++i)
      worst = std::max(worst, std::abs(ex(i, j) - to_double(s.coefficients[i])));
  }
  EXPECT_LE(worst, 1e-10);
}

TEST(HeatMoment, Examples) {
  for (int N : {4, 9, 50}) {
    for (double t : {0.3, 1.0, 2.5}) {
      SphereConfig cfg{N, t, 2, 2};
      for (Route r : {Route::Matexp, Route::Series}) {
        MomentOptions opt;
        opt.route = r;
        EXPECT_NEAR(heat_moment(cfg, MultiIndex{1, 0}, opt).value, 0.0, 1e-12);
        EXPECT_NEAR(heat_moment(cfg, MultiIndex{0, 1}, opt).value, 0.0, 1e-12);
        EXPECT_NEAR(heat_moment(cfg, MultiIndex{0, 2}, opt).value, x2_squared(t), 1e-12);
        EXPECT_NEAR(heat_moment(cfg, MultiIndex{2, 0}, opt).value, x1_squared(N, t), 1e-11);
      }
    }
  }
  SphereConfig cfg{6, 1.0, 2, 2};
  EXPECT_THROW(heat_moment(cfg, mono({1, 0, 0})), std::invalid_argument);
  MomentOptions eigen;
  eigen.route = Route::Eigen;
  EXPECT_THROW(heat_moment(cfg, mono({1, 0}), eigen), std::invalid_argument);
}

TEST(HeatMoment, NormalizationOddSymmetryAndRouteAgreement) {
  for (std::size_t k : {1u, 2u, 3u}) {
    for (int N : {8, 16, 32}) {
      for (double t : {0.5, 1.0, 2.0}) {
        SphereConfig cfg{N, t, k, 6};
        MomentOptions ms, mm;
        ms.route = Route::Series;
        HeatFunctional<double> series(cfg, 6, ms), matexp(cfg, 6, mm);
        EXPECT_NEAR(matexp(Polynomial::constant(k, 1)).value, 1.0, 1e-12);
        EXPECT_NEAR(series(Polynomial::constant(k, 1)).value, 1.0, 1e-12);
        for (const auto& a : series.indexer().basis()) {
          auto s = series(a);
          auto m = matexp(a);
          ASSERT_GE(s.error_bound, 0);
          ASSERT_GE(m.error_bound, 0);
          EXPECT_LE(std::abs(s.value - m.value), s.error_bound + m.error_bound)
              << a.to_string() << " N=" << N << " t=" << t;
          bool odd_tail = false;
          for (std::size_t j = 1; j < k; ++j) odd_tail |= (a[j] % 2 == 1);
          if (odd_tail) {
            EXPECT_LE(std::abs(m.value), 1e-12);
            EXPECT_LE(std::abs(s.value), 1e-12);
          }
        }
      }
    }
  }
}

TEST(HeatMoment, MixedTermIsOrderOneOverN) {
  const double t = 1.0;
  MomentOptions full, split;
  split.laplacian = LaplacianChoice::Decoupled;
  // Odd powers of x1 carry an extra 1/sqrt(N) (x1 x2^2 gaps shrink like N^{-1/2}),
  // so the 1/N rate is checked on monomials even in x1.
  // x1 x2 is odd in x2 under both operators: the difference vanishes identically.
  for (int N : {8, 16, 32}) {
    SphereConfig cfg{N, t, 2, 4};
    EXPECT_LE(std::abs(heat_moment(cfg, mono({1, 1}), full).value - heat_moment(cfg, mono({1, 1}), split).value),
              1e-12);
  }
  for (auto f : {mono({2, 2}), mono({2, 0}) * Rational(3) + mono({2, 2}), mono({2, 2}) + mono({0, 4})}) {
    std::vector<double> gaps;
    for (int N : {16, 32, 64, 128}) {
      SphereConfig cfg{N, t, 2, 4};
      gaps.push_back(std::abs(heat_moment(cfg, f, full).value - heat_moment(cfg, f, split).value));
    }
    for (std::size_t i = 0; i + 1 < gaps.size(); ++i) {
      const double ratio = gaps[i] / gaps[i + 1];
      EXPECT_GE(ratio, 1.6) << f.to_string();
      EXPECT_LE(ratio, 2.4) << f.to_string();
    }
    EXPECT_LE(gaps.back() * 128, 4 * gaps.front() * 16);  // N * gap bounded
  }
}

TEST(HeatMoment, SmallTimeLimit) {
  SphereConfig cfg{20, 0.0, 3, 5};
  const BasisIndexer ix(3, 5);
  for (const auto& a : ix.basis()) {
    const double want = a.degree() == 0 ? 1.0 : 0.0;
    const auto r = heat_moment(cfg, a);
    // The shift expansion cancels terms of size N^{deg/2}; the bound tracks that.
    EXPECT_NEAR(r.value, want, std::max(1e-12, r.error_bound)) << a.to_string();
    EXPECT_LE(r.error_bound, 1e-8);
  }
  cfg.t = 1e-6;
  EXPECT_NEAR(heat_moment(cfg, MultiIndex{2, 0, 0}).value, 0.0, 1e-5);
  EXPECT_NEAR(heat_moment(cfg, MultiIndex{0, 0, 2}).value, 1e-6, 1e-11);
}

TEST(HeatMoment, ExtendedPrecision) {
  SphereConfig cfg{40, 3.0, 2, 8};
  auto e = heat_moment<Extended>(cfg, MultiIndex{2, 0});
  const Extended n = 40, t = 3;
  const Extended want = 1 + (n - 1) * exp(-t) - n * exp(-t * (1 - 1 / n));
  EXPECT_LE(to_double(abs(e.value - want)), 1e-40);
  auto d = heat_moment<double>(cfg, MultiIndex{6, 2});
  auto x = heat_moment<Extended>(cfg, MultiIndex{6, 2});
  EXPECT_NEAR(d.value, to_double(x.value), 1e-9 * (1 + std::abs(d.value)));
}

TEST(Bch, OrnsteinUhlenbeckFactorization) {
  BasisIndexer ix(2, 6);
  auto ey = euler_operator(ix, {0, 1});
  auto lap = laplacian_operator(ix, {0, 1});
  for (double t : {0.5, 1.0, 2.0}) {
    DenseMatrix<double> X = ey.as_real<double>() * (-t / 2);
    DenseMatrix<double> Y = lap.as_real<double>() * (t / 2);
    DenseMatrix<double> sum = X;
    sum += Y;
    const DenseMatrix<double> lhs = matrix_exponential(sum);
    const DenseMatrix<double> rhs = matrix_exponential(X) * matrix_exponential(Y * ((1 - std::exp(-t)) / t));
    DenseMatrix<double> diff = lhs;
    diff -= rhs;
    EXPECT_LE(norm1(diff), 1e-10) << "t=" << t;
  }
}
