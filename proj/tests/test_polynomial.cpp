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

#include "sphereheat/polynomial.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace sphereheat;

namespace {

Polynomial random_poly(std::mt19937& rng, std::size_t k, unsigned max_deg) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 7), terms(0, 6), e(0, static_cast<int>(max_deg));
  Polynomial p(k);
  int n = terms(rng);
  for (int i = 0; i < n; ++i) {
    MultiIndex a(k);
    unsigned budget = max_deg;
    for (std::size_t j = 0; j < k; ++j) {
      unsigned x = static_cast<unsigned>(e(rng)) % (budget + 1);
      a[j] = x;
      budget -= x;
    }
    p.add_term(a, Rational(num(rng), den(rng)));
  }
  return p;
}

// Brute-force graded-lex enumeration: every k-tuple with entries <= ell,
// filtered and sorted by (degree asc, exponents lexicographically desc).
std::vector<std::vector<unsigned>> brute_force_order(std::size_t k, unsigned ell) {
  std::vector<std::vector<unsigned>> all;
  std::vector<unsigned> cur(k, 0);
  while (true) {
    unsigned d = 0;
    for (auto c : cur) d += c;
    if (d <= ell) all.push_back(cur);
    std::size_t i = 0;
    while (i < k && cur[i] == ell) cur[i++] = 0;
    if (i == k) break;
    ++cur[i];
  }
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    unsigned da = 0, db = 0;
    for (auto x : a) da += x;
    for (auto x : b) db += x;
    if (da != db) return da < db;
    return a > b;
  });
  return all;
}

}  // namespace

TEST(MonomialIndex, ConstantIsFirst) {
  BasisIndexer ix(2, 2);
  EXPECT_EQ(monomial_index(MultiIndex{0, 0}, ix), 0u);
}

TEST(MonomialIndex, MatchesBruteForceEnumeration) {
  BasisIndexer ix(2, 2);
  EXPECT_EQ(monomial_index(MultiIndex{1, 0}, ix), 1u);
  EXPECT_EQ(monomial_index(MultiIndex{0, 1}, ix), 2u);
  for (std::size_t k = 1; k <= 3; ++k) {
    for (unsigned ell = 0; ell <= 4; ++ell) {
      BasisIndexer b(k, ell);
      auto expected = brute_force_order(k, ell);
      ASSERT_EQ(b.dimension(), expected.size());
      for (std::size_t i = 0; i < expected.size(); ++i) {
        EXPECT_EQ(b.monomial(i).exponents(), expected[i]);
        EXPECT_EQ(b.index(MultiIndex(expected[i])), i);
      }
    }
  }
}

TEST(MonomialIndex, DimensionIsBinomial) {
  for (std::size_t k = 1; k <= 4; ++k)
    for (unsigned ell = 0; ell <= 8; ++ell)
      EXPECT_EQ(BasisIndexer(k, ell).dimension(), binomial(static_cast<unsigned>(k) + ell, k).convert_to<std::size_t>());
}

TEST(MonomialIndex, OutOfBasis) {
  BasisIndexer ix(2, 2);
  EXPECT_THROW(monomial_index(MultiIndex{2, 1}, ix), OutOfBasisError);
  EXPECT_THROW(monomial_index(MultiIndex{1}, ix), std::invalid_argument);
  EXPECT_THROW(index_to_monomial(6, ix), OutOfBasisError);
}

TEST(PolyEval, Examples) {
  Polynomial x1 = Polynomial::variable(1, 0);
  Polynomial p = x1 * x1 - Polynomial::constant(1, 1);
  EXPECT_EQ(poly_eval<Rational>(p, std::vector<Rational>{3}), Rational(8));
  EXPECT_DOUBLE_EQ(poly_eval<double>(x1, std::vector<double>{std::sqrt(4.0)}), 2.0);
  Polynomial y2 = Polynomial::monomial(MultiIndex{0, 2});
  EXPECT_EQ(poly_eval<double>(y2, std::vector<double>{0, 0}), 0.0);
  EXPECT_THROW(poly_eval<double>(y2, std::vector<double>{1}), std::invalid_argument);
}

TEST(PolyEval, ExtendedPrecision) {
  Polynomial x1 = Polynomial::variable(1, 0);
  Extended r = sqrt(Extended(2));
  Extended v = poly_eval<Extended>(x1 * x1, std::vector<Extended>{r});
  EXPECT_LT(to_double(abs(v - 2)), 1e-45);
}

TEST(ShiftFirstVariable, Examples) {
  const Rational m(7, 3);
  Polynomial x1 = Polynomial::variable(2, 0);
  Polynomial one = Polynomial::constant(2, 1);
  EXPECT_EQ(shift_first_variable(x1, m), x1 - one * m);
  EXPECT_EQ(shift_first_variable(x1 * x1, m), x1 * x1 - x1 * (2 * m) + one * (m * m));
  Polynomial y3 = Polynomial::monomial(MultiIndex{0, 3});
  EXPECT_EQ(shift_first_variable(y3, m), y3);
}

TEST(ShiftFirstVariable, ExpansionRecombines) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    Polynomial p = random_poly(rng, 2, 5);
    Rational m(rng() % 11, 1 + rng() % 5);
    auto parts = shift_expansion(p);
    Polynomial sum(2);
    Rational mp = 1;
    for (auto& q : parts) {
      sum += q * mp;
      mp *= m;
    }
    EXPECT_EQ(sum, shift_first_variable(p, m));
  }
}

TEST(PolynomialProperties, RingAxiomsAndShiftInverse) {
  std::mt19937 rng(12345);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t k = 1 + trial % 3;
    Polynomial a = random_poly(rng, k, 5), b = random_poly(rng, k, 5), c = random_poly(rng, k, 5);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ(a * b, b * a);
    EXPECT_TRUE((a - a).is_zero());
    const Polynomial ab = a * b;
    for (const auto& [e, coef] : ab.terms()) EXPECT_NE(coef, 0);

    Rational m(static_cast<int>(rng() % 21) - 10, 1 + rng() % 6);
    EXPECT_EQ(shift_first_variable(shift_first_variable(a, m), -m), a);
    EXPECT_EQ(shift_first_variable(a, m).degree(), a.degree());

    // Exactness: evaluation commutes with the shift at rational points.
    std::vector<Rational> pt(k);
    for (auto& x : pt) x = Rational(static_cast<int>(rng() % 9) - 4, 1 + rng() % 4);
    std::vector<Rational> shifted = pt;
    shifted[0] += m;
    EXPECT_EQ(poly_eval<Rational>(shift_first_variable(a, m), shifted), poly_eval<Rational>(a, pt));
  }
}

TEST(ParseMultiIndex, Basics) {
  EXPECT_EQ(parse_multi_index("2,0,1"), (MultiIndex{2, 0, 1}));
  EXPECT_THROW(parse_multi_index("2,,1"), std::invalid_argument);
  EXPECT_THROW(parse_multi_index("-1"), std::invalid_argument);
}
