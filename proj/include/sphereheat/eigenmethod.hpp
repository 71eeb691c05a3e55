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
 * @file eigenmethod.hpp
 * @brief Closed-form route for moments of the first coordinate.
 *
 * The one-variable operator D = d^2 - (1 - 2/N) x d - (1/N)(x d)^2 has a monic
 * eigenpolynomial p_n in every degree, with eigenvalue
 * lambda_n = -n(1 + (n-2)/N). Writing x_1^n = (xt - m)^n, expanding each xt^i
 * in the p's and evaluating at xt = sqrt(N) gives the finite-N moment as a
 * finite sum of terms
 *
 *     c * N^{p/2} * exp(-s t/2) * exp(q t/(2N)),   c rational, s, q, p integers,
 *
 * which is kept symbolic until evaluation.
 */

#include "sphereheat/gaussian_limit.hpp"
#include "sphereheat/operators.hpp"

#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace sphereheat {

/// A vanishing falling-factorial denominator at this N.
class DegenerateNError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

// (N/2 + base)^{falling j}, refusing a zero factor.
inline Rational checked_falling(int N, int base, unsigned j, const char* what) {
  const Rational z = Rational(N, 2) + base;
  const Rational f = falling_factorial(z, j);
  if (f == 0) {
    throw DegenerateNError(std::string(what) + ": vanishing denominator at N = " + std::to_string(N));
  }
  return f;
}

inline void check_N(int N, const char* what) {
  if (N < 2) throw std::invalid_argument(std::string(what) + ": N must be >= 2");
}

}  // namespace detail

struct EigenPolynomial {
  unsigned n = 0;
  int N = 0;
  std::vector<Rational> coeffs;  // coeffs[j] multiplies xt^{n-2j}
  Rational eigenvalue;

  Polynomial as_polynomial() const {
    Polynomial p(1);
    for (unsigned j = 0; j < coeffs.size(); ++j) p.add_term(MultiIndex{n - 2 * j}, coeffs[j]);
    return p;
  }
};

/// p_n = sum_j (-N/4)^j n^{falling 2j} / (j! (N/2 + n - 2)^{falling j}) xt^{n-2j}.
inline EigenPolynomial eigen_poly(unsigned n, int N) {
  detail::check_N(N, "eigen_poly");
  EigenPolynomial e;
  e.n = n;
  e.N = N;
  e.eigenvalue = radial_eigenvalue(n, N);
  const Rational quarter = Rational(-N, 4);
  for (unsigned j = 0; 2 * j <= n; ++j) {
    const Rational den = Rational(factorial(j)) * detail::checked_falling(N, static_cast<int>(n) - 2, j, "eigen_poly");
    e.coeffs.push_back(pow_int(quarter, j) * falling_factorial(Rational(n), 2 * j) / den);
  }
  const OperatorMatrix D = build_D(N, n);
  const Polynomial p = e.as_polynomial();
  if (D.apply(p) != p * e.eigenvalue) {
    throw std::logic_error("eigen_poly: D p_n != lambda_n p_n for n = " + std::to_string(n));
  }
  return e;
}

/// p_n(sqrt N) / N^{n/2} by direct evaluation of the coefficients: sum_j c_j N^{-j}.
inline Rational eigen_poly_at_sqrtN_direct(const EigenPolynomial& p) {
  Rational v = 0;
  const Rational inv_n = Rational(1, p.N);
  for (unsigned j = 0; j < p.coeffs.size(); ++j) v += p.coeffs[j] * pow_int(inv_n, j);
  return v;
}

/// ((N-1)/2)^{rising floor(n/2)} / (N/2 + n - 2)^{falling floor(n/2)}, equal to p_n(sqrt N)/N^{n/2}.
inline Rational eigen_poly_at_sqrtN(unsigned n, int N) {
  detail::check_N(N, "eigen_poly_at_sqrtN");
  const unsigned h = n / 2;
  return rising_factorial(Rational(N - 1, 2), h) /
         detail::checked_falling(N, static_cast<int>(n) - 2, h, "eigen_poly_at_sqrtN");
}

/// The closed form (N-1)^{rising n} / (2^n (N/2)^{rising n}), as commonly printed.
///
/// It disagrees with direct evaluation already at n = 1; see eigen_discrepancy_report.
inline Rational eigen_poly_at_sqrtN_stated(unsigned n, int N) {
  detail::check_N(N, "eigen_poly_at_sqrtN_stated");
  return rising_factorial(Rational(N - 1), n) / (pow_int(Rational(2), n) * rising_factorial(Rational(N, 2), n));
}

/// Index-shifted form (N-2)^{rising n} / (2^n (N/2 - 1)^{rising n}); agrees with direct evaluation for N >= 3.
inline Rational eigen_poly_at_sqrtN_shifted(unsigned n, int N) {
  if (N < 3) throw DegenerateNError("eigen_poly_at_sqrtN_shifted: needs N >= 3");
  return rising_factorial(Rational(N - 2), n) /
         (pow_int(Rational(2), n) * rising_factorial(Rational(N, 2) - 1, n));
}

/// p_{n+1}(sqrt N) / p_n(sqrt N) divided by sqrt N, for either parity of n.
inline Rational eigen_value_ratio(unsigned n, int N) { return Rational(N + static_cast<int>(n) - 2, N + 2 * static_cast<int>(n) - 2); }

struct EigenDiscrepancyRow {
  unsigned n = 0;
  int N = 0;
  Rational direct, intermediate, stated;
  bool intermediate_matches = false;
  bool stated_matches = false;
};

/// Compares direct evaluation, the intermediate form and the stated simplified form.
inline std::vector<EigenDiscrepancyRow> eigen_discrepancy_report(unsigned max_n, int N) {
  std::vector<EigenDiscrepancyRow> rows;
  for (unsigned n = 0; n <= max_n; ++n) {
    EigenDiscrepancyRow r;
    r.n = n;
    r.N = N;
    r.direct = eigen_poly_at_sqrtN_direct(eigen_poly(n, N));
    r.intermediate = eigen_poly_at_sqrtN(n, N);
    r.stated = eigen_poly_at_sqrtN_stated(n, N);
    r.intermediate_matches = r.direct == r.intermediate;
    r.stated_matches = r.direct == r.stated;
    rows.push_back(r);
  }
  return rows;
}

/// Coefficients c_j with xt^n = sum_j c_j p_{n-2j}:
/// c_j = (N/4)^j n^{falling 2j} / (j! (N/2 + n - j - 1)^{falling j}).
inline std::vector<Rational> monomial_in_eigenbasis(unsigned n, int N) {
  detail::check_N(N, "monomial_in_eigenbasis");
  std::vector<Rational> c;
  const Rational quarter = Rational(N, 4);
  for (unsigned j = 0; 2 * j <= n; ++j) {
    const Rational den = Rational(factorial(j)) *
                         detail::checked_falling(N, static_cast<int>(n) - static_cast<int>(j) - 1, j,
                                                 "monomial_in_eigenbasis");
    c.push_back(pow_int(quarter, j) * falling_factorial(Rational(n), 2 * j) / den);
  }
  return c;
}

/// Sum of c * N^{p/2} exp(-s t/2) exp(q t/(2N)) with exact c.
class ExpSum {
 public:
  ExpSum() = default;
  explicit ExpSum(int N) : N_(N) {}

  void add(const Rational& c, int s, int q, int p) {
    if (c == 0) return;
    auto& slot = terms_[{s, q, p}];
    slot += c;
    if (slot == 0) terms_.erase({s, q, p});
  }

  int N() const { return N_; }
  std::size_t size() const { return terms_.size(); }
  const std::map<std::tuple<int, int, int>, Rational>& terms() const { return terms_; }

  /// Evaluated in 100-digit arithmetic; terms of size N^{n} cancel down to O(1).
  template <class Real = double>
  Real evaluate(double t) const {
    using W = SeriesReal;
    const W tt = W(t), n = W(N_), root = sqrt(n);
    W sum = 0;
    for (const auto& [key, c] : terms_) {
      const auto [s, q, p] = key;
      W pw = pow(root, p);
      sum += to_real<W>(c) * pw * exp(-W(s) * tt / 2 + W(q) * tt / (2 * n));
    }
    return static_cast<Real>(sum);
  }

 private:
  int N_ = 0;
  std::map<std::tuple<int, int, int>, Rational> terms_;
};

/// Symbolic finite-N moment of x_1^n.
///
/// x_1^n = sum_i C(n,i) (-m)^i xt^{n-i}, m^i = N^{i/2} e^{-it/2} e^{it/(2N)};
/// xt^{n-i} = sum_j c_j p_h with h = n-i-2j, e^{t lambda_h/2} = e^{-ht/2} e^{-h(h-2)t/(2N)},
/// p_h(sqrt N) = N^{h/2} v_h.
inline ExpSum heat_moment_x1_terms(unsigned n, int N) {
  if (N < 3) throw DegenerateNError("heat_moment_x1_eigen: needs N >= 3");
  // Eigenvalues must be pairwise distinct for the eigenbasis to exist.
  for (unsigned a = 0; a <= n; ++a)
    for (unsigned b = a + 1; b <= n; ++b)
      if (radial_eigenvalue(a, N) == radial_eigenvalue(b, N)) throw DegenerateNError("repeated eigenvalue");

  std::vector<Rational> v(n + 1);
  for (unsigned h = 0; h <= n; ++h) v[h] = eigen_poly_at_sqrtN(h, N);
  ExpSum out(N);
  for (unsigned i = 0; i <= n; ++i) {
    const Rational sign_binom = Rational(binomial(n, i)) * (i % 2 == 0 ? 1 : -1);
    const auto c = monomial_in_eigenbasis(n - i, N);
    for (unsigned j = 0; j < c.size(); ++j) {
      const int h = static_cast<int>(n - i - 2 * j);
      const int ii = static_cast<int>(i);
      out.add(sign_binom * c[j] * v[h], ii + h, ii - h * (h - 2), ii + h);
    }
  }
  return out;
}

template <class Real = double>
Real heat_moment_x1_eigen(unsigned n, const SphereConfig& cfg) {
  cfg.validate();
  return heat_moment_x1_terms(n, cfg.N).evaluate<Real>(cfg.t);
}

/// n!/(2^{n/2}(n/2)!) (1 - e^{-t} - t e^{-t})^{n/2} for even n, 0 for odd n.
inline double limit_moment_x1(unsigned n, double t) {
  if (n % 2 == 1) return 0.0;
  return to_double(gaussian_moment_factor(n)) * std::pow(var_first(t), n / 2);
}

/// t0(h) = (N-1)^{rising h} / (2^h (N/2)^{rising h+j}).
inline Rational t0_exact(unsigned j, unsigned h, int N) {
  detail::check_N(N, "t0_exact");
  return rising_factorial(Rational(N - 1), h) /
         (pow_int(Rational(2), h) * rising_factorial(Rational(N, 2), h + j));
}

/// u_l(h) with t0(h) = sum_l u_l(h) / N^{l+j}, as polynomials in h.
struct SeriesCoefficients {
  unsigned j = 0;
  std::vector<Polynomial> u;  // one-variable polynomials in h

  Rational at(unsigned ell, const Rational& h) const { return poly_eval<Rational>(u.at(ell), std::vector<Rational>{h}); }

  Rational leading_coefficient(unsigned ell) const {
    const Polynomial& p = u.at(ell);
    return p.coefficient(MultiIndex{p.degree()});
  }

  /// sum_{l <= L} u_l(h) / N^{l+j}.
  Rational partial_sum(unsigned h, int N, unsigned L) const {
    Rational s = 0;
    const Rational inv = Rational(1, N);
    for (unsigned ell = 0; ell <= L && ell < u.size(); ++ell) s += at(ell, h) * pow_int(inv, ell + j);
    return s;
  }
};

/// u_l by the recurrence u_l(h+1) - u_l(h) = (h-1) u_{l-1}(h) - (2h+2j) u_{l-1}(h+1),
/// which follows from (N + 2h + 2j) t0(h+1) = (N + h - 1) t0(h); u_l(0) comes from
/// the 1/N expansion of t0(0) = 2^j N^{-j} prod_{i<j} 1/(1 + 2i/N).
inline SeriesCoefficients t0_series(unsigned j, unsigned L) {
  // Values u_l(h) on h = 0..H, with H large enough to interpolate degree 2L.
  const unsigned H = 2 * L + 2;
  const unsigned width = H + L + 1;  // u_{l-1} is needed one step further out
  std::vector<std::vector<Rational>> val(L + 1, std::vector<Rational>(width + 1));

  // Initial values: coefficients of the product of geometric series in 1/N.
  std::vector<Rational> init(L + 1, Rational(0));
  init[0] = 1;
  for (unsigned i = 1; i < j; ++i) {
    std::vector<Rational> next(L + 1, Rational(0));
    for (unsigned a = 0; a <= L; ++a) {
      Rational g = 1;
      for (unsigned b = 0; a + b <= L; ++b) {
        next[a + b] += init[a] * g;
        g *= Rational(-2 * static_cast<int>(i));
      }
    }
    init = next;
  }
  const Rational two_j = pow_int(Rational(2), j);

  for (unsigned ell = 0; ell <= L; ++ell) {
    val[ell][0] = two_j * init[ell];
    const unsigned top = width - ell;
    for (unsigned h = 0; h + 1 <= top; ++h) {
      Rational step = 0;
      if (ell > 0) {
        step = Rational(static_cast<int>(h) - 1) * val[ell - 1][h] - Rational(2 * (h + j)) * val[ell - 1][h + 1];
      }
      val[ell][h + 1] = val[ell][h] + step;
    }
  }

  // Newton forward-difference interpolation on h = 0..2l gives the exact polynomial.
  SeriesCoefficients sc;
  sc.j = j;
  const Polynomial hvar = Polynomial::variable(1, 0);
  for (unsigned ell = 0; ell <= L; ++ell) {
    const unsigned deg = 2 * ell;
    std::vector<Rational> diff(val[ell].begin(), val[ell].begin() + deg + 1);
    Polynomial p(1);
    Polynomial basis = Polynomial::constant(1, 1);  // binom(h, d)
    for (unsigned d = 0; d <= deg; ++d) {
      p += basis * diff[0];
      for (unsigned i = 0; i + 1 < diff.size(); ++i) diff[i] = diff[i + 1] - diff[i];
      diff.pop_back();
      basis = basis * (hvar - Polynomial::constant(1, Rational(d))) * Rational(1, d + 1);
    }
    // The interpolant must reproduce every tabulated value, not just the nodes.
    for (unsigned h = 0; h <= width - ell; ++h) {
      if (poly_eval<Rational>(p, std::vector<Rational>{Rational(h)}) != val[ell][h]) {
        throw std::logic_error("t0_series: u_" + std::to_string(ell) + " is not a polynomial of degree 2l");
      }
    }
    sc.u.push_back(p);
  }
  return sc;
}

}  // namespace sphereheat
