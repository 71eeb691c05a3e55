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
 * @file heatop.hpp
 * @brief Heat-kernel moments at finite N by operator exponentials.
 *
 * The moment of f is (exp{(t/2) Lap} f)(north pole). f is written in the
 * shifted coordinate as f(xt - m, y) = sum_i m^i q_i(xt, y) with exact q_i,
 * the exponential is formed either
 *
 *  - as a truncated Taylor series with a rigorous tail bound, carried in
 *    100-digit MPFR arithmetic, or
 *  - by scaling-and-squaring Padé at the working precision,
 *
 * and the powers of m(t, N) are applied only after evaluation at
 * xt = sqrt(N), y = 0.
 */

#include "sphereheat/matrix_exp.hpp"
#include "sphereheat/operators.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sphereheat {

enum class Route { Series, Matexp, Eigen, MonteCarlo, ClosedForm };

inline std::string to_string(Route r) {
  switch (r) {
    case Route::Series: return "series";
    case Route::Matexp: return "matexp";
    case Route::Eigen: return "eigen";
    case Route::MonteCarlo: return "mc";
    case Route::ClosedForm: return "closed_form";
  }
  return "unknown";
}

inline Route parse_route(const std::string& s) {
  if (s == "series") return Route::Series;
  if (s == "matexp") return Route::Matexp;
  if (s == "eigen") return Route::Eigen;
  if (s == "mc" || s == "montecarlo") return Route::MonteCarlo;
  if (s == "closed_form") return Route::ClosedForm;
  throw std::invalid_argument("unknown route '" + s + "'");
}

template <class Real>
struct MomentResult {
  Real value = 0;
  Route route = Route::Matexp;
  /// Tail majorant for series, rounding estimate for matexp, standard error for MC.
  double error_bound = 0;
  SphereConfig config;
  std::optional<MultiIndex> monomial;
};

/// Raised when the series cannot certify the requested tolerance.
class SeriesFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class Real>
struct SeriesResult {
  std::vector<Real> coefficients;  // in the operator's monomial basis
  double tail_bound = 0;           // 1-norm bound on the coefficient error
  unsigned terms = 0;
};

namespace detail {

/// Partial sum of sum_n (s B)^n v / n! with 1-norm remainder <= tol.
///
/// With x = s ||B||_1 the remainder after n terms is at most
/// ||v||_1 x^{n+1}/(n+1)! / (1 - x/(n+2)). Cancellation grows like e^x, so
/// the sum is formed in SeriesReal and refused when e^x would leave fewer
/// than 10 spare digits beyond the tolerance.
inline SeriesResult<SeriesReal> exp_series_apply(const DenseMatrix<SeriesReal>& b, double b_norm1, double s,
                                                 std::vector<SeriesReal> v, double tol, unsigned max_terms) {
  SeriesResult<SeriesReal> out;
  out.coefficients = std::move(v);
  double v_norm = 0;
  for (const auto& c : out.coefficients) v_norm += std::abs(to_double(c));
  const double x = s * b_norm1 * (1 + 1e-12);
  if (x == 0 || v_norm == 0) return out;

  const double needed = x / std::log(10.0) - std::log10(tol / v_norm) + 10;
  if (needed > decimal_digits<SeriesReal>()) {
    throw SeriesFailure("exponential series: (t/2)||A||_1 = " + std::to_string(x) +
                        " needs more digits than the series precision carries");
  }

  const SeriesReal step = SeriesReal(s);
  std::vector<SeriesReal> term = out.coefficients;
  double term_bound = v_norm;
  for (unsigned n = 1; n <= max_terms; ++n) {
    term = b.apply(std::span<const SeriesReal>(term));
    const SeriesReal scale = step / n;
    for (std::size_t i = 0; i < term.size(); ++i) {
      term[i] *= scale;
      out.coefficients[i] += term[i];
    }
    term_bound *= x / (n + 1);  // ||v|| x^{n+1}/(n+1)!
    out.terms = n;
    if (n + 2 > x) {
      const double tail = term_bound / (1 - x / (n + 2));
      if (tail <= tol) {
        out.tail_bound = tail;
        return out;
      }
    }
  }
  throw SeriesFailure("exponential series: tolerance not reached within " + std::to_string(max_terms) + " terms");
}

}  // namespace detail

/// exp{(t/2) A} f by the truncated power series, coefficient 1-norm error <= tol.
inline SeriesResult<SeriesReal> heat_apply_series(const OperatorMatrix& op, double t, const Polynomial& f,
                                                  double tol, unsigned max_terms = 20000) {
  if (!(tol > 0)) throw std::invalid_argument("heat_apply_series: tol must be positive");
  if (!(t >= 0)) throw std::invalid_argument("heat_apply_series: t must be >= 0");
  const auto coords = op.indexer.coordinates(f);
  std::vector<SeriesReal> v(coords.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = to_real<SeriesReal>(coords[i]);
  if (t == 0) return {std::move(v), 0.0, 0};
  return detail::exp_series_apply(op.as_real<SeriesReal>(), to_double(norm1(op.entries)), t / 2, std::move(v), tol,
                                  max_terms);
}

/// exp((t/2) A) at the working precision.
template <class Real>
DenseMatrix<Real> heat_apply_matexp(const OperatorMatrix& op, double t) {
  DenseMatrix<Real> a = op.as_real<Real>();
  a *= Real(t) / 2;
  return matrix_exponential(a);
}

enum class LaplacianChoice { Full, Decoupled };

struct MomentOptions {
  Route route = Route::Matexp;
  LaplacianChoice laplacian = LaplacianChoice::Full;
  /// Degree cap of the working space; 0 means the degree of f.
  unsigned degree = 0;
  /// Relative 1-norm target of the series functional.
  double series_rel_tol = 1e-30;
};

/// The linear functional f -> (exp{(t/2) Lap} f)(north pole) on P^k_{<=ell}.
///
/// Stored as the row vector r = delta_pole exp((t/2) A): the matexp route
/// multiplies the pole row into the Padé exponential, the series route sums
/// the series of the transposed operator applied to the pole row. A moment
/// is then sum_i m^i <r, q_i> over the shift expansion of f.
template <class Real = double>
class HeatFunctional {
 public:
  HeatFunctional(const SphereConfig& cfg, unsigned ell, const MomentOptions& opt = {})
      : cfg_(cfg), opt_(opt), indexer_(cfg.k, ell) {
    cfg.validate();
    if (opt.route != Route::Matexp && opt.route != Route::Series) {
      throw std::invalid_argument("HeatFunctional: route must be matexp or series");
    }
    const OperatorMatrix op = opt.laplacian == LaplacianChoice::Full ? build_sphere_laplacian(cfg, ell)
                                                                     : build_decoupled_laplacian(cfg, ell);
    const std::size_t dim = indexer_.dimension();
    m_ = cfg.shift<Real>();
    row_.assign(dim, Real(0));

    if (opt.route == Route::Matexp) {
      const Real root_n = cfg.north_pole<Real>();
      std::vector<Real> pole(dim);
      for (std::size_t j = 0; j < dim; ++j) pole[j] = pole_value(indexer_.monomial(j), root_n);
      const auto expo = heat_apply_matexp<Real>(op, cfg.t);
      for (std::size_t i = 0; i < dim; ++i) {
        if (pole[i] == 0) continue;
        for (std::size_t j = 0; j < dim; ++j) row_[j] += pole[i] * expo(i, j);
      }
      // Padé plus squaring error, relative to the row magnitude; each squaring
      // at most doubles the relative error of a contractive exponential.
      const double scaled = cfg.t / 2 * to_double(norm1(op.entries));
      const double squarings = scaled > 0.5 ? std::ceil(std::log2(scaled / 0.5)) : 0;
      row_rel_err_ = 32 * std::pow(10.0, -decimal_digits<Real>()) * std::exp2(squarings);
    } else {
      const SeriesReal root_n = cfg.north_pole<SeriesReal>();
      std::vector<SeriesReal> pole(dim);
      double pole_norm = 0;
      for (std::size_t j = 0; j < dim; ++j) {
        pole[j] = pole_value(indexer_.monomial(j), root_n);
        pole_norm += to_double(pole[j]);
      }
      DenseMatrix<SeriesReal> at(dim, dim);
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) at(j, i) = to_real<SeriesReal>(op.entries(i, j));
      const double tol = opt.series_rel_tol * pole_norm;
      auto sr = detail::exp_series_apply(at, to_double(norm1(at)), cfg.t / 2, std::move(pole), tol, 20000);
      for (std::size_t j = 0; j < dim; ++j) row_[j] = static_cast<Real>(sr.coefficients[j]);
      row_abs_err_ = sr.tail_bound;  // 1-norm bound on the row error
      series_terms_ = sr.terms;
    }
  }

  const SphereConfig& config() const { return cfg_; }
  const BasisIndexer& indexer() const { return indexer_; }
  unsigned series_terms() const { return series_terms_; }

  MomentResult<Real> operator()(const Polynomial& f) const {
    if (f.varcount() != cfg_.k) throw std::invalid_argument("heat moment: polynomial must have k variables");
    if (f.degree() > indexer_.max_degree()) throw OutOfBasisError("heat moment: polynomial degree exceeds ell");
    using std::abs;
    const auto parts = shift_expansion(f);
    Real total = 0;
    Real magnitude = 0;
    Real m_pow = 1;
    double series_err = 0;
    for (const auto& q : parts) {
      if (!q.is_zero()) {
        Real val = 0;
        double q_max = 0;
        for (const auto& [a, c] : q.terms()) {
          const Real term = to_real<Real>(c) * row_[indexer_.index(a)];
          val += term;
          magnitude += abs(Real(term * m_pow));
          q_max = std::max(q_max, std::abs(to_double(c)));
        }
        total += m_pow * val;
        series_err += row_abs_err_ * q_max * std::abs(to_double(m_pow));
      }
      m_pow *= m_;
    }
    MomentResult<Real> res;
    res.value = total;
    res.route = opt_.route;
    res.config = cfg_;
    const double rounding = 8 * to_double(magnitude) * std::pow(10.0, -decimal_digits<Real>());
    res.error_bound = opt_.route == Route::Matexp ? rounding + row_rel_err_ * to_double(magnitude)
                                                  : rounding + series_err;
    if (f.terms().size() == 1) res.monomial = f.terms().begin()->first;
    return res;
  }

  MomentResult<Real> operator()(const MultiIndex& alpha) const { return (*this)(Polynomial::monomial(alpha)); }

 private:
  template <class T>
  static T pole_value(const MultiIndex& a, const T& root_n) {
    return a.tail_degree() == 0 ? pow_int(root_n, a[0]) : T(0);
  }

  SphereConfig cfg_;
  MomentOptions opt_;
  BasisIndexer indexer_;
  Real m_ = 0;
  std::vector<Real> row_;
  double row_rel_err_ = 0;
  double row_abs_err_ = 0;
  unsigned series_terms_ = 0;
};

/// Finite-N heat-kernel moment of f(x_1, ..., x_k) on the shifted sphere.
template <class Real = double>
MomentResult<Real> heat_moment(const SphereConfig& cfg, const Polynomial& f, const MomentOptions& opt = {}) {
  const unsigned ell = std::max(opt.degree, f.degree());
  return HeatFunctional<Real>(cfg, ell, opt)(f);
}

template <class Real = double>
MomentResult<Real> heat_moment(const SphereConfig& cfg, const MultiIndex& alpha, const MomentOptions& opt = {}) {
  return heat_moment<Real>(cfg, Polynomial::monomial(alpha), opt);
}

}  // namespace sphereheat
