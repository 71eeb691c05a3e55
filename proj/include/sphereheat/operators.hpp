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
 * @file operators.hpp
 * @brief Exact matrices of the shifted-sphere Laplacian and its pieces.
 *
 * All operators act on the monomial basis of polynomials of degree <= ell
 * in (xt_1, x_2, ..., x_k), where xt_1 is the shifted first coordinate.
 * With e_S the Euler operator sum_{j in S} x_j d_j and L_S the flat
 * Laplacian over S, the radial operator on a variable block S is
 *
 *     R_S = L_S - (1 - 2/N) e_S - (1/N) e_S^2 .
 *
 * D is R_{xt_1}, E is R_{x_2..x_k}, and the Laplacian of the shifted sphere
 * restricted to these polynomials is R over all k variables, which equals
 * D + E - (2/N) e_{xt_1} e_{x_2..x_k}.
 *
 * Columns are built one basis monomial at a time, so matrix column j is the
 * coordinate vector of (operator applied to monomial j). Every operator here
 * is degree non-increasing: entry (i, j) is zero unless deg(i) <= deg(j).
 */

#include "sphereheat/dense_matrix.hpp"
#include "sphereheat/polynomial.hpp"

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sphereheat {

/// Sphere parameters plus the derived shift m(t, N).
struct SphereConfig {
  int N = 2;
  double t = 1.0;
  std::size_t k = 1;
  unsigned degree = 2;

  /// Throws std::invalid_argument unless 2 <= N, k < N, t >= 0.
  void validate() const {
    if (N < 2) throw std::invalid_argument("SphereConfig: N must be >= 2");
    if (k < 1) throw std::invalid_argument("SphereConfig: k must be >= 1");
    if (static_cast<std::size_t>(N) <= k) {
      throw std::invalid_argument("SphereConfig: need k < N (N=" + std::to_string(N) + ", k=" +
                                  std::to_string(k) + ")");
    }
    if (!(t >= 0) || !std::isfinite(t)) throw std::invalid_argument("SphereConfig: t must be finite and >= 0");
  }

  /// m(t, N) = sqrt(N) exp((t/2)(-1 + 1/N)).
  template <class Real = double>
  Real shift() const {
    Real n = N;
    return sqrt_real(n) * exp_real(Real(t) / 2 * (Real(-1) + Real(1) / n));
  }

  /// xt_1 coordinate of the north pole.
  template <class Real = double>
  Real north_pole() const {
    return sqrt_real(Real(N));
  }

 private:
  template <class Real>
  static Real sqrt_real(const Real& x) {
    using std::sqrt;
    return sqrt(x);
  }
  template <class Real>
  static Real exp_real(const Real& x) {
    using std::exp;
    return exp(x);
  }
};

struct OperatorMatrix {
  DenseMatrix<Rational> entries;
  BasisIndexer indexer;
  std::string label;
  int N = 0;  // 0 for N-independent operators

  std::size_t dimension() const { return indexer.dimension(); }
  std::size_t k() const { return indexer.k(); }
  unsigned max_degree() const { return indexer.max_degree(); }

  Polynomial apply(const Polynomial& p) const {
    auto v = indexer.coordinates(p);
    auto w = entries.apply(std::span<const Rational>(v));
    return indexer.polynomial(w);
  }

  Polynomial column(std::size_t j) const {
    auto c = entries.column(j);
    return indexer.polynomial(c);
  }

  /// True when no entry maps a monomial to one of higher degree.
  bool degree_nonincreasing() const {
    for (std::size_t i = 0; i < dimension(); ++i)
      for (std::size_t j = 0; j < dimension(); ++j)
        if (entries(i, j) != 0 && indexer.monomial(i).degree() > indexer.monomial(j).degree()) return false;
    return true;
  }

  template <class Real>
  DenseMatrix<Real> as_real() const {
    return entries.template map<Real>([](const Rational& q) { return to_real<Real>(q); });
  }
};

using MonomialRule = std::function<Polynomial(const MultiIndex&)>;

/// Column-by-column construction from the action on each basis monomial.
inline OperatorMatrix build_from_rule(const BasisIndexer& ix, std::string label, int N, const MonomialRule& rule) {
  OperatorMatrix op{DenseMatrix<Rational>(ix.dimension(), ix.dimension()), ix, std::move(label), N};
  for (std::size_t j = 0; j < ix.dimension(); ++j) {
    Polynomial image = rule(ix.monomial(j));
    for (const auto& [a, c] : image.terms()) op.entries(ix.index(a), j) = c;
  }
  return op;
}

namespace rules {

inline unsigned block_degree(const MultiIndex& a, const std::vector<std::size_t>& vars) {
  unsigned d = 0;
  for (auto v : vars) d += a[v];
  return d;
}

/// sum_{j in vars} d^2/dx_j^2 applied to x^a.
inline Polynomial laplacian(const MultiIndex& a, const std::vector<std::size_t>& vars) {
  Polynomial p(a.size());
  for (auto v : vars) {
    if (a[v] < 2) continue;
    MultiIndex e = a;
    e[v] -= 2;
    p.add_term(e, Rational(a[v]) * (a[v] - 1));
  }
  return p;
}

/// Radial operator R_S on x^a: L_S x^a + lambda(|a_S|) x^a.
inline Polynomial radial(const MultiIndex& a, const std::vector<std::size_t>& vars, int N) {
  Polynomial p = laplacian(a, vars);
  const Rational d = block_degree(a, vars);
  const Rational inv_n = Rational(1, N);
  p.add_term(a, -(1 - 2 * inv_n) * d - inv_n * d * d);
  return p;
}

}  // namespace rules

inline std::vector<std::size_t> first_block() { return {0}; }

inline std::vector<std::size_t> tail_block(std::size_t k) {
  std::vector<std::size_t> v;
  for (std::size_t j = 1; j < k; ++j) v.push_back(j);
  return v;
}

inline std::vector<std::size_t> all_variables(std::size_t k) {
  std::vector<std::size_t> v;
  for (std::size_t j = 0; j < k; ++j) v.push_back(j);
  return v;
}

/// Euler operator e_S as a matrix (diagonal in the monomial basis).
inline OperatorMatrix euler_operator(const BasisIndexer& ix, const std::vector<std::size_t>& vars,
                                     std::string label = "euler") {
  return build_from_rule(ix, std::move(label), 0, [&](const MultiIndex& a) {
    return Polynomial::monomial(a, Rational(rules::block_degree(a, vars)));
  });
}

/// Flat Laplacian over `vars`.
inline OperatorMatrix laplacian_operator(const BasisIndexer& ix, const std::vector<std::size_t>& vars,
                                         std::string label = "laplacian") {
  return build_from_rule(ix, std::move(label), 0, [&](const MultiIndex& a) { return rules::laplacian(a, vars); });
}

/// D on the joint basis of P^k_{<=ell}, acting on xt_1 only.
inline OperatorMatrix build_D(int N, std::size_t k, unsigned ell) {
  if (N < 2) throw std::invalid_argument("build_D: N must be >= 2");
  BasisIndexer ix(k, ell);
  auto vars = first_block();
  return build_from_rule(ix, "D", N, [&](const MultiIndex& a) { return rules::radial(a, vars, N); });
}

/// D on P^1_{<=ell} (the single variable xt_1).
inline OperatorMatrix build_D(int N, unsigned ell) { return build_D(N, 1, ell); }

/// E on the joint basis of P^k_{<=ell}, acting on x_2..x_k. Zero when k = 1.
inline OperatorMatrix build_E(int N, std::size_t k, unsigned ell) {
  if (k >= 2 && N < 3) throw std::invalid_argument("build_E: N must be >= 3");
  if (N < 2) throw std::invalid_argument("build_E: N must be >= 2");
  BasisIndexer ix(k, ell);
  auto vars = tail_block(k);
  return build_from_rule(ix, "E", N, [&](const MultiIndex& a) { return rules::radial(a, vars, N); });
}

/// -(2/N) e_{xt_1} e_{x_2..x_k}, as the product of the two Euler matrices.
inline OperatorMatrix build_mixed_term(int N, std::size_t k, unsigned ell) {
  BasisIndexer ix(k, ell);
  auto e1 = euler_operator(ix, first_block());
  auto ey = euler_operator(ix, tail_block(k));
  OperatorMatrix op{e1.entries * ey.entries, ix, "mixed", N};
  op.entries *= Rational(-2, N);
  return op;
}

/// Shifted-sphere Laplacian on P^k_{<=ell} as D + E + mixed term.
inline OperatorMatrix build_sphere_laplacian(const SphereConfig& cfg, unsigned ell) {
  cfg.validate();
  auto d = build_D(cfg.N, cfg.k, ell);
  auto e = build_E(cfg.N, cfg.k, ell);
  auto mixed = build_mixed_term(cfg.N, cfg.k, ell);
  OperatorMatrix op{d.entries + e.entries + mixed.entries, d.indexer, "sphere_laplacian", cfg.N};
  return op;
}

/// D + E with the mixed term dropped; the operator the large-N limit factorises through.
inline OperatorMatrix build_decoupled_laplacian(const SphereConfig& cfg, unsigned ell) {
  cfg.validate();
  auto d = build_D(cfg.N, cfg.k, ell);
  auto e = build_E(cfg.N, cfg.k, ell);
  return OperatorMatrix{d.entries + e.entries, d.indexer, "D+E", cfg.N};
}

/// Single radial operator over all k variables; equals build_sphere_laplacian.
inline OperatorMatrix build_sphere_laplacian_direct(const SphereConfig& cfg, unsigned ell) {
  cfg.validate();
  BasisIndexer ix(cfg.k, ell);
  auto vars = all_variables(cfg.k);
  const int N = cfg.N;
  return build_from_rule(ix, "sphere_laplacian_direct", N,
                         [&](const MultiIndex& a) { return rules::radial(a, vars, N); });
}

/// Hermite operator sum_{j>=2} d_j^2 - y.d_y: the entrywise N -> infinity limit of E.
inline OperatorMatrix build_hermite_limit(std::size_t k, unsigned ell) {
  BasisIndexer ix(k, ell);
  auto vars = tail_block(k);
  return build_from_rule(ix, "hermite", 0, [&](const MultiIndex& a) {
    Polynomial p = rules::laplacian(a, vars);
    p.add_term(a, -Rational(rules::block_degree(a, vars)));
    return p;
  });
}

/// AB - BA.
inline OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (!(a.indexer == b.indexer)) throw std::invalid_argument("commutator: operators live on different bases");
  return OperatorMatrix{a.entries * b.entries - b.entries * a.entries, a.indexer,
                        "[" + a.label + "," + b.label + "]", a.N};
}

/// Eigenvalue of D (and of R over any block) on total degree n: -n (1 + (n-2)/N).
inline Rational radial_eigenvalue(unsigned n, int N) {
  return -Rational(n) * (1 + Rational(static_cast<int>(n) - 2, N));
}

}  // namespace sphereheat
