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
 * @file polynomial.hpp
 * @brief Exact multivariate polynomials over the rationals.
 *
 * Variable 0 is the (shifted) first coordinate; variables 1..k-1 are
 * x_2..x_k. Terms are stored sparsely and zero coefficients are never kept.
 * `BasisIndexer` fixes the graded-lex ordering of the monomial basis of
 * polynomials of degree <= ell that every operator matrix is written in.
 */

#include "sphereheat/numeric.hpp"

#include <algorithm>
#include <compare>
#include <cstddef>
#include <map>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sphereheat {

class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::size_t k) : exps_(k, 0) {}
  MultiIndex(std::initializer_list<unsigned> e) : exps_(e) {}
  explicit MultiIndex(std::vector<unsigned> e) : exps_(std::move(e)) {}

  std::size_t size() const { return exps_.size(); }
  unsigned operator[](std::size_t i) const { return exps_[i]; }
  unsigned& operator[](std::size_t i) { return exps_[i]; }
  const std::vector<unsigned>& exponents() const { return exps_; }

  unsigned degree() const { return std::accumulate(exps_.begin(), exps_.end(), 0u); }

  /// Degree in variables 1..k-1 (the y-block).
  unsigned tail_degree() const {
    return exps_.empty() ? 0u : degree() - exps_[0];
  }

  /// Graded lexicographic: lower total degree first, then larger leading
  /// exponents first.
  std::strong_ordering graded_cmp(const MultiIndex& o) const {
    if (auto c = degree() <=> o.degree(); c != 0) return c;
    for (std::size_t i = 0; i < std::min(size(), o.size()); ++i) {
      if (exps_[i] != o.exps_[i]) return o.exps_[i] <=> exps_[i];
    }
    return size() <=> o.size();
  }

  auto operator<=>(const MultiIndex& o) const { return graded_cmp(o); }
  bool operator==(const MultiIndex&) const = default;

  std::string to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < exps_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(exps_[i]);
    }
    return s + ")";
  }

 private:
  std::vector<unsigned> exps_;
};

/// Parses "2,0,1" into a MultiIndex.
inline MultiIndex parse_multi_index(const std::string& text) {
  std::vector<unsigned> e;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw std::invalid_argument("empty exponent in '" + text + "'");
    std::size_t pos = 0;
    long v = std::stol(item, &pos);
    if (pos != item.size() || v < 0) throw std::invalid_argument("bad exponent '" + item + "'");
    e.push_back(static_cast<unsigned>(v));
  }
  if (e.empty()) throw std::invalid_argument("empty multi-index");
  return MultiIndex(std::move(e));
}

class Polynomial {
 public:
  using Terms = std::map<MultiIndex, Rational>;

  explicit Polynomial(std::size_t varcount = 1) : k_(varcount) {
    if (k_ == 0) throw std::invalid_argument("Polynomial: need at least one variable");
  }

  static Polynomial constant(std::size_t k, const Rational& c) {
    Polynomial p(k);
    p.add_term(MultiIndex(k), c);
    return p;
  }

  static Polynomial monomial(const MultiIndex& a, const Rational& c = 1) {
    Polynomial p(a.size());
    p.add_term(a, c);
    return p;
  }

  /// The polynomial x_{j+1} in k variables.
  static Polynomial variable(std::size_t k, std::size_t j) {
    MultiIndex a(k);
    a[j] = 1;
    return monomial(a);
  }

  std::size_t varcount() const { return k_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  unsigned degree() const {
    unsigned d = 0;
    for (const auto& [a, c] : terms_) d = std::max(d, a.degree());
    return d;
  }

  Rational coefficient(const MultiIndex& a) const {
    auto it = terms_.find(a);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  void add_term(const MultiIndex& a, const Rational& c) {
    if (a.size() != k_) throw std::invalid_argument("add_term: multi-index length mismatch");
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(a, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Polynomial& operator+=(const Polynomial& o) {
    check_same(o);
    for (const auto& [a, c] : o.terms_) add_term(a, c);
    return *this;
  }

  Polynomial& operator-=(const Polynomial& o) {
    check_same(o);
    for (const auto& [a, c] : o.terms_) add_term(a, -c);
    return *this;
  }

  Polynomial& operator*=(const Rational& s) {
    if (s == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [a, c] : terms_) c *= s;
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Rational& s) { return a *= s; }
  friend Polynomial operator*(const Rational& s, Polynomial a) { return a *= s; }
  friend Polynomial operator-(Polynomial a) { return a *= Rational(-1); }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_same(b);
    Polynomial r(a.k_);
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        MultiIndex e(a.k_);
        for (std::size_t i = 0; i < a.k_; ++i) e[i] = ea[i] + eb[i];
        r.add_term(e, ca * cb);
      }
    }
    return r;
  }

  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  bool operator==(const Polynomial& o) const { return k_ == o.k_ && terms_ == o.terms_; }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    // Highest degree first reads naturally.
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [a, c] = *it;
      Rational mag = c < 0 ? Rational(-c) : c;
      if (s.empty()) {
        if (c < 0) s += "-";
      } else {
        s += c < 0 ? " - " : " + ";
      }
      std::string mono;
      for (std::size_t i = 0; i < k_; ++i) {
        if (a[i] == 0) continue;
        if (!mono.empty()) mono += "*";
        mono += "x" + std::to_string(i + 1);
        if (a[i] > 1) mono += "^" + std::to_string(a[i]);
      }
      if (mono.empty()) {
        s += mag.str();
      } else if (mag == 1) {
        s += mono;
      } else {
        s += mag.str() + "*" + mono;
      }
    }
    return s;
  }

 private:
  void check_same(const Polynomial& o) const {
    if (o.k_ != k_) throw std::invalid_argument("polynomial variable counts differ");
  }

  std::size_t k_;
  Terms terms_;
};

inline Polynomial pow(const Polynomial& p, unsigned n) {
  Polynomial r = Polynomial::constant(p.varcount(), 1);
  for (unsigned i = 0; i < n; ++i) r *= p;
  return r;
}

class OutOfBasisError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Graded-lex enumeration of {alpha : |alpha| <= ell} in k variables.
class BasisIndexer {
 public:
  BasisIndexer(std::size_t k, unsigned ell) : k_(k), ell_(ell) {
    if (k == 0) throw std::invalid_argument("BasisIndexer: k must be >= 1");
    for (unsigned d = 0; d <= ell; ++d) {
      MultiIndex a(k);
      enumerate_degree(a, 0, d);
    }
    for (std::size_t i = 0; i < basis_.size(); ++i) index_.emplace(basis_[i], i);
  }

  std::size_t k() const { return k_; }
  unsigned max_degree() const { return ell_; }
  std::size_t dimension() const { return basis_.size(); }
  const std::vector<MultiIndex>& basis() const { return basis_; }

  std::size_t index(const MultiIndex& a) const {
    if (a.size() != k_) throw std::invalid_argument("monomial_index: multi-index length mismatch");
    auto it = index_.find(a);
    if (it == index_.end()) {
      throw OutOfBasisError("monomial " + a.to_string() + " exceeds degree " + std::to_string(ell_));
    }
    return it->second;
  }

  const MultiIndex& monomial(std::size_t i) const {
    if (i >= basis_.size()) throw OutOfBasisError("basis index out of range");
    return basis_[i];
  }

  /// Coefficient vector of p in this basis.
  std::vector<Rational> coordinates(const Polynomial& p) const {
    if (p.varcount() != k_) throw std::invalid_argument("coordinates: variable count mismatch");
    std::vector<Rational> v(dimension());
    for (const auto& [a, c] : p.terms()) v[index(a)] = c;
    return v;
  }

  Polynomial polynomial(std::span<const Rational> v) const {
    if (v.size() != dimension()) throw std::invalid_argument("polynomial: coordinate length mismatch");
    Polynomial p(k_);
    for (std::size_t i = 0; i < v.size(); ++i) p.add_term(basis_[i], v[i]);
    return p;
  }

  bool operator==(const BasisIndexer& o) const { return k_ == o.k_ && ell_ == o.ell_; }

 private:
  // Leading exponent runs from d down to 0: larger leading exponents first.
  void enumerate_degree(MultiIndex& a, std::size_t pos, unsigned remaining) {
    if (pos + 1 == k_) {
      a[pos] = remaining;
      basis_.push_back(a);
      return;
    }
    for (unsigned e = remaining + 1; e-- > 0;) {
      a[pos] = e;
      enumerate_degree(a, pos + 1, remaining - e);
    }
    a[pos] = 0;
  }

  std::size_t k_;
  unsigned ell_;
  std::vector<MultiIndex> basis_;
  std::map<MultiIndex, std::size_t> index_;
};

inline std::size_t monomial_index(const MultiIndex& a, const BasisIndexer& ix) { return ix.index(a); }

inline const MultiIndex& index_to_monomial(std::size_t i, const BasisIndexer& ix) { return ix.monomial(i); }

namespace detail {
template <class T>
T from_rational(const Rational& q) {
  if constexpr (std::is_same_v<T, Rational>) {
    return q;
  } else {
    return to_real<T>(q);
  }
}
}  // namespace detail

/// Evaluates p at `point`. Exact when T is Rational.
template <class T>
T poly_eval(const Polynomial& p, std::span<const T> point) {
  if (point.size() != p.varcount()) throw std::invalid_argument("poly_eval: point length mismatch");
  T sum = 0;
  for (const auto& [a, c] : p.terms()) {
    T term = detail::from_rational<T>(c);
    for (std::size_t i = 0; i < point.size(); ++i) {
      if (a[i] != 0) term *= pow_int(point[i], a[i]);
    }
    sum += term;
  }
  return sum;
}

template <class T>
T poly_eval(const Polynomial& p, const std::vector<T>& point) {
  return poly_eval<T>(p, std::span<const T>(point));
}

/// Components q_i with p(xt - m, y) = sum_i m^i q_i(xt, y), for symbolic m.
inline std::vector<Polynomial> shift_expansion(const Polynomial& p) {
  const unsigned d = p.degree();
  std::vector<Polynomial> q(d + 1, Polynomial(p.varcount()));
  for (const auto& [a, c] : p.terms()) {
    for (unsigned i = 0; i <= a[0]; ++i) {
      MultiIndex e = a;
      e[0] = a[0] - i;
      Rational coef = c * Rational(binomial(a[0], i));
      if (i % 2 == 1) coef = -coef;
      q[i].add_term(e, coef);
    }
  }
  return q;
}

/// p with x_1 replaced by (xt_1 - m), expressed in (xt_1, x_2, ...).
inline Polynomial shift_first_variable(const Polynomial& p, const Rational& m) {
  auto q = shift_expansion(p);
  Polynomial r(p.varcount());
  Rational mp = 1;
  for (const auto& qi : q) {
    r += qi * mp;
    mp *= m;
  }
  return r;
}

}  // namespace sphereheat
