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
 * @file study.hpp
 * @brief Convergence studies: finite-N moments against the Gaussian limit.
 *
 * One row per (monomial, N, t, route) in that canonical order. The last row
 * of each N-sweep carries the log-log slope of abs_error against N, negated
 * so that a 1/N rate reads as 1.
 */

#include "sphereheat/eigenmethod.hpp"
#include "sphereheat/gaussian_limit.hpp"
#include "sphereheat/heatop.hpp"
#include "sphereheat/sphere_mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace sphereheat {

struct StudySpec {
  std::vector<MultiIndex> monomials;
  std::vector<int> N_values;
  std::vector<double> t_values;
  std::vector<Route> routes{Route::Matexp};
  Precision precision = Precision::Double;
  std::uint64_t mc_paths = 100000;
  double mc_step = 1e-3;
  std::uint64_t seed = 1;

  void validate() const {
    if (monomials.empty() || N_values.empty() || t_values.empty() || routes.empty()) {
      throw std::invalid_argument("study: monomials, N, t and routes must be non-empty");
    }
    for (const auto& a : monomials) {
      if (a.size() == 0) throw std::invalid_argument("study: empty monomial");
      for (int N : N_values)
        if (N <= static_cast<int>(a.size())) throw std::invalid_argument("study: every N must exceed the monomial length");
    }
    for (double t : t_values)
      if (!(t > 0) || !std::isfinite(t)) throw std::invalid_argument("study: every t must be positive");
    for (Route r : routes)
      if (r == Route::ClosedForm) throw std::invalid_argument("study: closed_form is not a study route");
  }
};

struct ConvergenceRow {
  MultiIndex monomial;
  int N = 0;
  double t = 0;
  Route route = Route::Matexp;
  double value = 0;
  double limit = 0;
  double abs_error = 0;
  double stderr = 0;  // MC standard error, or the route's error bound
  std::optional<double> fitted_rate;
  bool failed = false;
  std::string message;
};

inline const char* kStudyCsvHeader = "monomial,N,t,route,value,limit,abs_error,stderr,fitted_rate";

/// Negated least-squares slope of log(err) on log(N); empty if any error is at rounding level.
inline std::optional<double> fit_rate(const std::vector<int>& N, const std::vector<double>& err, double floor = 1e-13) {
  if (N.size() < 2) return std::nullopt;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < N.size(); ++i) {
    if (!(err[i] > floor)) return std::nullopt;
    const double x = std::log(static_cast<double>(N[i])), y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(N.size());
  const double den = n * sxx - sx * sx;
  if (den == 0) return std::nullopt;
  return -(n * sxy - sx * sy) / den;
}

namespace detail {

inline double study_value(const StudySpec& spec, const MultiIndex& a, int N, double t, Route r, double& err) {
  SphereConfig cfg{N, t, a.size(), a.degree()};
  cfg.validate();
  switch (r) {
    case Route::Matexp:
    case Route::Series: {
      MomentOptions opt;
      opt.route = r;
      if (spec.precision == Precision::Extended) {
        const auto m = heat_moment<Extended>(cfg, a, opt);
        err = m.error_bound;
        return to_double(m.value);
      }
      const auto m = heat_moment<double>(cfg, a, opt);
      err = m.error_bound;
      return m.value;
    }
    case Route::Eigen: {
      if (a.tail_degree() != 0) throw std::invalid_argument("eigen route covers x_1^n only");
      err = 0;
      return heat_moment_x1_eigen(a[0], cfg);
    }
    case Route::MonteCarlo: {
      const auto e = mc_moment(McConfig{cfg, std::min(spec.mc_step, t), spec.mc_paths, spec.seed}, a);
      err = e.stderr;
      return e.mean;
    }
    case Route::ClosedForm: break;
  }
  throw std::invalid_argument("unsupported study route");
}

}  // namespace detail

namespace detail {

template <class T>
std::vector<T> sorted_unique(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace detail

/// Rows come out in canonical (monomial, N, t, route) order whatever the input order.
inline std::vector<ConvergenceRow> run_study(const StudySpec& input) {
  input.validate();
  StudySpec spec = input;
  spec.monomials = detail::sorted_unique(spec.monomials);
  spec.N_values = detail::sorted_unique(spec.N_values);
  spec.t_values = detail::sorted_unique(spec.t_values);
  spec.routes = detail::sorted_unique(spec.routes);
  std::vector<ConvergenceRow> rows;
  for (const auto& a : spec.monomials)
    for (int N : spec.N_values)
      for (double t : spec.t_values)
        for (Route r : spec.routes) {
          ConvergenceRow row;
          row.monomial = a;
          row.N = N;
          row.t = t;
          row.route = r;
          rows.push_back(row);
        }

  auto compute = [&](ConvergenceRow& row) {
    row.limit = gaussian_moment(row.monomial, row.t);
    try {
      row.value = detail::study_value(spec, row.monomial, row.N, row.t, row.route, row.stderr);
      row.abs_error = std::abs(row.value - row.limit);
    } catch (const std::exception& e) {
      row.failed = true;
      row.message = e.what();
    }
  };

  // Deterministic rows go to a worker pool; MC rows run in order and parallelize internally.
  std::vector<std::size_t> pooled;
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (rows[i].route != Route::MonteCarlo) pooled.push_back(i);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < pooled.size(); i = next++) compute(rows[pooled[i]]);
  };
  const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(worker_count(), std::max<std::size_t>(1, pooled.size())));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (auto& row : rows)
    if (row.route == Route::MonteCarlo) compute(row);

  // Rate per (monomial, t, route) sweep, stored on its largest-N row.
  std::map<std::tuple<MultiIndex, double, int>, std::vector<std::size_t>> sweeps;
  for (std::size_t i = 0; i < rows.size(); ++i)
    sweeps[{rows[i].monomial, rows[i].t, static_cast<int>(rows[i].route)}].push_back(i);
  for (const auto& [key, idx] : sweeps) {
    std::vector<int> Ns;
    std::vector<double> errs;
    bool ok = true;
    for (std::size_t i : idx) {
      ok &= !rows[i].failed;
      Ns.push_back(rows[i].N);
      errs.push_back(rows[i].abs_error);
    }
    if (!ok) continue;
    const std::size_t last = *std::max_element(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return rows[a].N < rows[b].N;
    });
    rows[last].fitted_rate = fit_rate(Ns, errs);
  }
  return rows;
}

inline std::string csv_monomial(const MultiIndex& a) {
  std::string s = "\"";
  for (std::size_t j = 0; j < a.size(); ++j) s += (j ? "," : "") + std::to_string(a[j]);
  return s + "\"";
}

inline void write_study_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows) {
  out << kStudyCsvHeader << '\n';
  for (const auto& r : rows) {
    out << csv_monomial(r.monomial) << ',' << r.N << ',' << format_real(r.t) << ',' << to_string(r.route) << ',';
    if (r.failed) {
      out << "failed," << format_real(r.limit) << ",,,\n";
      continue;
    }
    out << format_real(r.value) << ',' << format_real(r.limit) << ',' << format_real(r.abs_error) << ','
        << format_real(r.stderr) << ',';
    if (r.fitted_rate) out << format_real(*r.fitted_rate);
    out << '\n';
  }
}

/// Human-readable summary: one line per sweep with its fitted rate, plus failures.
inline std::string study_summary(const std::vector<ConvergenceRow>& rows) {
  std::ostringstream s;
  std::size_t failed = 0;
  for (const auto& r : rows) {
    if (r.failed) {
      ++failed;
      s << "FAILED " << r.monomial.to_string() << " N=" << r.N << " t=" << r.t << " " << to_string(r.route) << ": "
        << r.message << '\n';
    } else if (r.fitted_rate) {
      s << r.monomial.to_string() << " t=" << r.t << " " << to_string(r.route) << ": rate " << *r.fitted_rate
        << " (abs_error " << r.abs_error << " at N=" << r.N << ")\n";
    }
  }
  s << rows.size() << " rows, " << failed << " failed\n";
  return s.str();
}

}  // namespace sphereheat
