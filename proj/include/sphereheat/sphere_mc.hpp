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
 * @file sphere_mc.hpp
 * @brief Monte Carlo for Brownian motion (generator Lap/2) on the sphere of radius sqrt(N).
 *
 * Walk in xt coordinates from (sqrt N, 0, ..., 0): add sqrt(h) times a
 * standard normal vector projected on the tangent space, then rescale to
 * radius sqrt(N). The bias is O(h); coupled paths at h, h/2, h/4 driven by
 * the same fine increments estimate it.
 *
 * Every path draws from its own counter-based stream keyed by (seed, path),
 * and paths are reduced in fixed-size chunks in index order, so estimates
 * are bit-identical for any thread count.
 */

#include "sphereheat/operators.hpp"
#include "sphereheat/polynomial.hpp"

#include <boost/random/normal_distribution.hpp>

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace sphereheat {

struct McConfig {
  SphereConfig cfg;
  double step_h = 1e-3;
  std::uint64_t n_paths = 100000;
  std::uint64_t seed = 1;

  void validate() const {
    cfg.validate();
    if (!(step_h > 0) || !std::isfinite(step_h)) throw std::invalid_argument("McConfig: step must be positive");
    if (cfg.t > 0 && step_h > cfg.t) throw std::invalid_argument("McConfig: step must not exceed t");
    if (n_paths == 0) throw std::invalid_argument("McConfig: need at least one path");
  }

  /// ceil(t/h) steps of equal length t/steps.
  std::uint64_t steps() const { return cfg.t == 0 ? 0 : static_cast<std::uint64_t>(std::ceil(cfg.t / step_h - 1e-9)); }
};

struct McEstimate {
  double mean = 0;
  double stderr = 0;  // sample std / sqrt(n_paths)
  std::uint64_t n_paths = 0;
  double step = 0;
  std::string bias_note = "tangent-projection walk, O(step) discretization bias";
};

/// Counter-based stream: value i of path p is splitmix64(state_p + i * gamma).
///
/// Satisfies UniformRandomBitGenerator; normals come from Boost's ziggurat sampler.
class CounterRng {
 public:
  using result_type = std::uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  CounterRng(std::uint64_t seed, std::uint64_t path) : state_(mix(seed ^ mix(path + 0x632be59bd9b4e019ULL))) {}

  result_type operator()() { return next(); }
  std::uint64_t next() { return mix(state_ + (++counter_) * 0x9e3779b97f4a7c15ULL); }

  /// Uniform on (0, 1].
  double uniform() { return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53; }

  double normal() { return normal_(*this); }

  std::uint64_t counter() const { return counter_; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
  std::uint64_t counter_ = 0;
  boost::random::normal_distribution<double> normal_;
};

namespace detail {

// One walk step of length h with normal vector z; keeps |x| = sqrt(N).
inline void sphere_step(std::vector<double>& x, const std::vector<double>& z, double h, double radius) {
  const double n2 = radius * radius;
  double zx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) zx += z[i] * x[i];
  const double c = zx / n2;
  const double sh = std::sqrt(h);
  double norm2 = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] += sh * (z[i] - c * x[i]);
    norm2 += x[i] * x[i];
  }
  const double s = radius / std::sqrt(norm2);
  for (auto& v : x) v *= s;
}

inline void to_unshifted(std::vector<double>& x, const SphereConfig& cfg) { x[0] -= cfg.shift<double>(); }

}  // namespace detail

/// Endpoint of one path in unshifted coordinates (x_1 = xt_1 - m, x_2, ..., x_N).
inline std::vector<double> simulate_endpoint(const McConfig& mc, CounterRng& rng) {
  const int N = mc.cfg.N;
  const double radius = std::sqrt(static_cast<double>(N));
  std::vector<double> x(static_cast<std::size_t>(N), 0.0), z(x.size());
  x[0] = radius;
  const std::uint64_t n = mc.steps();
  const double h = n ? mc.cfg.t / static_cast<double>(n) : 0.0;
  for (std::uint64_t s = 0; s < n; ++s) {
    for (auto& v : z) v = rng.normal();
    detail::sphere_step(x, z, h, radius);
  }
  detail::to_unshifted(x, mc.cfg);
  return x;
}

inline std::vector<double> simulate_endpoint(const McConfig& mc, std::uint64_t path) {
  CounterRng rng(mc.seed, path);
  return simulate_endpoint(mc, rng);
}

/// Endpoints of one path at steps h, h/2, ..., h/2^{levels-1}, all driven by the finest increments:
/// a level-l increment is the normalized sum of the 2^{levels-1-l} fine normals it spans.
inline std::vector<std::vector<double>> simulate_coupled(const McConfig& mc, std::uint64_t path, unsigned levels) {
  if (levels == 0 || levels > 10) throw std::invalid_argument("simulate_coupled: levels must be in 1..10");
  const int N = mc.cfg.N;
  const double radius = std::sqrt(static_cast<double>(N));
  const std::size_t dim = static_cast<std::size_t>(N);
  CounterRng rng(mc.seed, path);
  std::vector<std::vector<double>> x(levels, std::vector<double>(dim, 0.0));
  std::vector<std::vector<double>> acc(levels, std::vector<double>(dim, 0.0));
  for (auto& v : x) v[0] = radius;
  const std::uint64_t n = mc.steps();
  const std::uint64_t fine_per_coarse = std::uint64_t{1} << (levels - 1);
  const double h0 = n ? mc.cfg.t / static_cast<double>(n) : 0.0;
  std::vector<double> z(dim);
  for (std::uint64_t s = 0; s < n * fine_per_coarse; ++s) {
    for (auto& v : z) v = rng.normal();
    for (unsigned l = 0; l < levels; ++l) {
      const std::uint64_t span = fine_per_coarse >> l;  // fine steps per level-l step
      for (std::size_t i = 0; i < dim; ++i) acc[l][i] += z[i];
      if ((s + 1) % span == 0) {
        const double inv = 1.0 / std::sqrt(static_cast<double>(span));
        for (auto& v : acc[l]) v *= inv;
        detail::sphere_step(x[l], acc[l], h0 / static_cast<double>(std::uint64_t{1} << l), radius);
        std::fill(acc[l].begin(), acc[l].end(), 0.0);
      }
    }
  }
  for (auto& v : x) detail::to_unshifted(v, mc.cfg);
  return x;
}

inline double monomial_value(const MultiIndex& a, const std::vector<double>& x) {
  double v = 1;
  for (std::size_t j = 0; j < a.size(); ++j)
    for (unsigned e = 0; e < a[j]; ++e) v *= x[j];
  return v;
}

/// Worker count from SPHEREHEAT_THREADS, else hardware concurrency.
inline unsigned worker_count() {
  if (const char* env = std::getenv("SPHEREHEAT_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace detail {

struct Moments {
  std::vector<double> sum, sum2;
  explicit Moments(std::size_t n = 0) : sum(n, 0.0), sum2(n, 0.0) {}
  void add(std::size_t i, double v) {
    sum[i] += v;
    sum2[i] += v * v;
  }
  void merge(const Moments& o) {
    for (std::size_t i = 0; i < sum.size(); ++i) {
      sum[i] += o.sum[i];
      sum2[i] += o.sum2[i];
    }
  }
};

constexpr std::uint64_t kChunk = 512;

// Runs body(path, moments) over all paths; chunk results are merged in chunk order.
template <class Body>
Moments parallel_paths(std::uint64_t n_paths, std::size_t width, Body&& body) {
  const std::uint64_t chunks = (n_paths + kChunk - 1) / kChunk;
  std::vector<Moments> parts(chunks, Moments(width));
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t c = next++; c < chunks; c = next++) {
      const std::uint64_t end = std::min(n_paths, (c + 1) * kChunk);
      for (std::uint64_t p = c * kChunk; p < end; ++p) body(p, parts[c]);
    }
  };
  const unsigned threads = static_cast<unsigned>(std::min<std::uint64_t>(worker_count(), chunks));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  Moments total(width);
  for (const auto& m : parts) total.merge(m);
  return total;
}

inline McEstimate finish(const Moments& m, std::size_t i, std::uint64_t n, double step) {
  McEstimate e;
  const double dn = static_cast<double>(n);
  e.mean = m.sum[i] / dn;
  const double var = n > 1 ? std::max(0.0, (m.sum2[i] - dn * e.mean * e.mean) / (dn - 1)) : 0.0;
  e.stderr = std::sqrt(var / dn);
  e.n_paths = n;
  e.step = step;
  return e;
}

inline void check_alphas(const McConfig& mc, const std::vector<MultiIndex>& alphas) {
  for (const auto& a : alphas) {
    if (a.size() > mc.cfg.k || a.size() >= static_cast<std::size_t>(mc.cfg.N)) {
      throw std::invalid_argument("mc: monomial uses more coordinates than k");
    }
  }
}

}  // namespace detail

inline std::vector<McEstimate> mc_moments(const McConfig& mc, const std::vector<MultiIndex>& alphas) {
  mc.validate();
  detail::check_alphas(mc, alphas);
  const auto m = detail::parallel_paths(mc.n_paths, alphas.size(), [&](std::uint64_t p, detail::Moments& acc) {
    const auto x = simulate_endpoint(mc, p);
    for (std::size_t i = 0; i < alphas.size(); ++i) acc.add(i, monomial_value(alphas[i], x));
  });
  const double step = mc.steps() ? mc.cfg.t / static_cast<double>(mc.steps()) : 0.0;
  std::vector<McEstimate> out;
  for (std::size_t i = 0; i < alphas.size(); ++i) out.push_back(detail::finish(m, i, mc.n_paths, step));
  return out;
}

inline McEstimate mc_moment(const McConfig& mc, const MultiIndex& alpha) { return mc_moments(mc, {alpha}).front(); }

/// Per-monomial estimates at each level plus the coupled differences level[l] - level[l+1].
struct McLevels {
  std::vector<McEstimate> level;       // step h / 2^l
  std::vector<McEstimate> difference;  // coupled, much smaller stderr than independent runs
};

inline std::vector<McLevels> mc_moments_coupled(const McConfig& mc, const std::vector<MultiIndex>& alphas,
                                                unsigned levels = 2) {
  mc.validate();
  detail::check_alphas(mc, alphas);
  const std::size_t na = alphas.size();
  const std::size_t width = na * (2 * levels - 1);
  const auto m = detail::parallel_paths(mc.n_paths, width, [&](std::uint64_t p, detail::Moments& acc) {
    const auto xs = simulate_coupled(mc, p, levels);
    for (std::size_t i = 0; i < na; ++i) {
      std::vector<double> v(levels);
      for (unsigned l = 0; l < levels; ++l) {
        v[l] = monomial_value(alphas[i], xs[l]);
        acc.add(i * (2 * levels - 1) + l, v[l]);
      }
      for (unsigned l = 0; l + 1 < levels; ++l) acc.add(i * (2 * levels - 1) + levels + l, v[l] - v[l + 1]);
    }
  });
  const double h0 = mc.steps() ? mc.cfg.t / static_cast<double>(mc.steps()) : 0.0;
  std::vector<McLevels> out(na);
  for (std::size_t i = 0; i < na; ++i) {
    for (unsigned l = 0; l < levels; ++l)
      out[i].level.push_back(detail::finish(m, i * (2 * levels - 1) + l, mc.n_paths, h0 / std::ldexp(1.0, static_cast<int>(l))));
    for (unsigned l = 0; l + 1 < levels; ++l) {
      auto d = detail::finish(m, i * (2 * levels - 1) + levels + l, mc.n_paths, h0 / std::ldexp(1.0, static_cast<int>(l)));
      d.bias_note = "coupled difference of consecutive step sizes";
      out[i].difference.push_back(d);
    }
  }
  return out;
}

}  // namespace sphereheat
