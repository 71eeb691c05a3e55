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

// sphereheat: finite-N heat-kernel moments on the sphere and their Gaussian limit.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error.

#include "sphereheat/study.hpp"
#include "sphereheat/verify.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace sphereheat;

namespace {

constexpr int kUsageError = 2;

struct Options {
  int N = 16;
  std::vector<int> N_list;
  double t = 1.0;
  std::vector<double> t_list;
  std::size_t k = 0;
  unsigned degree = 0;
  std::vector<std::string> monomials;
  std::vector<std::string> routes;
  std::uint64_t paths = 100000;
  double step = 1e-3;
  std::uint64_t seed = 1;
  std::string out;
  std::string config;
  std::string precision = "double";
  std::string suite = "all";
  std::string variant = "first";
  double eps = 1e-3;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

// key=value lines; values fill options not given on the command line.
void apply_config(CLI::App* sub, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config file '" + path + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    CLI::Option* opt = nullptr;
    try {
      opt = sub->get_option("--" + key);
    } catch (const CLI::OptionNotFound&) {
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    if (opt->count() > 0) continue;
    opt->add_result(value);
    opt->run_callback();
  }
}

std::vector<MultiIndex> parse_monomials(const std::vector<std::string>& raw) {
  std::vector<MultiIndex> out;
  for (const auto& r : raw) {
    std::stringstream ss(r);
    std::string part;
    while (std::getline(ss, part, ';'))
      if (!trim(part).empty()) out.push_back(parse_multi_index(trim(part)));
  }
  return out;
}

Precision parse_precision(const std::string& p) {
  if (p == "double") return Precision::Double;
  if (p == "extended") return Precision::Extended;
  throw std::invalid_argument("precision must be 'double' or 'extended'");
}

MultiIndex single_monomial(const Options& o) {
  const auto m = parse_monomials(o.monomials);
  if (m.size() != 1) throw std::invalid_argument("--monomial must name exactly one monomial");
  return m.front();
}

SphereConfig config_for(const Options& o, const MultiIndex& a) {
  const std::size_t k = o.k ? o.k : a.size();
  if (a.size() > k) throw std::invalid_argument("--monomial has more exponents than --k");
  SphereConfig cfg{o.N, o.t, k, std::max(o.degree, a.degree())};
  cfg.validate();
  return cfg;
}

MultiIndex pad(const MultiIndex& a, std::size_t k) {
  std::vector<unsigned> e = a.exponents();
  e.resize(k, 0);
  return MultiIndex(e);
}

int cmd_moment(const Options& o) {
  const MultiIndex a0 = single_monomial(o);
  const SphereConfig cfg = config_for(o, a0);
  const MultiIndex a = pad(a0, cfg.k);
  const Precision prec = parse_precision(o.precision);
  const std::vector<std::string> routes = o.routes.empty() ? std::vector<std::string>{"matexp"} : o.routes;
  std::cout << "route,value,error_bound\n";
  bool any_failed = false;
  for (const auto& rn : routes) {
    const Route r = parse_route(rn);
    try {
      double value = 0, err = 0;
      if (r == Route::Matexp || r == Route::Series) {
        MomentOptions opt;
        opt.route = r;
        opt.degree = cfg.degree;
        if (prec == Precision::Extended) {
          const auto m = heat_moment<Extended>(cfg, a, opt);
          value = to_double(m.value);
          err = m.error_bound;
        } else {
          const auto m = heat_moment<double>(cfg, a, opt);
          value = m.value;
          err = m.error_bound;
        }
      } else if (r == Route::Eigen) {
        if (a.tail_degree() != 0) throw std::invalid_argument("eigen route covers x_1^n only");
        value = heat_moment_x1_eigen(a[0], cfg);
      } else if (r == Route::MonteCarlo) {
        const auto e = mc_moment(McConfig{cfg, std::min(o.step, cfg.t > 0 ? cfg.t : o.step), o.paths, o.seed}, a);
        value = e.mean;
        err = e.stderr;
      } else {
        throw std::invalid_argument("route " + rn + " is not available for moments");
      }
      std::cout << to_string(r) << ',' << format_real(value) << ',' << format_real(err) << '\n';
    } catch (const SeriesFailure& e) {
      any_failed = true;
      std::cerr << to_string(r) << ": " << e.what() << '\n';
      std::cout << to_string(r) << ",failed,\n";
    }
  }
  return any_failed ? 1 : 0;
}

int cmd_study(const Options& o) {
  StudySpec spec;
  spec.monomials = parse_monomials(o.monomials);
  spec.N_values = o.N_list.empty() ? std::vector<int>{16, 32, 64, 128} : o.N_list;
  spec.t_values = o.t_list.empty() ? std::vector<double>{1.0} : o.t_list;
  if (!o.routes.empty()) {
    spec.routes.clear();
    for (const auto& r : o.routes) spec.routes.push_back(parse_route(r));
  }
  spec.precision = parse_precision(o.precision);
  spec.mc_paths = o.paths;
  spec.mc_step = o.step;
  spec.seed = o.seed;
  const auto rows = run_study(spec);
  if (o.out.empty() || o.out == "-") {
    write_study_csv(std::cout, rows);
  } else {
    std::ofstream f(o.out);
    if (!f) throw std::invalid_argument("cannot write '" + o.out + "'");
    write_study_csv(f, rows);
  }
  std::cerr << study_summary(rows);
  return 0;
}

int cmd_verify(const Options& o) {
  const auto rep = run_verify(o.suite);
  rep.print(std::cout);
  return rep.passed() ? 0 : 1;
}

int cmd_mc(const Options& o) {
  const MultiIndex a0 = single_monomial(o);
  const SphereConfig cfg = config_for(o, a0);
  const MultiIndex a = pad(a0, cfg.k);
  const McConfig mc{cfg, o.step, o.paths, o.seed};
  const auto lv = mc_moments_coupled(mc, {a}, 2).front();
  const auto& e = lv.level[0];
  const double exact = heat_moment<double>(cfg, a).value;
  std::cout << "monomial,N,t,step,paths,mean,stderr,bias_h_vs_h2,bias_stderr,matexp\n"
            << csv_monomial(a) << ',' << cfg.N << ',' << format_real(cfg.t) << ',' << format_real(e.step) << ','
            << e.n_paths << ',' << format_real(e.mean) << ',' << format_real(e.stderr) << ','
            << format_real(lv.difference[0].mean) << ',' << format_real(lv.difference[0].stderr) << ','
            << format_real(exact) << '\n';
  return 0;
}

int cmd_pde(const Options& o) {
  ParabolicVariant v;
  if (o.variant == "first") {
    v.kind = ParabolicKind::FirstCoordinate;
  } else if (o.variant == "other") {
    v.kind = ParabolicKind::OtherCoordinate;
  } else {
    throw std::invalid_argument("--variant must be 'first' or 'other'");
  }
  const double t = o.t;
  std::cout << "variant," << o.variant << "\nt," << format_real(t) << "\nvariance," << format_real(v.variance(t))
            << '\n';
  for (double x : {0.0, 1.0, 3.0}) {
    const double r1 = residual(v, t, x, 2e-3), r2 = residual(v, t, x, 1e-3);
    std::cout << "residual_x=" << x << ',' << format_real(r2) << ",refinement_ratio," << format_real(r1 / r2) << '\n';
  }
  const auto sp = spectral_evolve(v, o.eps, t, auto_grid(v, o.eps, t));
  const auto ex = extrapolate_to_delta(v, o.eps, t);
  std::cout << "spectral_mass," << format_real(sp.mass) << "\nextrapolated_max_deviation,"
            << format_real(ex.max_deviation) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heat-kernel moments on high-dimensional spheres and their Gaussian limit"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* s) {
    s->add_option("--config", o.config, "key=value file; keys are long option names");
    s->add_option("--precision", o.precision, "double or extended")->check(CLI::IsMember({"double", "extended"}));
  };
  auto sphere = [&](CLI::App* s) {
    s->add_option("--N", o.N, "sphere dimension parameter (radius sqrt N)");
    s->add_option("--t", o.t, "time");
    s->add_option("--k", o.k, "number of coordinates (default: monomial length)");
    s->add_option("--degree", o.degree, "degree cap of the working polynomial space");
    s->add_option("--monomial", o.monomials, "comma-separated exponents, e.g. 2,0");
  };
  auto mcflags = [&](CLI::App* s) {
    s->add_option("--paths", o.paths, "Monte Carlo paths");
    s->add_option("--step", o.step, "Monte Carlo time step");
    s->add_option("--seed", o.seed, "Monte Carlo seed");
  };

  auto* moment = app.add_subcommand("moment", "finite-N moment by one or more routes");
  sphere(moment);
  mcflags(moment);
  common(moment);
  moment->add_option("--routes", o.routes, "matexp, series, eigen, mc")->delimiter(',');

  auto* study = app.add_subcommand("study", "convergence study against the Gaussian limit, CSV output");
  study->add_option("--monomial", o.monomials, "monomial(s); repeat or separate with ';'");
  study->add_option("--N", o.N_list, "comma-separated N values")->delimiter(',');
  study->add_option("--t", o.t_list, "comma-separated t values")->delimiter(',');
  study->add_option("--routes", o.routes, "matexp, series, eigen, mc")->delimiter(',');
  study->add_option("--out", o.out, "CSV path (default stdout)");
  mcflags(study);
  common(study);

  auto* verify = app.add_subcommand("verify", "run self-check suites");
  verify->add_option("--suite,suite", o.suite, "operators, eigen, gaussian, pde, mc, all")
      ->check(CLI::IsMember(verify_suites()));
  verify->add_option("--config", o.config, "key=value file");

  auto* mc = app.add_subcommand("mc", "Monte Carlo estimate with a coupled h vs h/2 bias estimate");
  sphere(mc);
  mcflags(mc);
  common(mc);

  auto* pde = app.add_subcommand("pde", "residuals and spectral evolution of the separated equations");
  pde->add_option("--variant", o.variant, "first or other")->check(CLI::IsMember({"first", "other"}));
  pde->add_option("--t", o.t, "time (>= 0.05)");
  pde->add_option("--eps", o.eps, "initial mollifier variance");
  pde->add_option("--config", o.config, "key=value file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    if (!o.config.empty()) apply_config(sub, o.config);
    if ((sub == moment || sub == study || sub == mc) && o.monomials.empty()) {
      throw std::invalid_argument("--monomial is required (on the command line or in --config)");
    }
    if (sub == moment) return cmd_moment(o);
    if (sub == study) return cmd_study(o);
    if (sub == verify) return cmd_verify(o);
    if (sub == mc) return cmd_mc(o);
    return cmd_pde(o);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
