// Copyright 2026 The qbd Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// The invariant suite for one parameter set on one window: orthogonality,
// inversion, Plancherel, translation mass, convolution, transition rows,
// Chapman-Kolmogorov, the heat equation, the L^2(pi) structure and the
// positivity probe. Each check reports a defect, its tolerance and a verdict.
// A check whose preconditions cannot be met on the window (for example a
// window too small to hold any interior-supported function) fails with an
// infinite defect and a note rather than throwing.

#ifndef QBD_VERIFY_HPP_
#define QBD_VERIFY_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "qbd/bdkernel.hpp"
#include "qbd/qbessel.hpp"
#include "qbd/qcore.hpp"
#include "qbd/qfourier.hpp"
#include "qbd/real.hpp"

namespace qbd {

struct CheckResult {
  std::string name;
  double defect = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

struct VerifyOptions {
  Tolerances tol;
  int random_functions = 20;
  std::uint64_t seed = 1;
  std::vector<int> start_states{-2, 0, 3};
  std::vector<std::string> times{"0.1", "1", "10"};
  std::vector<std::string> heat_times{"0.1", "1"};
  std::string ck_time = "0.5";
  std::vector<int> probe_indices = default_probe_indices();
};

namespace detail {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Platform-independent uniform on [-1, 1).
inline double uniform_pm1(std::mt19937_64& rng) {
  return 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
}

inline GridFunction random_function(const QParams& p, const GridWindow& w,
                                    const GridWindow& support, std::mt19937_64& rng) {
  return GridFunction::generate(p, w, [&](int n) {
    return support.contains(n) ? uniform_pm1(rng) : 0.0;
  });
}

inline double to_d(const Real& x) { return x.to_double(); }

}  // namespace detail

// Runs `body` and turns its defect into a check; exceptions become failures.
inline CheckResult run_check(const std::string& name, double tolerance,
                             const std::function<double()>& body) {
  CheckResult r{name, detail::kInf, tolerance, false, ""};
  try {
    r.defect = body();
    r.pass = r.defect <= tolerance;
  } catch (const std::exception& e) {
    r.note = e.what();
  }
  return r;
}

inline std::vector<CheckResult> run_verification(const QParams& params, const GridWindow& window,
                                                 const VerifyOptions& opt = {}) {
  using detail::to_d;
  std::vector<CheckResult> out;
  const Tolerances& tol = opt.tol;

  std::shared_ptr<const KernelMatrix> Mp;
  std::string setup_error;
  try {
    Mp = std::make_shared<const KernelMatrix>(transform_matrix(window, params));
  } catch (const std::exception& e) {
    setup_error = e.what();
  }
  auto kernel = [&]() -> const KernelMatrix& {
    if (!Mp) throw CoverageError("transform matrix unavailable: " + setup_error);
    return *Mp;
  };
  auto support = [&]() { return interior_support(kernel(), tol.orth); };
  auto bits = [&]() { return kernel().bits(); };
  auto time = [&](const std::string& t) { return Real::parse(t, bits()); };

  out.push_back(run_check("orthogonality", tol.orth, [&] {
    const KernelMatrix& M = kernel();
    double worst = 0.0;
    for (int i = -4; i <= 4; ++i) {
      for (int j = i; j <= 4; ++j) {
        worst = std::max(worst, to_d(orthogonality_defect(i, j, window, M.bessel())));
      }
    }
    return worst;
  }));

  // Random interior-supported functions shared by the transform checks.
  std::vector<GridFunction> fs;
  std::mt19937_64 rng(opt.seed);
  auto functions = [&]() -> const std::vector<GridFunction>& {
    if (fs.empty()) {
      const GridWindow s = support();
      for (int k = 0; k < opt.random_functions; ++k) {
        fs.push_back(detail::random_function(params, window, s, rng));
      }
    }
    return fs;
  };

  out.push_back(run_check("inversion", tol.window, [&] {
    const KernelMatrix& M = kernel();
    double worst = 0.0;
    for (const auto& f : functions()) {
      const GridFunction back = hankel_transform(hankel_transform(f, M), M);
      worst = std::max(worst, to_d(norm_p(back - f, 2.0) / norm_p(f, 2.0)));
    }
    return worst;
  }));

  out.push_back(run_check("plancherel", tol.window, [&] {
    const KernelMatrix& M = kernel();
    double worst = 0.0;
    for (const auto& f : functions()) {
      const Real nf = norm_p(f, 2.0);
      worst = std::max(worst, to_d(abs(norm_p(hankel_transform(f, M), 2.0) - nf) / nf));
    }
    return worst;
  }));

  out.push_back(run_check("translation_mass", tol.window, [&] {
    const KernelMatrix& M = kernel();
    double worst = 0.0;
    for (std::size_t k = 0; k < std::min<std::size_t>(4, functions().size()); ++k) {
      const GridFunction& f = functions()[k];
      const Real mass = jackson_integral(f);
      const Real l1 = norm_p(f, 1.0);
      for (int i : opt.probe_indices) {
        worst = std::max(worst, to_d(abs(jackson_integral(translate(f, i, M)) - mass) / l1));
      }
    }
    return worst;
  }));

  out.push_back(run_check("convolution_routes", 10 * tol.window, [&] {
    const KernelMatrix& M = kernel();
    const auto& f = functions();
    const GridFunction a = convolve(f[0], f[1], M);
    const GridFunction b = convolve_by_translation(f[0], f[1], M);
    return to_d(norm_p(a - b, 2.0) / norm_p(a, 2.0));
  }));

  out.push_back(run_check("row_sum", tol.mass, [&] {
    const KernelMatrix& M = kernel();
    double worst = 0.0;
    for (int r : opt.start_states) {
      for (const auto& t : opt.times) worst = std::max(worst, to_d(transition_row(r, time(t), M).defect));
    }
    return worst;
  }));

  out.push_back(run_check("row_min_entry", tol.pos, [&] {
    const KernelMatrix& M = kernel();
    double worst = 0.0;
    for (int r : opt.start_states) {
      for (const auto& t : opt.times) {
        worst = std::max(worst, -to_d(transition_row(r, time(t), M).min_entry()));
      }
    }
    return worst;
  }));

  out.push_back(run_check("row_identity_at_zero", 0.0, [&] {
    const KernelMatrix& M = kernel();
    double worst = 0.0;
    for (int r : opt.start_states) {
      const TransitionRow row = transition_row(r, Real(bits()), M);
      for (int n = window.n_lo; n <= window.n_hi; ++n) {
        worst = std::max(worst, to_d(abs(row.at(n) - (n == r ? 1 : 0))));
      }
    }
    return worst;
  }));

  out.push_back(run_check("chapman_kolmogorov", tol.ck, [&] {
    const KernelMatrix& M = kernel();
    double worst = 0.0;
    const Real t = time(opt.ck_time);
    for (int r : opt.start_states) worst = std::max(worst, to_d(chapman_kolmogorov_defect(r, t, t, M)));
    return worst;
  }));

  out.push_back(run_check("heat_residual", tol.heat, [&] {
    const KernelMatrix& M = kernel();
    const std::vector<GridFunction> data{GridFunction::indicator(params, window, 0),
                                         bessel_row(2, M)};
    double worst = 0.0;
    for (const auto& f : data) {
      for (const auto& t : opt.heat_times) worst = std::max(worst, to_d(heat_residual(f, time(t), M)));
    }
    return worst;
  }));

  out.push_back(run_check("eigenfunction", tol.window, [&] {
    const KernelMatrix& M = kernel();
    double worst = 0.0;
    for (int k : {0, 2, 5}) {
      const GridFunction f = bessel_row(k, M);
      const GridFunction df = generator_apply(f);
      const Real lambda = pow(params.q(bits()), 2L * k);
      Real num(bits()), den(bits());
      for (int m = df.window().n_lo; m <= df.window().n_hi; ++m) {
        num = max(num, abs(df.at(m) + lambda * f.at(m)));
        den = max(den, abs(lambda * f.at(m)));
      }
      worst = std::max(worst, to_d(num / den));
    }
    return worst;
  }));

  out.push_back(run_check("self_adjoint", tol.window, [&] {
    const GridWindow inner{window.n_lo + 1, window.n_hi - 1};
    if (inner.n_lo > inner.n_hi) throw ParameterError("window too small");
    double worst = 0.0;
    std::mt19937_64 g(opt.seed + 1);
    for (int k = 0; k < 5; ++k) {
      const GridFunction f = detail::random_function(params, window, inner, g);
      const GridFunction h = detail::random_function(params, window, inner, g);
      worst = std::max(worst, to_d(self_adjoint_defect(f, h) / (norm_p(f, 2.0) * norm_p(h, 2.0))));
    }
    return worst;
  }));

  out.push_back(run_check("positive_definite", tol.window, [&] {
    const KernelMatrix& M = kernel();
    double worst = 0.0;
    for (const auto& f : functions()) {
      for (const auto& t : opt.heat_times) {
        const Real form = inner_product(semigroup_apply(f, time(t), M), f) / inner_product(f, f);
        worst = std::max(worst, -to_d(form));
      }
    }
    return worst;
  }));

  out.push_back(run_check("semigroup", tol.ck, [&] {
    const KernelMatrix& M = kernel();
    double worst = 0.0;
    const Real t = time("0.5"), s = time("0.25");
    for (std::size_t k = 0; k < std::min<std::size_t>(5, functions().size()); ++k) {
      const GridFunction& f = functions()[k];
      worst = std::max(worst, to_d(semigroup_defect(f, t, s, M) / norm_p(f, 2.0)));
    }
    return worst;
  }));

  // Relative to pi_n lambda_n; the tolerance is a few units in the last place.
  const double ulp = std::ldexp(1.0, -static_cast<int>(params.precision_bits) + 4);
  out.push_back(run_check("detailed_balance", ulp, [&] {
    const Bits b = params.precision_bits;
    double worst = 0.0;
    for (int n = window.n_lo; n < window.n_hi; ++n) {
      const Real lhs = stationary_weight(n, params, b) * birth_rate(n, params, b);
      worst = std::max(worst, to_d(detailed_balance_defect(n, params, b) / lhs));
    }
    return worst;
  }));

  out.push_back(run_check("positivity_probe", kPositivityRelTol, [&] {
    const ProbeReport rep = positivity_probe(kernel(), opt.probe_indices);
    return std::max(0.0, -rep.worst_relative);
  }));

  return out;
}

inline bool all_pass(const std::vector<CheckResult>& checks) {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

}  // namespace qbd

#endif  // QBD_VERIFY_HPP_
