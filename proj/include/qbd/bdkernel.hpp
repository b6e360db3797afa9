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

// The bilateral birth-death process on {q^n}: jumps n -> n+1 at rate
// lambda_n = q^{2nu-2n} and n -> n-1 at rate mu_n = q^{-2n}. Its generator is
// the q-Bessel operator
//
//   Delta f(x) = [f(x/q) - (1 + q^{2nu}) f(x) + q^{2nu} f(qx)] / x^2,
//
// and everything time-dependent is diagonal on the transform side:
//
//   rho_t(q^m)   = c sum_k w_k e^{-t q^{2k}} j(q^{m+k})
//   p_nr(t)      = c^2 w_n sum_k w_k e^{-t q^{2k}} j(q^{n+k}) j(q^{r+k})
//   (P_t f)(q^m) = c sum_k w_k e^{-t q^{2k}} (Ff)(q^k) j(q^{m+k}).
//
// p_nr(t) is the probability of being at q^n at time t when started at q^r.

#ifndef QBD_BDKERNEL_HPP_
#define QBD_BDKERNEL_HPP_

#include <algorithm>
#include <string>
#include <vector>

#include "qbd/errors.hpp"
#include "qbd/qcore.hpp"
#include "qbd/qfourier.hpp"
#include "qbd/real.hpp"

namespace qbd {

struct Tolerances {
  double orth = 1e-20;
  double window = 1e-18;
  double mass = 1e-18;
  double ck = 1e-15;
  double heat = 1e-12;
  double pos = 1e-20;
};

// lambda_n = q^{2nu - 2n}.
inline Real birth_rate(int n, const QParams& params, Bits bits) {
  const Real q = params.q(bits);
  return pow(q, params.nu(bits) * 2) * pow(q, -2L * n);
}

// mu_n = q^{-2n}.
inline Real death_rate(int n, const QParams& params, Bits bits) {
  return pow(params.q(bits), -2L * n);
}

// pi_n = q^{2(nu+1) n}.
inline Real stationary_weight(int n, const QParams& params, Bits bits) {
  return pow(params.q_pow_2nu2(bits), static_cast<long>(n));
}

inline Real stationary_weight(int n, const QParams& params) {
  return stationary_weight(n, params, params.precision_bits);
}

// |pi_n lambda_n - pi_{n+1} mu_{n+1}|.
inline Real detailed_balance_defect(int n, const QParams& params, Bits bits) {
  return abs(stationary_weight(n, params, bits) * birth_rate(n, params, bits) -
             stationary_weight(n + 1, params, bits) * death_rate(n + 1, params, bits));
}

namespace detail {
inline GridWindow interior_of(const GridWindow& w) {
  if (w.size() < 3) throw ParameterError("window too small: generator needs at least 3 points");
  return GridWindow{w.n_lo + 1, w.n_hi - 1};
}
}  // namespace detail

// Delta f on the interior exponents n_lo+1 .. n_hi-1, quotient form.
inline GridFunction generator_apply(const GridFunction& f) {
  const GridWindow inner = detail::interior_of(f.window());
  const Bits bits = f.bits();
  const QParams& p = f.params();
  const Real q = p.q(bits);
  const Real q2nu = pow(q, p.nu(bits) * 2);
  const Real center = 1 + q2nu;
  std::vector<Real> out;
  out.reserve(inner.size());
  for (int m = inner.n_lo; m <= inner.n_hi; ++m) {
    Real num = f.at(m - 1) - center * f.at(m) + q2nu * f.at(m + 1);
    out.push_back(num / pow(q, 2L * m));
  }
  return GridFunction(p, inner, std::move(out));
}

// Delta f in birth-death form mu_m f(q^{m-1}) - (lambda_m + mu_m) f(q^m) + lambda_m f(q^{m+1}).
inline GridFunction generator_apply_tridiagonal(const GridFunction& f) {
  const GridWindow inner = detail::interior_of(f.window());
  const Bits bits = f.bits();
  const QParams& p = f.params();
  std::vector<Real> out;
  out.reserve(inner.size());
  for (int m = inner.n_lo; m <= inner.n_hi; ++m) {
    const Real lambda = birth_rate(m, p, bits);
    const Real mu = death_rate(m, p, bits);
    out.push_back(mu * f.at(m - 1) - (lambda + mu) * f.at(m) + lambda * f.at(m + 1));
  }
  return GridFunction(p, inner, std::move(out));
}

// j_nu(q^{k+n}, q^2) for n in the kernel window: the eigenfunction of Delta
// with eigenvalue -q^{2k}.
inline GridFunction bessel_row(int k, const KernelMatrix& M) {
  const GridWindow& w = M.window();
  M.bessel().require(w.n_lo + k, w.n_hi + k, "bessel_row");
  return GridFunction::generate(M.params(), w, [&](int n) { return M.j(k + n); });
}

// e^{-t q^{2k}} for k in the kernel window.
inline std::vector<Real> heat_multiplier(const Real& t, const KernelMatrix& M) {
  const GridWindow& w = M.window();
  const Real q = M.params().q(M.bits());
  const Real tt = t.rounded(M.bits());
  std::vector<Real> e;
  e.reserve(w.size());
  for (int k = w.n_lo; k <= w.n_hi; ++k) e.push_back(exp(-tt * pow(q, 2L * k)));
  return e;
}

namespace detail {
inline void require_positive_time(const Real& t, const char* what) {
  if (!(t > 0.0) || !t.is_finite()) throw ParameterError(std::string(what) + ": need t > 0");
}
inline void require_nonnegative_time(const Real& t, const char* what) {
  if (!(t >= 0.0) || !t.is_finite()) throw ParameterError(std::string(what) + ": need t >= 0");
}
inline void require_state(int r, const KernelMatrix& M, const char* what) {
  if (!M.window().contains(r)) {
    throw CoverageError(std::string(what) + ": state " + std::to_string(r) +
                        " outside window " + M.window().to_string());
  }
}
}  // namespace detail

struct HeatState {
  Real t;
  GridFunction rho;
};

// rho_t = F[z -> e^{-t z^2}].
inline HeatState heat_kernel(const Real& t, const KernelMatrix& M) {
  detail::require_positive_time(t, "heat_kernel");
  GridFunction rho(M.params(), M.window(), apply_transform(heat_multiplier(t, M), M));
  return HeatState{t, std::move(rho)};
}

// P_{x_r}(q^m, t) = c^2 sum_k w_k e^{-t q^{2k}} j(q^{m+k}) j(q^{r+k}).
inline GridFunction density(int r, const Real& t, const KernelMatrix& M) {
  detail::require_positive_time(t, "density");
  detail::require_state(r, M, "density");
  const GridWindow& w = M.window();
  const std::vector<Real> e = heat_multiplier(t, M);
  const Real c2 = M.c() * M.c();
  std::vector<Real> a;
  a.reserve(w.size());
  for (int k = w.n_lo; k <= w.n_hi; ++k) {
    a.push_back(c2 * M.weight(k) * e[w.offset(k)] * M.j(r + k));
  }
  GridFunction out(M.params(), w);
  for (int m = w.n_lo; m <= w.n_hi; ++m) {
    Real s(M.bits());
    for (int k = w.n_lo; k <= w.n_hi; ++k) s.fma(a[w.offset(k)], M.j(m + k));
    out.at(m) = std::move(s);
  }
  return out;
}

// The same density as c T_{q^r} rho_t.
inline GridFunction density_by_translation(int r, const Real& t, const KernelMatrix& M) {
  detail::require_state(r, M, "density_by_translation");
  GridFunction out = translate(heat_kernel(t, M).rho, r, M);
  out *= M.c();
  return out;
}

struct TransitionRow {
  int r = 0;
  Real t;
  GridWindow window;
  QParams params;
  std::vector<Real> probs;  // p_nr(t) for n in window
  Real sum;
  Real defect;  // |1 - sum_n p_nr(t)|
  // nu >= 0: the minimal process is the unique one with these rates.
  bool unique = true;

  const Real& at(int n) const { return probs[window.offset(n)]; }
  Real min_entry() const {
    Real m = probs.front();
    for (const auto& p : probs) m = min(m, p);
    return m;
  }
};

// p_nr(t) = w_n P_{x_r}(q^n, t); t = 0 gives the exact unit vector at r.
inline TransitionRow transition_row(int r, const Real& t, const KernelMatrix& M) {
  detail::require_nonnegative_time(t, "transition_row");
  detail::require_state(r, M, "transition_row");
  const GridWindow& w = M.window();
  TransitionRow row;
  row.r = r;
  row.t = t;
  row.window = w;
  row.params = M.params();
  row.unique = M.params().unique_regime();
  if (t.is_zero()) {
    row.probs.assign(w.size(), Real(M.bits()));
    row.probs[w.offset(r)] = Real(1L, M.bits());
  } else {
    const GridFunction d = density(r, t, M);
    row.probs.reserve(w.size());
    for (int n = w.n_lo; n <= w.n_hi; ++n) row.probs.push_back(M.weight(n) * d.at(n));
  }
  row.sum = Real(M.bits());
  for (const auto& p : row.probs) row.sum += p;
  row.defect = abs(1 - row.sum);
  return row;
}

// Column-stochastic matrix (n, r) -> p_nr(t); column r is transition_row(r, t).
class TransitionMatrix {
 public:
  TransitionMatrix(GridWindow window, std::vector<TransitionRow> columns)
      : window_(window), columns_(std::move(columns)) {}

  const GridWindow& window() const { return window_; }
  const Real& operator()(int n, int r) const { return columns_[window_.offset(r)].at(n); }
  const TransitionRow& column(int r) const { return columns_[window_.offset(r)]; }

 private:
  GridWindow window_;
  std::vector<TransitionRow> columns_;
};

inline TransitionMatrix transition_matrix(const Real& t, const KernelMatrix& M) {
  const GridWindow& w = M.window();
  std::vector<TransitionRow> cols;
  cols.reserve(w.size());
  for (int r = w.n_lo; r <= w.n_hi; ++r) cols.push_back(transition_row(r, t, M));
  return TransitionMatrix(w, std::move(cols));
}

// max over interior n of |p_nr(t+s) - sum_k p_nk(t) p_kr(s)|.
inline Real chapman_kolmogorov_defect(int r, const Real& t, const Real& s, const KernelMatrix& M) {
  detail::require_nonnegative_time(t, "chapman_kolmogorov_defect");
  detail::require_nonnegative_time(s, "chapman_kolmogorov_defect");
  const GridWindow& w = M.window();
  const GridWindow inner = detail::interior_of(w);
  const TransitionRow direct = transition_row(r, t + s, M);
  const TransitionRow first = transition_row(r, s, M);
  const TransitionMatrix then = transition_matrix(t, M);
  Real worst(M.bits());
  for (int n = inner.n_lo; n <= inner.n_hi; ++n) {
    Real composed(M.bits());
    for (int k = w.n_lo; k <= w.n_hi; ++k) {
      if (!first.at(k).is_zero()) composed.fma(then(n, k), first.at(k));
    }
    worst = max(worst, abs(direct.at(n) - composed));
  }
  return worst;
}

// P_t f = F(e^{-t z^2} F f); P_0 f = f.
inline GridFunction semigroup_apply(const GridFunction& f, const Real& t, const KernelMatrix& M) {
  detail::require_nonnegative_time(t, "semigroup_apply");
  M.check_compatible(f);
  if (t.is_zero()) return f;
  std::vector<Real> g = apply_transform(f.values(), M);
  const std::vector<Real> e = heat_multiplier(t, M);
  for (std::size_t k = 0; k < g.size(); ++k) g[k] *= e[k];
  return GridFunction(f.params(), f.window(), apply_transform(g, M));
}

// d/dt P_t f, differentiated under the transform: F(-z^2 e^{-t z^2} F f).
inline GridFunction semigroup_time_derivative(const GridFunction& f, const Real& t,
                                              const KernelMatrix& M) {
  detail::require_nonnegative_time(t, "semigroup_time_derivative");
  M.check_compatible(f);
  const GridWindow& w = M.window();
  std::vector<Real> g = apply_transform(f.values(), M);
  const std::vector<Real> e = heat_multiplier(t, M);
  const Real q = M.params().q(M.bits());
  for (int k = w.n_lo; k <= w.n_hi; ++k) {
    g[w.offset(k)] *= -(e[w.offset(k)] * pow(q, 2L * k));
  }
  return GridFunction(f.params(), w, apply_transform(g, M));
}

// max over interior points of |d/dt P_t f - Delta P_t f|.
inline Real heat_residual(const GridFunction& f, const Real& t, const KernelMatrix& M) {
  detail::require_positive_time(t, "heat_residual");
  const GridFunction du = semigroup_time_derivative(f, t, M);
  const GridFunction lap = generator_apply(semigroup_apply(f, t, M));
  Real worst(M.bits());
  for (int m = lap.window().n_lo; m <= lap.window().n_hi; ++m) {
    worst = max(worst, abs(du.at(m) - lap.at(m)));
  }
  return worst;
}

// ||P_t(P_s f) - P_{t+s} f||_{q,2,nu}.
inline Real semigroup_defect(const GridFunction& f, const Real& t, const Real& s,
                             const KernelMatrix& M) {
  return norm_p(semigroup_apply(semigroup_apply(f, s, M), t, M) - semigroup_apply(f, t + s, M),
                2.0);
}

// |<Delta f, g> - <f, Delta g>| with both inner products over the interior.
// f and g must vanish at the two window end points.
inline Real self_adjoint_defect(const GridFunction& f, const GridFunction& g) {
  f.check_compatible(g);
  const GridWindow& w = f.window();
  for (const GridFunction* h : {&f, &g}) {
    if (!h->at(w.n_lo).is_zero() || !h->at(w.n_hi).is_zero()) {
      throw ParameterError("self_adjoint_defect: functions must vanish at the window ends");
    }
  }
  const GridFunction df = generator_apply(f);
  const GridFunction dg = generator_apply(g);
  const GridWindow& inner = df.window();
  const auto weights = measure_weights(f.params(), inner, f.bits());
  Real a(f.bits()), b(f.bits());
  for (int m = inner.n_lo; m <= inner.n_hi; ++m) {
    const Real& wm = weights[inner.offset(m)];
    a.fma(wm * df.at(m), g.at(m));
    b.fma(wm * f.at(m), dg.at(m));
  }
  return abs(a - b);
}

}  // namespace qbd

#endif  // QBD_BDKERNEL_HPP_
