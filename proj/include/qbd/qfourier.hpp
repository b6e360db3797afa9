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

// The q-Bessel Fourier (Hankel) transform on a grid window
//
//   F f(q^m) = c (1 - q) sum_n q^{n (2 nu + 2)} f(q^n) j_nu(q^{m+n}, q^2),
//
// the q-translation T_{q^i} f = F(j_nu(q^i .) F f), the positivity probe for
// the translation kernel and the q-convolution f * g = F(Ff Fg).

#ifndef QBD_QFOURIER_HPP_
#define QBD_QFOURIER_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qbd/errors.hpp"
#include "qbd/qbessel.hpp"
#include "qbd/qcore.hpp"
#include "qbd/real.hpp"

namespace qbd {

// Dense transform matrix on a window together with the ingredients every
// spectral computation needs: the Bessel cache over [2 n_lo, 2 n_hi], the
// constant c and the measure weights.
class KernelMatrix {
 public:
  KernelMatrix(std::shared_ptr<const BesselGridCache> bessel, GridWindow window)
      : bessel_(std::move(bessel)), window_(window) {
    bessel_->require(2 * window_.n_lo, 2 * window_.n_hi, "transform_matrix");
    const QParams& p = bessel_->params();
    bits_ = grid_bits(p, window_);
    c_ = c_constant(p, bits_);
    weights_ = measure_weights(p, window_, bits_);
    const std::size_t n = window_.size();
    entries_.reserve(n * n);
    for (int m = window_.n_lo; m <= window_.n_hi; ++m) {
      for (int k = window_.n_lo; k <= window_.n_hi; ++k) {
        entries_.push_back(c_ * weights_[window_.offset(k)] * bessel_->at(m + k));
      }
    }
  }

  const QParams& params() const { return bessel_->params(); }
  const GridWindow& window() const { return window_; }
  Bits bits() const { return bits_; }
  std::size_t size() const { return window_.size(); }
  const Real& c() const { return c_; }
  const std::vector<Real>& weights() const { return weights_; }
  const Real& weight(int n) const { return weights_[window_.offset(n)]; }
  const BesselGridCache& bessel() const { return *bessel_; }
  const std::shared_ptr<const BesselGridCache>& bessel_ptr() const { return bessel_; }

  // j_nu(q^m, q^2) from the shared cache.
  const Real& j(int m) const { return bessel_->at(m); }

  // Entry (m, n) = c w_n j_nu(q^{m+n}, q^2).
  const Real& operator()(int m, int n) const {
    return entries_[window_.offset(m) * window_.size() + window_.offset(n)];
  }

  void check_compatible(const GridFunction& f) const {
    if (!(f.window() == window_)) {
      throw WindowMismatch("window mismatch: function on " + f.window().to_string() +
                           ", kernel on " + window_.to_string());
    }
    if (!(f.params() == params())) throw WindowMismatch("parameter mismatch with kernel matrix");
  }

 private:
  std::shared_ptr<const BesselGridCache> bessel_;
  GridWindow window_;
  Bits bits_ = 0;
  Real c_;
  std::vector<Real> weights_;
  std::vector<Real> entries_;
};

inline KernelMatrix transform_matrix(const GridWindow& window,
                                     std::shared_ptr<const BesselGridCache> bessel) {
  return KernelMatrix(std::move(bessel), window);
}

inline KernelMatrix transform_matrix(const GridWindow& window, const QParams& params) {
  const GridWindow span{2 * window.n_lo, 2 * window.n_hi};
  auto cache = std::make_shared<const BesselGridCache>(
      jnu_grid(span, params, grid_bits(params, window)));
  return KernelMatrix(std::move(cache), window);
}

// Applies the kernel to raw values on the kernel window.
inline std::vector<Real> apply_transform(const std::vector<Real>& f, const KernelMatrix& M) {
  const GridWindow& w = M.window();
  std::vector<Real> out;
  out.reserve(w.size());
  for (int m = w.n_lo; m <= w.n_hi; ++m) {
    Real s(M.bits());
    for (int n = w.n_lo; n <= w.n_hi; ++n) {
      const Real& v = f[w.offset(n)];
      if (!v.is_zero()) s.fma(M(m, n), v);
    }
    out.push_back(std::move(s));
  }
  return out;
}

inline GridFunction hankel_transform(const GridFunction& f, const KernelMatrix& M) {
  M.check_compatible(f);
  return GridFunction(f.params(), f.window(), apply_transform(f.values(), M));
}

// Sub-window on which the truncated transform is an involution to within
// `tol`, estimated a priori from the decay bound B.
//
// For a unit spike e_n the defect F^2 e_n - e_n at q^m is
//   -w_n c^2 sum_{k outside window} w_k j(q^{m+k}) j(q^{n+k}),
// split into the tails k < n_lo and k > n_hi. Each tail is bounded twice and
// the smaller bound kept: termwise by B over m in the window, and over the
// whole line by the orthogonality relation, which gives
//   ||tail|| / ||e_n|| <= c sqrt(w_n sum_{k in tail} w_k B(n+k)^2).
// Summing the squared relative errors over a support set bounds the relative
// error of every function supported there. The returned window is the
// largest contiguous run, grown greedily from the best point, whose summed
// squares stay below tol^2. Everything is carried in log2 form since the
// magnitudes range far outside double precision.
inline GridWindow transform_core(const GridWindow& window, const QParams& params, double tol) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  const double lq = std::log2(params.q_approx);  // negative
  const double a = 2.0 * params.nu_approx + 2.0;
  const double log2_1mq = std::log2(1.0 - params.q_approx);
  const double log2_b0 = std::log2(decay_bound(0, params, 64).to_double());
  const double log2_c = std::log2(c_constant(params, 64).to_double());
  auto log2_b = [&](long n) {
    if (n >= 0) return log2_b0;
    const double nn = static_cast<double>(n);
    return log2_b0 + (nn * nn - (2.0 * params.nu_approx + 1.0) * nn) * lq;
  };
  auto log2_w = [&](long k) { return log2_1mq + a * static_cast<double>(k) * lq; };
  auto log2_add = [](double x, double y) {
    if (x == kNegInf) return y;
    if (y == kNegInf) return x;
    return std::max(x, y) + std::log2(1.0 + std::exp2(-std::fabs(x - y)));
  };
  // log2 of sum_k term(k) for k = from, from + step, ...; stops once terms
  // have fallen 200 binary orders below the running maximum.
  auto log2_series = [&](long from, long step, auto&& term) {
    double top = kNegInf, sum = kNegInf;
    for (long k = from;; k += step) {
      const double t = term(k);
      top = std::max(top, t);
      sum = log2_add(sum, t);
      if (t < top - 200.0 && (k - from) * step > 4) return sum;
    }
  };
  std::vector<double> log2_err;
  for (int n = window.n_lo; n <= window.n_hi; ++n) {
    double err = kNegInf;
    for (long step : {-1L, 1L}) {
      const long from = step < 0 ? window.n_lo - 1L : window.n_hi + 1L;
      const double line = log2_c + 0.5 * (log2_w(n) + log2_series(from, step, [&](long k) {
                                            return log2_w(k) + 2.0 * log2_b(n + k);
                                          }));
      double direct = kNegInf;
      for (int m = window.n_lo; m <= window.n_hi; ++m) {
        const double d = 2.0 * log2_c + log2_series(from, step, [&](long k) {
                           return log2_w(k) + log2_b(m + k) + log2_b(n + k);
                         });
        direct = log2_add(direct, log2_w(m) + 2.0 * d);
      }
      direct = 0.5 * (direct + log2_w(n));
      err = log2_add(err, std::min(line, direct));
    }
    log2_err.push_back(err);
  }
  const double budget = std::log2(tol) * 2.0;
  auto best = std::min_element(log2_err.begin(), log2_err.end());
  if (2.0 * *best > budget) {
    throw CoverageError("transform_core: no point of window " + window.to_string() +
                        " reaches tolerance");
  }
  std::size_t lo = static_cast<std::size_t>(best - log2_err.begin());
  std::size_t hi = lo;
  double used = std::exp2(2.0 * *best - budget);
  for (;;) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    const double left = lo > 0 ? std::exp2(2.0 * log2_err[lo - 1] - budget) : kInf;
    const double right = hi + 1 < log2_err.size() ? std::exp2(2.0 * log2_err[hi + 1] - budget) : kInf;
    const double step = std::min(left, right);
    if (!(used + step <= 1.0)) break;
    used += step;
    if (left <= right) {
      --lo;
    } else {
      ++hi;
    }
  }
  return GridWindow{window.n_lo + static_cast<int>(lo), window.n_lo + static_cast<int>(hi)};
}

inline GridWindow transform_core(const KernelMatrix& M, double tol) {
  return transform_core(M.window(), M.params(), tol);
}

// Support set for test functions: the transform core with a margin of
// kInteriorMargin exponents at the large-x end. Translation by q^i with
// |i| <= 6 moves a few grid points of mass toward large x, and a spike at the
// first window point would lose that mass outside the window.
inline constexpr int kInteriorMargin = 4;

inline GridWindow interior_support(const KernelMatrix& M, double tol) {
  const GridWindow core = transform_core(M, tol);
  const int lo = std::max(core.n_lo, M.window().n_lo + kInteriorMargin);
  const int hi = std::min(core.n_hi, M.window().n_hi - kInteriorMargin);
  return make_window(lo, hi);
}

// T_{q^i} f = F(j_nu(q^i .) F f).
inline GridFunction translate(const GridFunction& f, int i, const KernelMatrix& M) {
  M.check_compatible(f);
  const GridWindow& w = M.window();
  M.bessel().require(w.n_lo + i, w.n_hi + i, "translate");
  std::vector<Real> g = apply_transform(f.values(), M);
  for (int k = w.n_lo; k <= w.n_hi; ++k) g[w.offset(k)] *= M.j(i + k);
  return GridFunction(f.params(), w, apply_transform(g, M));
}

// Kernel of T_{q^i} against the measure:
//   t_i(m, n) = c^2 sum_k w_k j(q^{m+k}) j(q^{i+k}) j(q^{n+k}),
// so that (T_{q^i} f)(q^m) = sum_n t_i(m, n) w_n f(q^n). Symmetric in m, n.
class TranslationKernel {
 public:
  TranslationKernel(int i, GridWindow window, std::vector<Real> entries)
      : i_(i), window_(window), entries_(std::move(entries)) {}

  int base_index() const { return i_; }
  const GridWindow& window() const { return window_; }
  const Real& operator()(int m, int n) const {
    return entries_[window_.offset(m) * window_.size() + window_.offset(n)];
  }

 private:
  int i_;
  GridWindow window_;
  std::vector<Real> entries_;
};

inline TranslationKernel translation_kernel(int i, const KernelMatrix& M) {
  const GridWindow& w = M.window();
  M.bessel().require(w.n_lo + i, w.n_hi + i, "translation_kernel");
  const std::size_t size = w.size();
  std::vector<Real> a;
  a.reserve(size);
  const Real c2 = M.c() * M.c();
  for (int k = w.n_lo; k <= w.n_hi; ++k) a.push_back(c2 * M.weight(k) * M.j(i + k));
  std::vector<Real> entries(size * size, Real(M.bits()));
  for (int m = w.n_lo; m <= w.n_hi; ++m) {
    std::vector<Real> am;
    am.reserve(size);
    for (int k = w.n_lo; k <= w.n_hi; ++k) am.push_back(a[w.offset(k)] * M.j(m + k));
    for (int n = m; n <= w.n_hi; ++n) {
      Real s(M.bits());
      for (int k = w.n_lo; k <= w.n_hi; ++k) s.fma(am[w.offset(k)], M.j(n + k));
      entries[w.offset(m) * size + w.offset(n)] = s;
      entries[w.offset(n) * size + w.offset(m)] = std::move(s);
    }
  }
  return TranslationKernel(i, w, std::move(entries));
}

// (T f)(q^m) = sum_n t_i(m, n) w_n f(q^n).
inline GridFunction apply_translation_kernel(const TranslationKernel& T, const GridFunction& f,
                                             const KernelMatrix& M) {
  M.check_compatible(f);
  const GridWindow& w = M.window();
  GridFunction out(f.params(), w);
  for (int m = w.n_lo; m <= w.n_hi; ++m) {
    Real s(M.bits());
    for (int n = w.n_lo; n <= w.n_hi; ++n) {
      if (!f.at(n).is_zero()) s.fma(T(m, n), M.weight(n) * f.at(n));
    }
    out.at(m) = std::move(s);
  }
  return out;
}

inline constexpr double kPositivityRelTol = 1e-15;

inline std::vector<int> default_probe_indices() { return {-3, -2, -1, 0, 1, 2, 3, 4, 5, 6}; }

struct ProbeViolation {
  int i = 0;
  int m = 0;
  int n = 0;
  Real value;
};

struct ProbeReport {
  bool pass = true;
  std::optional<ProbeViolation> violation;  // first violation in probe order
  double worst_relative = 0.0;  // min over entries of t_i(m, n) / row max |t_i(m, .)|
  std::size_t entries_checked = 0;
};

// Checks t_i(m, n) >= -kPositivityRelTol * max_n' |t_i(m, n')| for every probed
// i and every (m, n) in the window. A pass is evidence of q in Q_nu on the
// probed window, not a proof.
inline ProbeReport positivity_probe(const KernelMatrix& M, const std::vector<int>& probe_indices,
                                    double rel_tol = kPositivityRelTol) {
  ProbeReport report;
  const GridWindow& w = M.window();
  for (int i : probe_indices) {
    const TranslationKernel T = translation_kernel(i, M);
    for (int m = w.n_lo; m <= w.n_hi; ++m) {
      Real row_max(M.bits());
      for (int n = w.n_lo; n <= w.n_hi; ++n) row_max = max(row_max, abs(T(m, n)));
      if (row_max.is_zero()) continue;
      const Real floor = -row_max * rel_tol;
      for (int n = w.n_lo; n <= w.n_hi; ++n) {
        ++report.entries_checked;
        const Real& v = T(m, n);
        report.worst_relative = std::min(report.worst_relative, (v / row_max).to_double());
        if (v < floor && report.pass) {
          report.pass = false;
          report.violation = ProbeViolation{i, m, n, v};
        }
      }
    }
  }
  return report;
}

inline ProbeReport positivity_probe(const QParams& params, const GridWindow& window,
                                    const std::vector<int>& probe_indices) {
  return positivity_probe(transform_matrix(window, params), probe_indices);
}

// f *_q g = F(Ff Fg).
inline GridFunction convolve(const GridFunction& f, const GridFunction& g, const KernelMatrix& M) {
  f.check_compatible(g);
  M.check_compatible(f);
  std::vector<Real> ff = apply_transform(f.values(), M);
  const std::vector<Real> fg = apply_transform(g.values(), M);
  for (std::size_t k = 0; k < ff.size(); ++k) ff[k] *= fg[k];
  return GridFunction(f.params(), f.window(), apply_transform(ff, M));
}

// The same product through translation: (f *_q g)(q^m) = c sum_n w_n (T_{q^m} f)(q^n) g(q^n).
inline GridFunction convolve_by_translation(const GridFunction& f, const GridFunction& g,
                                            const KernelMatrix& M) {
  f.check_compatible(g);
  M.check_compatible(f);
  const GridWindow& w = M.window();
  GridFunction out(f.params(), w);
  for (int m = w.n_lo; m <= w.n_hi; ++m) {
    const GridFunction tf = translate(f, m, M);
    Real s(M.bits());
    for (int n = w.n_lo; n <= w.n_hi; ++n) s.fma(M.weight(n) * tf.at(n), g.at(n));
    out.at(m) = M.c() * s;
  }
  return out;
}

}  // namespace qbd

#endif  // QBD_QFOURIER_HPP_
