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

// The normalized (Hahn-Exton type) q-Bessel function
//
//   j_nu(x, q^2) = sum_{n>=0} (-1)^n q^{n(n+1)} x^{2n}
//                             / ((q^{2nu+2}; q^2)_n (q^2; q^2)_n),
//
// evaluated on the grid by direct summation at escalated precision.
//
// For x = q^{-m} the terms grow up to index n* ~ m, where the largest term is
// about q^{-m^2}, while the sum itself is bounded by q^{m^2 + (2nu+1) m}
// times a constant. Summing therefore cancels about
// (2 m^2 + (2nu+1) m) log2(1/q) bits, and the series is evaluated with that
// many bits on top of the requested output precision. Backward recurrence
// is not an option here: j_nu is the minimal solution of the three-term
// relation in x, so the upward recurrence is unstable.

#ifndef QBD_QBESSEL_HPP_
#define QBD_QBESSEL_HPP_

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qbd/errors.hpp"
#include "qbd/qcore.hpp"
#include "qbd/real.hpp"

namespace qbd {

// Extra working bits needed to evaluate j_nu at x = q^{-m_eff}.
inline Bits bessel_escalation_bits(const QParams& params, double m_eff) {
  constexpr Bits kGuard = 32;
  if (m_eff <= 0) return kGuard;
  const double lin = std::max(0.0, 2.0 * params.nu_approx + 1.0);
  const double loss = (2.0 * m_eff * m_eff + lin * m_eff) * params.log2_inv_q();
  return static_cast<Bits>(std::ceil(loss)) + kGuard;
}

struct BesselValue {
  Real value;
  Bits bits_used = 0;
};

namespace detail {

// Sums the series for x given at `bits` (x is taken as exact).
inline Real jnu_sum(const Real& x, const QParams& params, Bits bits) {
  const Real q = params.q(bits);
  const Real q2 = q * q;
  Real qa = params.q_pow_2nu2(bits);  // q^{2nu+2+2n}
  Real qb = q2;                       // q^{2n+2}
  Real qx = q2 * x.rounded(bits) * x.rounded(bits);  // q^{2n+2} x^2
  Real term(1L, bits);
  Real sum(1L, bits);
  Real largest(1L, bits);
  const Real eps = ldexp2(-static_cast<long>(bits), bits);
  const Real tol(params.trunc_tol, bits);
  constexpr long kMaxTerms = 1'000'000;
  for (long n = 0; n < kMaxTerms; ++n) {
    // term_{n+1} / term_n = -q^{2n+2} x^2 / ((1 - q^{2nu+2n+2})(1 - q^{2n+2}))
    const Real ratio = qx / ((1 - qa) * (1 - qb));
    term *= -ratio;
    sum += term;
    const Real mag = abs(term);
    if (mag > largest) largest = mag;
    // Past the peak the terms decrease monotonically; stop once the current
    // term is negligible against both the working precision and trunc_tol
    // relative to the largest term.
    if (ratio < 1.0 && mag <= largest * eps && mag <= largest * tol) return sum;
    qa *= q2;
    qb *= q2;
    qx *= q2;
  }
  throw PrecisionCapExceeded("jnu_series: series did not converge");
}

inline void check_cap(const QParams& params, Bits bits) {
  if (bits > params.precision_cap_bits) {
    throw PrecisionCapExceeded("jnu_series: needs " + std::to_string(bits) +
                               " bits, cap is " + std::to_string(params.precision_cap_bits));
  }
}

}  // namespace detail

// j_nu(x, q^2) for x > 0, rounded to out_bits. The binary value of x is
// treated as exact.
inline BesselValue jnu_series_eval(const Real& x, const QParams& params, Bits out_bits) {
  if (!(x > 0.0) || !x.is_finite()) throw ParameterError("jnu_series: need finite x > 0");
  // m_eff = log(x) / log(1/q), positive for x > 1.
  const double m_eff = std::log2(std::max(std::abs(x.to_double()), 1e-300)) / params.log2_inv_q();
  // to_double overflows for huge x; fall back to the binary exponent.
  const double m = std::isfinite(m_eff) ? m_eff
                                        : static_cast<double>(x.exponent2()) / params.log2_inv_q();
  const Bits bits = std::max(out_bits, x.precision()) + bessel_escalation_bits(params, m);
  detail::check_cap(params, bits);
  return {detail::jnu_sum(x.rounded(bits), params, bits).rounded(out_bits), bits};
}

inline Real jnu_series(const Real& x, const QParams& params, Bits out_bits) {
  return jnu_series_eval(x, params, out_bits).value;
}

inline Real jnu_series(const Real& x, const QParams& params) {
  return jnu_series(x, params, params.precision_bits);
}

// j_nu(q^m, q^2) with q^m formed at the escalated precision.
inline BesselValue jnu_at_exponent(int m, const QParams& params, Bits out_bits) {
  const Bits bits = out_bits + bessel_escalation_bits(params, -static_cast<double>(m));
  detail::check_cap(params, bits);
  const Real x = pow(params.q(bits), static_cast<long>(m));
  return {detail::jnu_sum(x, params, bits).rounded(out_bits), bits};
}

// Right-hand side of the decay estimate
//   |j_nu(q^n, q^2)| <= (-q^2;q^2)_inf (-q^{2nu+2};q^2)_inf / (q^{2nu+2};q^2)_inf
//                       * (1 if n >= 0, q^{n^2 - (2nu+1) n} if n < 0).
inline Real decay_bound(int n, const QParams& params, Bits bits) {
  const Real q = params.q(bits);
  const Real q2 = q * q;
  const Real a = params.q_pow_2nu2(bits);
  Real k = qpochhammer_infinite(-q2, q2, params) * qpochhammer_infinite(-a, q2, params) /
           qpochhammer_infinite(a, q2, params);
  if (n >= 0) return k;
  const Real nn(static_cast<long>(n), bits);
  return k * pow(q, nn * nn - (params.nu(bits) * 2 + 1) * nn);
}

inline Real decay_bound(int n, const QParams& params) {
  return decay_bound(n, params, params.precision_bits);
}

// Memoized j_nu(q^m, q^2) for every m in a window of exponents.
class BesselGridCache {
 public:
  BesselGridCache(QParams params, GridWindow window, Bits bits)
      : params_(std::move(params)), window_(window), bits_(bits) {}

  const QParams& params() const { return params_; }
  const GridWindow& window() const { return window_; }
  Bits bits() const { return bits_; }
  const std::vector<Real>& values() const { return values_; }
  const std::vector<Bits>& cert_bits() const { return cert_bits_; }
  std::size_t size() const { return values_.size(); }

  bool covers(int lo, int hi) const { return window_.contains(lo) && window_.contains(hi); }

  const Real& at(int m) const {
    if (!window_.contains(m)) {
      throw CoverageError("Bessel cache " + window_.to_string() + " does not cover exponent " +
                          std::to_string(m));
    }
    return values_[window_.offset(m)];
  }

  void require(int lo, int hi, const char* what) const {
    if (!covers(lo, hi)) {
      throw CoverageError(std::string(what) + ": needs Bessel exponents " + std::to_string(lo) +
                          ":" + std::to_string(hi) + ", cache covers " + window_.to_string());
    }
  }

 private:
  friend BesselGridCache jnu_grid(const GridWindow&, const QParams&, Bits);

  QParams params_;
  GridWindow window_;
  Bits bits_;
  std::vector<Real> values_;
  std::vector<Bits> cert_bits_;
};

inline BesselGridCache jnu_grid(const GridWindow& window, const QParams& params, Bits out_bits) {
  BesselGridCache cache(params, window, out_bits);
  cache.values_.reserve(window.size());
  cache.cert_bits_.reserve(window.size());
  const Real slack(1 + 1e-6, out_bits);
  for (int m = window.n_lo; m <= window.n_hi; ++m) {
    BesselValue v = jnu_at_exponent(m, params, out_bits);
    if (abs(v.value) > decay_bound(m, params, out_bits) * slack) {
      throw std::logic_error("j_nu(q^" + std::to_string(m) + ") violates its decay bound");
    }
    cache.values_.push_back(std::move(v.value));
    cache.cert_bits_.push_back(v.bits_used);
  }
  return cache;
}

inline BesselGridCache jnu_grid(const GridWindow& window, const QParams& params) {
  return jnu_grid(window, params, params.precision_bits);
}

// delta_q(q^i, q^j): zero off the diagonal, 1 / ((1 - q) q^{2(nu+1) i}) on it.
inline Real delta_q(int i, int j, const QParams& params, Bits bits) {
  if (i != j) return Real(bits);
  const Real q = params.q(bits);
  return 1 / ((1 - q) * pow(params.q_pow_2nu2(bits), static_cast<long>(i)));
}

inline Real delta_q(int i, int j, const QParams& params) {
  return delta_q(i, j, params, params.precision_bits);
}

// |c^2 (1-q) sum_{k in window} q^{k(2nu+2)} j(q^{i+k}) j(q^{j+k}) - delta_q(q^i, q^j)|.
inline Real orthogonality_defect(int i, int j, const GridWindow& window,
                                 const BesselGridCache& cache) {
  cache.require(window.n_lo + std::min(i, j), window.n_hi + std::max(i, j),
                "orthogonality_defect");
  const QParams& params = cache.params();
  const Bits bits = cache.bits();
  const auto w = measure_weights(params, window, bits);
  Real sum(bits);
  for (int k = window.n_lo; k <= window.n_hi; ++k) {
    sum.fma(w[window.offset(k)], cache.at(i + k) * cache.at(j + k));
  }
  const Real c = c_constant(params, bits);
  return abs(c * c * sum - delta_q(i, j, params, bits));
}

// Builds a cache just large enough for the requested pair.
inline Real orthogonality_defect(int i, int j, const GridWindow& window, const QParams& params) {
  const GridWindow need{window.n_lo + std::min(i, j), window.n_hi + std::max(i, j)};
  return orthogonality_defect(i, j, window, jnu_grid(need, params, grid_bits(params, window)));
}

}  // namespace qbd

#endif  // QBD_QBESSEL_HPP_
