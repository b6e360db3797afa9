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

// Parameters, the truncated geometric grid {q^n}, q-shifted factorials and
// the weighted Jackson integral
//
//   int_0^inf f(t) t^{2 nu + 1} d_q t = (1 - q) sum_n q^{n (2 nu + 2)} f(q^n)
//
// restricted to a window of exponents.

#ifndef QBD_QCORE_HPP_
#define QBD_QCORE_HPP_

#include <charconv>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "qbd/errors.hpp"
#include "qbd/real.hpp"

namespace qbd {

inline constexpr Bits kDefaultPrecisionBits = 192;
inline constexpr double kDefaultTruncTol = 1e-60;
inline constexpr Bits kDefaultPrecisionCapBits = Bits{1} << 16;

// The deformation parameter q, the order nu and the precision configuration.
//
// q and nu are kept as decimal literals: "0.4" means exactly 2/5, and every
// computation materialises them at whatever precision it runs at. This
// matters for the Bessel series at large arguments, which is evaluated with
// thousands of bits and would otherwise see the rounding error of a 192-bit q.
struct QParams {
  std::string q_text;
  std::string nu_text;
  double q_approx = 0.5;
  double nu_approx = 0.0;
  Bits precision_bits = kDefaultPrecisionBits;
  double trunc_tol = kDefaultTruncTol;
  Bits precision_cap_bits = kDefaultPrecisionCapBits;

  Real q(Bits bits) const { return Real::parse(q_text, bits); }
  Real nu(Bits bits) const { return Real::parse(nu_text, bits); }
  Real q() const { return q(precision_bits); }
  Real nu() const { return nu(precision_bits); }

  // q^{2 nu + 2}, the base of the first Pochhammer symbol in j_nu.
  Real q_pow_2nu2(Bits bits) const { return pow(q(bits), nu(bits) * 2 + 2); }

  double log2_inv_q() const { return -std::log2(q_approx); }

  // nu >= 0: the parameter regime in which the transition function built
  // from the Bessel kernel is the unique solution.
  bool unique_regime() const { return nu(64).sign() >= 0; }

  bool operator==(const QParams&) const = default;
};

namespace detail {
inline std::string shortest_decimal(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc()) throw ParameterError("cannot format parameter");
  return std::string(buf, res.ptr);
}
}  // namespace detail

// Validates and builds a parameter set. q and nu are decimal literals.
inline QParams make_params(std::string_view q, std::string_view nu,
                           Bits precision_bits = kDefaultPrecisionBits,
                           double trunc_tol = kDefaultTruncTol) {
  constexpr Bits kCheckBits = 1024;
  Real qv(kCheckBits), nuv(kCheckBits);
  try {
    qv = Real::parse(q, kCheckBits);
  } catch (const std::invalid_argument&) {
    throw ParameterError("q out of range: not a number");
  }
  try {
    nuv = Real::parse(nu, kCheckBits);
  } catch (const std::invalid_argument&) {
    throw ParameterError("nu out of range: not a number");
  }
  if (!qv.is_finite() || qv <= 0.0 || qv >= 1.0) {
    throw ParameterError("q out of range: need 0 < q < 1, got " + std::string(q));
  }
  if (!nuv.is_finite() || nuv <= -1.0) {
    throw ParameterError("nu out of range: need nu > -1, got " + std::string(nu));
  }
  if (precision_bits < 64) {
    throw ParameterError("precision_bits out of range: need at least 64");
  }
  if (!(trunc_tol > 0.0 && trunc_tol < 1.0)) {
    throw ParameterError("trunc_tol out of range: need 0 < trunc_tol < 1");
  }
  QParams p;
  p.q_text = std::string(q);
  p.nu_text = std::string(nu);
  p.q_approx = qv.to_double();
  p.nu_approx = nuv.to_double();
  p.precision_bits = precision_bits;
  p.trunc_tol = trunc_tol;
  return p;
}

// Doubles are taken at their shortest round-trip decimal, so 0.4 means 2/5.
inline QParams make_params(double q, double nu, Bits precision_bits = kDefaultPrecisionBits,
                           double trunc_tol = kDefaultTruncTol) {
  if (!std::isfinite(q)) throw ParameterError("q out of range: not finite");
  if (!std::isfinite(nu)) throw ParameterError("nu out of range: not finite");
  return make_params(detail::shortest_decimal(q), detail::shortest_decimal(nu), precision_bits,
                     trunc_tol);
}

// Exponents n_lo..n_hi; the grid point for exponent n is q^n, so n_lo is the
// largest point and n_hi the smallest.
struct GridWindow {
  int n_lo = -16;
  int n_hi = 80;

  std::size_t size() const { return static_cast<std::size_t>(n_hi - n_lo + 1); }
  bool contains(int n) const { return n >= n_lo && n <= n_hi; }
  bool contains(const GridWindow& w) const { return w.n_lo >= n_lo && w.n_hi <= n_hi; }
  std::size_t offset(int n) const { return static_cast<std::size_t>(n - n_lo); }
  bool operator==(const GridWindow&) const = default;

  std::string to_string() const { return std::to_string(n_lo) + ":" + std::to_string(n_hi); }
};

inline GridWindow make_window(int n_lo, int n_hi) {
  if (n_lo > n_hi) {
    throw ParameterError("window out of range: need n_lo <= n_hi, got " + std::to_string(n_lo) +
                         ":" + std::to_string(n_hi));
  }
  return GridWindow{n_lo, n_hi};
}

inline GridWindow default_window() { return GridWindow{-16, 80}; }

// Precision used for values living on `window`.
//
// The q-Bessel operator divides a second difference by x^2 = q^{2n}; at the
// small-x end of the window that loses 2 n_hi log2(1/q) bits to cancellation.
// Grid values carry those bits on top of precision_bits so that generator
// outputs keep precision_bits of absolute accuracy everywhere.
inline Bits grid_bits(const QParams& params, const GridWindow& window) {
  const double loss = 2.0 * std::max(window.n_hi, 0) * params.log2_inv_q();
  return params.precision_bits + static_cast<Bits>(std::ceil(loss)) + 16;
}

// Measure weights (1 - q) q^{n (2 nu + 2)} for n in the window, at `bits`.
inline std::vector<Real> measure_weights(const QParams& params, const GridWindow& window,
                                         Bits bits) {
  const Real q = params.q(bits);
  const Real base = params.q_pow_2nu2(bits);
  const Real one_minus_q = 1 - q;
  std::vector<Real> w;
  w.reserve(window.size());
  for (int n = window.n_lo; n <= window.n_hi; ++n) w.push_back(one_minus_q * pow(base, n));
  return w;
}

// A real function sampled on a window of the grid.
class GridFunction {
 public:
  GridFunction(QParams params, GridWindow window)
      : params_(std::move(params)), window_(window) {
    const Bits bits = grid_bits(params_, window_);
    values_.assign(window_.size(), Real(bits));
  }

  GridFunction(QParams params, GridWindow window, std::vector<Real> values)
      : params_(std::move(params)), window_(window), values_(std::move(values)) {
    if (values_.size() != window_.size()) {
      throw ParameterError("grid function needs " + std::to_string(window_.size()) +
                           " values, got " + std::to_string(values_.size()));
    }
    const Bits bits = grid_bits(params_, window_);
    for (auto& v : values_) {
      if (!v.is_finite()) throw ParameterError("grid function values must be finite");
      if (v.precision() < bits) v = v.rounded(bits);
    }
  }

  // Samples fn(n) for every exponent n in the window.
  template <typename Fn>
  static GridFunction generate(QParams params, GridWindow window, Fn&& fn) {
    GridFunction f(std::move(params), window);
    const Bits bits = f.bits();
    for (int n = window.n_lo; n <= window.n_hi; ++n) {
      Real v(bits);
      v = fn(n);
      f.at(n) = v.precision() == bits ? v : v.rounded(bits);
    }
    return f;
  }

  static GridFunction indicator(QParams params, GridWindow window, int n) {
    if (!window.contains(n)) throw CoverageError("indicator exponent outside window");
    GridFunction f(std::move(params), window);
    f.at(n) = Real(1L, f.bits());
    return f;
  }

  const QParams& params() const { return params_; }
  const GridWindow& window() const { return window_; }
  const std::vector<Real>& values() const { return values_; }
  std::vector<Real>& values() { return values_; }
  Bits bits() const { return grid_bits(params_, window_); }
  std::size_t size() const { return values_.size(); }

  const Real& at(int n) const { return values_.at(window_.offset(n)); }
  Real& at(int n) { return values_.at(window_.offset(n)); }

  // Value at n, or zero outside the window.
  Real value_or_zero(int n) const { return window_.contains(n) ? at(n) : Real(bits()); }

  GridFunction& operator+=(const GridFunction& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
  }
  GridFunction& operator-=(const GridFunction& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
  }
  GridFunction& operator*=(const Real& s) {
    for (auto& v : values_) v *= s;
    return *this;
  }
  friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
  friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
  friend GridFunction operator*(GridFunction a, const Real& s) { return a *= s; }
  friend GridFunction operator*(const Real& s, GridFunction a) { return a *= s; }

  void check_compatible(const GridFunction& o) const {
    if (!(window_ == o.window_)) {
      throw WindowMismatch("window mismatch: " + window_.to_string() + " vs " +
                           o.window_.to_string());
    }
    if (!(params_ == o.params_)) throw WindowMismatch("parameter mismatch between grid functions");
  }

 private:
  QParams params_;
  GridWindow window_;
  std::vector<Real> values_;
};

inline GridFunction pointwise_product(const GridFunction& f, const GridFunction& g) {
  f.check_compatible(g);
  GridFunction out = f;
  for (std::size_t i = 0; i < out.size(); ++i) out.values()[i] *= g.values()[i];
  return out;
}

// (a; base)_n = prod_{k=0}^{n-1} (1 - a base^k); 1 for n = 0.
inline Real qpochhammer_finite(const Real& a, const Real& base, long n) {
  if (n < 0) throw ParameterError("qpochhammer_finite: n must be nonnegative");
  const Bits bits = std::max(a.precision(), base.precision());
  Real prod(1L, bits);
  Real term = a.rounded(bits);
  for (long k = 0; k < n; ++k) {
    prod *= 1 - term;
    term *= base;
  }
  return prod;
}

// (a; base)_inf, truncated once |a base^K| < tol and the relative effect of
// the whole dropped tail, bounded by expm1(tau) with
// tau = |a base^K| / ((1 - |base|)(1 - |a base^K|)), is below tol as well.
inline Real qpochhammer_infinite(const Real& a, const Real& base, double tol) {
  if (!(abs(base) < 1.0)) throw ParameterError("qpochhammer_infinite: need |base| < 1");
  const Bits bits = std::max(a.precision(), base.precision());
  const double abs_base = abs(base).to_double();
  Real prod(1L, bits);
  Real term = a.rounded(bits);
  constexpr long kMaxFactors = 10'000'000;
  for (long k = 0; k < kMaxFactors; ++k) {
    const double t = abs(term).to_double();
    if (t < tol && t < 1.0) {
      const double tau = t / ((1.0 - abs_base) * (1.0 - t));
      if (std::expm1(tau) < tol) return prod;
    }
    prod *= 1 - term;
    term *= base;
  }
  throw PrecisionCapExceeded("qpochhammer_infinite: product did not converge");
}

inline Real qpochhammer_infinite(const Real& a, const Real& base, const QParams& params) {
  return qpochhammer_infinite(a, base, params.trunc_tol);
}

// c_{q,nu} = (q^{2nu+2}; q^2)_inf / ((1 - q) (q^2; q^2)_inf).
inline Real c_constant(const QParams& params, Bits bits) {
  const Real q = params.q(bits);
  const Real q2 = q * q;
  return qpochhammer_infinite(params.q_pow_2nu2(bits), q2, params) /
         ((1 - q) * qpochhammer_infinite(q2, q2, params));
}

inline Real c_constant(const QParams& params) { return c_constant(params, params.precision_bits); }

// (1 - q) sum_n q^{n (2 nu + 2)} f(q^n) over the window of f.
inline Real jackson_integral(const GridFunction& f) {
  const auto w = measure_weights(f.params(), f.window(), f.bits());
  Real sum(f.bits());
  for (std::size_t i = 0; i < w.size(); ++i) sum.fma(w[i], f.values()[i]);
  return sum;
}

inline Real inner_product(const GridFunction& f, const GridFunction& g) {
  f.check_compatible(g);
  const auto w = measure_weights(f.params(), f.window(), f.bits());
  Real sum(f.bits());
  for (std::size_t i = 0; i < w.size(); ++i) sum.fma(w[i], f.values()[i] * g.values()[i]);
  return sum;
}

// ||f||_{q,p,nu} for real p >= 1.
inline Real norm_p(const GridFunction& f, const Real& p) {
  if (p < 1.0) throw ParameterError("norm_p: need p >= 1");
  if (p == 2.0) return sqrt(inner_product(f, f));
  const auto w = measure_weights(f.params(), f.window(), f.bits());
  const Real pp = p.rounded(f.bits());
  Real sum(f.bits());
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!f.values()[i].is_zero()) sum.fma(w[i], pow(abs(f.values()[i]), pp));
  }
  if (sum.is_zero()) return sum;
  return pow(sum, 1 / pp);
}

inline Real norm_p(const GridFunction& f, double p) { return norm_p(f, Real(p, f.bits())); }

// max_n |f(q^n)| over the window.
inline Real norm_sup(const GridFunction& f) {
  Real m(f.bits());
  for (const auto& v : f.values()) m = max(m, abs(v));
  return m;
}

}  // namespace qbd

#endif  // QBD_QCORE_HPP_
