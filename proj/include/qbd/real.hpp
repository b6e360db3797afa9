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

// Value-semantic multiprecision real backed by MPFR.
//
// Every Real carries its own precision in bits. Binary operations produce a
// result at the larger of the two operand precisions; mixing with a builtin
// arithmetic type uses the Real operand's precision. Values are only ever
// rounded to nearest. Constructing from a builtin without an explicit
// precision uses the ambient precision of the calling thread, which
// ScopedPrecision adjusts.

#ifndef QBD_REAL_HPP_
#define QBD_REAL_HPP_

#include <mpfr.h>

#include <algorithm>
#include <climits>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace qbd {

using Bits = mpfr_prec_t;

namespace detail {
inline Bits& ambient_bits() {
  thread_local Bits bits = 192;
  return bits;
}
}  // namespace detail

inline Bits ambient_precision() { return detail::ambient_bits(); }

class ScopedPrecision {
 public:
  explicit ScopedPrecision(Bits bits) : saved_(detail::ambient_bits()) {
    detail::ambient_bits() = bits;
  }
  ~ScopedPrecision() { detail::ambient_bits() = saved_; }
  ScopedPrecision(const ScopedPrecision&) = delete;
  ScopedPrecision& operator=(const ScopedPrecision&) = delete;

 private:
  Bits saved_;
};

class Real {
 public:
  Real() : Real(ambient_precision()) {}

  // Zero at the given precision.
  explicit Real(Bits bits) {
    mpfr_init2(v_, clamp(bits));
    mpfr_set_zero(v_, 1);
  }

  // Builtin conversions are implicit so literals mix naturally with Reals.
  // There is no implicit conversion from long: Bits is long, and Real(Bits)
  // above already means a zero of that precision.
  Real(double d) : Real(d, ambient_precision()) {}
  Real(int i) : Real(static_cast<long>(i), ambient_precision()) {}

  Real(double d, Bits bits) {
    mpfr_init2(v_, clamp(bits));
    mpfr_set_d(v_, d, MPFR_RNDN);
  }
  Real(long i, Bits bits) {
    mpfr_init2(v_, clamp(bits));
    mpfr_set_si(v_, i, MPFR_RNDN);
  }
  Real(int i, Bits bits) : Real(static_cast<long>(i), bits) {}

  // Parses a decimal (or "inf"/"nan") literal correctly rounded to `bits`.
  static Real parse(std::string_view text, Bits bits) {
    Real r(bits);
    std::string s(text);
    char* end = nullptr;
    mpfr_strtofr(r.v_, s.c_str(), &end, 10, MPFR_RNDN);
    if (s.empty() || end != s.c_str() + s.size()) {
      throw std::invalid_argument("not a decimal number: '" + s + "'");
    }
    return r;
  }

  Real(const Real& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Real(Real&& o) noexcept {
    // Steal the limbs; leave `o` as a valid minimal-precision zero.
    *v_ = *o.v_;
    mpfr_init2(o.v_, MPFR_PREC_MIN);
    mpfr_set_zero(o.v_, 1);
  }
  Real& operator=(const Real& o) {
    if (this != &o) {
      // Assignment keeps the destination precision if it is larger.
      if (mpfr_get_prec(v_) < mpfr_get_prec(o.v_)) {
        mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      }
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    if (this != &o) {
      if (mpfr_get_prec(v_) <= mpfr_get_prec(o.v_)) {
        std::swap(*v_, *o.v_);
      } else {
        mpfr_set(v_, o.v_, MPFR_RNDN);
      }
    }
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  Bits precision() const { return mpfr_get_prec(v_); }

  // Returns a copy correctly rounded to `bits`.
  Real rounded(Bits bits) const {
    Real r(bits);
    mpfr_set(r.v_, v_, MPFR_RNDN);
    return r;
  }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  // Scientific notation with `digits` significant decimal digits.
  std::string to_string(int digits) const {
    digits = std::max(digits, 1);
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*Re", digits - 1, v_);
    std::string s(buf);
    mpfr_free_str(buf);
    return s;
  }

  // Shortest of fixed or scientific notation with at most `digits`
  // significant digits and no trailing zeros ("2", "0.125", "1.5e-40").
  std::string to_decimal(int digits) const {
    digits = std::max(digits, 1);
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*Rg", digits, v_);
    std::string s(buf);
    mpfr_free_str(buf);
    return s;
  }

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  // Binary exponent e such that |x| = m * 2^e with m in [0.5, 1).
  long exponent2() const { return is_zero() ? LONG_MIN : mpfr_get_exp(v_); }

  mpfr_srcptr get() const { return v_; }
  mpfr_ptr get() { return v_; }

  Real& operator+=(const Real& o) {
    widen(o);
    mpfr_add(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  Real& operator-=(const Real& o) {
    widen(o);
    mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  Real& operator*=(const Real& o) {
    widen(o);
    mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  Real& operator/=(const Real& o) {
    widen(o);
    mpfr_div(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  Real& operator+=(long i) {
    mpfr_add_si(v_, v_, i, MPFR_RNDN);
    return *this;
  }
  Real& operator-=(long i) {
    mpfr_sub_si(v_, v_, i, MPFR_RNDN);
    return *this;
  }
  Real& operator*=(long i) {
    mpfr_mul_si(v_, v_, i, MPFR_RNDN);
    return *this;
  }
  Real& operator/=(long i) {
    mpfr_div_si(v_, v_, i, MPFR_RNDN);
    return *this;
  }
  Real& operator+=(int i) { return *this += static_cast<long>(i); }
  Real& operator-=(int i) { return *this -= static_cast<long>(i); }
  Real& operator*=(int i) { return *this *= static_cast<long>(i); }
  Real& operator/=(int i) { return *this /= static_cast<long>(i); }
  Real& operator+=(double d) { return *this += Real(d, precision()); }
  Real& operator-=(double d) { return *this -= Real(d, precision()); }
  Real& operator*=(double d) { return *this *= Real(d, precision()); }
  Real& operator/=(double d) { return *this /= Real(d, precision()); }

  // this += a * b in a single rounding.
  Real& fma(const Real& a, const Real& b) {
    widen(a);
    widen(b);
    mpfr_fma(v_, a.v_, b.v_, v_, MPFR_RNDN);
    return *this;
  }

  Real operator-() const {
    Real r(*this);
    mpfr_neg(r.v_, r.v_, MPFR_RNDN);
    return r;
  }

  friend Real operator+(Real a, const Real& b) { return a += b; }
  friend Real operator-(Real a, const Real& b) { return a -= b; }
  friend Real operator*(Real a, const Real& b) { return a *= b; }
  friend Real operator/(Real a, const Real& b) { return a /= b; }
  friend Real operator+(Real a, long b) { return a += b; }
  friend Real operator-(Real a, long b) { return a -= b; }
  friend Real operator*(Real a, long b) { return a *= b; }
  friend Real operator/(Real a, long b) { return a /= b; }
  friend Real operator+(Real a, int b) { return a += b; }
  friend Real operator-(Real a, int b) { return a -= b; }
  friend Real operator*(Real a, int b) { return a *= b; }
  friend Real operator/(Real a, int b) { return a /= b; }
  friend Real operator+(Real a, double b) { return a += b; }
  friend Real operator-(Real a, double b) { return a -= b; }
  friend Real operator*(Real a, double b) { return a *= b; }
  friend Real operator/(Real a, double b) { return a /= b; }
  friend Real operator+(long a, Real b) { return b += a; }
  friend Real operator*(long a, Real b) { return b *= a; }
  friend Real operator-(long a, const Real& b) {
    Real r(b.precision());
    mpfr_si_sub(r.v_, a, b.v_, MPFR_RNDN);
    return r;
  }
  friend Real operator/(long a, const Real& b) {
    Real r(b.precision());
    mpfr_si_div(r.v_, a, b.v_, MPFR_RNDN);
    return r;
  }
  friend Real operator+(int a, Real b) { return static_cast<long>(a) + b; }
  friend Real operator*(int a, Real b) { return static_cast<long>(a) * b; }
  friend Real operator-(int a, const Real& b) { return static_cast<long>(a) - b; }
  friend Real operator/(int a, const Real& b) { return static_cast<long>(a) / b; }
  friend Real operator+(double a, const Real& b) { return Real(a, b.precision()) + b; }
  friend Real operator*(double a, const Real& b) { return Real(a, b.precision()) * b; }
  friend Real operator-(double a, const Real& b) { return Real(a, b.precision()) - b; }
  friend Real operator/(double a, const Real& b) { return Real(a, b.precision()) / b; }

  friend int compare(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_); }
  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }
  friend bool operator!=(const Real& a, const Real& b) { return !(a == b); }
  friend bool operator<(const Real& a, double b) { return mpfr_cmp_d(a.v_, b) < 0; }
  friend bool operator>(const Real& a, double b) { return mpfr_cmp_d(a.v_, b) > 0; }
  friend bool operator<=(const Real& a, double b) { return mpfr_cmp_d(a.v_, b) <= 0; }
  friend bool operator>=(const Real& a, double b) { return mpfr_cmp_d(a.v_, b) >= 0; }
  friend bool operator==(const Real& a, double b) { return mpfr_cmp_d(a.v_, b) == 0; }

  friend std::ostream& operator<<(std::ostream& os, const Real& r) {
    const int digits = static_cast<int>(static_cast<double>(r.precision()) * 0.30103);
    return os << r.to_string(std::max(digits, 1));
  }

 private:
  static Bits clamp(Bits bits) { return std::clamp<Bits>(bits, MPFR_PREC_MIN, MPFR_PREC_MAX); }

  void widen(const Real& o) {
    const Bits p = mpfr_get_prec(o.v_);
    if (p > mpfr_get_prec(v_)) mpfr_prec_round(v_, p, MPFR_RNDN);
  }

  mpfr_t v_;
};

inline Real abs(const Real& x) {
  Real r(x.precision());
  mpfr_abs(r.get(), x.get(), MPFR_RNDN);
  return r;
}
inline Real exp(const Real& x) {
  Real r(x.precision());
  mpfr_exp(r.get(), x.get(), MPFR_RNDN);
  return r;
}
inline Real expm1(const Real& x) {
  Real r(x.precision());
  mpfr_expm1(r.get(), x.get(), MPFR_RNDN);
  return r;
}
inline Real log(const Real& x) {
  Real r(x.precision());
  mpfr_log(r.get(), x.get(), MPFR_RNDN);
  return r;
}
inline Real log1p(const Real& x) {
  Real r(x.precision());
  mpfr_log1p(r.get(), x.get(), MPFR_RNDN);
  return r;
}
inline Real sqrt(const Real& x) {
  Real r(x.precision());
  mpfr_sqrt(r.get(), x.get(), MPFR_RNDN);
  return r;
}
inline Real pow(const Real& x, long n) {
  Real r(x.precision());
  mpfr_pow_si(r.get(), x.get(), n, MPFR_RNDN);
  return r;
}
inline Real pow(const Real& x, const Real& y) {
  Real r(std::max(x.precision(), y.precision()));
  mpfr_pow(r.get(), x.get(), y.get(), MPFR_RNDN);
  return r;
}
inline Real max(const Real& a, const Real& b) { return a < b ? b : a; }
inline Real min(const Real& a, const Real& b) { return b < a ? b : a; }

// 2^e at the given precision.
inline Real ldexp2(long e, Bits bits) {
  Real r(bits);
  mpfr_set_ui_2exp(r.get(), 1, e, MPFR_RNDN);
  return r;
}

// Number of decimal digits representable at `bits` less a small guard.
inline int decimal_digits(Bits bits, int guard_bits = 8) {
  return std::max(1, static_cast<int>(static_cast<double>(bits - guard_bits) * 0.30102999566398120));
}

}  // namespace qbd

#endif  // QBD_REAL_HPP_
