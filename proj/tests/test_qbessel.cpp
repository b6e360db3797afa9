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


#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "qbd/qbessel.hpp"

namespace qbd {
namespace {

constexpr Bits kBits = 192;

struct OracleCase {
  const char* q_text;
  const char* nu_text;
  mpq_class q;
  mpq_class a;  // q^{2 nu + 2}
};

std::vector<OracleCase> oracle_cases() {
  const mpq_class half(1, 2), two_fifths(2, 5);
  return {
      {"0.5", "0", half, half * half},
      {"0.5", "1.5", half, oracle::pow_q(half, 5)},
      {"0.4", "-0.5", two_fifths, two_fifths},
  };
}

TEST(JnuSeries, MatchesRationalOracleOnGridPoints) {
  for (Bits bits : {Bits{128}, kBits, Bits{512}}) {
    const double tol = std::pow(10.0, -decimal_digits(bits));
    for (const auto& c : oracle_cases()) {
      const QParams p = make_params(c.q_text, c.nu_text, bits);
      for (int m : {3, 0, -3}) {
        const mpq_class exact = oracle::jnu(c.q, c.a, oracle::pow_q(c.q, m));
        const Real got = jnu_at_exponent(m, p, bits).value;
        EXPECT_LT(oracle::rel_error(got, exact), tol)
            << "q=" << c.q_text << " nu=" << c.nu_text << " m=" << m << " bits=" << bits;
      }
    }
  }
}

TEST(JnuSeries, MatchesRationalOracleAtBinaryArguments) {
  // jnu_series takes its binary argument as exact, so the oracle does too.
  for (const auto& c : oracle_cases()) {
    const QParams p = make_params(c.q_text, c.nu_text, kBits);
    for (const char* x : {"0.125", "0.064", "1", "8", "15.625", "3.3"}) {
      const Real xr = Real::parse(x, kBits);
      const mpq_class exact = oracle::jnu(c.q, c.a, oracle::from_real(xr));
      EXPECT_LT(oracle::rel_error(jnu_series(xr, p), exact), std::pow(10.0, -decimal_digits(kBits)))
          << "q=" << c.q_text << " x=" << x;
    }
  }
}

TEST(JnuSeries, FrozenValues) {
  struct Frozen {
    const char* q;
    const char* nu;
    int m;
    const char* value;
  };
  const Frozen table[] = {
      {"0.5", "0", 0, "5.866528696112796769726717392693709129976e-01"},
      {"0.5", "0", -3, "-3.508912495325959457754926240009796010691e-04"},
      {"0.5", "1.5", 0, "6.786674130471765066246356506323894402733e-01"},
      {"0.5", "1.5", -3, "-4.944781232030327067841324527392154569959e-07"},
      {"0.4", "-0.5", 0, "6.914134705930695113421651488007628430709e-01"},
      {"0.4", "-0.5", -3, "-4.712414025592778876657714127588770468533e-04"},
  };
  for (const auto& f : table) {
    const QParams p = make_params(f.q, f.nu);
    const Real got = jnu_at_exponent(f.m, p, kBits).value;
    const Real want = Real::parse(f.value, kBits);
    EXPECT_LT(abs(got - want).to_double(), 1e-39 * std::abs(want.to_double())) << f.q << " " << f.nu;
  }
}

TEST(JnuSeries, SmallArgumentLimitIsOne) {
  const QParams p = make_params("0.5", "0");
  EXPECT_LE(abs(jnu_series(pow(Real(0.5, kBits), 40L), p) - 1).to_double(), 1e-20);
}

TEST(JnuSeries, RejectsNonPositiveArgument) {
  const QParams p = make_params("0.5", "0");
  EXPECT_THROW(jnu_series(Real(0.0, kBits), p), ParameterError);
  EXPECT_THROW(jnu_series(Real(-1.0, kBits), p), ParameterError);
}

TEST(JnuSeries, EscalatesPrecisionWithArgument) {
  const QParams p = make_params("0.5", "1");
  const BesselValue near = jnu_at_exponent(0, p, kBits);
  const BesselValue far = jnu_at_exponent(-10, p, kBits);
  EXPECT_EQ(near.bits_used, kBits + 32);
  // 2 m^2 + (2 nu + 1) m = 230 bits lost to cancellation at q = 1/2, m = 10.
  EXPECT_EQ(far.bits_used, kBits + 230 + 32);
  EXPECT_EQ(far.value.precision(), kBits);
}

TEST(JnuSeries, PrecisionCapExceeded) {
  const QParams p = make_params("0.5", "0");
  EXPECT_THROW(jnu_at_exponent(-200, p, kBits), PrecisionCapExceeded);
}

TEST(DecayBound, ConstantForNonNegativeExponents) {
  const QParams p = make_params("0.5", "0.7");
  EXPECT_EQ(decay_bound(3, p), decay_bound(7, p));
  EXPECT_EQ(decay_bound(0, p), decay_bound(12, p));
}

TEST(DecayBound, ShrinksLikeTheClosedFormForNegativeExponents) {
  for (const char* nu : {"0", "1.5", "-0.5"}) {
    const QParams p = make_params("0.5", nu);
    const Real q = p.q(kBits);
    for (int m = 1; m < 12; ++m) {
      const Real ratio = decay_bound(-m - 1, p) / decay_bound(-m, p);
      const Real expected = pow(q, Real(2 * m + 2, kBits) + p.nu(kBits) * 2);
      EXPECT_LE(abs(ratio / expected - 1).to_double(), 1e-50) << "nu=" << nu << " m=" << m;
    }
  }
}

TEST(DecayBound, BoundsTheSeries) {
  for (const auto& c : oracle_cases()) {
    const QParams p = make_params(c.q_text, c.nu_text);
    for (int m = -12; m <= 10; ++m) {
      EXPECT_LE(abs(jnu_at_exponent(m, p, kBits).value), decay_bound(m, p)) << m;
    }
  }
}

TEST(JnuGrid, SmallArgumentsArePositiveAndBelowOne) {
  const QParams p = make_params("0.5", "0");
  const BesselGridCache cache = jnu_grid(make_window(0, 10), p);
  ASSERT_EQ(cache.size(), 11u);
  for (int m = 0; m <= 10; ++m) {
    EXPECT_GT(cache.at(m), 0.0);
    EXPECT_LE(cache.at(m), 1.0);
    const mpq_class exact =
        oracle::jnu(mpq_class(1, 2), mpq_class(1, 4), oracle::pow_q(mpq_class(1, 2), m));
    EXPECT_GT(exact, 0);
  }
}

TEST(JnuGrid, SingletonEqualsSeries) {
  const QParams p = make_params("0.5", "1.5");
  for (int m : {-4, 0, 6}) {
    const BesselGridCache cache = jnu_grid(make_window(m, m), p);
    ASSERT_EQ(cache.size(), 1u);
    EXPECT_EQ(cache.at(m), jnu_at_exponent(m, p, kBits).value);
  }
}

TEST(JnuGrid, WideWindowSatisfiesDecayBound) {
  for (const auto& c : oracle_cases()) {
    const QParams p = make_params(c.q_text, c.nu_text);
    EXPECT_NO_THROW(jnu_grid(make_window(-6, 40), p));
  }
}

TEST(JnuGrid, CoverageErrorOutsideWindow) {
  const BesselGridCache cache = jnu_grid(make_window(0, 4), make_params("0.5", "0"));
  EXPECT_THROW(cache.at(5), CoverageError);
  EXPECT_THROW(cache.require(-1, 3, "test"), CoverageError);
  EXPECT_TRUE(cache.covers(1, 4));
}

TEST(DeltaQ, DiagonalAndOffDiagonal) {
  const QParams p = make_params("0.5", "0");
  EXPECT_EQ(delta_q(0, 0, p), 2.0);
  EXPECT_EQ(delta_q(0, 1, p), 0.0);
  EXPECT_EQ(delta_q(1, 1, p), 8.0);
  EXPECT_EQ(delta_q(-1, -1, p), 0.5);
}

TEST(OrthogonalityDefect, SmallOnDefaultWindow) {
  for (const auto& c : oracle_cases()) {
    const QParams p = make_params(c.q_text, c.nu_text);
    EXPECT_LE(orthogonality_defect(0, 0, default_window(), p).to_double(), 1e-20);
    EXPECT_LE(orthogonality_defect(0, 3, default_window(), p).to_double(), 1e-20);
  }
}

TEST(OrthogonalityDefect, NarrowerWindowMeasured) {
  // On [-6, 40] the diagonal pair at 1 is still resolved, while pairs that
  // reach further out see the k < -6 tail of the sum.
  const QParams p = make_params("0.5", "0");
  const GridWindow narrow = make_window(-6, 40);
  EXPECT_LE(orthogonality_defect(0, 0, narrow, p).to_double(), 1e-20);
  EXPECT_GT(orthogonality_defect(0, 3, narrow, p).to_double(), 1e-20);
  EXPECT_GT(orthogonality_defect(4, 4, narrow, p).to_double(), 1e-6);
}

TEST(OrthogonalityDefect, TruncationDominatesOnSmallWindows) {
  const QParams p = make_params("0.5", "0");
  const double wide = orthogonality_defect(4, 4, default_window(), p).to_double();
  const double mid = orthogonality_defect(4, 4, make_window(-6, 40), p).to_double();
  const double small = orthogonality_defect(4, 4, make_window(0, 5), p).to_double();
  EXPECT_LT(wide, 1e-20);
  EXPECT_GT(mid, 1e3 * wide);
  EXPECT_GT(small, mid);
}

TEST(OrthogonalityDefect, RequiresCoverage) {
  const QParams p = make_params("0.5", "0");
  const BesselGridCache cache = jnu_grid(make_window(0, 10), p);
  EXPECT_THROW(orthogonality_defect(-4, 1, make_window(0, 5), cache), CoverageError);
}

}  // namespace
}  // namespace qbd
