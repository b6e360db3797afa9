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

#include <map>
#include <memory>
#include <random>
#include <string>

#include "oracle.hpp"
#include "qbd/qfourier.hpp"

namespace qbd {
namespace {

constexpr double kWindowTol = 1e-18;

struct ParamSet {
  const char* q;
  const char* nu;
};

const ParamSet kSets[] = {{"0.5", "0"}, {"0.5", "1.5"}, {"0.4", "-0.5"}};

// Transform matrices on the default window, built once per parameter set.
const KernelMatrix& matrix(const ParamSet& s) {
  static std::map<std::string, std::unique_ptr<KernelMatrix>> cache;
  const std::string key = std::string(s.q) + "/" + s.nu;
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache
             .emplace(key, std::make_unique<KernelMatrix>(
                               transform_matrix(default_window(), make_params(s.q, s.nu))))
             .first;
  }
  return *it->second;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

GridFunction random_on(const KernelMatrix& M, const GridWindow& support, std::mt19937_64& rng,
                       double lo = -1.0, double hi = 1.0) {
  return GridFunction::generate(M.params(), M.window(), [&](int n) {
    return support.contains(n) ? uniform(rng, lo, hi) : 0.0;
  });
}

double rel(const Real& num, const Real& den) { return (num / den).to_double(); }

TEST(TransformMatrix, EntriesMatchIndependentFormula) {
  // q = 1/2, nu = 0: c = 2, w_n = (1/2) 4^-n, M(m, n) = c w_n j(q^{m+n}).
  const KernelMatrix& M = matrix(kSets[0]);
  const mpq_class half(1, 2);
  for (int m : {-3, 0, 5}) {
    for (int n : {-2, 1, 7}) {
      const mpq_class exact = 2 * half * oracle::pow_q(mpq_class(1, 4), n) *
                              oracle::jnu(half, mpq_class(1, 4), oracle::pow_q(half, m + n));
      EXPECT_LT(oracle::rel_error(M(m, n), exact), 1e-55) << m << "," << n;
    }
  }
}

TEST(HankelTransform, OfIndicatorIsScaledBesselRow) {
  for (const auto& s : kSets) {
    const KernelMatrix& M = matrix(s);
    const Real q = M.params().q(M.bits());
    const GridFunction e0 = GridFunction::indicator(M.params(), M.window(), 0);
    const GridFunction fe = hankel_transform(e0, M);
    for (int m = -16; m <= 80; m += 8) {
      const Real want = M.c() * (1 - q) * M.j(m);
      EXPECT_LE(abs(fe.at(m) - want).to_double(), 1e-55 * abs(want).to_double() + 1e-300);
    }
  }
}

TEST(HankelTransform, ZeroAndLinearity) {
  const KernelMatrix& M = matrix(kSets[1]);
  std::mt19937_64 rng(11);
  const GridFunction zero(M.params(), M.window());
  EXPECT_TRUE(norm_sup(hankel_transform(zero, M)).is_zero());
  const GridFunction f = random_on(M, M.window(), rng);
  const GridFunction g = random_on(M, M.window(), rng);
  const Real a(0.75, M.bits()), b(-2.5, M.bits());
  const GridFunction lhs = hankel_transform(a * f + b * g, M);
  const GridFunction rhs = a * hankel_transform(f, M) + b * hankel_transform(g, M);
  EXPECT_LE(rel(norm_sup(lhs - rhs), norm_sup(lhs)), 1e-50);
}

TEST(HankelTransform, InvolutionOnInteriorSupport) {
  for (const auto& s : kSets) {
    const KernelMatrix& M = matrix(s);
    const GridWindow support = interior_support(M, 1e-20);
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
      const GridFunction f = random_on(M, support, rng);
      const GridFunction back = hankel_transform(hankel_transform(f, M), M);
      EXPECT_LE(rel(norm_p(back - f, 2.0), norm_p(f, 2.0)), kWindowTol) << s.q << " " << s.nu;
    }
  }
}

TEST(HankelTransform, InvolutionFailsOutsideTheCore) {
  // A spike far from the large-x end of the window loses its k < n_lo tail.
  const KernelMatrix& M = matrix(kSets[0]);
  const GridFunction e = GridFunction::indicator(M.params(), M.window(), 40);
  const GridFunction back = hankel_transform(hankel_transform(e, M), M);
  EXPECT_GT(rel(norm_p(back - e, 2.0), norm_p(e, 2.0)), 1e-3);
}

TEST(HankelTransform, PlancherelAndParseval) {
  for (const auto& s : kSets) {
    const KernelMatrix& M = matrix(s);
    const GridWindow support = interior_support(M, 1e-20);
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
      const GridFunction f = random_on(M, support, rng);
      const GridFunction g = random_on(M, support, rng);
      const GridFunction ff = hankel_transform(f, M);
      const GridFunction fg = hankel_transform(g, M);
      const Real nf = norm_p(f, 2.0);
      EXPECT_LE(rel(abs(norm_p(ff, 2.0) - nf), nf), kWindowTol);
      EXPECT_LE(rel(abs(inner_product(ff, fg) - inner_product(f, g)), nf * norm_p(g, 2.0)),
                kWindowTol);
    }
  }
}

TEST(TransformCore, DefaultWindowSupports) {
  EXPECT_EQ(interior_support(matrix(kSets[0]), 1e-20).to_string(), "-12:8");
  EXPECT_EQ(interior_support(matrix(kSets[1]), 1e-20).to_string(), "-12:9");
  EXPECT_EQ(interior_support(matrix(kSets[2]), 1e-20).to_string(), "-12:9");
  for (const auto& s : kSets) {
    const GridWindow core = transform_core(matrix(s), 1e-20);
    EXPECT_TRUE(default_window().contains(core));
    EXPECT_TRUE(core.contains(interior_support(matrix(s), 1e-20)));
  }
}

TEST(TransformCore, TinyWindowHasNoCore) {
  EXPECT_THROW(transform_core(make_window(0, 5), make_params("0.5", "0"), 1e-20), CoverageError);
}

TEST(Translate, PreservesMass) {
  for (const auto& s : kSets) {
    const KernelMatrix& M = matrix(s);
    std::mt19937_64 rng(9);
    const GridFunction f = random_on(M, interior_support(M, 1e-20), rng);
    const Real mass = jackson_integral(f);
    for (int i : default_probe_indices()) {
      EXPECT_LE(rel(abs(jackson_integral(translate(f, i, M)) - mass), norm_p(f, 1.0)), kWindowTol)
          << s.q << " " << s.nu << " i=" << i;
    }
  }
}

TEST(Translate, KernelRouteAgreesWithSpectralRoute) {
  const KernelMatrix& M = matrix(kSets[2]);
  std::mt19937_64 rng(13);
  const GridFunction f = random_on(M, interior_support(M, 1e-20), rng);
  for (int i : {-2, 0, 3}) {
    const GridFunction a = translate(f, i, M);
    const GridFunction b = apply_translation_kernel(translation_kernel(i, M), f, M);
    EXPECT_LE(rel(norm_p(a - b, 2.0), norm_p(a, 2.0)), 1e-40) << i;
  }
}

TEST(Translate, KernelIsSymmetricInAllThreeIndices) {
  const KernelMatrix& M = matrix(kSets[0]);
  const TranslationKernel t1 = translation_kernel(1, M);
  const TranslationKernel t4 = translation_kernel(4, M);
  const TranslationKernel tm2 = translation_kernel(-2, M);
  EXPECT_EQ(t1(4, -2), t1(-2, 4));
  EXPECT_LE(abs(t1(4, -2) - t4(1, -2)).to_double(), 1e-50 * abs(t1(4, -2)).to_double());
  EXPECT_LE(abs(t1(4, -2) - tm2(4, 1)).to_double(), 1e-50 * abs(t1(4, -2)).to_double());
}

TEST(Translate, PositiveAndContractiveForNonNegativeData) {
  // q = 0.4 lies inside the positivity range of nu = -1/2.
  const KernelMatrix& M = matrix(kSets[2]);
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    const GridFunction f = random_on(M, interior_support(M, 1e-20), rng, 0.0, 1.0);
    for (int i : default_probe_indices()) {
      const GridFunction tf = translate(f, i, M);
      const Real floor = -norm_sup(tf) * 1e-15;
      for (int m = M.window().n_lo; m <= M.window().n_hi; ++m) EXPECT_GE(tf.at(m), floor);
      EXPECT_LE(norm_p(tf, 2.0), norm_p(f, 2.0) * (1 + 1e-15));
    }
  }
}

TEST(Translate, RequiresCoverage) {
  const KernelMatrix& M = matrix(kSets[0]);
  const GridFunction f = GridFunction::indicator(M.params(), M.window(), 0);
  EXPECT_THROW(translate(f, -17, M), CoverageError);
  EXPECT_THROW(translation_kernel(81, M), CoverageError);
  const GridFunction other = GridFunction::indicator(M.params(), make_window(-16, 79), 0);
  EXPECT_THROW(translate(other, 0, M), WindowMismatch);
}

TEST(PositivityProbe, PassesForTheThreeParameterSets) {
  for (const auto& s : kSets) {
    const ProbeReport r = positivity_probe(matrix(s), default_probe_indices());
    EXPECT_TRUE(r.pass) << s.q << " " << s.nu << " worst " << r.worst_relative;
    EXPECT_FALSE(r.violation.has_value());
    EXPECT_GE(r.worst_relative, -kPositivityRelTol);
    EXPECT_EQ(r.entries_checked, 10u * 97u * 97u);
  }
}

TEST(PositivityProbe, ReportsConsistentlyNearTheEdge) {
  const ProbeReport r =
      positivity_probe(make_params("0.9", "-0.9"), make_window(-8, 24), {-1, 0, 1});
  EXPECT_EQ(r.pass, !r.violation.has_value());
  if (!r.pass) {
    EXPECT_LT(r.worst_relative, -kPositivityRelTol);
    EXPECT_LT(r.violation->value, 0.0);
  }
}

TEST(Convolution, CommutesAndMatchesTranslationRoute) {
  const KernelMatrix& M = matrix(kSets[0]);
  std::mt19937_64 rng(19);
  const GridWindow support = interior_support(M, 1e-20);
  const GridFunction f = random_on(M, support, rng);
  const GridFunction g = random_on(M, support, rng);
  const GridFunction fg = convolve(f, g, M);
  EXPECT_LE(rel(norm_p(fg - convolve(g, f, M), 2.0), norm_p(fg, 2.0)), 1e-50);
  EXPECT_LE(rel(norm_p(fg - convolve_by_translation(f, g, M), 2.0), norm_p(fg, 2.0)),
            10 * kWindowTol);
}

TEST(Convolution, TransformOfProductOnTheCore) {
  // F(f * g) = Ff Fg wherever F is an involution, i.e. the product Ff Fg
  // lies in the core; checked in the L2 sense for data concentrated at 1.
  const KernelMatrix& M = matrix(kSets[1]);
  const GridFunction f = GridFunction::indicator(M.params(), M.window(), 0);
  const GridFunction g = GridFunction::indicator(M.params(), M.window(), 1);
  const GridFunction lhs = hankel_transform(convolve(f, g, M), M);
  const GridFunction rhs = pointwise_product(hankel_transform(f, M), hankel_transform(g, M));
  const GridWindow core = transform_core(M, 1e-20);
  Real worst(M.bits());
  for (int m = core.n_lo; m <= core.n_hi; ++m) worst = max(worst, abs(lhs.at(m) - rhs.at(m)));
  EXPECT_LE(rel(worst, norm_sup(rhs)), kWindowTol);
}

TEST(Convolution, YoungInequality) {
  // 1/p + 1/r - 1 = 1/s with p = r = 4/3, s = 2.
  for (const auto& s : kSets) {
    const KernelMatrix& M = matrix(s);
    std::mt19937_64 rng(23);
    const GridWindow support = interior_support(M, 1e-20);
    const Real p = Real(4, M.bits()) / 3;
    for (int trial = 0; trial < 3; ++trial) {
      const GridFunction f = random_on(M, support, rng);
      const GridFunction g = random_on(M, support, rng);
      EXPECT_LE(norm_p(convolve(f, g, M), 2.0), M.c() * norm_p(f, p) * norm_p(g, p));
    }
  }
}

}  // namespace
}  // namespace qbd
