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


// Acceptance run: evaluates every acceptance criterion for the three
// parameter sets and prints one PASS/FAIL line per criterion, preceded by
// the measured values. Exit status 0 iff every criterion passes.
//
//   acceptance [--window LO:HI] [--threads N]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oracle.hpp"
#include "qbd/qbd.hpp"

namespace {

using qbd::CheckResult;

struct ParamSet {
  const char* q;
  const char* nu;
  mpq_class q_exact;
  mpq_class a_exact;  // q^{2 nu + 2}
};

std::vector<ParamSet> param_sets() {
  const mpq_class half(1, 2), two_fifths(2, 5);
  return {{"0.5", "0", half, half * half},
          {"0.5", "1.5", half, oracle::pow_q(half, 5)},
          {"0.4", "-0.5", two_fifths, two_fifths}};
}

struct Criterion {
  int id;
  const char* title;
  std::vector<std::string> checks;  // names in the verification suite
};

const std::vector<Criterion> kSuiteCriteria = {
    {1, "orthogonality", {"orthogonality"}},
    {2, "inversion and Plancherel", {"inversion", "plancherel"}},
    {3, "transition function properties",
     {"row_sum", "row_min_entry", "row_identity_at_zero", "chapman_kolmogorov"}},
    {4, "heat equation", {"heat_residual", "eigenfunction"}},
    {5, "L2(pi) structure", {"self_adjoint", "positive_definite", "semigroup", "detailed_balance"}},
    {6, "positivity of translation", {"positivity_probe"}},
};

void report(int id, const char* title, bool pass) {
  std::printf("CRITERION %d %-32s %s\n", id, title, pass ? "PASS" : "FAIL");
  std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int main(int argc, char** argv) {
  std::string window_text = qbd::default_window().to_string();
  unsigned threads = 1;
  CLI::App app{"acceptance run"};
  app.add_option("--window", window_text, "grid window LO:HI")->capture_default_str();
  app.add_option("--threads", threads, "Monte Carlo worker threads")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  qbd::GridWindow window;
  {
    const auto colon = window_text.find(':');
    if (colon == std::string::npos) {
      std::fprintf(stderr, "window must be LO:HI\n");
      return 2;
    }
    window = qbd::make_window(std::stoi(window_text.substr(0, colon)),
                              std::stoi(window_text.substr(colon + 1)));
  }
  std::printf("window %s, precision 192 bits\n", window.to_string().c_str());

  bool all = true;
  const auto sets = param_sets();

  // Criteria 1 to 6: the verification suite for each parameter set.
  std::map<std::string, std::vector<std::pair<std::string, CheckResult>>> by_check;
  double suite_seconds = 0.0;
  for (const auto& s : sets) {
    const auto start = std::chrono::steady_clock::now();
    const auto checks = qbd::run_verification(qbd::make_params(s.q, s.nu), window);
    suite_seconds += seconds_since(start);
    const std::string label = std::string("q=") + s.q + " nu=" + s.nu;
    for (const auto& c : checks) by_check[c.name].emplace_back(label, c);
  }
  std::printf("verification suite: %.1f s for %zu parameter sets\n", suite_seconds, sets.size());
  for (const auto& crit : kSuiteCriteria) {
    bool pass = true;
    for (const auto& name : crit.checks) {
      for (const auto& [label, c] : by_check[name]) {
        std::printf("  %-14s %-22s defect %-10.3g tolerance %.3g%s%s\n", label.c_str(),
                    name.c_str(), c.defect, c.tolerance, c.note.empty() ? "" : "  ",
                    c.note.c_str());
        pass = pass && c.pass;
      }
    }
    report(crit.id, crit.title, pass);
    all = all && pass;
  }

  // Criterion 7: Monte Carlo cross-validation.
  {
    const auto start = std::chrono::steady_clock::now();
    qbd::SimConfig cfg;
    cfg.params = qbd::make_params("0.5", "1");
    cfg.r = 0;
    cfg.t_end = 0.5;
    cfg.n_paths = 100000;
    cfg.threads = std::max(1u, threads);
    bool pass = false;
    try {
      const qbd::EnsembleStats stats = qbd::simulate_ensemble(cfg);
      const qbd::KernelMatrix M = qbd::transform_matrix(window, cfg.params);
      const qbd::TransitionRow row = qbd::transition_row(0, qbd::Real::parse("0.5", M.bits()), M);
      const qbd::ComparisonReport rep = qbd::empirical_vs_analytic(stats, row);
      std::printf("  seed %llu, %lld paths: tv %.4g threshold %.4g (K=%zu)\n",
                  static_cast<unsigned long long>(cfg.seed),
                  static_cast<long long>(stats.n_paths), rep.tv, rep.threshold, rep.k_states);
      std::printf("  max |z| over single states %.3g, over bins %.3g\n", rep.max_abs_state_z,
                  rep.max_abs_z);
      std::printf("  guard exclusions %lld, event-cap exclusions %lld\n",
                  static_cast<long long>(stats.n_guard), static_cast<long long>(stats.n_maxed));
      pass = rep.tv <= rep.threshold && rep.max_abs_state_z <= 4.0 && rep.max_abs_z <= 4.0 &&
             stats.n_guard == 0 && stats.n_maxed == 0;
    } catch (const std::exception& e) {
      std::printf("  error: %s\n", e.what());
    }
    std::printf("  %.1f s\n", seconds_since(start));
    report(7, "Monte Carlo cross-validation", pass);
    all = all && pass;
  }

  // Criterion 8: series against the exact rational oracle.
  {
    const auto start = std::chrono::steady_clock::now();
    const qbd::Bits bits = 192;
    const int digits = qbd::decimal_digits(bits);
    const double tol = std::pow(10.0, -digits);
    bool pass = digits >= 30;
    for (const auto& s : sets) {
      const qbd::QParams p = qbd::make_params(s.q, s.nu, bits);
      for (int m : {3, 0, -3}) {
        const mpq_class exact = oracle::jnu(s.q_exact, s.a_exact, oracle::pow_q(s.q_exact, m));
        const double err = oracle::rel_error(qbd::jnu_at_exponent(m, p, bits).value, exact);
        std::printf("  q=%-4s nu=%-5s x=q^%-3d relative error %.3g (%d digits: %.0e)\n", s.q, s.nu,
                    m, err, digits, tol);
        pass = pass && err <= tol;
      }
    }
    std::printf("  %.1f s\n", seconds_since(start));
    report(8, "oracle equivalence", pass);
    all = all && pass;
  }

  std::printf("%s\n", all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL");
  return all ? 0 : 1;
}
