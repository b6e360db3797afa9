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

// Gillespie simulation of the birth-death chain in double precision and a
// statistical comparison of end-state frequencies with an analytic
// transition row.
//
// Path k of an ensemble draws from std::mt19937_64 seeded with
// path_seed(seed, k), the splitmix64 finalizer applied to
// seed + (k + 1) * 0x9E3779B97F4A7C15. Uniforms are the top 53 bits of a
// draw scaled by 2^-53, and holding times are -log1p(-u) / rate, so a path
// depends only on (config, k) and ensembles are identical for any thread
// count.

#ifndef QBD_CTMCSIM_HPP_
#define QBD_CTMCSIM_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "qbd/bdkernel.hpp"
#include "qbd/errors.hpp"
#include "qbd/qcore.hpp"

namespace qbd {

struct SimConfig {
  QParams params;
  int r = 0;
  double t_end = 0.5;
  std::int64_t n_paths = 100000;
  std::uint64_t seed = 20260101;
  GridWindow guard{-12, 30};  // a path that leaves this window is absorbed
  std::int64_t max_events = 10'000'000;
  unsigned threads = 1;
};

inline void validate(const SimConfig& cfg) {
  if (cfg.guard.n_lo > cfg.guard.n_hi) throw ParameterError("guard window out of range");
  if (!cfg.guard.contains(cfg.r)) {
    throw ParameterError("start state " + std::to_string(cfg.r) + " outside guard window " +
                         cfg.guard.to_string());
  }
  if (!(cfg.t_end >= 0.0) || !std::isfinite(cfg.t_end)) {
    throw ParameterError("t_end out of range: need t_end >= 0");
  }
  if (cfg.n_paths < 1) throw ParameterError("n_paths out of range: need n_paths >= 1");
  if (cfg.max_events < 1) throw ParameterError("max_events out of range: need max_events >= 1");
}

struct Rates {
  double lambda = 0.0;  // i -> i+1
  double mu = 0.0;      // i -> i-1
};

// lambda_i = q^{2nu-2i}, mu_i = q^{-2i}.
inline Rates rates(int i, const QParams& params) {
  const double q = params.q_approx;
  return Rates{std::pow(q, 2.0 * params.nu_approx - 2.0 * i), std::pow(q, -2.0 * i)};
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t path_seed(std::uint64_t seed, std::uint64_t k) {
  return splitmix64(seed + (k + 1) * 0x9E3779B97F4A7C15ULL);
}

enum class Terminal { kReachedEnd, kHitGuard, kMaxEvents };

inline const char* to_string(Terminal t) {
  switch (t) {
    case Terminal::kReachedEnd:
      return "reached_t_end";
    case Terminal::kHitGuard:
      return "hit_guard";
    case Terminal::kMaxEvents:
      return "max_events";
  }
  return "unknown";
}

struct PathEvent {
  double time = 0.0;
  int index = 0;
};

struct PathSample {
  std::vector<PathEvent> events;
  Terminal terminal = Terminal::kReachedEnd;
  int final_index = 0;
  std::int64_t n_events = 0;
};

namespace detail {

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Runs one path; events are recorded only when `record` is set.
inline PathSample run_path(const SimConfig& cfg, std::uint64_t seed, bool record) {
  std::mt19937_64 rng(seed);
  PathSample path;
  int i = cfg.r;
  double t = 0.0;
  for (;;) {
    const Rates rt = rates(i, cfg.params);
    const double total = rt.lambda + rt.mu;
    t += -std::log1p(-uniform01(rng)) / total;
    if (t > cfg.t_end) {
      path.terminal = Terminal::kReachedEnd;
      break;
    }
    i += uniform01(rng) * total < rt.lambda ? 1 : -1;
    ++path.n_events;
    if (record) path.events.push_back({t, i});
    if (!cfg.guard.contains(i)) {
      path.terminal = Terminal::kHitGuard;
      break;
    }
    if (path.n_events >= cfg.max_events) {
      path.terminal = Terminal::kMaxEvents;
      break;
    }
  }
  path.final_index = i;
  return path;
}

}  // namespace detail

inline PathSample simulate_path(const SimConfig& cfg, std::uint64_t seed) {
  validate(cfg);
  return detail::run_path(cfg, seed, true);
}

struct EnsembleStats {
  int r = 0;
  double t_end = 0.0;
  QParams params;
  std::uint64_t seed = 0;
  std::map<int, std::int64_t> counts;  // end state -> paths reaching t_end there
  std::int64_t n_paths = 0;
  std::int64_t n_valid = 0;
  std::int64_t n_guard = 0;
  std::int64_t n_maxed = 0;
  std::int64_t n_events = 0;

  double excluded_fraction() const {
    return static_cast<double>(n_guard + n_maxed) / static_cast<double>(n_paths);
  }
  // More than 0.1% of paths excluded by the guard or the event cap.
  bool excessive_exclusion() const { return excluded_fraction() > 1e-3; }
};

inline EnsembleStats simulate_ensemble(const SimConfig& cfg) {
  validate(cfg);
  const unsigned threads =
      std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(cfg.n_paths)));
  std::vector<EnsembleStats> parts(threads);
  auto work = [&](unsigned part) {
    EnsembleStats& s = parts[part];
    const std::int64_t begin = cfg.n_paths * part / threads;
    const std::int64_t end = cfg.n_paths * (part + 1) / threads;
    for (std::int64_t k = begin; k < end; ++k) {
      const PathSample p =
          detail::run_path(cfg, path_seed(cfg.seed, static_cast<std::uint64_t>(k)), false);
      s.n_events += p.n_events;
      switch (p.terminal) {
        case Terminal::kReachedEnd:
          ++s.counts[p.final_index];
          ++s.n_valid;
          break;
        case Terminal::kHitGuard:
          ++s.n_guard;
          break;
        case Terminal::kMaxEvents:
          ++s.n_maxed;
          break;
      }
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned part = 0; part < threads; ++part) pool.emplace_back(work, part);
    for (auto& th : pool) th.join();
  }
  EnsembleStats out;
  out.r = cfg.r;
  out.t_end = cfg.t_end;
  out.params = cfg.params;
  out.seed = cfg.seed;
  out.n_paths = cfg.n_paths;
  for (const auto& s : parts) {
    for (const auto& [n, c] : s.counts) out.counts[n] += c;
    out.n_valid += s.n_valid;
    out.n_guard += s.n_guard;
    out.n_maxed += s.n_maxed;
    out.n_events += s.n_events;
  }
  return out;
}

struct StateComparison {
  int n = 0;
  double empirical = 0.0;
  double analytic = 0.0;
  double z = 0.0;  // binomial z-score of this state alone
};

// States pooled for the z test: [n_lo, n_hi].
struct ZBin {
  int n_lo = 0;
  int n_hi = 0;
  double expected = 0.0;  // n_valid times the analytic mass of the bin
  std::int64_t observed = 0;
  double z = 0.0;
};

struct ComparisonReport {
  double tv = 0.0;
  double threshold = 0.0;
  double max_abs_z = 0.0;        // over the z-test bins; decides the pass flag
  double max_abs_state_z = 0.0;  // over single states, informational
  std::size_t k_states = 0;      // states holding 99.9% of the analytic mass
  bool pass = false;
  std::vector<StateComparison> states;  // ascending n
  std::vector<ZBin> bins;               // ascending n
};

// Smallest expected count of a z-test bin.
inline constexpr double kMinBinExpected = 5.0;

namespace detail {
inline double binomial_z(double count, double n, double p) {
  const double var = n * p * (1.0 - p);
  if (var > 0.0) return (count - n * p) / std::sqrt(var);
  // p is 0 or 1: the count is certain.
  return count == n * p ? 0.0 : std::numeric_limits<double>::infinity();
}
}  // namespace detail

// Total-variation distance and binomial z-scores of the empirical end-state
// frequencies against the analytic row. Passes when
// TV <= 3 sqrt(K / (2 n_valid)) and every |z| <= 4.
//
// A state whose expected count is far below one turns a single hit into
// |z| > 4 although nothing is wrong, so the z test runs on bins of adjacent
// states holding an expected count of at least kMinBinExpected each. States
// with enough mass on their own stay single.
inline ComparisonReport empirical_vs_analytic(const EnsembleStats& stats, const TransitionRow& row) {
  if (stats.r != row.r || !(stats.params == row.params) || stats.t_end != row.t.to_double()) {
    throw ParameterError("empirical_vs_analytic: ensemble and row differ in (r, t, params)");
  }
  ComparisonReport rep;
  std::map<int, double> analytic;
  for (int n = row.window.n_lo; n <= row.window.n_hi; ++n) {
    analytic[n] = std::max(0.0, row.at(n).to_double());
  }
  for (const auto& [n, c] : stats.counts) analytic.try_emplace(n, 0.0);

  std::vector<double> sorted;
  for (const auto& [n, p] : analytic) sorted.push_back(p);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double acc = 0.0;
  for (double p : sorted) {
    if (acc >= 0.999) break;
    acc += p;
    ++rep.k_states;
  }

  const double nv = static_cast<double>(stats.n_valid);
  auto count_of = [&](int n) -> std::int64_t {
    auto it = stats.counts.find(n);
    return it == stats.counts.end() ? 0 : it->second;
  };
  double l1 = 0.0;
  for (const auto& [n, p] : analytic) {
    const double count = static_cast<double>(count_of(n));
    const double emp = nv > 0 ? count / nv : 0.0;
    l1 += std::fabs(emp - p);
    const double z = detail::binomial_z(count, nv, p);
    rep.max_abs_state_z = std::max(rep.max_abs_state_z, std::fabs(z));
    if (count > 0.0 || p > 1e-12) rep.states.push_back({n, emp, p, z});
  }
  rep.tv = 0.5 * l1;
  rep.threshold = nv > 0 ? 3.0 * std::sqrt(static_cast<double>(rep.k_states) / (2.0 * nv)) : 0.0;

  // Greedy binning in ascending n: a bin closes once its expected count
  // reaches kMinBinExpected; a short last bin joins its predecessor.
  std::vector<ZBin> bins;
  ZBin cur;
  bool open = false;
  double cur_p = 0.0;
  std::vector<double> bin_p;
  for (const auto& [n, p] : analytic) {
    if (!open) {
      cur = ZBin{n, n, 0.0, 0, 0.0};
      cur_p = 0.0;
      open = true;
    }
    cur.n_hi = n;
    cur_p += p;
    cur.observed += count_of(n);
    if (nv * cur_p >= kMinBinExpected) {
      bins.push_back(cur);
      bin_p.push_back(cur_p);
      open = false;
    }
  }
  if (open) {
    if (bins.empty()) {
      bins.push_back(cur);
      bin_p.push_back(cur_p);
    } else {
      bins.back().n_hi = cur.n_hi;
      bins.back().observed += cur.observed;
      bin_p.back() += cur_p;
    }
  }
  for (std::size_t i = 0; i < bins.size(); ++i) {
    const double p = std::min(bin_p[i], 1.0);
    bins[i].expected = nv * p;
    bins[i].z = detail::binomial_z(static_cast<double>(bins[i].observed), nv, p);
    rep.max_abs_z = std::max(rep.max_abs_z, std::fabs(bins[i].z));
  }
  rep.bins = std::move(bins);
  rep.pass = stats.n_valid > 0 && rep.tv <= rep.threshold && rep.max_abs_z <= 4.0;
  return rep;
}

}  // namespace qbd

#endif  // QBD_CTMCSIM_HPP_
