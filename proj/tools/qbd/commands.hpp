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

// Subcommands of the qbd tool. Each takes a fully parsed RunConfig, writes
// its artifacts and returns the process exit code: 0 when every check
// passes, 1 when a check fails, 2 on invalid input.

#ifndef QBD_TOOLS_COMMANDS_HPP_
#define QBD_TOOLS_COMMANDS_HPP_

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "qbd/qbd.hpp"

#ifndef QBD_VERSION
#define QBD_VERSION "0.1.0"
#endif

namespace qbd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitInvalid = 2;

using Json = nlohmann::ordered_json;

struct RunConfig {
  std::string command;
  std::string q = "0.5";
  std::string nu = "0";
  long precision_bits = kDefaultPrecisionBits;
  std::string window = "-16:80";
  int r = 0;
  std::string t = "1";
  std::string s = "0.5";
  std::int64_t n_paths = 100000;
  std::uint64_t seed = 20260101;
  std::string guard = "-12:30";
  std::int64_t max_events = 10'000'000;
  unsigned threads = 1;
  std::string out;     // empty: standard output
  std::string report;  // simulate: JSON report path; empty: standard error

  // eval selections
  bool c_constant = false;
  std::vector<int> pi;
  std::vector<int> j;
  std::vector<std::string> x;
  std::vector<std::string> delta;
  std::vector<int> decay;
};

inline GridWindow parse_window(const std::string& text, const char* what) {
  const auto colon = text.find(':');
  auto bad = [&]() {
    return ParameterError(std::string(what) + " out of range: expected LO:HI, got '" + text + "'");
  };
  if (colon == std::string::npos) throw bad();
  int lo = 0, hi = 0;
  const char* b = text.data();
  const char* e = b + text.size();
  auto r1 = std::from_chars(b, b + colon, lo);
  auto r2 = std::from_chars(b + colon + 1, e, hi);
  if (r1.ec != std::errc() || r1.ptr != b + colon || r2.ec != std::errc() || r2.ptr != e) {
    throw bad();
  }
  if (lo > hi) throw bad();
  return GridWindow{lo, hi};
}

inline QParams params_of(const RunConfig& cfg) {
  return make_params(cfg.q, cfg.nu, static_cast<Bits>(cfg.precision_bits));
}

inline int digits_of(const RunConfig& cfg) {
  return decimal_digits(static_cast<Bits>(cfg.precision_bits));
}

// Effective configuration echoed into every artifact. Output paths are left
// out so that rerunning from the echo reproduces the artifact byte for byte.
inline Json config_json(const RunConfig& cfg) {
  Json j;
  j["command"] = cfg.command;
  j["q"] = cfg.q;
  j["nu"] = cfg.nu;
  j["precision_bits"] = cfg.precision_bits;
  if (cfg.command != "eval") j["window"] = cfg.window;
  if (cfg.command == "kernel" || cfg.command == "simulate") {
    j["r"] = cfg.r;
    j["t"] = cfg.t;
  }
  if (cfg.command == "simulate") {
    j["n_paths"] = cfg.n_paths;
    j["seed"] = cfg.seed;
    j["guard"] = cfg.guard;
    j["max_events"] = cfg.max_events;
  }
  return j;
}

inline std::string csv_header(const RunConfig& cfg) {
  std::ostringstream os;
  os << "# qbd " << QBD_VERSION << "\n";
  const Json config = config_json(cfg);
  for (const auto& [key, value] : config.items()) {
    os << "# " << key << "=" << (value.is_string() ? value.get<std::string>() : value.dump())
       << "\n";
  }
  return os.str();
}

// Writes to `path`, or to `fallback` when the path is empty.
inline void emit(const std::string& path, std::ostream& fallback, const std::string& text) {
  if (path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParameterError("cannot open output file '" + path + "'");
  f << text;
  if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

inline int cmd_eval(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const QParams p = params_of(cfg);
  const Bits bits = p.precision_bits;
  const int digits = digits_of(cfg);
  std::ostringstream os;
  os << "# qbd " << QBD_VERSION << " eval q=" << cfg.q << " nu=" << cfg.nu
     << " precision_bits=" << cfg.precision_bits << " digits=" << digits << "\n";
  const bool any = cfg.c_constant || !cfg.pi.empty() || !cfg.j.empty() || !cfg.x.empty() ||
                   !cfg.delta.empty() || !cfg.decay.empty();
  if (cfg.c_constant || !any) os << "c_constant = " << c_constant(p).to_decimal(digits) << "\n";
  for (int n : cfg.pi) {
    os << "pi(" << n << ") = " << stationary_weight(n, p).to_decimal(digits) << "\n";
  }
  for (int m : cfg.j) {
    os << "j(q^" << m << ") = " << jnu_at_exponent(m, p, bits).value.to_decimal(digits) << "\n";
  }
  for (const auto& xs : cfg.x) {
    Real xv(bits);
    try {
      xv = Real::parse(xs, bits + 64);
    } catch (const std::invalid_argument&) {
      throw ParameterError("x out of range: not a number: '" + xs + "'");
    }
    os << "j(" << xs << ") = " << jnu_series(xv, p, bits).to_decimal(digits) << "\n";
  }
  for (const auto& d : cfg.delta) {
    const GridWindow ij = [&] {
      const auto comma = d.find(',');
      std::string s = d;
      if (comma != std::string::npos) s[comma] = ':';
      const auto colon = s.find(':');
      if (colon == std::string::npos) throw ParameterError("delta out of range: expected I,J");
      int i = 0, j = 0;
      auto r1 = std::from_chars(s.data(), s.data() + colon, i);
      auto r2 = std::from_chars(s.data() + colon + 1, s.data() + s.size(), j);
      if (r1.ec != std::errc() || r1.ptr != s.data() + colon || r2.ec != std::errc() ||
          r2.ptr != s.data() + s.size()) {
        throw ParameterError("delta out of range: expected I,J");
      }
      return GridWindow{i, j};
    }();
    os << "delta_q(" << ij.n_lo << "," << ij.n_hi
       << ") = " << delta_q(ij.n_lo, ij.n_hi, p).to_decimal(digits) << "\n";
  }
  for (int n : cfg.decay) {
    os << "decay_bound(" << n << ") = " << decay_bound(n, p).to_decimal(digits) << "\n";
  }
  emit(cfg.out, out, os.str());
  return kExitOk;
}

inline int cmd_kernel(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const QParams p = params_of(cfg);
  const GridWindow w = parse_window(cfg.window, "window");
  if (!w.contains(cfg.r)) {
    throw ParameterError("r out of range: " + std::to_string(cfg.r) + " outside window " +
                         w.to_string());
  }
  const KernelMatrix M = transform_matrix(w, p);
  Real t(M.bits());
  try {
    t = Real::parse(cfg.t, M.bits());
  } catch (const std::invalid_argument&) {
    throw ParameterError("t out of range: not a number");
  }
  if (!(t >= 0.0) || !t.is_finite()) throw ParameterError("t out of range: need t >= 0");
  const TransitionRow row = transition_row(cfg.r, t, M);
  const int digits = digits_of(cfg);
  const Tolerances tol;
  std::ostringstream os;
  os << csv_header(cfg) << "# digits=" << digits << "\n";
  os << "n,x,p_nr,cumulative\n";
  Real cumulative(M.bits());
  const Real q = p.q(M.bits());
  for (int n = w.n_lo; n <= w.n_hi; ++n) {
    cumulative += row.at(n);
    os << n << "," << pow(q, static_cast<long>(n)).to_decimal(digits) << ","
       << row.at(n).to_decimal(digits) << "," << cumulative.to_decimal(digits) << "\n";
  }
  emit(cfg.out, out, os.str());
  const Real min_entry = row.min_entry();
  err << "row_sum_defect=" << row.defect.to_string(6) << " min_entry=" << min_entry.to_string(6)
      << " unique=" << (row.unique ? "true" : "false") << "\n";
  const bool ok = row.defect <= tol.mass && min_entry >= -tol.pos;
  return ok ? kExitOk : kExitCheckFailed;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const QParams p = params_of(cfg);
  const GridWindow w = parse_window(cfg.window, "window");
  const std::vector<CheckResult> checks = run_verification(p, w);
  Json report;
  report["version"] = QBD_VERSION;
  report["config"] = config_json(cfg);
  Json list = Json::array();
  for (const auto& c : checks) {
    Json j;
    j["name"] = c.name;
    if (std::isfinite(c.defect)) {
      j["defect"] = c.defect;
    } else {
      j["defect"] = nullptr;
    }
    j["tolerance"] = c.tolerance;
    j["pass"] = c.pass;
    if (!c.note.empty()) j["note"] = c.note;
    list.push_back(std::move(j));
    if (!c.pass) err << "FAIL " << c.name << (c.note.empty() ? "" : ": " + c.note) << "\n";
  }
  report["checks"] = std::move(list);
  const bool ok = all_pass(checks);
  report["pass"] = ok;
  emit(cfg.out, out, report.dump(2) + "\n");
  return ok ? kExitOk : kExitCheckFailed;
}

inline int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  SimConfig sim;
  sim.params = params_of(cfg);
  sim.r = cfg.r;
  sim.n_paths = cfg.n_paths;
  sim.seed = cfg.seed;
  sim.guard = parse_window(cfg.guard, "guard");
  sim.max_events = cfg.max_events;
  sim.threads = std::max(1u, cfg.threads);
  {
    double t = 0.0;
    auto res = std::from_chars(cfg.t.data(), cfg.t.data() + cfg.t.size(), t);
    if (res.ec != std::errc() || res.ptr != cfg.t.data() + cfg.t.size()) {
      throw ParameterError("t out of range: not a number");
    }
    sim.t_end = t;
  }
  validate(sim);
  const GridWindow w = parse_window(cfg.window, "window");
  if (!w.contains(cfg.r)) throw ParameterError("r out of range: outside window " + w.to_string());

  const KernelMatrix M = transform_matrix(w, sim.params);
  const TransitionRow row = transition_row(cfg.r, Real::parse(cfg.t, M.bits()), M);
  const EnsembleStats stats = simulate_ensemble(sim);
  const ComparisonReport cmp = empirical_vs_analytic(stats, row);
  const bool exclusion_ok = !stats.excessive_exclusion();
  if (!exclusion_ok) {
    err << "warning: " << (stats.n_guard + stats.n_maxed) << " of " << stats.n_paths
        << " paths excluded by the guard window or the event cap\n";
  }

  std::ostringstream csv;
  csv << csv_header(cfg) << "n,empirical,analytic,z\n";
  const int digits = digits_of(cfg);
  for (const auto& s : cmp.states) {
    const Json e = s.empirical, z = s.z;
    const std::string analytic =
        row.window.contains(s.n) ? row.at(s.n).to_decimal(digits) : std::string("0");
    csv << s.n << "," << e.dump() << "," << analytic << ","
        << (std::isfinite(s.z) ? z.dump() : std::string("inf")) << "\n";
  }
  emit(cfg.out, out, csv.str());

  Json report;
  report["version"] = QBD_VERSION;
  report["config"] = config_json(cfg);
  report["tv"] = cmp.tv;
  report["threshold"] = cmp.threshold;
  report["k_states"] = cmp.k_states;
  report["max_abs_z"] = cmp.max_abs_z;
  report["max_abs_state_z"] = cmp.max_abs_state_z;
  report["n_valid"] = stats.n_valid;
  report["n_guard"] = stats.n_guard;
  report["n_maxed"] = stats.n_maxed;
  report["seed"] = stats.seed;
  report["row_sum_defect"] = row.defect.to_double();
  const bool ok = cmp.pass && exclusion_ok;
  report["pass"] = ok;
  emit(cfg.report, err, report.dump(2) + "\n");
  return ok ? kExitOk : kExitCheckFailed;
}

// Runs a subcommand, mapping invalid input to exit code 2.
inline int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.command == "eval") return cmd_eval(cfg, out, err);
    if (cfg.command == "kernel") return cmd_kernel(cfg, out, err);
    if (cfg.command == "verify") return cmd_verify(cfg, out, err);
    if (cfg.command == "simulate") return cmd_simulate(cfg, out, err);
    err << "error: unknown command '" << cfg.command << "'\n";
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {  // ParameterError, WindowMismatch
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::out_of_range& e) {  // CoverageError
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const PrecisionCapExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
}

}  // namespace qbd::cli

#endif  // QBD_TOOLS_COMMANDS_HPP_
