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

// qbd: transition kernels, verification reports and Monte Carlo runs for the
// bilateral birth-death process on the geometric grid.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qbd/commands.hpp"

namespace {

void add_common(CLI::App* sub, qbd::cli::RunConfig& cfg) {
  sub->add_option("--q", cfg.q, "grid ratio, 0 < q < 1")->capture_default_str();
  sub->add_option("--nu", cfg.nu, "order, nu > -1")->capture_default_str();
  sub->add_option("--precision-bits", cfg.precision_bits, "working precision in bits")
      ->capture_default_str()
      ->check(CLI::Range(64L, 65536L));
  sub->add_option("--out", cfg.out, "output path (default: standard output)");
}

void add_window(CLI::App* sub, qbd::cli::RunConfig& cfg) {
  sub->add_option("--window", cfg.window, "grid window LO:HI")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  using qbd::cli::RunConfig;
  CLI::App app{"qbd: q-Bessel heat kernel of the bilateral birth-death process"};
  app.set_version_flag("--version", std::string(QBD_VERSION));
  app.set_config("--config", "", "INI config file; flags override its values");
  app.require_subcommand(1);
  app.allow_config_extras(CLI::config_extras_mode::error);

  RunConfig eval_cfg, kernel_cfg, verify_cfg, sim_cfg;
  eval_cfg.command = "eval";
  kernel_cfg.command = "kernel";
  verify_cfg.command = "verify";
  sim_cfg.command = "simulate";
  sim_cfg.nu = "1";
  sim_cfg.t = "0.5";

  CLI::App* eval = app.add_subcommand("eval", "evaluate special values");
  add_common(eval, eval_cfg);
  eval->add_flag("--c-constant", eval_cfg.c_constant, "print the normalizing constant c");
  eval->add_option("--pi", eval_cfg.pi, "print the stationary weight at state N");
  eval->add_option("--j", eval_cfg.j, "print j at x = q^M");
  eval->add_option("--x", eval_cfg.x, "print j at decimal point X");
  eval->add_option("--delta", eval_cfg.delta, "print delta_q(I,J); argument I:J");
  eval->add_option("--decay", eval_cfg.decay, "print the decay bound at q^N");

  CLI::App* kernel = app.add_subcommand("kernel", "transition row CSV");
  add_common(kernel, kernel_cfg);
  add_window(kernel, kernel_cfg);
  kernel->add_option("--r", kernel_cfg.r, "start state")->capture_default_str();
  kernel->add_option("--t", kernel_cfg.t, "time")->capture_default_str();

  CLI::App* verify = app.add_subcommand("verify", "invariant suite JSON report");
  add_common(verify, verify_cfg);
  add_window(verify, verify_cfg);

  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo cross-validation");
  add_common(simulate, sim_cfg);
  add_window(simulate, sim_cfg);
  simulate->add_option("--r", sim_cfg.r, "start state")->capture_default_str();
  simulate->add_option("--t", sim_cfg.t, "end time")->capture_default_str();
  simulate->add_option("--n-paths", sim_cfg.n_paths, "number of paths")->capture_default_str();
  simulate->add_option("--seed", sim_cfg.seed, "master seed")->capture_default_str();
  simulate->add_option("--guard", sim_cfg.guard, "absorbing guard window LO:HI")
      ->capture_default_str();
  simulate->add_option("--max-events", sim_cfg.max_events, "per-path event cap")
      ->capture_default_str();
  simulate->add_option("--threads", sim_cfg.threads, "worker threads")->capture_default_str();
  simulate->add_option("--report", sim_cfg.report, "JSON report path (default: standard error)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return qbd::cli::kExitInvalid;
  }

  const RunConfig& cfg = eval->parsed()     ? eval_cfg
                         : kernel->parsed() ? kernel_cfg
                         : verify->parsed() ? verify_cfg
                                            : sim_cfg;
  return qbd::cli::run_command(cfg, std::cout, std::cerr);
}
