// Copyright 2026 The lrfanout Authors
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

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lrfanout/experiments.hpp"

namespace {

void add_common(CLI::App* cmd, lrfanout::ExperimentConfig& cfg) {
  cmd->add_option("--alpha", cfg.alpha, "power-law exponent (decimal or p/q)");
  cmd->add_option("--dimension,-D", cfg.dimension, "lattice dimension")->check(CLI::Range(1, 3));
  cmd->add_option("--extents", cfg.extents, "lattice extents, one per axis");
  cmd->add_option("--n", cfg.n, "number of logical qubits");
  cmd->add_option("--seed", cfg.seed, "random seed");
  cmd->add_option("--out", cfg.out, "output directory");
}

}  // namespace

int main(int argc, char** argv) {
  lrfanout::ExperimentConfig cfg;
  CLI::App app{"Power-law fanout and QFT spreading experiments"};
  app.set_config("--config", "", "INI config; [fanout], [lemma], [scaling] sections");
  app.require_subcommand(1);

  bool schedule_only = false;
  auto* fanout = app.add_subcommand("fanout", "plan, simulate and verify a fanout schedule");
  add_common(fanout, cfg);
  fanout->add_option("--root", cfg.root, "broadcast root (logical index)");
  fanout->add_option("--strategy", cfg.strategy, "auto | doubling | cascade");
  fanout->add_option("--placement", cfg.placement, "canonical | interleaved");
  fanout->add_option("--trials", cfg.trials, "random product inputs for ancilla return");
  fanout->add_flag("--schedule-only", schedule_only, "plan without simulation");

  auto* lemma = app.add_subcommand("lemma", "spreading witnesses for QFT, AQFT bands and fanout");
  add_common(lemma, cfg);
  lemma->add_option("--band,--bands", cfg.bands, "AQFT bands (default: all)");

  auto* scaling = app.add_subcommand("scaling", "makespan scaling versus the broadcast-time regimes");
  add_common(scaling, cfg);
  scaling->add_option("--samples", cfg.samples, "sizes n, increasing (default 2^4..2^16)");
  scaling->add_option("--strategy", cfg.strategy, "auto | doubling | cascade");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? lrfanout::kExitPass : lrfanout::kExitUsage;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  cfg.simulate = !schedule_only;
  return lrfanout::run_experiment(cfg, std::cout, std::cerr);
}
