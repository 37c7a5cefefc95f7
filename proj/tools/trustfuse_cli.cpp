/*
 * Copyright 2025 The TrustFuse Authors. All rights reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "trustfuse/config.hpp"
#include "trustfuse/runner.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::uint64_t seed = 0;
  int trials = 1;
  std::string trust = "on";
  std::string fusion;
  std::string ospa_variant = "standard";
  std::string out_dir;
  bool force = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "scenario/pipeline YAML file")
      ->required();
  cmd->add_option("--seed", args.seed, "root seed");
  cmd->add_option("--trials", args.trials, "number of Monte Carlo trials")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--trust", args.trust, "trust estimation: on|off")
      ->check(CLI::IsMember({"on", "off"}));
  cmd->add_option("--fusion", args.fusion,
                  "fusion mode: plain|trust (default follows --trust)")
      ->check(CLI::IsMember({"plain", "trust"}));
  cmd->add_option("--ospa-variant", args.ospa_variant,
                  "OSPA formula: paper|standard")
      ->check(CLI::IsMember({"paper", "standard"}));
  cmd->add_option("--out", args.out_dir, "output directory")->required();
  cmd->add_flag("--force", args.force, "overwrite existing outputs");
}

int build_manifest(const CommonArgs& args, trustfuse::RunManifest& manifest,
                   trustfuse::SimConfig& config) {
  std::ifstream in(args.config_path);
  if (!in) {
    std::cerr << "error: cannot open config file: " << args.config_path
              << "\n";
    return 1;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  manifest.config_text = buffer.str();

  try {
    config = trustfuse::parse_config(manifest.config_text);
  } catch (const trustfuse::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  manifest.seed = args.seed;
  manifest.trials = args.trials;
  manifest.trust_enabled = args.trust == "on";
  if (args.fusion.empty()) {
    manifest.fusion_mode = manifest.trust_enabled
                               ? trustfuse::FusionMode::kTrustWeighted
                               : trustfuse::FusionMode::kPlain;
  } else {
    manifest.fusion_mode = args.fusion == "trust"
                               ? trustfuse::FusionMode::kTrustWeighted
                               : trustfuse::FusionMode::kPlain;
  }
  manifest.ospa_variant = args.ospa_variant == "paper"
                              ? trustfuse::OspaVariant::kPaper
                              : trustfuse::OspaVariant::kStandard;
  manifest.out_dir = args.out_dir;
  manifest.force = args.force;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "trustfuse: trust-based assured distributed data fusion simulator"};
  app.require_subcommand(1);

  CommonArgs sim_args;
  bool no_frames = false;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "run seeded episodes and write frame logs plus metrics");
  add_common(simulate, sim_args);
  simulate->add_flag("--no-frames", no_frames,
                     "skip the per-frame JSONL logs (metrics only)");

  CommonArgs sweep_args;
  std::string axis = "density";
  std::vector<double> values;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Monte Carlo sweep over density or attacked fraction");
  add_common(sweep, sweep_args);
  sweep->add_option("--axis", axis, "sweep axis")
      ->check(CLI::IsMember({"density", "attacked_fraction"}));
  sweep->add_option("--values", values, "axis values in [0, 1]")
      ->required()
      ->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      trustfuse::RunManifest manifest;
      trustfuse::SimConfig config;
      if (int rc = build_manifest(sim_args, manifest, config); rc != 0)
        return rc;
      manifest.write_frames = !no_frames;
      return trustfuse::cmd_simulate(manifest, config);
    }
    if (sweep->parsed()) {
      for (double v : values) {
        if (v < 0.0 || v > 1.0) {
          std::cerr << "error: --values entries must lie in [0, 1]\n";
          return 1;
        }
      }
      trustfuse::RunManifest manifest;
      trustfuse::SimConfig config;
      if (int rc = build_manifest(sweep_args, manifest, config); rc != 0)
        return rc;
      const auto sweep_axis = axis == "density"
                                  ? trustfuse::SweepAxis::kDensity
                                  : trustfuse::SweepAxis::kAttackedFraction;
      return trustfuse::cmd_sweep(manifest, config, sweep_axis, values);
    }
  } catch (const trustfuse::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
