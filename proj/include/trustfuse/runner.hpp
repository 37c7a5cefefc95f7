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
#ifndef TRUSTFUSE_RUNNER_HPP
#define TRUSTFUSE_RUNNER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "trustfuse/config.hpp"
#include "trustfuse/metrics.hpp"
#include "trustfuse/scenario.hpp"

namespace trustfuse {

/// Everything that determines a run's outputs. The digest of the manifest
/// (config text plus effective toggles) is embedded in every output file so
/// results always point back to their inputs.
struct RunManifest {
  std::string config_text;
  std::uint64_t seed = 0;
  int trials = 1;
  bool trust_enabled = true;
  FusionMode fusion_mode = FusionMode::kTrustWeighted;
  OspaVariant ospa_variant = OspaVariant::kStandard;
  std::string out_dir;
  bool force = false;
  bool write_frames = true;
};

std::uint64_t manifest_digest(const RunManifest& manifest);

struct TrialOutcome {
  int trial = 0;
  std::uint64_t scenario_seed = 0;
  MetricReport report;
};

/// Runs `trials` independent seeded episodes of the configured scenario
/// under the given pipeline, dispatching them across a worker pool and
/// merging results by trial index. Fully deterministic for a fixed
/// (config, pipeline, seed, trials).
std::vector<TrialOutcome> run_trials(const SimConfig& config,
                                     const PipelineOptions& pipeline,
                                     std::uint64_t root_seed, int trials);

/// Per-trial frame observer factory used by cmd_simulate for JSONL logs.
std::string frame_log_json(const FrameLog& log);

/// Formats the per-frame metric table; byte-stable across reruns.
std::string metrics_csv(const MetricReport& report, std::uint64_t digest,
                        std::uint64_t root_seed, int trial,
                        std::uint64_t scenario_seed);

/// The `simulate` command: runs trials, writes per-trial metrics.csv (and
/// frames.jsonl when requested) plus a summary.json under out_dir. Refuses
/// to overwrite an existing summary unless force is set. Returns the
/// process exit code.
int cmd_simulate(const RunManifest& manifest, const SimConfig& config);

enum class SweepAxis { kDensity, kAttackedFraction };

struct SweepCell {
  double value = 0.0;
  std::string variant;  // "trust_off" or "trust_on"
  double precision_mean = 0.0, precision_std = 0.0;
  double recall_mean = 0.0, recall_std = 0.0;
  double f1_mean = 0.0, f1_std = 0.0;
  double ospa_mean = 0.0, ospa_std = 0.0;
  double track_acc_mean = 0.0, track_acc_std = 0.0;
  double agent_acc_mean = 0.0, agent_acc_std = 0.0;
};

/// Monte Carlo sweep over one axis: for each value, both pipeline variants
/// run on identical scenario seeds (paired trials).
std::vector<SweepCell> run_sweep(const SimConfig& config, SweepAxis axis,
                                 const std::vector<double>& values,
                                 std::uint64_t root_seed, int trials);

std::string sweep_csv(const std::vector<SweepCell>& cells, SweepAxis axis,
                      std::uint64_t digest, std::uint64_t root_seed);

/// The `sweep` command. Returns the process exit code.
int cmd_sweep(const RunManifest& manifest, const SimConfig& config,
              SweepAxis axis, const std::vector<double>& values);

}  // namespace trustfuse

#endif  // TRUSTFUSE_RUNNER_HPP
