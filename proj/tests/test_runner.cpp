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
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "trustfuse/config.hpp"
#include "trustfuse/runner.hpp"

using namespace trustfuse;

namespace {

const char* kMinimalYaml = R"(
scenario:
  num_agents: 2
  num_objects: 4
  duration: 4.0
  world_extent: 120.0
  comm_range: 400.0
noise:
  sigma_pos: 0.4
pipeline:
  trust: on
  fusion: trust
metrics:
  ospa_cutoff: 8.0
)";

std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("config parsing") {
  SUBCASE("values land where they should") {
    const SimConfig cfg = parse_config(kMinimalYaml);
    CHECK(cfg.scenario.num_agents == 2);
    CHECK(cfg.scenario.num_objects == 4);
    CHECK(cfg.scenario.duration == 4.0);
    CHECK(cfg.scenario.noise.sigma_pos == 0.4);
    CHECK(cfg.pipeline.trust_enabled);
    CHECK(cfg.pipeline.fusion_mode == FusionMode::kTrustWeighted);
    CHECK(cfg.metrics.ospa_cutoff == 8.0);
  }

  SUBCASE("defaults survive an empty document") {
    const SimConfig cfg = parse_config("{}");
    CHECK(cfg.scenario.num_agents == 10);
    CHECK(cfg.scenario.dt == 0.1);
    CHECK(cfg.pipeline.trust.negativity_bias == 4.0);
  }

  SUBCASE("diagnostics name the offending key") {
    try {
      parse_config("scenario:\n  num_agents: lots\n");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("scenario.num_agents") !=
            std::string::npos);
    }
    try {
      parse_config("pipeline:\n  trust: maybe\n");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("pipeline.trust") != std::string::npos);
    }
    try {
      parse_config("attack:\n  fp_rate: 3\n");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("attack.kind") != std::string::npos);
    }
  }

  SUBCASE("attack section round trip") {
    const SimConfig cfg = parse_config(
        "attack:\n  kind: false_positive\n  attacked_fraction: 0.3\n"
        "  start_time: 5.0\n  fp_rate: 3.0\n");
    REQUIRE(cfg.scenario.attack.has_value());
    CHECK(cfg.scenario.attack->attacked_fraction == 0.3);
    CHECK(cfg.scenario.attack->fp_rate == 3.0);
  }
}

TEST_CASE("manifest digest separates distinct runs") {
  RunManifest a;
  a.config_text = kMinimalYaml;
  a.seed = 1;
  RunManifest b = a;
  CHECK(manifest_digest(a) == manifest_digest(b));
  b.seed = 2;
  CHECK(manifest_digest(a) != manifest_digest(b));
  b = a;
  b.trust_enabled = false;
  CHECK(manifest_digest(a) != manifest_digest(b));
  b = a;
  b.config_text += "\n# comment";
  CHECK(manifest_digest(a) != manifest_digest(b));
}

TEST_CASE("metric tables are byte-identical across reruns") {
  const SimConfig cfg = parse_config(kMinimalYaml);
  const auto first = run_trials(cfg, cfg.pipeline, 7, 2);
  const auto second = run_trials(cfg, cfg.pipeline, 7, 2);
  REQUIRE(first.size() == 2);
  for (int i = 0; i < 2; ++i) {
    const std::string csv_a =
        metrics_csv(first[i].report, 1, 7, i, first[i].scenario_seed);
    const std::string csv_b =
        metrics_csv(second[i].report, 1, 7, i, second[i].scenario_seed);
    CHECK(csv_a == csv_b);
    CHECK(csv_a.find("# manifest_digest=") != std::string::npos);
  }
  // Different trials use different scenario seeds.
  CHECK(first[0].scenario_seed != first[1].scenario_seed);
}

TEST_CASE("simulate command writes provenance-stamped outputs") {
  const auto dir = temp_dir("trustfuse_sim_test");
  RunManifest manifest;
  manifest.config_text = kMinimalYaml;
  manifest.seed = 3;
  manifest.trials = 2;
  manifest.out_dir = dir.string();
  manifest.write_frames = true;
  const SimConfig cfg = parse_config(manifest.config_text);

  REQUIRE(cmd_simulate(manifest, cfg) == 0);
  CHECK(std::filesystem::exists(dir / "summary.json"));
  CHECK(std::filesystem::exists(dir / "trial_000" / "metrics.csv"));
  CHECK(std::filesystem::exists(dir / "trial_001" / "metrics.csv"));
  CHECK(std::filesystem::exists(dir / "trial_000" / "frames.jsonl"));

  // Refuses to clobber without --force.
  CHECK(cmd_simulate(manifest, cfg) == 1);
  manifest.force = true;
  CHECK(cmd_simulate(manifest, cfg) == 0);

  // The digest is stamped into the CSV.
  std::ifstream csv(dir / "trial_000" / "metrics.csv");
  std::string line1, line2;
  std::getline(csv, line1);
  std::getline(csv, line2);
  CHECK(line1 == "# trustfuse metrics v1");
  CHECK(line2.find("manifest_digest=") != std::string::npos);
  CHECK(line2.find("seed=3") != std::string::npos);

  std::filesystem::remove_all(dir);
}

TEST_CASE("sweep produces one row per value and variant") {
  SimConfig cfg = parse_config(kMinimalYaml);
  cfg.scenario.duration = 2.0;
  const std::vector<double> values = {0.5, 1.0};
  const auto cells = run_sweep(cfg, SweepAxis::kDensity, values, 11, 2);
  REQUIRE(cells.size() == 4);  // 2 values x {trust_off, trust_on}
  CHECK(cells[0].value == 0.5);
  CHECK(cells[0].variant == "trust_off");
  CHECK(cells[1].variant == "trust_on");
  CHECK(cells[2].value == 1.0);

  const std::string csv = sweep_csv(cells, SweepAxis::kDensity, 1, 11);
  CHECK(csv.find("axis,value,variant") != std::string::npos);
  CHECK(csv.find("density,0.5,trust_off") != std::string::npos);

  // Rerun reproduces the identical table.
  const auto cells2 = run_sweep(cfg, SweepAxis::kDensity, values, 11, 2);
  CHECK(sweep_csv(cells2, SweepAxis::kDensity, 1, 11) == csv);
}
