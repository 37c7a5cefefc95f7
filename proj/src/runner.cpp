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
#include "trustfuse/runner.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <thread>

#include <json.hpp>

#include "trustfuse/random.hpp"

namespace trustfuse {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

PipelineOptions variant_pipeline(const PipelineOptions& base, bool trust_on) {
  PipelineOptions p = base;
  p.trust_enabled = trust_on;
  p.fusion_mode = trust_on ? FusionMode::kTrustWeighted : FusionMode::kPlain;
  return p;
}

struct Stats {
  double mean = 0.0;
  double stddev = 0.0;
};

Stats stats_of(const std::vector<double>& xs) {
  Stats s;
  if (xs.empty()) return s;
  for (double x : xs) s.mean += x;
  s.mean /= xs.size();
  double var = 0.0;
  for (double x : xs) var += (x - s.mean) * (x - s.mean);
  s.stddev = xs.size() > 1 ? std::sqrt(var / (xs.size() - 1)) : 0.0;
  return s;
}

/// Dispatches [0, count) across a small worker pool; results land in
/// caller-indexed storage so merge order never depends on scheduling.
void parallel_for_index(int count, const std::function<void(int)>& work) {
  unsigned int pool = std::thread::hardware_concurrency();
  if (pool == 0) pool = 1;
  pool = std::min<unsigned int>(pool, static_cast<unsigned int>(count));
  if (pool <= 1) {
    for (int i = 0; i < count; ++i) work(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> threads;
  for (unsigned int w = 0; w < pool; ++w) {
    threads.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1))
        work(i);
    });
  }
  for (auto& t : threads) t.join();
}

}  // namespace

std::uint64_t manifest_digest(const RunManifest& manifest) {
  std::string canon = manifest.config_text;
  canon += "|seed=" + std::to_string(manifest.seed);
  canon += "|trials=" + std::to_string(manifest.trials);
  canon += manifest.trust_enabled ? "|trust=on" : "|trust=off";
  canon += manifest.fusion_mode == FusionMode::kTrustWeighted
               ? "|fusion=trust"
               : "|fusion=plain";
  canon += manifest.ospa_variant == OspaVariant::kPaper ? "|ospa=paper"
                                                        : "|ospa=standard";
  return fnv1a64(canon);
}

std::vector<TrialOutcome> run_trials(const SimConfig& config,
                                     const PipelineOptions& pipeline,
                                     std::uint64_t root_seed, int trials) {
  std::vector<TrialOutcome> out(trials);
  parallel_for_index(trials, [&](int trial) {
    const std::uint64_t scenario_seed =
        splitmix64(root_seed ^ (0x51ed270b8a03bca5ull * (trial + 1)));
    const Scenario scenario = generate_scenario(config.scenario, scenario_seed);
    MetricsCollector collector(config.metrics, scenario);
    run_episode(scenario, pipeline, collector);
    out[trial] = {trial, scenario_seed, collector.report()};
  });
  return out;
}

std::string frame_log_json(const FrameLog& log) {
  json j;
  j["t"] = log.t;
  j["truths"] = json::array();
  for (const ObjectState& obj : log.truths) {
    j["truths"].push_back(
        {{"id", obj.id},
         {"p", {obj.box.center.x(), obj.box.center.y(), obj.box.center.z()}},
         {"size", {obj.box.height, obj.box.width, obj.box.length}},
         {"yaw", obj.box.yaw}});
  }
  if (!log.fakes.empty()) {
    json fakes = json::object();
    for (const auto& [victim, positions] : log.fakes) {
      json list = json::array();
      for (const auto& p : positions) list.push_back({p.x(), p.y()});
      fakes[std::to_string(victim)] = std::move(list);
    }
    j["fakes"] = std::move(fakes);
  }
  j["agents"] = json::array();
  for (const AgentFrameLog& agent : log.agents) {
    json a;
    a["id"] = agent.agent_id;
    a["pose"] = {agent.pose.position.x(), agent.pose.position.y(),
                 agent.pose.position.z(), agent.pose.yaw};
    a["neighbors"] = agent.neighbors;
    a["packets"] = agent.packets_received;
    json dets = json::array();
    for (const Detection& d : agent.detections)
      dets.push_back({d.box.center.x(), d.box.center.y(), d.box.center.z()});
    a["detections"] = std::move(dets);
    json tracks = json::array();
    for (const Track& t : agent.local_tracks) {
      tracks.push_back({{"id", t.id},
                        {"p", {t.position().x(), t.position().y(),
                               t.position().z()}},
                        {"v", {t.velocity().x(), t.velocity().y(),
                               t.velocity().z()}}});
    }
    a["tracks"] = std::move(tracks);
    json fused = json::array();
    for (const FusedTrack& f : agent.fused) {
      json contrib = json::array();
      for (const auto& [id, w] : f.contributors) contrib.push_back({id, w});
      fused.push_back(
          {{"id", f.id},
           {"p", {f.position().x(), f.position().y(), f.position().z()}},
           {"flagged", f.flag == TrustFlag::kFlagged},
           {"zeta", f.fusion_confidence},
           {"contributors", std::move(contrib)}});
    }
    a["fused"] = std::move(fused);
    json agents_trust = json::object();
    for (const auto& [id, trust] : agent.trust.agents())
      agents_trust[std::to_string(id)] = {trust.alpha, trust.beta};
    json tracks_trust = json::object();
    for (const auto& [id, trust] : agent.trust.tracks())
      tracks_trust[std::to_string(id)] = {trust.alpha, trust.beta};
    a["trust"] = {{"agents", std::move(agents_trust)},
                  {"tracks", std::move(tracks_trust)}};
    j["agents"].push_back(std::move(a));
  }
  return j.dump();
}

std::string metrics_csv(const MetricReport& report, std::uint64_t digest,
                        std::uint64_t root_seed, int trial,
                        std::uint64_t scenario_seed) {
  std::string out;
  out += "# trustfuse metrics v1\n";
  out += "# manifest_digest=" + hex64(digest) +
         " seed=" + std::to_string(root_seed) +
         " trial=" + std::to_string(trial) +
         " scenario_seed=" + std::to_string(scenario_seed) + "\n";
  out +=
      "t,precision,recall,f1,ospa,track_trust_accuracy,agent_trust_accuracy,"
      "reported_tracks,truth_count\n";
  for (const MetricsRow& row : report.rows) {
    out += fmt(row.t) + "," + fmt(row.precision) + "," + fmt(row.recall) +
           "," + fmt(row.f1) + "," + fmt(row.ospa) + "," +
           fmt(row.track_trust_accuracy) + "," +
           fmt(row.agent_trust_accuracy) + "," +
           std::to_string(row.reported_tracks) + "," +
           std::to_string(row.truth_count) + "\n";
  }
  return out;
}

namespace {

json report_summary_json(const MetricReport& report) {
  return {{"mean_precision", report.mean_precision},
          {"mean_recall", report.mean_recall},
          {"mean_f1", report.mean_f1},
          {"mean_ospa", report.mean_ospa},
          {"final_track_trust_accuracy", report.final_track_trust_accuracy},
          {"final_agent_trust_accuracy", report.final_agent_trust_accuracy}};
}

class JsonlObserver : public FrameObserver {
 public:
  JsonlObserver(const std::string& path, std::uint64_t digest,
                std::uint64_t root_seed, int trial)
      : out_(path) {
    json head = {{"manifest_digest", hex64(digest)},
                 {"seed", root_seed},
                 {"trial", trial}};
    out_ << head.dump() << "\n";
  }
  void frame(const FrameLog& log) override {
    out_ << frame_log_json(log) << "\n";
  }

 private:
  std::ofstream out_;
};

class TeeObserver : public FrameObserver {
 public:
  TeeObserver(FrameObserver& a, FrameObserver& b) : a_(a), b_(b) {}
  void frame(const FrameLog& log) override {
    a_.frame(log);
    b_.frame(log);
  }

 private:
  FrameObserver& a_;
  FrameObserver& b_;
};

}  // namespace

int cmd_simulate(const RunManifest& manifest, const SimConfig& config) {
  namespace fs = std::filesystem;
  const std::uint64_t digest = manifest_digest(manifest);
  const fs::path out_dir(manifest.out_dir);
  const fs::path summary_path = out_dir / "summary.json";
  if (fs::exists(summary_path) && !manifest.force) {
    std::cerr << "error: " << summary_path.string()
              << " exists; pass --force to overwrite\n";
    return 1;
  }
  fs::create_directories(out_dir);

  PipelineOptions pipeline = config.pipeline;
  pipeline.trust_enabled = manifest.trust_enabled;
  pipeline.fusion_mode = manifest.fusion_mode;
  MetricsConfig metrics_cfg = config.metrics;
  metrics_cfg.ospa_variant = manifest.ospa_variant;

  std::vector<TrialOutcome> outcomes(manifest.trials);
  parallel_for_index(manifest.trials, [&](int trial) {
    const std::uint64_t scenario_seed = splitmix64(
        manifest.seed ^ (0x51ed270b8a03bca5ull * (trial + 1)));
    const Scenario scenario =
        generate_scenario(config.scenario, scenario_seed);
    MetricsCollector collector(metrics_cfg, scenario);

    char trial_name[32];
    std::snprintf(trial_name, sizeof(trial_name), "trial_%03d", trial);
    const fs::path trial_dir = out_dir / trial_name;
    fs::create_directories(trial_dir);

    if (manifest.write_frames) {
      JsonlObserver jsonl((trial_dir / "frames.jsonl").string(), digest,
                          manifest.seed, trial);
      TeeObserver tee(collector, jsonl);
      run_episode(scenario, pipeline, tee);
    } else {
      run_episode(scenario, pipeline, collector);
    }

    outcomes[trial] = {trial, scenario_seed, collector.report()};
    std::ofstream csv(trial_dir / "metrics.csv");
    csv << metrics_csv(outcomes[trial].report, digest, manifest.seed, trial,
                       scenario_seed);
  });

  json summary;
  summary["manifest_digest"] = hex64(digest);
  summary["seed"] = manifest.seed;
  summary["trials"] = manifest.trials;
  summary["trust"] = manifest.trust_enabled ? "on" : "off";
  summary["fusion"] =
      manifest.fusion_mode == FusionMode::kTrustWeighted ? "trust" : "plain";
  summary["per_trial"] = json::array();
  std::vector<double> f1s, precisions;
  for (const TrialOutcome& outcome : outcomes) {
    json t = report_summary_json(outcome.report);
    t["trial"] = outcome.trial;
    t["scenario_seed"] = outcome.scenario_seed;
    summary["per_trial"].push_back(std::move(t));
    f1s.push_back(outcome.report.mean_f1);
    precisions.push_back(outcome.report.mean_precision);
  }
  summary["aggregate"] = {{"f1_mean", stats_of(f1s).mean},
                          {"f1_std", stats_of(f1s).stddev},
                          {"precision_mean", stats_of(precisions).mean},
                          {"precision_std", stats_of(precisions).stddev}};
  std::ofstream out(summary_path);
  out << summary.dump(2) << "\n";
  std::cout << "wrote " << summary_path.string() << " ("
            << manifest.trials << " trials)\n";
  return 0;
}

std::vector<SweepCell> run_sweep(const SimConfig& config, SweepAxis axis,
                                 const std::vector<double>& values,
                                 std::uint64_t root_seed, int trials) {
  std::vector<SweepCell> cells;
  for (double value : values) {
    SimConfig cfg = config;
    if (axis == SweepAxis::kDensity) {
      cfg.scenario.density = value;
    } else {
      if (value <= 0.0) {
        cfg.scenario.attack.reset();
      } else {
        if (!cfg.scenario.attack.has_value())
          cfg.scenario.attack = ScenarioConfig::Attack{};
        cfg.scenario.attack->attacked_fraction = value;
        cfg.scenario.attack->victims.clear();
      }
    }
    for (bool trust_on : {false, true}) {
      const PipelineOptions pipeline =
          variant_pipeline(config.pipeline, trust_on);
      const std::vector<TrialOutcome> outcomes =
          run_trials(cfg, pipeline, root_seed, trials);

      std::vector<double> p, r, f1, d, ta, aa;
      for (const TrialOutcome& o : outcomes) {
        p.push_back(o.report.mean_precision);
        r.push_back(o.report.mean_recall);
        f1.push_back(o.report.mean_f1);
        d.push_back(o.report.mean_ospa);
        ta.push_back(o.report.final_track_trust_accuracy);
        aa.push_back(o.report.final_agent_trust_accuracy);
      }
      SweepCell cell;
      cell.value = value;
      cell.variant = trust_on ? "trust_on" : "trust_off";
      cell.precision_mean = stats_of(p).mean;
      cell.precision_std = stats_of(p).stddev;
      cell.recall_mean = stats_of(r).mean;
      cell.recall_std = stats_of(r).stddev;
      cell.f1_mean = stats_of(f1).mean;
      cell.f1_std = stats_of(f1).stddev;
      cell.ospa_mean = stats_of(d).mean;
      cell.ospa_std = stats_of(d).stddev;
      cell.track_acc_mean = stats_of(ta).mean;
      cell.track_acc_std = stats_of(ta).stddev;
      cell.agent_acc_mean = stats_of(aa).mean;
      cell.agent_acc_std = stats_of(aa).stddev;
      cells.push_back(cell);
    }
  }
  return cells;
}

std::string sweep_csv(const std::vector<SweepCell>& cells, SweepAxis axis,
                      std::uint64_t digest, std::uint64_t root_seed) {
  std::string out;
  out += "# trustfuse sweep v1\n";
  out += "# manifest_digest=" + hex64(digest) +
         " seed=" + std::to_string(root_seed) + "\n";
  out += std::string("axis,value,variant,") +
         "precision_mean,precision_std,recall_mean,recall_std,f1_mean,f1_std,"
         "ospa_mean,ospa_std,track_acc_mean,track_acc_std,agent_acc_mean,"
         "agent_acc_std\n";
  const std::string axis_name =
      axis == SweepAxis::kDensity ? "density" : "attacked_fraction";
  for (const SweepCell& c : cells) {
    out += axis_name + "," + fmt(c.value) + "," + c.variant + "," +
           fmt(c.precision_mean) + "," + fmt(c.precision_std) + "," +
           fmt(c.recall_mean) + "," + fmt(c.recall_std) + "," +
           fmt(c.f1_mean) + "," + fmt(c.f1_std) + "," + fmt(c.ospa_mean) +
           "," + fmt(c.ospa_std) + "," + fmt(c.track_acc_mean) + "," +
           fmt(c.track_acc_std) + "," + fmt(c.agent_acc_mean) + "," +
           fmt(c.agent_acc_std) + "\n";
  }
  return out;
}

int cmd_sweep(const RunManifest& manifest, const SimConfig& config,
              SweepAxis axis, const std::vector<double>& values) {
  namespace fs = std::filesystem;
  const std::uint64_t digest = manifest_digest(manifest);
  const fs::path out_dir(manifest.out_dir);
  const fs::path table_path = out_dir / "sweep.csv";
  if (fs::exists(table_path) && !manifest.force) {
    std::cerr << "error: " << table_path.string()
              << " exists; pass --force to overwrite\n";
    return 1;
  }
  fs::create_directories(out_dir);

  SimConfig effective = config;
  effective.metrics.ospa_variant = manifest.ospa_variant;
  const std::vector<SweepCell> cells =
      run_sweep(effective, axis, values, manifest.seed, manifest.trials);
  std::ofstream out(table_path);
  out << sweep_csv(cells, axis, digest, manifest.seed);
  std::cout << "wrote " << table_path.string() << " (" << cells.size()
            << " rows)\n";
  return 0;
}

}  // namespace trustfuse
