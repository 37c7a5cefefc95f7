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
#include "trustfuse/config.hpp"

#include <yaml-cpp/yaml.h>

namespace trustfuse {

namespace {

template <typename T>
void read(const YAML::Node& node, const std::string& section,
          const std::string& key, T& out) {
  const YAML::Node value = node[key];
  if (!value) return;
  try {
    out = value.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("invalid value for key '" + section + "." + key + "'");
  }
}

Eigen::Vector3d read_vec3(const YAML::Node& node, const std::string& section,
                          const std::string& key, Eigen::Vector3d fallback) {
  const YAML::Node value = node[key];
  if (!value) return fallback;
  if (!value.IsSequence() || value.size() != 3)
    throw ConfigError("key '" + section + "." + key +
                      "' must be a 3-element list");
  try {
    return Eigen::Vector3d(value[0].as<double>(), value[1].as<double>(),
                           value[2].as<double>());
  } catch (const YAML::Exception&) {
    throw ConfigError("invalid value for key '" + section + "." + key + "'");
  }
}

PriorLabel parse_prior(const std::string& s, const std::string& where) {
  if (s == "trusted") return PriorLabel::kTrusted;
  if (s == "neutral") return PriorLabel::kNeutral;
  if (s == "distrusted") return PriorLabel::kDistrusted;
  throw ConfigError("invalid value for key '" + where +
                    "': expected trusted|neutral|distrusted");
}

AttackSpec::Kind parse_attack_kind(const std::string& s,
                                   const std::string& where) {
  if (s == "false_positive") return AttackSpec::Kind::kFalsePositive;
  if (s == "false_negative") return AttackSpec::Kind::kFalseNegative;
  if (s == "translation") return AttackSpec::Kind::kTranslation;
  throw ConfigError(
      "invalid value for key '" + where +
      "': expected false_positive|false_negative|translation");
}

void load_scenario(const YAML::Node& root, ScenarioConfig& cfg) {
  const YAML::Node node = root["scenario"];
  if (node) {
    read(node, "scenario", "num_agents", cfg.num_agents);
    read(node, "scenario", "num_objects", cfg.num_objects);
    read(node, "scenario", "density", cfg.density);
    read(node, "scenario", "duration", cfg.duration);
    read(node, "scenario", "dt", cfg.dt);
    read(node, "scenario", "world_extent", cfg.world_extent);
    read(node, "scenario", "altitude_min", cfg.altitude_min);
    read(node, "scenario", "altitude_max", cfg.altitude_max);
    read(node, "scenario", "agent_speed_min", cfg.agent_speed_min);
    read(node, "scenario", "agent_speed_max", cfg.agent_speed_max);
    read(node, "scenario", "object_speed_min", cfg.object_speed_min);
    read(node, "scenario", "object_speed_max", cfg.object_speed_max);
    read(node, "scenario", "object_stationary_prob",
         cfg.object_stationary_prob);
    read(node, "scenario", "comm_range", cfg.comm_range);
    read(node, "scenario", "nominal_height", cfg.nominal_height);
    cfg.object_size_mean =
        read_vec3(node, "scenario", "object_size_mean", cfg.object_size_mean);
    cfg.object_size_spread = read_vec3(node, "scenario", "object_size_spread",
                                       cfg.object_size_spread);
    if (node["prior"])
      cfg.default_prior =
          parse_prior(node["prior"].as<std::string>(), "scenario.prior");

    const YAML::Node cam = node["camera"];
    if (cam) {
      double width = cfg.camera.nx, height = cfg.camera.ny;
      double fx = cfg.camera.fx, fy = cfg.camera.fy;
      read(cam, "scenario.camera", "width", width);
      read(cam, "scenario.camera", "height", height);
      read(cam, "scenario.camera", "focal", fx);
      fy = fx;
      read(cam, "scenario.camera", "focal_y", fy);
      cfg.camera = CameraIntrinsics::centered(width, height, fx, fy);
      if (!cfg.camera.valid())
        throw ConfigError("invalid values under key 'scenario.camera'");
    }
  }

  const YAML::Node noise = root["noise"];
  if (noise) {
    read(noise, "noise", "sigma_pos", cfg.noise.sigma_pos);
    read(noise, "noise", "sigma_size", cfg.noise.sigma_size);
    read(noise, "noise", "sigma_yaw", cfg.noise.sigma_yaw);
    read(noise, "noise", "natural_fp_rate", cfg.natural_fp_rate);
    read(noise, "noise", "natural_fn_prob", cfg.natural_fn_prob);
    read(noise, "noise", "clutter_persistence", cfg.clutter_persistence);
  }

  const YAML::Node attack = root["attack"];
  if (attack) {
    ScenarioConfig::Attack a;
    if (!attack["kind"]) throw ConfigError("missing key 'attack.kind'");
    a.kind =
        parse_attack_kind(attack["kind"].as<std::string>(), "attack.kind");
    read(attack, "attack", "attacked_fraction", a.attacked_fraction);
    read(attack, "attack", "victims", a.victims);
    read(attack, "attack", "start_time", a.start_time);
    read(attack, "attack", "fp_rate", a.fp_rate);
    read(attack, "attack", "fn_prob", a.fn_prob);
    a.translation_offset = read_vec3(attack, "attack", "translation_offset",
                                     a.translation_offset);
    cfg.attack = a;
  }
}

void load_pipeline(const YAML::Node& root, PipelineOptions& pipeline) {
  const YAML::Node node = root["pipeline"];
  if (node) {
    if (node["trust"]) {
      const std::string v = node["trust"].as<std::string>();
      if (v == "on")
        pipeline.trust_enabled = true;
      else if (v == "off")
        pipeline.trust_enabled = false;
      else
        throw ConfigError("invalid value for key 'pipeline.trust': on|off");
    }
    if (node["fusion"]) {
      const std::string v = node["fusion"].as<std::string>();
      if (v == "plain")
        pipeline.fusion_mode = FusionMode::kPlain;
      else if (v == "trust")
        pipeline.fusion_mode = FusionMode::kTrustWeighted;
      else
        throw ConfigError(
            "invalid value for key 'pipeline.fusion': plain|trust");
    }
    read(node, "pipeline", "tau_ignore", pipeline.trust.tau_ignore);
    read(node, "pipeline", "negativity_bias", pipeline.trust.negativity_bias);
    read(node, "pipeline", "negativity_threshold",
         pipeline.trust.negativity_threshold);
    read(node, "pipeline", "forgetting", pipeline.trust.forgetting);
    read(node, "pipeline", "fov_margin", pipeline.fov_trust_margin);
    read(node, "pipeline", "cluster_gate", pipeline.ddf.cluster_gate);
  }

  const YAML::Node tracker = root["tracker"];
  if (tracker) {
    read(tracker, "tracker", "q_accel", pipeline.tracker.q_accel);
    read(tracker, "tracker", "q_size", pipeline.tracker.q_size);
    read(tracker, "tracker", "q_yaw", pipeline.tracker.q_yaw);
    read(tracker, "tracker", "min_iou", pipeline.tracker.min_iou);
    read(tracker, "tracker", "confirm_hits", pipeline.tracker.confirm_hits);
    read(tracker, "tracker", "confirm_window",
         pipeline.tracker.confirm_window);
    read(tracker, "tracker", "delete_misses", pipeline.tracker.delete_misses);
  }
}

void load_metrics(const YAML::Node& root, MetricsConfig& metrics) {
  const YAML::Node node = root["metrics"];
  if (!node) return;
  read(node, "metrics", "assignment_gate", metrics.assignment_gate);
  read(node, "metrics", "ospa_cutoff", metrics.ospa_cutoff);
  read(node, "metrics", "ospa_order", metrics.ospa_order);
  if (node["ospa_variant"]) {
    const std::string v = node["ospa_variant"].as<std::string>();
    if (v == "paper")
      metrics.ospa_variant = OspaVariant::kPaper;
    else if (v == "standard")
      metrics.ospa_variant = OspaVariant::kStandard;
    else
      throw ConfigError(
          "invalid value for key 'metrics.ospa_variant': paper|standard");
  }
}

}  // namespace

SimConfig parse_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  SimConfig cfg;
  load_scenario(root, cfg.scenario);
  load_pipeline(root, cfg.pipeline);
  load_metrics(root, cfg.metrics);
  return cfg;
}

SimConfig load_config(const std::string& path) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(path);
  } catch (const YAML::BadFile&) {
    throw ConfigError("cannot open config file: " + path);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  SimConfig cfg;
  load_scenario(root, cfg.scenario);
  load_pipeline(root, cfg.pipeline);
  load_metrics(root, cfg.metrics);
  return cfg;
}

}  // namespace trustfuse
