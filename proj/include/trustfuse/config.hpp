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
#ifndef TRUSTFUSE_CONFIG_HPP
#define TRUSTFUSE_CONFIG_HPP

#include <stdexcept>
#include <string>

#include "trustfuse/metrics.hpp"
#include "trustfuse/scenario.hpp"

namespace trustfuse {

/// Raised on malformed configuration; the message names the offending key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything a run needs, as read from one YAML file.
struct SimConfig {
  ScenarioConfig scenario;
  PipelineOptions pipeline;
  MetricsConfig metrics;
};

SimConfig load_config(const std::string& path);
SimConfig parse_config(const std::string& yaml_text);

}  // namespace trustfuse

#endif  // TRUSTFUSE_CONFIG_HPP
