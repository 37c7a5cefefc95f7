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
#ifndef TRUSTFUSE_METRICS_HPP
#define TRUSTFUSE_METRICS_HPP

#include <Eigen/Core>
#include <set>
#include <span>
#include <vector>

#include "trustfuse/scenario.hpp"
#include "trustfuse/trust.hpp"

namespace trustfuse {

struct PrecisionRecall {
  int tp = 0;
  int fp = 0;
  int fn = 0;
  double precision = 1.0;  ///< 1 by convention when nothing is reported
  double recall = 1.0;     ///< 1 by convention when nothing exists
  double f1 = 0.0;
};

/// Distance-gated bipartite matching of reported positions against truths;
/// matches are true positives, leftover reports false positives, leftover
/// truths false negatives.
PrecisionRecall assignment_metrics(std::span<const Eigen::Vector3d> reported,
                                   std::span<const Eigen::Vector3d> truths,
                                   double gate);

enum class OspaVariant { kPaper, kStandard };

/// Optimal sub-pattern assignment distance. The standard variant is the
/// Schuhmacher metric (cutoff c, order p). The paper variant follows the
/// printed formula: per-assignment cost plus a c-weighted unassigned term,
/// all raised to p and scaled by the smaller cardinality, plus an outer
/// cardinality penalty c^p * (m - n) taken as nonnegative.
double ospa(std::span<const Eigen::Vector3d> tracks,
            std::span<const Eigen::Vector3d> truths, double cutoff,
            double order, OspaVariant variant);

/// CDF-area distance between an estimated Beta trust and a binary target,
/// reduced to closed form: E for a distrusted/false target, 1 - E otherwise.
double trust_distance(const BetaTrust& estimate, bool target_trusted);

struct TrustAccuracy {
  double track_accuracy = 1.0;
  double agent_accuracy = 1.0;
  int track_count = 0;
  int agent_count = 0;
  int unlabeled = 0;  ///< entries without an oracle label, excluded
};

struct MetricsConfig {
  double assignment_gate = 2.0;  ///< m
  double ospa_cutoff = 10.0;     ///< m
  double ospa_order = 1.0;
  OspaVariant ospa_variant = OspaVariant::kStandard;
};

struct MetricsRow {
  double t = 0.0;
  double precision = 1.0;
  double recall = 1.0;
  double f1 = 0.0;
  double ospa = 0.0;
  double track_trust_accuracy = 1.0;
  double agent_trust_accuracy = 1.0;
  int reported_tracks = 0;
  int truth_count = 0;
};

struct MetricReport {
  std::vector<MetricsRow> rows;

  double mean_precision = 0.0;
  double mean_recall = 0.0;
  double mean_f1 = 0.0;
  double mean_ospa = 0.0;
  double final_track_trust_accuracy = 1.0;
  double final_agent_trust_accuracy = 1.0;

  /// Mean of a row field over frames with t in [t0, t1).
  double window_mean(double MetricsRow::* field, double t0, double t1) const;
};

/// Streams episode frames into per-frame metric rows (averaged over egos)
/// plus episode aggregates. Flagged fused tracks are excluded from the
/// reported set; trust accuracies label agents by the scenario's victim set
/// and tracks by gated truth assignment.
class MetricsCollector : public FrameObserver {
 public:
  MetricsCollector(const MetricsConfig& cfg, const Scenario& scenario);

  void frame(const FrameLog& log) override;

  MetricReport report() const;

 private:
  MetricsConfig cfg_;
  std::set<int> victims_;
  std::vector<MetricsRow> rows_;
};

/// Trust accuracy over one ego's store snapshot against oracle labels.
TrustAccuracy trust_accuracy(const TrustStore& store,
                             const std::set<int>& distrusted_agents,
                             const std::vector<FusedTrack>& fused,
                             std::span<const Eigen::Vector3d> truths,
                             double gate);

}  // namespace trustfuse

#endif  // TRUSTFUSE_METRICS_HPP
