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
#include "trustfuse/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "trustfuse/assignment.hpp"

namespace trustfuse {

PrecisionRecall assignment_metrics(std::span<const Eigen::Vector3d> reported,
                                   std::span<const Eigen::Vector3d> truths,
                                   double gate) {
  Eigen::MatrixXd cost(reported.size(), truths.size());
  for (std::size_t i = 0; i < reported.size(); ++i)
    for (std::size_t j = 0; j < truths.size(); ++j)
      cost(i, j) = (reported[i] - truths[j]).norm();
  const AssignmentResult assoc = solve_assignment(cost, gate);

  PrecisionRecall out;
  out.tp = static_cast<int>(assoc.matches.size());
  out.fp = static_cast<int>(assoc.unmatched_rows.size());
  out.fn = static_cast<int>(assoc.unmatched_cols.size());
  out.precision = out.tp + out.fp == 0
                      ? 1.0
                      : static_cast<double>(out.tp) / (out.tp + out.fp);
  out.recall = out.tp + out.fn == 0
                   ? 1.0
                   : static_cast<double>(out.tp) / (out.tp + out.fn);
  out.f1 = out.precision + out.recall == 0.0
               ? 0.0
               : 2.0 * out.precision * out.recall /
                     (out.precision + out.recall);
  return out;
}

double ospa(std::span<const Eigen::Vector3d> tracks,
            std::span<const Eigen::Vector3d> truths, double cutoff,
            double order, OspaVariant variant) {
  const int nt = static_cast<int>(tracks.size());
  const int ng = static_cast<int>(truths.size());
  const int n = std::min(nt, ng);
  const int m = std::max(nt, ng);
  if (m == 0) return 0.0;

  if (variant == OspaVariant::kStandard) {
    if (n == 0) return cutoff;
    Eigen::MatrixXd cost(nt, ng);
    for (int i = 0; i < nt; ++i)
      for (int j = 0; j < ng; ++j)
        cost(i, j) =
            std::pow(std::min((tracks[i] - truths[j]).norm(), cutoff), order);
    const AssignmentResult assoc =
        solve_assignment(cost, std::numeric_limits<double>::max());
    const double body =
        (assoc.total_cost() + std::pow(cutoff, order) * (m - n)) / m;
    return std::pow(body, 1.0 / order);
  }

  // Paper variant: gated assignment at the cutoff; |A-bar| is the smaller of
  // the unassigned counts.
  if (n == 0) return std::pow(cutoff, order) * m;
  Eigen::MatrixXd cost(nt, ng);
  for (int i = 0; i < nt; ++i)
    for (int j = 0; j < ng; ++j) cost(i, j) = (tracks[i] - truths[j]).norm();
  const AssignmentResult assoc = solve_assignment(cost, cutoff);
  const int unassigned = n - static_cast<int>(assoc.matches.size());
  const double inner = assoc.total_cost() + cutoff * unassigned;
  return std::pow(inner, order) / n + std::pow(cutoff, order) * (m - n);
}

double trust_distance(const BetaTrust& estimate, bool target_trusted) {
  return target_trusted ? 1.0 - estimate.mean() : estimate.mean();
}

TrustAccuracy trust_accuracy(const TrustStore& store,
                             const std::set<int>& distrusted_agents,
                             const std::vector<FusedTrack>& fused,
                             std::span<const Eigen::Vector3d> truths,
                             double gate) {
  TrustAccuracy out;

  double agent_distance = 0.0;
  for (const auto& [agent_id, trust] : store.agents()) {
    agent_distance +=
        trust_distance(trust, !distrusted_agents.contains(agent_id));
    ++out.agent_count;
  }
  out.agent_accuracy =
      out.agent_count == 0 ? 1.0 : 1.0 - agent_distance / out.agent_count;

  // Oracle labels for tracks: positively assigned to a truth within the gate.
  std::vector<Eigen::Vector3d> positions;
  std::vector<int> fused_ids;
  for (const FusedTrack& f : fused) {
    positions.push_back(f.position());
    fused_ids.push_back(f.id);
  }
  Eigen::MatrixXd cost(positions.size(), truths.size());
  for (std::size_t i = 0; i < positions.size(); ++i)
    for (std::size_t j = 0; j < truths.size(); ++j)
      cost(i, j) = (positions[i] - truths[j]).norm();
  const AssignmentResult assoc = solve_assignment(cost, gate);
  std::set<int> matched_ids;
  for (const auto& match : assoc.matches)
    matched_ids.insert(fused_ids[match.row]);
  std::set<int> present_ids(fused_ids.begin(), fused_ids.end());

  double track_distance = 0.0;
  for (const auto& [track_id, trust] : store.tracks()) {
    if (!present_ids.contains(track_id)) {
      ++out.unlabeled;
      continue;
    }
    track_distance += trust_distance(trust, matched_ids.contains(track_id));
    ++out.track_count;
  }
  out.track_accuracy =
      out.track_count == 0 ? 1.0 : 1.0 - track_distance / out.track_count;
  return out;
}

MetricsCollector::MetricsCollector(const MetricsConfig& cfg,
                                   const Scenario& scenario)
    : cfg_(cfg) {
  if (scenario.attack.has_value()) victims_ = scenario.attack->victims;
}

void MetricsCollector::frame(const FrameLog& log) {
  MetricsRow row;
  row.t = log.t;

  std::vector<Eigen::Vector3d> truths;
  for (const ObjectState& obj : log.truths) truths.push_back(obj.box.center);
  row.truth_count = static_cast<int>(truths.size());

  const int n = static_cast<int>(log.agents.size());
  if (n == 0) {
    rows_.push_back(row);
    return;
  }

  double precision = 0.0, recall = 0.0, f1 = 0.0, dist = 0.0;
  double track_acc = 0.0, agent_acc = 0.0;
  int track_acc_count = 0, agent_acc_count = 0;
  int reported_total = 0;
  for (const AgentFrameLog& agent : log.agents) {
    std::vector<Eigen::Vector3d> reported;
    for (const FusedTrack& f : agent.fused)
      if (f.flag == TrustFlag::kRetained) reported.push_back(f.position());
    reported_total += static_cast<int>(reported.size());

    const PrecisionRecall pr =
        assignment_metrics(reported, truths, cfg_.assignment_gate);
    precision += pr.precision;
    recall += pr.recall;
    f1 += pr.f1;
    dist += ospa(reported, truths, cfg_.ospa_cutoff, cfg_.ospa_order,
                 cfg_.ospa_variant);

    const TrustAccuracy acc = trust_accuracy(agent.trust, victims_,
                                             agent.fused, truths,
                                             cfg_.assignment_gate);
    if (acc.agent_count > 0) {
      agent_acc += acc.agent_accuracy;
      ++agent_acc_count;
    }
    if (acc.track_count > 0) {
      track_acc += acc.track_accuracy;
      ++track_acc_count;
    }
  }
  row.precision = precision / n;
  row.recall = recall / n;
  row.f1 = f1 / n;
  row.ospa = dist / n;
  row.agent_trust_accuracy =
      agent_acc_count > 0 ? agent_acc / agent_acc_count : 1.0;
  row.track_trust_accuracy =
      track_acc_count > 0 ? track_acc / track_acc_count : 1.0;
  row.reported_tracks = reported_total;
  rows_.push_back(row);
}

double MetricReport::window_mean(double MetricsRow::* field, double t0,
                                 double t1) const {
  double sum = 0.0;
  int count = 0;
  for (const MetricsRow& row : rows) {
    if (row.t >= t0 && row.t < t1) {
      sum += row.*field;
      ++count;
    }
  }
  return count == 0 ? 0.0 : sum / count;
}

MetricReport MetricsCollector::report() const {
  MetricReport out;
  out.rows = rows_;
  if (rows_.empty()) return out;
  for (const MetricsRow& row : rows_) {
    out.mean_precision += row.precision;
    out.mean_recall += row.recall;
    out.mean_f1 += row.f1;
    out.mean_ospa += row.ospa;
  }
  const double n = static_cast<double>(rows_.size());
  out.mean_precision /= n;
  out.mean_recall /= n;
  out.mean_f1 /= n;
  out.mean_ospa /= n;
  out.final_track_trust_accuracy = rows_.back().track_trust_accuracy;
  out.final_agent_trust_accuracy = rows_.back().agent_trust_accuracy;
  return out;
}

}  // namespace trustfuse
