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
#ifndef TRUSTFUSE_DDF_HPP
#define TRUSTFUSE_DDF_HPP

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <map>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "trustfuse/tracking.hpp"
#include "trustfuse/trust.hpp"

namespace trustfuse {

// Inter-agent fusion operates on the transmitted 7-dim block
// [p_x p_y p_z v_x v_y v_z theta]; box size stays platform-local.
inline constexpr int kFusedDim = 7;
using FusedVector = Eigen::Matrix<double, kFusedDim, 1>;
using FusedMatrix = Eigen::Matrix<double, kFusedDim, kFusedDim>;

namespace detail {

template <typename Mat>
double log_det_llt(const Eigen::LLT<Mat>& llt) {
  double s = 0.0;
  const auto& l = llt.matrixLLT();
  for (Eigen::Index i = 0; i < l.rows(); ++i) s += std::log(l(i, i));
  return 2.0 * s;
}

template <typename Mat>
Mat pd_inverse(const Mat& m, const char* what) {
  Eigen::LLT<Mat> llt(m);
  if (llt.info() != Eigen::Success) throw std::runtime_error(what);
  return llt.solve(Mat::Identity(m.rows(), m.cols()));
}

}  // namespace detail

template <typename Vec, typename Mat>
struct CiFused {
  Vec mean;
  Mat covariance;
  double omega = 0.5;
};

/// Pairwise covariance intersection. The convex weight is chosen by
/// golden-section search to minimize det(Sigma_CI); the determinant is
/// convex in omega, so the search finds the global optimum. Inputs must be
/// symmetric positive definite (throws std::runtime_error otherwise).
template <typename Vec, typename Mat>
CiFused<Vec, Mat> ci_pairwise(const Vec& mean1, const Mat& cov1,
                              const Vec& mean2, const Mat& cov2,
                              double omega_tol = 1e-4) {
  const Mat info1 = detail::pd_inverse(cov1, "ci_pairwise: cov1 not PD");
  const Mat info2 = detail::pd_inverse(cov2, "ci_pairwise: cov2 not PD");

  // det(Sigma_CI) = 1 / det(w*I1 + (1-w)*I2): maximize log det of the
  // information blend.
  const auto neg_log_det = [&](double w) {
    const Mat blend = w * info1 + (1.0 - w) * info2;
    Eigen::LLT<Mat> llt(blend);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("ci_pairwise: information blend not PD");
    return -detail::log_det_llt(llt);
  };

  constexpr double kInvPhi = 0.6180339887498949;
  double a = 0.0, b = 1.0;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = neg_log_det(x1);
  double f2 = neg_log_det(x2);
  while (b - a > omega_tol) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = neg_log_det(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = neg_log_det(x2);
    }
  }
  const double omega = (a + b) / 2.0;

  CiFused<Vec, Mat> out;
  out.omega = omega;
  const Mat blend = omega * info1 + (1.0 - omega) * info2;
  out.covariance = detail::pd_inverse(blend, "ci_pairwise: fused cov not PD");
  out.mean = out.covariance *
             (omega * (info1 * mean1) + (1.0 - omega) * (info2 * mean2));
  return out;
}

template <typename Vec, typename Mat>
struct TrustFused {
  Vec mean;
  Mat covariance;
  double confidence = 0.0;           ///< trust-variance aggregate zeta
  std::vector<double> weights;       ///< normalized, ordered as the inputs
};

/// N-fold trust-weighted covariance intersection: information matrices are
/// blended with weights proportional to each source's expected trust, and
/// the fusion confidence aggregates the trust variances under the same
/// weights. Requires n >= 1 and positive total expected trust.
template <typename Vec, typename Mat>
TrustFused<Vec, Mat> ci_trust_weighted(std::span<const Vec> means,
                                       std::span<const Mat> covs,
                                       std::span<const BetaTrust> trusts) {
  const std::size_t n = means.size();
  if (n == 0 || covs.size() != n || trusts.size() != n)
    throw std::invalid_argument("ci_trust_weighted: bad input sizes");

  TrustFused<Vec, Mat> out;
  out.weights.resize(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out.weights[i] = trusts[i].mean();
    total += out.weights[i];
  }
  if (!(total > 0.0))
    throw std::runtime_error("ci_trust_weighted: no informative source");
  for (double& w : out.weights) w /= total;

  Mat blend = out.weights[0] *
              detail::pd_inverse(covs[0], "ci_trust_weighted: cov not PD");
  Vec info_mean = blend * means[0];
  out.confidence = out.weights[0] * trusts[0].variance();
  for (std::size_t i = 1; i < n; ++i) {
    const Mat info =
        detail::pd_inverse(covs[i], "ci_trust_weighted: cov not PD");
    blend += out.weights[i] * info;
    info_mean += out.weights[i] * (info * means[i]);
    out.confidence += out.weights[i] * trusts[i].variance();
  }
  out.covariance =
      detail::pd_inverse(blend, "ci_trust_weighted: fused cov not PD");
  out.mean = out.covariance * info_mean;
  return out;
}

/// Rigid planar transform taking a track expressed in the source agent's
/// reference frame into the ego agent's frame. The poses are the agents'
/// frame origins expressed in a common world frame; agents sharing one
/// origin make this the identity. Covariance blocks rotate consistently.
Track register_track(const Track& track, const AgentPose& source_frame,
                     const AgentPose& ego_frame);

enum class FusionMode { kPlain, kTrustWeighted };
enum class TrustFlag { kRetained, kFlagged };

/// One entry of the ego's synthesized operating picture.
struct FusedTrack {
  int id = -1;
  Track track;
  std::vector<std::pair<int, double>> contributors;  ///< (agent id, weight)
  double fusion_confidence = 0.0;
  TrustFlag flag = TrustFlag::kRetained;

  Eigen::Vector3d position() const { return track.position(); }
};

struct RemoteTrackSet {
  int agent_id = -1;
  std::vector<Track> tracks;  ///< registered to the ego frame
};

struct DdfConfig {
  double cluster_gate = 4.0;  ///< m, cross-agent track clustering
  double omega_tol = 1e-4;
  /// Ego contributions enter trust-weighted fusion with this prior; the ego
  /// does not estimate its own trust.
  BetaTrust self_trust{10.0, 1.0};
};

/// Stable fused-track identities across frames. Ego-seeded entries key on
/// the ego track id; entries seeded by a proximal track key on (agent,
/// remote track id). Unreferenced keys are retired at end_frame so ids are
/// never reused for unrelated tracks.
class FusedIdRegistry {
 public:
  void begin_frame();
  int ego_id(int ego_track_id);
  int remote_id(int agent_id, int remote_track_id);
  void end_frame();

 private:
  std::map<int, std::pair<int, bool>> ego_map_;  // track id -> (fused id, seen)
  std::map<std::pair<int, int>, std::pair<int, bool>> remote_map_;
  int next_id_ = 0;
};

/// Cascaded distributed fusion. The fused set starts as the ego's local
/// tracks; each proximal agent's tracks are clustered against it by position
/// (gated assignment) and matched clusters are fused -- pairwise CI in plain
/// mode, jointly via trust-weighted CI in trust mode. Unmatched proximal
/// tracks start new fused entries. Contributor weights always sum to one.
/// With a trust store, fusion_confidence aggregates contributor trust
/// variances; without one it is zero.
std::vector<FusedTrack> cascaded_fuse(int ego_agent_id,
                                      const std::vector<Track>& ego_tracks,
                                      const std::vector<RemoteTrackSet>& proximal,
                                      const TrustStore* trust, FusionMode mode,
                                      const DdfConfig& cfg,
                                      FusedIdRegistry& registry);

/// Flags fused tracks whose expected trust falls below tau_ignore. Flagged
/// tracks stay in the set but are excluded from the reported picture.
void trust_filter(std::vector<FusedTrack>& fused, const TrustStore& trust,
                  double tau_ignore);

/// Projection of a 10-state track onto the transmitted 7-dim block and back.
FusedVector project_fused(const Track& track);
FusedMatrix project_fused_covariance(const Track& track);
void inject_fused(Track& track, const FusedVector& state,
                  const FusedMatrix& covariance);

}  // namespace trustfuse

#endif  // TRUSTFUSE_DDF_HPP
