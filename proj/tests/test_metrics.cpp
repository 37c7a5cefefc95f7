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

#include <random>

#include "support/oracles.hpp"
#include "trustfuse/metrics.hpp"

using namespace trustfuse;

namespace {

std::vector<Eigen::Vector3d> points(std::initializer_list<double> xs) {
  std::vector<Eigen::Vector3d> out;
  for (double x : xs) out.emplace_back(x, 0.0, 0.0);
  return out;
}

std::vector<Eigen::Vector3d> random_points(std::mt19937_64& gen, int max_n,
                                           double extent) {
  std::uniform_real_distribution<double> u(-extent, extent);
  std::uniform_int_distribution<int> count(0, max_n);
  std::vector<Eigen::Vector3d> out;
  const int n = count(gen);
  for (int i = 0; i < n; ++i) out.emplace_back(u(gen), u(gen), 0.0);
  return out;
}

}  // namespace

TEST_CASE("assignment metrics substitution cases") {
  SUBCASE("8 TP, 2 FP, 0 FN") {
    std::vector<Eigen::Vector3d> truths, reported;
    for (int i = 0; i < 8; ++i) truths.emplace_back(10.0 * i, 0.0, 0.0);
    reported = truths;
    reported.emplace_back(500.0, 0.0, 0.0);
    reported.emplace_back(600.0, 0.0, 0.0);
    const PrecisionRecall pr = assignment_metrics(reported, truths, 2.0);
    CHECK(pr.tp == 8);
    CHECK(pr.fp == 2);
    CHECK(pr.fn == 0);
    CHECK(pr.precision == doctest::Approx(0.8));
    CHECK(pr.recall == doctest::Approx(1.0));
    CHECK(pr.f1 == doctest::Approx(8.0 / 9.0));
  }

  SUBCASE("perfect report") {
    const auto truths = points({0, 10, 20});
    const PrecisionRecall pr = assignment_metrics(truths, truths, 2.0);
    CHECK(pr.precision == 1.0);
    CHECK(pr.recall == 1.0);
    CHECK(pr.f1 == doctest::Approx(1.0));
  }

  SUBCASE("empty-set conventions") {
    const auto some = points({0.0});
    const std::vector<Eigen::Vector3d> none;
    const PrecisionRecall empty_both = assignment_metrics(none, none, 2.0);
    CHECK(empty_both.precision == 1.0);
    CHECK(empty_both.recall == 1.0);
    const PrecisionRecall no_reports = assignment_metrics(none, some, 2.0);
    CHECK(no_reports.precision == 1.0);
    CHECK(no_reports.recall == 0.0);
    CHECK(no_reports.f1 == 0.0);
    const PrecisionRecall no_truths = assignment_metrics(some, none, 2.0);
    CHECK(no_truths.precision == 0.0);
    CHECK(no_truths.recall == 1.0);
  }

  SUBCASE("counts match the exhaustive gated matching") {
    std::mt19937_64 gen(3);
    for (int iter = 0; iter < 100; ++iter) {
      const auto reported = random_points(gen, 5, 6.0);
      const auto truths = random_points(gen, 5, 6.0);
      const PrecisionRecall pr = assignment_metrics(reported, truths, 2.0);
      Eigen::MatrixXd cost(reported.size(), truths.size());
      for (std::size_t i = 0; i < reported.size(); ++i)
        for (std::size_t j = 0; j < truths.size(); ++j)
          cost(i, j) = (reported[i] - truths[j]).norm();
      const auto oracle = testing::brute_force_assignment(cost, 2.0);
      CHECK(pr.tp == oracle.cardinality);
      CHECK(pr.fp == static_cast<int>(reported.size()) - oracle.cardinality);
      CHECK(pr.fn == static_cast<int>(truths.size()) - oracle.cardinality);
    }
  }
}

TEST_CASE("f1 bounds") {
  std::mt19937_64 gen(5);
  for (int iter = 0; iter < 100; ++iter) {
    const auto reported = random_points(gen, 6, 5.0);
    const auto truths = random_points(gen, 6, 5.0);
    const PrecisionRecall pr = assignment_metrics(reported, truths, 2.0);
    CHECK(pr.precision >= 0.0);
    CHECK(pr.precision <= 1.0);
    CHECK(pr.recall >= 0.0);
    CHECK(pr.recall <= 1.0);
    CHECK(pr.f1 <= 2.0 * pr.precision + 1e-12);
    CHECK(pr.f1 <= 2.0 * pr.recall + 1e-12);
    CHECK(pr.f1 <= 1.0);
  }
}

TEST_CASE("ospa") {
  SUBCASE("perfect match is zero in both variants") {
    const auto pts = points({0, 5, 11});
    CHECK(ospa(pts, pts, 10.0, 1.0, OspaVariant::kStandard) == 0.0);
    CHECK(ospa(pts, pts, 10.0, 1.0, OspaVariant::kPaper) == 0.0);
    CHECK(ospa({}, {}, 10.0, 1.0, OspaVariant::kStandard) == 0.0);
    CHECK(ospa({}, {}, 10.0, 1.0, OspaVariant::kPaper) == 0.0);
  }

  SUBCASE("standard variant: empty vs k is the cutoff") {
    for (int k : {1, 3, 7}) {
      std::vector<Eigen::Vector3d> truths;
      for (int i = 0; i < k; ++i) truths.emplace_back(3.0 * i, 0, 0);
      CHECK(ospa({}, truths, 10.0, 1.0, OspaVariant::kStandard) ==
            doctest::Approx(10.0));
      CHECK(ospa({}, truths, 10.0, 2.0, OspaVariant::kStandard) ==
            doctest::Approx(10.0));
    }
  }

  SUBCASE("paper variant: one empty set is a pure cardinality penalty") {
    const auto truths = points({0, 3, 6});
    CHECK(ospa({}, truths, 10.0, 1.0, OspaVariant::kPaper) ==
          doctest::Approx(30.0));
  }

  SUBCASE("paper cardinality term is never negative") {
    std::mt19937_64 gen(7);
    for (int iter = 0; iter < 50; ++iter) {
      const auto a = random_points(gen, 4, 5.0);
      const auto b = random_points(gen, 4, 5.0);
      CHECK(ospa(a, b, 10.0, 1.0, OspaVariant::kPaper) >= -1e-12);
    }
  }

  SUBCASE("standard variant satisfies metric axioms on small sets") {
    std::mt19937_64 gen(11);
    for (int iter = 0; iter < 150; ++iter) {
      const auto x = random_points(gen, 4, 5.0);
      const auto y = random_points(gen, 4, 5.0);
      const auto z = random_points(gen, 4, 5.0);
      const double xy = ospa(x, y, 10.0, 1.0, OspaVariant::kStandard);
      const double yx = ospa(y, x, 10.0, 1.0, OspaVariant::kStandard);
      const double xz = ospa(x, z, 10.0, 1.0, OspaVariant::kStandard);
      const double yz = ospa(y, z, 10.0, 1.0, OspaVariant::kStandard);
      CHECK(xy == doctest::Approx(yx).epsilon(1e-9));
      CHECK(xy >= 0.0);
      if (!x.empty() || !y.empty()) {
        CHECK(xz <= xy + yz + 1e-9);
      }
      CHECK(ospa(x, x, 10.0, 1.0, OspaVariant::kStandard) ==
            doctest::Approx(0.0));
    }
  }

  SUBCASE("an extra false track weakly hurts precision and paper OSPA") {
    std::mt19937_64 gen(13);
    for (int iter = 0; iter < 50; ++iter) {
      auto reported = random_points(gen, 4, 5.0);
      const auto truths = random_points(gen, 4, 5.0);
      const double before_p =
          assignment_metrics(reported, truths, 2.0).precision;
      const double before_o =
          ospa(reported, truths, 10.0, 1.0, OspaVariant::kPaper);
      reported.emplace_back(100.0, 100.0, 0.0);  // far from everything
      const double after_p =
          assignment_metrics(reported, truths, 2.0).precision;
      const double after_o =
          ospa(reported, truths, 10.0, 1.0, OspaVariant::kPaper);
      CHECK(after_p <= before_p + 1e-12);
      CHECK(after_o >= before_o - 1e-9);
    }
  }
}

TEST_CASE("trust distance and accuracy") {
  SUBCASE("closed-form cases") {
    CHECK(trust_distance(BetaTrust{1000.0, 1.0}, true) ==
          doctest::Approx(0.0).epsilon(1e-2));
    CHECK(trust_distance(BetaTrust{1.0, 1.0}, false) == doctest::Approx(0.5));
    CHECK(trust_distance(BetaTrust{1.0, 1.0}, true) == doctest::Approx(0.5));
    CHECK(trust_distance(BetaTrust{2.0, 8.0}, false) == doctest::Approx(0.2));
  }

  SUBCASE("closed form equals numerical CDF-area integration") {
    // Validates the integration-by-parts shortcut against a direct
    // quadrature of the area between CDFs, on 100 random Betas.
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> ab(1.0, 10.0);
    for (int i = 0; i < 100; ++i) {
      const double a = ab(gen), b = ab(gen);
      const bool trusted = (i % 2) == 0;
      const double closed = trust_distance(BetaTrust{a, b}, trusted);
      const double numeric = testing::beta_cdf_area_distance(a, b, trusted);
      CHECK(std::abs(closed - numeric) < 1e-6);
    }
  }

  SUBCASE("accuracy improves when an estimate moves toward its target") {
    TrustStore store;
    store.agent(0, BetaTrust{2.0, 2.0});
    store.agent(1, BetaTrust{8.0, 2.0});
    const std::set<int> distrusted = {0};
    const auto before = trust_accuracy(store, distrusted, {}, {}, 2.0);
    store.agent(0, BetaTrust{2.0, 2.0}) = BetaTrust{2.0, 6.0};  // E drops
    const auto after = trust_accuracy(store, distrusted, {}, {}, 2.0);
    CHECK(after.agent_accuracy > before.agent_accuracy);
  }

  SUBCASE("tracks are labeled by gated truth assignment") {
    TrustStore store;
    store.track(0, BetaTrust{9.0, 1.0});  // near a truth -> trusted target
    store.track(1, BetaTrust{1.0, 9.0});  // far from truths -> false target
    std::vector<FusedTrack> fused(2);
    fused[0].id = 0;
    fused[0].track.state(0) = 0.5;
    fused[1].id = 1;
    fused[1].track.state(0) = 50.0;
    std::vector<Eigen::Vector3d> truths = {{0.0, 0.0, 0.0}};
    const auto acc = trust_accuracy(store, {}, fused, truths, 2.0);
    CHECK(acc.track_count == 2);
    // Both estimates sit near their targets: high accuracy.
    CHECK(acc.track_accuracy > 0.85);

    // Stale store entry without a live track is excluded and counted.
    store.track(7, BetaTrust{1.0, 1.0});
    const auto with_stale = trust_accuracy(store, {}, fused, truths, 2.0);
    CHECK(with_stale.unlabeled == 1);
    CHECK(with_stale.track_count == 2);
  }
}

TEST_CASE("metric report windows") {
  MetricReport report;
  for (int i = 0; i < 10; ++i) {
    MetricsRow row;
    row.t = i * 1.0;
    row.precision = i < 5 ? 1.0 : 0.5;
    report.rows.push_back(row);
  }
  CHECK(report.window_mean(&MetricsRow::precision, 0.0, 5.0) ==
        doctest::Approx(1.0));
  CHECK(report.window_mean(&MetricsRow::precision, 5.0, 10.0) ==
        doctest::Approx(0.5));
}
