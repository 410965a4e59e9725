// Copyright 2026 The adalsh Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <memory>

#include "adalsh/analysis.hpp"
#include "adalsh/generators.hpp"
#include "adalsh/index.hpp"

namespace adalsh {
namespace {

DistanceHistogram make_hist(std::size_t d, std::initializer_list<std::pair<std::size_t, std::uint64_t>> shells) {
  DistanceHistogram hist;
  hist.counts.assign(d + 1, 0);
  for (auto [delta, count] : shells) hist.counts[delta] = count;
  return hist;
}

TEST(Analysis, ExpectedWork) {
  const auto hist = make_hist(2, {{1, 100}});
  EXPECT_DOUBLE_EQ(expected_work(hist, 3, 0.5), 108.0);
  EXPECT_DOUBLE_EQ(expected_work(hist, 0, 0.5), 101.0);
  EXPECT_THROW(expected_work(hist, 1, 0.0), Error);
  EXPECT_THROW(expected_work(DistanceHistogram{}, 1, 0.5), Error);
}

TEST(Analysis, SingleOptimum) {
  const auto hist = make_hist(8, {{1, 3}, {6, 40}});
  const auto none = w_single(hist, 0.8, 0);
  EXPECT_DOUBLE_EQ(none.value, 44.0);
  EXPECT_EQ(none.k, 0u);
  const auto best = w_single(hist, 0.8, 20);
  for (std::size_t k = 0; k <= 20; ++k) EXPECT_LE(best.value, expected_work(hist, k, 0.8));
}

TEST(Analysis, UniformOptimumNearLogN) {
  const auto inst = gen_uniform_instance(4096, 128, 32, 3);
  const auto hist = distance_histogram(inst.query, inst.set);
  const auto best = w_single(hist, 0.75, 64);
  EXPECT_GE(best.k, 10u);
  EXPECT_LE(best.k, 14u);
}

TEST(Analysis, MultiWithOneProbeIsSingle) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    DistanceHistogram hist;
    hist.counts.assign(65, 0);
    for (auto& c : hist.counts) c = rng.uniform(20);
    const double p1 = 0.55 + 0.4 * rng.uniform_real();
    const auto single = w_single(hist, p1, 30);
    const auto one = w_multi(hist, p1, 30, 1);
    EXPECT_EQ(one.value, single.value);
    EXPECT_EQ(one.k, single.k);
    EXPECT_EQ(one.ell, 1u);
    EXPECT_LE(w_multi(hist, p1, 30, 64).value, single.value);
  }
}

TEST(Analysis, GridMatchesDirectSum) {
  const auto hist = make_hist(20, {{0, 1}, {3, 7}, {9, 30}, {15, 200}});
  const double p1 = 0.85;
  const double d = 20.0;
  std::size_t cells = 0;
  for_each_multi_cell(hist, p1, 8, 256, [&](const GridCell& cell) {
    double collisions = 0.0;
    double success = 0.0;
    for (std::uint64_t j = 1; j <= cell.ell; ++j) {
      const std::size_t a = probe_shell(cell.k, j);
      success += probe_prob(cell.k, j, p1);
      for (std::size_t delta = 0; delta < hist.counts.size(); ++delta) {
        const double q = delta / d;
        collisions += hist.counts[delta] * std::pow(q, a) * std::pow(1 - q, cell.k - a);
      }
    }
    const double direct = (static_cast<double>(cell.ell) + collisions) / success;
    EXPECT_NEAR(cell.value, direct, 1e-12 * direct) << "k=" << cell.k << " ell=" << cell.ell;
    ++cells;
  });
  EXPECT_EQ(cells, 1u + 2 + 4 + 8 + 16 + 32 + 64 + 128 + 256);
}

TEST(Analysis, TwoPointCellByHand) {
  // d=4, one point at distance 1 and one at distance 3; cell k=2, ell=4 covers
  // every probe, so each point collides exactly once and P = 1.
  const auto hist = make_hist(4, {{1, 1}, {3, 1}});
  double collisions = 0.0;
  for (std::uint64_t j = 1; j <= 4; ++j) {
    const std::uint64_t mask = probe_mask(2, j);
    for (std::uint64_t diff = 0; diff < 4; ++diff) {
      if (diff != mask) continue;
      for (double q : {0.25, 0.75}) {
        double pr = 1.0;
        for (int bit = 0; bit < 2; ++bit) pr *= (diff >> bit & 1) ? q : 1 - q;
        collisions += pr;
      }
    }
  }
  EXPECT_DOUBLE_EQ(collisions, 2.0);
  double value = 0.0;
  for_each_multi_cell(hist, 0.75, 2, 4, [&](const GridCell& cell) {
    if (cell.k == 2 && cell.ell == 4) value = cell.value;
  });
  EXPECT_NEAR(value, 4.0 + collisions, 1e-12);
}

TEST(Analysis, WorkProfile) {
  const auto hist = make_hist(32, {{2, 5}, {20, 500}});
  const auto profile = work_profile(hist, 0.9, 12, 32, true);
  ASSERT_EQ(profile.level_work.size(), 13u);
  EXPECT_DOUBLE_EQ(profile.level_work[0], 506.0);
  EXPECT_EQ(profile.single.value, w_single(hist, 0.9, 12).value);
  EXPECT_EQ(profile.multi.value, w_multi(hist, 0.9, 12, 32).value);
  EXPECT_FALSE(profile.grid.empty());
  EXPECT_TRUE(work_profile(hist, 0.9, 12, 32, false).grid.empty());
}

TEST(Analysis, ExpectedWorkMatchesSimulation) {
  const auto inst = gen_t_heavy(300, 10, 32, 4, 2.0, 8);
  const auto hist = distance_histogram(inst.query, inst.set);
  const auto points = std::make_shared<const PointSet>(inst.set);
  const auto model = CollisionModel::make(32, 4);
  const std::size_t k = 4;
  double sum = 0.0, sum_sq = 0.0;
  std::size_t samples = 0;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    IndexOptions opt;
    opt.L = 40;
    opt.seed = seed;
    const auto index = build_index(points, model, opt);
    for (std::size_t i = 0; i < index.tables_at(k); ++i) {
      const double w = 1.0 + index.bucket_size(k, i, index.hash_code(i, k, inst.query).bits);
      sum += w;
      sum_sq += w * w;
      ++samples;
    }
  }
  const double mean = sum / samples;
  const double sigma = std::sqrt((sum_sq / samples - mean * mean) / samples);
  const double scale = std::pow(model.p1, static_cast<double>(k));
  EXPECT_NEAR(mean / scale, expected_work(hist, k, model.p1), 3 * sigma / scale);
}

TEST(Analysis, RhoEntropyKl) {
  EXPECT_NEAR(rho(0.8, 0.6), 0.4368, 1e-4);
  EXPECT_DOUBLE_EQ(rho(0.7, 0.7), 1.0);
  EXPECT_NEAR(rho(0.5, 0.25), 0.5, 1e-15);
  EXPECT_THROW(rho(1.0, 0.5), Error);
  EXPECT_DOUBLE_EQ(entropy(0.5), std::log(2.0));
  EXPECT_EQ(entropy(0.0), 0.0);
  EXPECT_EQ(entropy(1.0), 0.0);
  EXPECT_EQ(kl(0.4, 0.4), 0.0);
  EXPECT_NEAR(kl(0.4, 0.2), 0.10465, 1e-5);
  EXPECT_THROW(kl(0.4, 0.0), Error);
  EXPECT_THROW(kl(0.4, 1.0), Error);
  EXPECT_THROW(entropy(1.5), Error);
}

TEST(Analysis, ExponentSmallTau) {
  const auto m = multiprobe_exponent(0.001, 0.8, 0.6);
  EXPECT_NEAR(m.exponent, 0.437, 0.01);
  EXPECT_NEAR(m.exponent, rho(0.8, 0.6), 0.01);
  EXPECT_LE(std::abs(m.residual), 1e-10);
}

TEST(Analysis, ExponentMatchesGridScan) {
  const double p1 = 0.8, p2 = 0.6;
  for (double tau : {0.05, 0.2, 0.5, 0.8}) {
    const auto m = multiprobe_exponent(tau, p1, p2);
    // Dense scan for the sign change of the implicit equation.
    double prev_alpha = kAlphaFloor;
    double prev = tau * (1 + kl(prev_alpha, 1 - p2) / entropy(prev_alpha)) - 1;
    double root = -1;
    const int steps = 400000;
    for (int s = 1; s <= steps; ++s) {
      const double alpha = kAlphaFloor + (1 - p2 - kAlphaFloor) * s / steps;
      const double value = tau * (1 + kl(alpha, 1 - p2) / entropy(alpha)) - 1;
      if (prev > 0 && value <= 0) {
        root = alpha;
        break;
      }
      prev = value;
      prev_alpha = alpha;
    }
    ASSERT_GT(root, 0.0);
    EXPECT_NEAR(m.alpha, root, 2e-6) << "tau=" << tau;
    const double expo = tau * (1 + kl(root, 1 - p1) / entropy(root));
    EXPECT_NEAR(m.exponent, expo, 1e-4) << "tau=" << tau;
  }
}

TEST(Analysis, ExponentShape) {
  double prev = 0.0;
  for (int i = 1; i < 100; ++i) {
    const double tau = i / 100.0;
    const auto m = multiprobe_exponent(tau, 0.8, 0.6);
    EXPECT_GE(m.exponent, prev - 1e-9);
    EXPECT_GE(m.exponent, tau - 1e-9);
    EXPECT_GT(m.alpha, 0.0);
    EXPECT_LE(m.alpha, 0.4);
    prev = m.exponent;
  }
  EXPECT_NEAR(multiprobe_exponent(1 - 1e-6, 0.8, 0.6).alpha, 0.4, 1e-2);
  EXPECT_THROW(multiprobe_exponent(0.0, 0.8, 0.6), Error);
  EXPECT_THROW(multiprobe_exponent(0.5, 0.6, 0.8), Error);
}

TEST(Analysis, LinearTimeThreshold) {
  const double solved = linear_time_threshold(0.8, 0.6);
  EXPECT_NEAR(solved, linear_time_threshold_closed_form(0.8, 0.6), 1e-8);
  EXPECT_NEAR(solved, 0.8454, 1e-3);
  EXPECT_NEAR(alternate_threshold(0.8, 0.6), 0.8654, 1e-3);
  // At the threshold the implicit alpha is 1 - p1 and the exponent equals tau.
  const auto at = multiprobe_exponent(solved, 0.8, 0.6);
  EXPECT_NEAR(at.alpha, 0.2, 1e-6);
  EXPECT_NEAR(at.exponent, solved, 1e-6);
  EXPECT_GT(multiprobe_exponent(solved - 0.1, 0.8, 0.6).exponent, solved - 0.1 + 1e-3);
}

TEST(Analysis, ExponentParams) {
  const auto e = exponent_params(0.8, 0.6, 1 << 20, 1 << 10);
  EXPECT_DOUBLE_EQ(e.tau, 0.5);
  EXPECT_DOUBLE_EQ(e.rho, rho(0.8, 0.6));
  EXPECT_GT(e.multiprobe, 0.5);
  EXPECT_GT(e.alpha, 0.0);
  EXPECT_DOUBLE_EQ(exponent_params(0.8, 0.6, 100, 1).multiprobe, e.rho);
  EXPECT_THROW(exponent_params(0.8, 0.6, 100, 100), Error);
}

TEST(Analysis, GapLevel) {
  EXPECT_EQ(gap_k(64, 1, 100, 25, 2.0), 6u);
  EXPECT_EQ(gap_k(640, 10, 100, 25, 2.0), 6u);
  EXPECT_EQ(gap_k(64, 64, 100, 25, 2.0), 0u);
  EXPECT_EQ(gap_k(4096, 8, 400, 50, 2.0), 22u);
  EXPECT_THROW(gap_k(64, 1, 100, 50, 2.0), Error);
  for (std::size_t t : {1u, 4u, 100u, 4095u}) {
    EXPECT_LE(gap_k(4096, t, 256, 32, 2.0), standard_lsh_params(4096, 0.875, 0.75).k);
  }
}

TEST(Analysis, Expansion) {
  const auto hist = make_hist(10, {{1, 2}, {2, 2}, {3, 5}, {9, 100}});
  EXPECT_DOUBLE_EQ(expansion(hist, 1), 2.0);
  EXPECT_TRUE(std::isinf(expansion(make_hist(10, {{1, 5}, {9, 5}}), 1)));
  EXPECT_THROW(expansion(hist, 0), Error);
}

}  // namespace
}  // namespace adalsh
