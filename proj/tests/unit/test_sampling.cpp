#include <gtest/gtest.h>
#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "airy/psf.hpp"
#include "airy/rng.hpp"
#include "airy/sampling.hpp"
#include "oracles.hpp"

using namespace airy;

namespace {
SuperpositionModel two_disks() {
  return SuperpositionModel({0.3, 0.7}, {{-1.0, 0.5}, {2.0, -0.25}}, SpreadParameter(0.4));
}
}  // namespace

TEST(Rng, SubstreamsAreIndependentOfOrder) {
  CounterRng a(5, 1, 9), b(5, 1, 9), c(5, 1, 10), d(6, 1, 9);
  const auto x = a();
  EXPECT_EQ(x, b());
  EXPECT_NE(x, c());
  EXPECT_NE(x, d());
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform_open();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Sampling, RadiusQuantileInvertsCdf) {
  for (double u : {1e-12, 1e-6, 0.01, 0.3, 0.5, 0.8378, 0.99, 0.999, 0.99999, 1.0 - 1e-9}) {
    const double t = airy_radius_quantile(u);
    EXPECT_NEAR(oracle::encircled_energy(t), u, 1e-10 + 1e-12 * t) << u;
  }
  EXPECT_NEAR(sample_airy_radius(SpreadParameter(2.0), 0.5), 2.0 * airy_radius_quantile(0.5), 1e-14);
}

TEST(Sampling, QuantileIsMonotone) {
  double prev = 0.0;
  for (double u = 1e-4; u < 1.0; u += 1e-4) {
    const double t = airy_radius_quantile(u);
    ASSERT_GE(t, prev) << u;
    prev = t;
  }
}

TEST(Sampling, RejectsBadUniform) {
  EXPECT_THROW(sample_airy_radius(SpreadParameter(1.0), 0.0), std::invalid_argument);
  EXPECT_THROW(sample_airy_radius(SpreadParameter(1.0), 1.0), std::invalid_argument);
}

TEST(Sampling, DeterministicAndThreadIndependent) {
  const auto model = two_disks();
  omp_set_num_threads(1);
  const auto a = sample(model, 200000, 42);
  omp_set_num_threads(4);
  const auto b = sample(model, 200000, 42);
  omp_set_num_threads(omp_get_num_procs());
  ASSERT_EQ(a.points.size(), b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    ASSERT_EQ(a.points[i].x, b.points[i].x);
    ASSERT_EQ(a.points[i].y, b.points[i].y);
  }
  const auto c = sample(model, 1000, 43);
  EXPECT_NE(a.points[0].x, c.points[0].x);
}

TEST(Sampling, PrefixStable) {
  // Chunked streams: a longer run starts with the shorter run's photons.
  const auto model = two_disks();
  const auto a = sample(model, 70000, 3);
  const auto b = sample(model, 140000, 3);
  for (std::size_t i = 0; i < a.points.size(); ++i) ASSERT_EQ(a.points[i].x, b.points[i].x);
}

TEST(Sampling, ComponentFractionsAndMeans) {
  // 50 sigma from the midline the Airy tail misassigns well under 1% of photons.
  const SuperpositionModel model({0.3, 0.7}, {{-1.0, 0.0}, {2.0, 0.0}}, SpreadParameter(0.03));
  const auto batch = sample(model, 400000, 9);
  std::size_t left = 0;
  for (const Vec2 &p : batch.points) left += p.x < 0.5;
  EXPECT_NEAR(static_cast<double>(left) / batch.points.size(), 0.3, 0.01);
}

TEST(Sampling, EncircledEnergySmall) {
  const SuperpositionModel one({1.0}, {{0.5, -0.5}}, SpreadParameter(0.2));
  const auto batch = sample(one, 200000, 17);
  for (double t : {1.0, kJ1FirstZero, 7.0}) {
    std::size_t inside = 0;
    for (const Vec2 &p : batch.points) inside += distance(p, {0.5, -0.5}) <= t * 0.2;
    const double frac = static_cast<double>(inside) / batch.points.size();
    const double expect = oracle::encircled_energy(t);
    EXPECT_NEAR(frac, expect, 4.0 * std::sqrt(expect * (1 - expect) / batch.points.size()) + 1e-4) << t;
  }
}

TEST(Sampling, GranularSnapping) {
  const double g = 0.01;
  const double pitch = g / std::sqrt(2.0);
  for (Vec2 p : {Vec2{0.123456, -0.98765}, Vec2{3.3, 2.2}, Vec2{-1e-5, 1e-5}}) {
    const Vec2 q = snap_to_grid(p, g);
    EXPECT_LE(distance(p, q), g / 2.0 + 1e-15);
    EXPECT_NEAR(q.x / pitch, std::round(q.x / pitch), 1e-9);
    EXPECT_NEAR(q.y / pitch, std::round(q.y / pitch), 1e-9);
  }
  EXPECT_EQ(snap_to_grid({0.3, 0.4}, 0.0).x, 0.3);

  const auto model = two_disks();
  SamplingOptions opts;
  opts.granularity = 1e-3;
  const auto raw = sample(model, 5000, 8);
  const auto snapped = sample(model, 5000, 8, opts);
  EXPECT_EQ(snapped.granularity, 1e-3);
  for (std::size_t i = 0; i < raw.points.size(); ++i) {
    ASSERT_LE(distance(raw.points[i], snapped.points[i]), 0.5e-3 + 1e-15);
  }
}

TEST(Sampling, PoissonCount) {
  const auto model = two_disks();
  SamplingOptions opts;
  opts.poisson = true;
  const auto a = sample(model, 100000, 4, opts);
  const auto b = sample(model, 100000, 4, opts);
  EXPECT_EQ(a.points.size(), b.points.size());
  EXPECT_TRUE(a.poisson);
  EXPECT_EQ(a.requested, 100000u);
  EXPECT_NEAR(static_cast<double>(a.points.size()), 100000.0, 5.0 * std::sqrt(100000.0));
  EXPECT_NE(a.points.size(), 100000u);  // one specific draw; equality has probability ~1e-3
}

TEST(Sampling, ZeroWeightComponentsNeverDrawn) {
  const SuperpositionModel m({0.0, 1.0, 0.0}, {{100, 100}, {0, 0}, {-100, -100}}, SpreadParameter(0.1));
  const SuperpositionModel only({1.0}, {{0, 0}}, SpreadParameter(0.1));
  // Same uniforms, and the zero-weight entries can never win the component draw.
  const auto batch = sample(m, 50000, 2);
  const auto same = sample(only, 50000, 2);
  for (std::size_t i = 0; i < batch.points.size(); ++i) ASSERT_EQ(batch.points[i].x, same.points[i].x);
}
