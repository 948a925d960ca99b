#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "airy/bessel.hpp"
#include "airy/psf.hpp"
#include "oracles.hpp"

using namespace airy;

TEST(Bessel, TrivialValues) {
  EXPECT_EQ(bessel_j(1, 0.0), 0.0);
  EXPECT_EQ(bessel_j(0, 0.0), 1.0);
  EXPECT_EQ(bessel_j(2, 0.0), 0.0);
  EXPECT_NEAR(bessel_j(1, kJ1FirstZero), 0.0, 1e-13);
  EXPECT_NEAR(bessel_j(0, kJ0FirstZero), 0.0, 1e-13);
}

TEST(Bessel, MatchesBoostAcrossRange) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> small(-30.0, 30.0), large(-1e4, 1e4);
  for (int i = 0; i < 4000; ++i) {
    const double x = (i % 2) ? small(gen) : large(gen);
    for (int n : {0, 1, 2}) {
      ASSERT_NEAR(bessel_j(n, x), oracle::bessel(n, x), 1e-12) << "order " << n << " x " << x;
    }
  }
}

TEST(Bessel, DenseNearSwitchovers) {
  for (double x = 7.0; x <= 19.0; x += 1e-3) {
    for (int n : {0, 1, 2}) ASSERT_NEAR(bessel_j(n, x), oracle::bessel(n, x), 1e-12) << n << " " << x;
  }
}

TEST(Bessel, ParityAndPairAgree) {
  for (double x : {0.3, 5.0, 12.5, 40.0, 900.0}) {
    EXPECT_DOUBLE_EQ(bessel_j(0, -x), bessel_j(0, x));
    EXPECT_DOUBLE_EQ(bessel_j(1, -x), -bessel_j(1, x));
    const auto p = bessel_j01(x);
    EXPECT_NEAR(p.j0, bessel_j(0, x), 1e-15);
    EXPECT_NEAR(p.j1, bessel_j(1, x), 1e-15);
  }
}

TEST(Bessel, RejectsOtherOrders) {
  EXPECT_THROW(bessel_j(3, 1.0), std::invalid_argument);
  EXPECT_TRUE(std::isnan(bessel_j(0, std::nan(""))));
}

TEST(Bessel, RecurrenceProperty) {
  // J0(x) + J2(x) = 2 J1(x) / x
  for (double x = 0.05; x < 200.0; x *= 1.07) {
    EXPECT_NEAR(bessel_j(0, x) + bessel_j(2, x), 2.0 * bessel_j(1, x) / x, 2e-12) << x;
  }
}

TEST(Psf, SpreadParameterValidates) {
  EXPECT_THROW(SpreadParameter(0.0), std::invalid_argument);
  EXPECT_THROW(SpreadParameter(-1.0), std::invalid_argument);
  EXPECT_THROW(SpreadParameter(std::nan("")), std::invalid_argument);
  EXPECT_EQ(SpreadParameter(0.5).value(), 0.5);
}

TEST(Psf, ResolutionCriteria) {
  const SpreadParameter s(0.4);
  const auto c = resolution_criteria(s);
  EXPECT_DOUBLE_EQ(c.abbe, std::numbers::pi * 0.4);
  EXPECT_DOUBLE_EQ(c.rayleigh, 1.22 * c.abbe);
  EXPECT_DOUBLE_EQ(c.sparrow, 0.94 * c.abbe);
  EXPECT_DOUBLE_EQ(c.houston, 1.03 * c.abbe);
  EXPECT_DOUBLE_EQ(c.buxton, 1.46 * c.abbe);
  EXPECT_DOUBLE_EQ(c.schuster, 2.44 * c.abbe);
  EXPECT_DOUBLE_EQ(c.dawes, 1.02 * c.abbe);
}

TEST(Psf, SeparationConstants) {
  EXPECT_NEAR(kGammaUpper, 2.0 * 2.404825557695773 / std::numbers::pi, 1e-15);
  EXPECT_NEAR(kGammaUpper, 1.530, 1e-3);
  EXPECT_NEAR(kGammaLower, 1.1547005383792515, 1e-15);
}

TEST(Psf, DensityMatchesOracleAndPeak) {
  const SpreadParameter s(0.7);
  EXPECT_NEAR(airy_psf({0, 0}, {0, 0}, s), 1.0 / (4.0 * std::numbers::pi * 0.49), 1e-15);
  for (double x : {0.01, 0.3, 2.0, 11.0, 150.0}) {
    EXPECT_NEAR(airy_psf({x, 0.5}, {0.2, -0.1}, s), oracle::airy_density(x, 0.5, 0.2, -0.1, 0.7), 1e-13);
  }
  EXPECT_NEAR(airy_psf({kJ1FirstZero * 0.7, 0.0}, {0, 0}, s), 0.0, 1e-25);
}

TEST(Psf, OtfEndpoints) {
  const SpreadParameter s(0.25);
  EXPECT_DOUBLE_EQ(otf(0.0, s), 1.0);
  EXPECT_EQ(otf(otf_cutoff(s), s), 0.0);
  EXPECT_EQ(otf(2.0 * otf_cutoff(s), s), 0.0);
  EXPECT_DOUBLE_EQ(otf_cutoff(s), 1.0 / (std::numbers::pi * 0.25));
}

TEST(Psf, OtfMatchesQuadrature) {
  const SpreadParameter s(0.6);
  for (double f : {0.03, 0.25, 0.5, 0.75, 0.97}) {
    const double r = f * otf_cutoff(s);
    EXPECT_NEAR(otf(r, s), oracle::otf_quadrature(r, 0.6), 1e-9) << f;
  }
}

TEST(Psf, OtfPositiveAndDecreasing) {
  const SpreadParameter s(1.0 / std::numbers::pi);
  double prev = 1.0;
  for (double r = 0.001; r < 1.0; r += 0.001) {
    const double v = otf(r, s);
    ASSERT_LE(v, prev + 1e-15);
    ASSERT_GT(v, 0.0);
    prev = v;
  }
}

TEST(Psf, RadialCdfMatchesOracle) {
  for (double t : {1e-4, 0.1, 1.0, 2.0, 2.5, 3.8317, 10.0, 64.0, 500.0}) {
    EXPECT_NEAR(radial_cdf(t), oracle::encircled_energy(t), 1e-13) << t;
    EXPECT_NEAR(radial_cdf(t) + radial_survival(t), 1.0, 1e-15) << t;
  }
  EXPECT_EQ(radial_cdf(0.0), 0.0);
  EXPECT_EQ(radial_survival(0.0), 1.0);
}

TEST(Psf, RadialCdfSmallArgumentRelativeAccuracy) {
  // Near zero, 1 - J0^2 - J1^2 = t^2/4 - t^4/32 + O(t^6): no cancellation loss allowed.
  for (double t : {1e-6, 1e-3, 1e-2, 0.05}) {
    const double lead = t * t / 4.0 - std::pow(t, 4) / 32.0;
    EXPECT_NEAR(radial_cdf(t) / lead, 1.0, std::max(1e-14, std::pow(t, 4))) << t;
  }
}

TEST(Psf, RadialDensityIsCdfDerivative) {
  for (double t = 0.05; t < 50.0; t += 0.37) {
    const double h = 1e-4;
    const double d = (radial_cdf(t + h) - radial_cdf(t - h)) / (2.0 * h);
    EXPECT_NEAR(d, radial_density(t), 1e-8) << t;
    const double j1 = oracle::bessel(1, t);
    EXPECT_NEAR(radial_density(t), 2.0 * j1 * j1 / t, 1e-13);
  }
}

TEST(Psf, ProfileIsUnitSigmaDensity) {
  for (double t : {0.0, 0.5, 3.0, 20.0}) {
    EXPECT_NEAR(airy_profile(t), airy_psf({t, 0.0}, {0.0, 0.0}, SpreadParameter(1.0)), 1e-16);
  }
}

TEST(Bessel, LandauEnvelopeSpotCheck) {
  for (double r = 0.1; r < 1000.0; r *= 1.01) {
    for (int n : {0, 1, 2}) ASSERT_LE(std::abs(bessel_j(n, r)), kLandauConstant * std::cbrt(1.0 / r)) << n << " " << r;
  }
}
