#include <gtest/gtest.h>
#include <omp.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "airy/errors.hpp"
#include "airy/otf_oracle.hpp"
#include "airy/sampling.hpp"
#include "oracles.hpp"

using namespace airy;

namespace {

const double kSigma = 1.0 / std::numbers::pi;

SuperpositionModel asym() {
  return SuperpositionModel({0.2, 0.5, 0.3}, {{0.1, 0.0}, {-0.2, 0.15}, {0.05, -0.25}}, SpreadParameter(kSigma));
}

// Direct evaluation of sum_j lambda_j A_hat(|w|) exp(-2 pi i <mu_j, w>) with a quadrature OTF.
cplx forward(const SuperpositionModel &m, Vec2 w) {
  const double a = oracle::otf_quadrature(norm(w), m.sigma().value());
  cplx s = 0.0;
  for (std::size_t j = 0; j < m.size(); ++j) {
    s += m.weights()[j] * std::polar(1.0, -2.0 * std::numbers::pi * dot(m.centers()[j], w));
  }
  return a * s;
}

}  // namespace

TEST(ExactOracle, MatchesForwardFormula) {
  const auto m = asym();
  ExactOracle o(m);
  const std::vector<Vec2> f = {{0.1, 0.0}, {0.3, -0.4}, {-0.2, 0.6}};
  const auto v = o.query(f);
  for (std::size_t i = 0; i < f.size(); ++i) {
    EXPECT_LT(std::abs(v[i] - forward(m, f[i])), 1e-9);
    EXPECT_LT(std::abs(v[i] - model_transform(m, f[i])), 1e-15);
  }
  EXPECT_EQ(o.certified_eta(10, 0.5), 0.0);
}

TEST(ExactOracle, NoiseIsBoundedAndDeterministic) {
  const auto m = asym();
  ExactOracle clean(m), noisy(m, 1e-3, 9), again(m, 1e-3, 9);
  std::vector<Vec2> f;
  for (int i = 0; i < 50; ++i) f.push_back({0.01 * i, -0.005 * i});
  const auto a = clean.query(f), b = noisy.query(f), c = again.query(f);
  double largest = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    largest = std::max(largest, std::abs(a[i] - b[i]));
    EXPECT_EQ(b[i], c[i]);
  }
  EXPECT_LE(largest, 1e-3);
  EXPECT_GT(largest, 1e-5);
}

TEST(ExponentialSum, DeconvolvedIdentity) {
  const auto m = asym();
  const Vec2 w{0.2, 0.1};
  const cplx f = exponential_sum(m.weights(), m.centers(), w);
  EXPECT_LT(std::abs(f * otf(norm(w), m.sigma()) - model_transform(m, w)), 1e-15);
}

TEST(PhotonOracle, WithinCertifiedEta) {
  const auto m = asym();
  const auto batch = sample(m, 100000, 21);
  PhotonOracle o(batch, 0.05);
  std::vector<Vec2> f;
  for (int i = 0; i < 10; ++i) f.push_back(unit_vector(0.6 * i) * (0.09 * i));
  const auto v = o.query(f);
  const double eta = o.certified_eta(f.size(), 0.81);
  EXPECT_NEAR(eta, std::sqrt(4.0 * std::log(2.0 * 10 / 0.05) / 100000.0), 1e-15);
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_LE(std::abs(v[i] - model_transform(m, f[i])), eta);
  EXPECT_EQ(v[0], cplx(1.0, 0.0));
}

TEST(PhotonOracle, SymmetricModelHasSmallImaginaryPart) {
  const SuperpositionModel m({0.5, 0.5}, {{0.2, 0.1}, {-0.2, -0.1}}, SpreadParameter(kSigma));
  const auto batch = sample(m, 200000, 5);
  PhotonOracle o(batch);
  const std::vector<Vec2> f = {{0.3, 0.0}, {0.1, 0.5}, {-0.6, 0.2}};
  for (const cplx &v : o.query(f)) EXPECT_LT(std::abs(v.imag()), 4.0 / std::sqrt(200000.0));
}

TEST(PhotonOracle, CacheAndQueryCount) {
  const auto batch = sample(asym(), 20000, 2);
  PhotonOracle o(batch);
  const std::vector<Vec2> f = {{0.1, 0.2}, {0.3, 0.0}, {0.1, 0.2}};
  const auto a = o.query(f);
  EXPECT_EQ(o.queries(), 2u);
  const auto b = o.query(std::vector<Vec2>{{0.3, 0.0}});
  EXPECT_EQ(o.queries(), 2u);
  EXPECT_EQ(a[1], b[0]);
  EXPECT_EQ(a[0], a[2]);
}

TEST(PhotonOracle, ThreadCountDoesNotChangeValues) {
  const auto batch = sample(asym(), 300000, 3);
  const std::vector<Vec2> f = {{0.11, 0.2}, {0.37, -0.05}};
  omp_set_num_threads(1);
  PhotonOracle a(batch);
  const auto va = a.query(f);
  omp_set_num_threads(3);
  PhotonOracle b(batch);
  const auto vb = b.query(f);
  omp_set_num_threads(omp_get_num_procs());
  EXPECT_EQ(va, vb);
}

TEST(PhotonOracle, FastPathMatchesLibm) {
  const auto batch = sample(asym(), 5000, 4);
  PhotonOracle o(batch);
  const Vec2 w{0.437, -0.291};
  cplx direct = 0.0;
  for (const Vec2 &p : batch.points) direct += std::polar(1.0, -2.0 * std::numbers::pi * dot(w, p));
  direct /= static_cast<double>(batch.points.size());
  EXPECT_LT(std::abs(o.query(std::vector<Vec2>{w})[0] - direct), 1e-14);
}

TEST(PhotonOracle, QuerySumsMatchesQuery) {
  const auto batch = sample(asym(), 30000, 6);
  PhotonOracle a(batch), b(batch);
  const std::vector<Vec2> rows = {{0.05, 0.1}, {-0.2, 0.03}, {0.0, 0.0}, {0.12, -0.07}};
  const std::vector<Vec2> shifts = {{0.02, 0.01}, {0.04, 0.02}, {0.0, 0.0}};
  const auto sums = a.query_sums(rows, shifts);
  ASSERT_EQ(sums.size(), rows.size() * rows.size() * shifts.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows.size(); ++j) {
      for (std::size_t s = 0; s < shifts.size(); ++s) {
        const Vec2 w = rows[i] + rows[j] + shifts[s];
        const cplx want = b.query(std::vector<Vec2>{w})[0];
        EXPECT_LT(std::abs(sums[(i * rows.size() + j) * shifts.size() + s] - want), 1e-12);
      }
    }
  }
}

TEST(Deconvolve, RefusesNearCutoff) {
  const auto batch = sample(asym(), 1000, 1);
  const double fc = 1.0 / (std::numbers::pi * kSigma);
  const std::vector<Vec2> ok = {{0.5 * fc, 0.0}};
  const std::vector<Vec2> bad = {{0.9995 * fc, 0.0}};
  const auto est = estimate_otf(batch, ok);
  const auto dec = deconvolve(est, SpreadParameter(kSigma));
  EXPECT_LT(std::abs(dec.values[0] * otf(0.5 * fc, SpreadParameter(kSigma)) - est.values[0]), 1e-15);
  EXPECT_NEAR(dec.accuracy[0], est.eta / otf(0.5 * fc, SpreadParameter(kSigma)), 1e-15);
  EXPECT_THROW(deconvolve(estimate_otf(batch, bad), SpreadParameter(kSigma)), CutoffViolation);
  ExactOracle exact(asym());
  EXPECT_THROW(query_deconvolved(exact, bad), CutoffViolation);
  const auto f = query_deconvolved(exact, ok);
  EXPECT_LT(std::abs(f[0] - exponential_sum(asym().weights(), asym().centers(), ok[0])), 1e-13);
}

TEST(SampleSize, FormulasAreInverse) {
  const double eta = 0.01, beta = 0.05;
  const std::size_t m = 12;
  const std::size_t n = required_samples(eta, m, beta);
  EXPECT_EQ(n, static_cast<std::size_t>(std::ceil(4.0 * std::log(2.0 * m / beta) / (eta * eta))));
  EXPECT_LE(hoeffding_eta(n, m, beta), eta);
  EXPECT_GT(hoeffding_eta(n - 1000, m, beta), eta);
  EXPECT_DOUBLE_EQ(granularity_error(1e-3, 0.5), 2.0 * std::numbers::pi * 1e-3 * 0.5);
}

TEST(Rescaling, MapsRadiusToOneThird) {
  const auto r = Rescaling::for_radius(0.75);
  EXPECT_DOUBLE_EQ(r.scale, 1.0 / 2.25);
  EXPECT_DOUBLE_EQ(Rescaling::for_radius(0.01, 5.0).scale, 5.0);
  const auto m = r.apply(asym());
  EXPECT_NEAR(m.sigma().value(), kSigma * r.scale, 1e-16);
  EXPECT_NEAR(r.unscale(m.centers()[1]).x, -0.2, 1e-16);
  PhotonBatch b;
  b.points = {{1.0, 2.0}};
  b.sigma = 0.5;
  b.granularity = 0.1;
  const auto s = r.apply(b);
  EXPECT_DOUBLE_EQ(s.points[0].y, 2.0 * r.scale);
  EXPECT_DOUBLE_EQ(s.granularity, 0.1 * r.scale);
}

TEST(Granularity, ExtraErrorWithinLipschitzBound) {
  const auto m = asym();
  SamplingOptions g;
  g.granularity = 1e-3;
  const auto raw = sample(m, 50000, 12);
  const auto snapped = sample(m, 50000, 12, g);
  const std::vector<Vec2> f = {{0.5, 0.0}, {0.0, 0.5}, {0.3, 0.4}};
  const auto a = estimate_otf(raw, f), b = estimate_otf(snapped, f);
  for (std::size_t i = 0; i < f.size(); ++i) {
    EXPECT_LE(std::abs(a.values[i] - b.values[i]), granularity_error(1e-3, 0.5));
  }
  EXPECT_GT(b.eta, a.eta);
}
