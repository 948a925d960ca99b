#include "airy/sampling.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

#include "airy/psf.hpp"
#include "airy/rng.hpp"

namespace airy {
namespace {

constexpr double kTableStep = 1.0 / 32.0;
constexpr double kTableEnd = 64.0;
constexpr std::size_t kTableSize = static_cast<std::size_t>(kTableEnd / kTableStep) + 1;

const std::vector<double> &cdf_table() {
  static const std::vector<double> table = [] {
    std::vector<double> t(kTableSize);
    for (std::size_t i = 0; i < kTableSize; ++i) t[i] = radial_cdf(static_cast<double>(i) * kTableStep);
    return t;
  }();
  return table;
}

double root_tolerance(double t) { return std::max(1e-11, 4.0 * std::numeric_limits<double>::epsilon() * t); }

// Root of an increasing f on [lo, hi] with f(lo) <= 0 < f(hi): Newton steps,
// falling back to bisection whenever a step leaves the bracket. The density
// vanishes at the zeros of J1, where pure Newton would stall.
template <typename F>
double bracketed_newton(F &&f, double lo, double hi, double t) {
  for (int iter = 0; iter < 200; ++iter) {
    const auto [value, slope] = f(t);
    if (value == 0.0) return t;
    if (value < 0.0) {
      lo = t;
    } else {
      hi = t;
    }
    double next = (slope > 0.0) ? t - value / slope : lo - 1.0;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - t) <= root_tolerance(next) || hi - lo <= root_tolerance(hi)) return next;
    t = next;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double airy_radius_quantile(double u) {
  if (!(u > 0.0 && u < 1.0)) throw std::invalid_argument("airy_radius_quantile: uniform must lie in (0, 1)");
  const auto &table = cdf_table();
  if (u < table.back()) {
    const auto it = std::upper_bound(table.begin(), table.end(), u);
    const auto i = static_cast<std::size_t>(it - table.begin()) - 1;
    const double lo = static_cast<double>(i) * kTableStep;
    const double hi = lo + kTableStep;
    const double frac = (u - table[i]) / (table[i + 1] - table[i]);
    auto f = [u](double t) { return std::pair{radial_cdf(t) - u, radial_density(t)}; };
    return bracketed_newton(f, lo, hi, lo + frac * kTableStep);
  }
  // Far tail: solve survival(t) = 1 - u, which is exact in floating point for
  // u >= 1/2 and avoids the cancellation in 1 - J0^2 - J1^2.
  const double q = 1.0 - u;
  auto f = [q](double t) { return std::pair{q - radial_survival(t), radial_density(t)}; };
  const double guess = 2.0 / (std::numbers::pi * q);
  double lo = kTableEnd;
  double hi = std::max(2.0 * guess, 2.0 * kTableEnd);
  while (radial_survival(hi) >= q) {
    lo = hi;
    hi *= 2.0;
  }
  return bracketed_newton(f, lo, hi, std::clamp(guess, lo, hi));
}

double sample_airy_radius(SpreadParameter sigma, double uniform) {
  return sigma.value() * airy_radius_quantile(uniform);
}

Vec2 snap_to_grid(Vec2 p, double granularity) {
  if (granularity <= 0.0) return p;
  const double pitch = granularity / std::numbers::sqrt2;
  return {std::nearbyint(p.x / pitch) * pitch, std::nearbyint(p.y / pitch) * pitch};
}

PhotonBatch sample(const SuperpositionModel &model, std::uint64_t n, std::uint64_t seed,
                   const SamplingOptions &options) {
  if (!(options.granularity >= 0.0 && std::isfinite(options.granularity))) {
    throw std::invalid_argument("granularity must be finite and nonnegative");
  }
  PhotonBatch batch;
  batch.sigma = model.sigma().value();
  batch.granularity = options.granularity;
  batch.seed = seed;
  batch.poisson = options.poisson;
  batch.requested = n;

  std::uint64_t count = n;
  if (options.poisson) {
    CounterRng rng(seed, streams::kPoissonCount);
    std::poisson_distribution<std::uint64_t> poisson(static_cast<double>(n));
    count = poisson(rng);
  }

  const auto &weights = model.weights();
  std::vector<double> cumulative(weights.size());
  std::partial_sum(weights.begin(), weights.end(), cumulative.begin());
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] > 0.0) last_positive = i;
  }
  const auto &centers = model.centers();
  const double sigma = model.sigma().value();

  batch.points.resize(count);
  const std::size_t chunks = (count + kSampleChunk - 1) / kSampleChunk;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t c = 0; c < chunks; ++c) {
    CounterRng rng(seed, streams::kPhotons, c);
    const std::size_t begin = c * kSampleChunk;
    const std::size_t end = std::min<std::size_t>(count, begin + kSampleChunk);
    for (std::size_t i = begin; i < end; ++i) {
      const double u_component = rng.uniform();
      const double u_radius = rng.uniform_open();
      const double u_angle = rng.uniform();
      auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u_component);
      std::size_t comp = std::min(static_cast<std::size_t>(it - cumulative.begin()), last_positive);
      while (weights[comp] == 0.0 && comp > 0) --comp;
      const double r = sigma * airy_radius_quantile(u_radius);
      const double angle = 2.0 * std::numbers::pi * u_angle;
      const Vec2 p{centers[comp].x + r * std::cos(angle), centers[comp].y + r * std::sin(angle)};
      batch.points[i] = snap_to_grid(p, options.granularity);
    }
  }
  return batch;
}

}  // namespace airy
