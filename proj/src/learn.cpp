#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <numbers>

#include "airy/errors.hpp"
#include "airy/mpm.hpp"
#include "airy/psf.hpp"
#include "airy/rng.hpp"
#include "airy/sampling.hpp"

namespace airy::mpm {

int iteration_count(double delta, double constant) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  return std::max(1, static_cast<int>(std::ceil(constant * std::log(1.0 / delta))));
}

namespace {

// Angle between the two directions of one iteration. For k >= 2 the chord
// |w1 - w2| equals separation * sin(theta) / 8 with theta = pi / (3 k^2 (k - 1)).
double pair_angle(int k, double separation) {
  if (k == 1) return std::numbers::pi / 2.0;
  const double theta = std::numbers::pi / (3.0 * k * k * (k - 1.0));
  const double chord = separation * std::sin(theta) / 8.0;
  return 2.0 * std::asin(std::min(1.0, chord / 2.0));
}

double min_separation(const std::vector<Vec2> &centers) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < centers.size(); ++i) {
    for (std::size_t j = i + 1; j < centers.size(); ++j) best = std::min(best, distance(centers[i], centers[j]));
  }
  return best;
}

}  // namespace

ParameterEstimate learn_airy_disks(OtfOracle &oracle, double separation, const LearnOptions &options) {
  const int k = options.k;
  if (k < 1) throw std::invalid_argument("learn_airy_disks: k must be positive");
  if (k >= 2 && !(separation > 0.0)) throw std::invalid_argument("learn_airy_disks: separation must be positive");
  const int iterations = iteration_count(options.delta, options.iteration_constant);
  const double angle = pair_angle(k, separation);

  std::vector<Vec2> directions;
  directions.reserve(2 * static_cast<std::size_t>(iterations));
  for (int t = 0; t < iterations; ++t) {
    CounterRng rng(options.seed, streams::kDirections, static_cast<std::uint64_t>(t));
    const Vec2 w1 = unit_vector(2.0 * std::numbers::pi * rng.uniform());
    const double side = rng.uniform() < 0.5 ? 1.0 : -1.0;
    directions.push_back(w1);
    directions.push_back(rotate(w1, side * angle));
  }

  // One batched oracle call for every iteration's frequencies.
  std::vector<Vec2> freqs;
  for (const Vec2 &w : directions) {
    const auto f = pencil_frequencies(w, k);
    freqs.insert(freqs.end(), f.begin(), f.end());
  }
  const auto moments = query_deconvolved(oracle, freqs);

  std::vector<ParameterEstimate> candidates;
  int failed = 0;
  const std::size_t per = 2 * static_cast<std::size_t>(k);
  for (int t = 0; t < iterations; ++t) {
    const std::size_t a = 2 * static_cast<std::size_t>(t);
    try {
      const auto e1 = pencil_from_moments(directions[a], std::span(moments).subspan(a * per, per), k);
      const auto e2 = pencil_from_moments(directions[a + 1], std::span(moments).subspan((a + 1) * per, per), k);
      candidates.push_back(pre_consolidate(directions[a], directions[a + 1], e1, e2));
    } catch (const NumericalError &) {
      ++failed;
    }
  }
  if (candidates.empty()) throw PartitionMismatch("every iteration failed; no candidates to select from");

  ParameterEstimate out = select(candidates, options.eps1 / 3.0, options.eps2);
  out.meta.method = "mpm";
  out.meta.seed = options.seed;
  out.meta.separation = separation;
  out.meta.iterations = iterations;
  out.meta.failed_iterations = failed;
  out.meta.queries = oracle.queries();
  out.meta.directions = directions;
  // The frame's largest query radius is (2k - 1) / 4k.
  out.meta.eta_certified = oracle.certified_eta(freqs.size(), (2.0 * k - 1.0) / (4.0 * k));
  // Implicit constants set to 1 and lambda_min taken as 1/k.
  const double base = (k == 1) ? 1.0 : separation / (4.0 * k);
  out.meta.eta_required = std::pow(base, k * k) * std::min(options.eps1, options.eps2) / (k * k);
  out.meta.budget_shortfall = out.meta.eta_certified > out.meta.eta_required;
  return out;
}

double estimate_radius(const PhotonBatch &batch, double tail) {
  if (batch.points.empty() || !(batch.sigma > 0.0)) throw std::invalid_argument("estimate_radius: need photons and sigma");
  std::vector<double> radii;
  radii.reserve(batch.points.size());
  for (const Vec2 &p : batch.points) radii.push_back(norm(p));
  const double q = 1.0 - tail;
  const auto idx = static_cast<std::size_t>(q * static_cast<double>(radii.size() - 1));
  std::nth_element(radii.begin(), radii.begin() + static_cast<std::ptrdiff_t>(idx), radii.end());
  const double spread = batch.sigma * airy_radius_quantile(q);
  return std::max(batch.sigma, radii[idx] - spread);
}

ParameterEstimate learn_airy_disks(const PhotonBatch &batch, const LearnOptions &options) {
  if (!(batch.sigma > 0.0)) throw std::invalid_argument("learn_airy_disks: photon batch has no sigma");
  const int k = options.k;
  const double radius = options.radius.value_or(estimate_radius(batch, 0.1));
  // Keep the highest pencil frequency at most 0.9 of the cutoff in the new frame.
  const double top = (2.0 * k - 1.0) / (4.0 * k);
  const double max_scale = 0.9 / (std::numbers::pi * batch.sigma * top);
  const Rescaling rescale = Rescaling::for_radius(radius, max_scale);
  PhotonOracle oracle(rescale.apply(batch));

  LearnOptions frame = options;
  frame.eps1 = options.eps1 * rescale.scale;

  const double abbe = std::numbers::pi * batch.sigma;
  double separation;
  if (options.separation) {
    separation = *options.separation;
  } else {
    const ParameterEstimate coarse = learn_airy_disks(oracle, abbe / 4.0 * rescale.scale, frame);
    separation = (k >= 2) ? std::max(abbe / 8.0, min_separation(coarse.centers) / rescale.scale) : abbe;
  }

  ParameterEstimate out = learn_airy_disks(oracle, separation * rescale.scale, frame);
  for (Vec2 &c : out.centers) c = rescale.unscale(c);
  out.meta.scale = rescale.scale;
  out.meta.separation = separation;
  out.meta.queries = oracle.queries();
  return out;
}

}  // namespace airy::mpm
