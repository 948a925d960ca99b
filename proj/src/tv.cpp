#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "airy/lowerbound.hpp"
#include "airy/rng.hpp"
#include "airy/sampling.hpp"

namespace airy::lowerbound {

namespace {

// Radial kernel in units of the scale: half uniform radius on [0, 1], half
// Pareto(2/3) on [1, inf). Density per unit area at distance s.
double kernel_area_density(double s) {
  if (!(s > 0.0)) return std::numeric_limits<double>::infinity();
  const double radial = s <= 1.0 ? 0.5 : 0.5 * (2.0 / 3.0) * std::pow(s, -5.0 / 3.0);
  return radial / (2.0 * std::numbers::pi * s);
}

}  // namespace

Proposal Proposal::for_pair(const SuperpositionModel &a, const SuperpositionModel &b) {
  Proposal p;
  for (const auto *model : {&a, &b}) {
    for (std::size_t i = 0; i < model->size(); ++i) {
      p.weights.push_back(0.5 * model->weights()[i]);
      p.centers.push_back(model->centers()[i]);
    }
  }
  p.scale = std::numbers::pi * a.sigma().value();
  return p;
}

double Proposal::density(Vec2 z) const {
  double total = 0.0;
  const double inv = 1.0 / scale;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] == 0.0) continue;
    total += weights[i] * kernel_area_density(distance(z, centers[i]) * inv);
  }
  return total * inv * inv;
}

Vec2 Proposal::sample(double u_component, double u_branch, double u_radius, double u_angle) const {
  std::size_t pick = weights.size() - 1;
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (u_component < acc) {
      pick = i;
      break;
    }
  }
  // u_radius lies in (0, 1), so the Pareto draw is finite.
  const double s = u_branch < 0.5 ? u_radius : std::pow(u_radius, -1.5);
  return centers[pick] + unit_vector(2.0 * std::numbers::pi * u_angle) * (s * scale);
}

double proposal_density(Vec2 point, const Proposal &proposal) { return proposal.density(point); }

Vec2 proposal_sample(const Proposal &proposal, std::uint64_t seed, std::uint64_t index) {
  CounterRng rng(seed, streams::kProposal, index);
  const double a = rng.uniform(), b = rng.uniform(), c = rng.uniform_open(), d = rng.uniform();
  return proposal.sample(a, b, c, d);
}

TvEstimate tv_estimate(const SuperpositionModel &rho, const SuperpositionModel &rho_prime, std::size_t n,
                       std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("tv_estimate: need at least two samples");
  if (rho.sigma().value() != rho_prime.sigma().value()) {
    throw std::invalid_argument("tv_estimate: models must share sigma");
  }
  const Proposal proposal = Proposal::for_pair(rho, rho_prime);
  const std::size_t chunks = (n + kSampleChunk - 1) / kSampleChunk;
  std::vector<double> sums(chunks, 0.0), squares(chunks, 0.0);

#pragma omp parallel for schedule(dynamic)
  for (std::size_t c = 0; c < chunks; ++c) {
    CounterRng rng(seed, streams::kProposal, c);
    const std::size_t count = std::min(kSampleChunk, n - c * kSampleChunk);
    double s = 0.0, q = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      const double a = rng.uniform(), b = rng.uniform(), r = rng.uniform_open(), d = rng.uniform();
      const Vec2 z = proposal.sample(a, b, r, d);
      const double mu = proposal.density(z);
      const double v = std::isfinite(mu) ? std::abs(rho.density(z) - rho_prime.density(z)) / mu : 0.0;
      s += v;
      q += v * v;
    }
    sums[c] = s;
    squares[c] = q;
  }
  double s = 0.0, q = 0.0;
  for (std::size_t c = 0; c < chunks; ++c) {
    s += sums[c];
    q += squares[c];
  }
  const double nd = static_cast<double>(n);
  const double mean = s / nd;
  const double var = std::max(0.0, (q - nd * mean * mean) / (nd - 1.0));
  TvEstimate out;
  out.l1_mean = mean;
  out.tv = 0.5 * mean;
  // The delete-one jackknife of a sample mean reduces to s / sqrt(n).
  out.std_error = 0.5 * std::sqrt(var / nd);
  out.n = n;
  return out;
}

}  // namespace airy::lowerbound
