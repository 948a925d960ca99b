#pragma once

#include <complex>
#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "airy/estimate.hpp"
#include "airy/otf_oracle.hpp"
#include "airy/sampling.hpp"
#include "airy/vec2.hpp"

namespace airy::mpm {

struct ProjectedEstimate {
  Vec2 direction;
  std::vector<double> proj_centers;  // <mu_j, direction>
  std::vector<double> weights;
};

// The 2k query frequencies l * direction / (4k), l = 0 .. 2k-1.
std::vector<Vec2> pencil_frequencies(Vec2 direction, int k);

// Matrix pencil on the moments v_l = F(l direction / 4k), l = 0 .. 2k-1.
// v_0 is replaced by 1. Throws PencilFailure when an eigenvalue is too close to
// zero or its phase leaves the unambiguous range |m| < k.
ProjectedEstimate pencil_from_moments(Vec2 direction, std::span<const std::complex<double>> moments, int k);

// Queries the oracle at the pencil frequencies and runs the pencil. Requires
// all frequencies inside the cutoff of the oracle's frame.
ProjectedEstimate modified_mpm(Vec2 direction, OtfOracle &oracle, int k);

struct ConditioningReport {
  double delta_prime = 0.0;
  double sigma_min_sq_lb = 0.0;  // (D^k / k^2)^(k-1)
  double kappa_sq_ub = 0.0;      // k^(2k-1) / D^(k(k-1))
  double measured_sigma_min = 0.0;  // k equispaced nodes D apart
  double measured_kappa = 0.0;
};

ConditioningReport vandermonde_bounds(double delta_prime, int k);

// k x k Vandermonde matrix with rows alpha^0 .. alpha^(k-1) and nodes exp(2 pi i x_j).
Eigen::MatrixXcd vandermonde(std::span<const double> nodes_in_turns);

// Pairs the i-th smallest projection along w1 with the i-th smallest along w2
// and solves the 2x2 system. Throws DegenerateDirections if |det| < 1e-14.
ParameterEstimate pre_consolidate(Vec2 w1, Vec2 w2, const ProjectedEstimate &e1, const ProjectedEstimate &e2);

// Robust aggregation of candidate estimates. Throws PartitionMismatch when the
// dense points do not form exactly k single-linkage groups at 6 eps1.
ParameterEstimate select(std::span<const ParameterEstimate> candidates, double eps1, double eps2);

struct LearnOptions {
  int k = 1;
  double eps1 = 0.05;
  double eps2 = 0.05;
  double delta = 0.1;
  // Minimum separation in original units. When absent, a coarse run at a
  // quarter of the Abbe length is refined once from its own estimate.
  std::optional<double> separation;
  // Bound on |mu|; estimated from the photons when absent.
  std::optional<double> radius;
  std::uint64_t seed = 0;
  double iteration_constant = 48.0;
};

// Number of outer iterations, ceil(C ln(1/delta)).
int iteration_count(double delta, double constant = 48.0);

// Full learner on an oracle already in the rescaled frame (|mu| <= 1/3).
ParameterEstimate learn_airy_disks(OtfOracle &oracle, double separation, const LearnOptions &options);

// Rescales the batch, learns, and maps the centers back.
ParameterEstimate learn_airy_disks(const PhotonBatch &batch, const LearnOptions &options);

// The (1 - tail) quantile of photon radii minus the same quantile of the Airy
// radial law at this sigma; at least sigma. A heuristic, not a bound.
double estimate_radius(const PhotonBatch &batch, double tail = 0.1);

}  // namespace airy::mpm
