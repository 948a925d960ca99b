#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "airy/model.hpp"
#include "airy/vec2.hpp"

namespace airy::lowerbound {

// K_l(x) = (1/l^2) (sin(l pi x) / sin(pi x))^2, falling back to the
// coefficient sum where sin(pi x) is within 1e-6 of zero.
double fejer_eval(int ell, double x);

// (1/l^2) sum_{|j| < l} (l - |j|) cos(2 pi j x).
double fejer_eval_series(int ell, double x);

struct FejerCoefficients {
  int ell = 0;
  int r = 0;
  std::vector<double> coeffs;  // index j + r l for j in [-r l, r l]

  int half_width() const { return r * ell; }
  double at(int j) const;  // zero outside the stored range
};

// r-fold self-convolution of alpha_j = (l - |j|) / l^2.
FejerCoefficients fejer_power_coeffs(int ell, int r);

struct LatticeParams {
  int ell = 2;
  int r = 1;
  std::optional<double> epsilon;  // defaults to 4 / ell, clamped below 1
  int m = 5;                      // odd; separation is 2 / m
  bool literal_alpha_prime = false;
};

struct LatticeInstance {
  SuperpositionModel rho;        // the j1 + j2 even class
  SuperpositionModel rho_prime;  // the j1 + j2 odd class
  // Signed weights u and centers on the (2 r l + 1)^2 grid, row-major in (j1, j2).
  std::vector<double> u;
  std::vector<Vec2> nodes;
  int ell = 0;
  int r = 0;
  int side = 0;
  int k = 0;
  int m = 0;
  double epsilon = 0.0;
  double sigma = 0.0;
  double separation = 0.0;
};

// Throws BadShape for odd or non-positive ell, r < 1, an even m, or epsilon
// outside (0, 1).
LatticeInstance lattice_instance(const LatticeParams &params);

// max |sum_j u_j exp(-2 pi i <nu_j, x>)|^2 over the polar grid with radii
// R i / (res - 1) and angles 2 pi j / res, R = 1 / (pi sigma).
double exp_sum_sup(const LatticeInstance &instance, int grid_resolution);

struct MomentMatchInstance {
  SuperpositionModel rho;
  SuperpositionModel rho_prime;
  int k = 0;
  double delta = 0.0;
};

// Weights solved by elimination with partial pivoting on nodes scaled into
// [-1, 1]. Throws BadShape for odd or non-positive k and SingularSystem for a
// pivot below 1e-14.
MomentMatchInstance moment_match_instance(int k, double delta, double sigma);

// Equal-footing proposal: both models' centers with weights lambda / 2 and
// lambda' / 2, each convolved with the radial kernel P scaled by pi sigma.
struct Proposal {
  std::vector<double> weights;
  std::vector<Vec2> centers;
  double scale = 1.0;

  static Proposal for_pair(const SuperpositionModel &a, const SuperpositionModel &b);

  double density(Vec2 z) const;
  // Uses exactly four uniforms per draw so sweeps share random numbers.
  Vec2 sample(double u_component, double u_branch, double u_radius, double u_angle) const;
};

double proposal_density(Vec2 point, const Proposal &proposal);
Vec2 proposal_sample(const Proposal &proposal, std::uint64_t seed, std::uint64_t index = 0);

struct TvEstimate {
  double tv = 0.0;       // half the mean of |rho/mu - rho'/mu|
  double l1_mean = 0.0;  // the mean itself
  double std_error = 0.0;
  std::size_t n = 0;
};

// Draws in fixed chunks with substream = chunk index, so results do not depend
// on the thread count and equal seeds give common random numbers across instances.
TvEstimate tv_estimate(const SuperpositionModel &rho, const SuperpositionModel &rho_prime, std::size_t n_samples,
                       std::uint64_t seed);

}  // namespace airy::lowerbound
