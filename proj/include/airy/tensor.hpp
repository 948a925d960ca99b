#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "airy/estimate.hpp"
#include "airy/otf_oracle.hpp"
#include "airy/sampling.hpp"
#include "airy/vec2.hpp"

namespace airy::tensor {

// Frequency geometry in units of the cutoff 1/(pi sigma). c = (D + gamma_upper)/2
// for the normalised separation D, the sampling disk has radius R = gamma_upper/(2c)
// and the steering step is r = (1 - 2R)/4, so |w_a + w_b + v_i| <= 1/2 + R < 1.
struct SteeringFrequencies {
  double R = 0.0;
  double r = 0.0;
  Vec2 v{1.0, 0.0};

  Vec2 shift(int i) const;  // i = 0, 1, 2 gives r v, 2 r v, 0
};

// Throws MarginTooSmall when D - gamma_upper <= 1e-3.
SteeringFrequencies steering_for(double normalized_separation, Vec2 v);

struct MeasurementTensor {
  int m_prime = 0;
  // T(a, b, i) at (a * m_prime + b) * 3 + i, already divided by the OTF.
  std::vector<cplx> entries;
  std::vector<Vec2> rows;  // m sampled rows, probe x, probe y, zero
  std::vector<Vec2> shifts;
  SteeringFrequencies steering;
  double cutoff = 0.0;       // 1/(pi sigma) of the frame
  double probe_radius = 0.0;  // absolute length of the two probe rows

  int probe_x_row() const { return m_prime - 3; }
  int probe_y_row() const { return m_prime - 2; }
  int zero_row() const { return m_prime - 1; }
  cplx at(int a, int b, int i) const { return entries[(static_cast<std::size_t>(a) * m_prime + b) * 3 + i]; }
  Eigen::MatrixXcd slice(int i) const;
};

// m rows drawn uniformly from the radius-R disk plus the three fixed rows.
// `separation` and the returned frequencies are in the oracle's frame.
// The probe radius is min(probe, R) cutoffs, further capped at 1.35 so that a
// center within 1/3 of the origin keeps its probe phase inside (-pi, pi).
MeasurementTensor build_tensor(OtfOracle &oracle, int k, double separation, int m, std::uint64_t seed,
                               double probe = 0.45);

// Simultaneous diagonalisation of slices 0 and 1. Returns V-hat with columns
// divided by their zero-frequency entry, so that row is exactly 1.
Eigen::MatrixXcd jennrich(const MeasurementTensor &tensor, int k);

// Centers from the probe-row phases and real least-squares weights against
// the column T(., zero, 2).
ParameterEstimate decode(const MeasurementTensor &tensor, const Eigen::MatrixXcd &v_hat);

struct TensorOptions {
  int k = 1;
  double eps1 = 0.05;
  double eps2 = 0.05;
  double delta = 0.1;
  // Minimum separation, in the units of the input (frame units for the
  // oracle overload). Must exceed gamma_upper * pi * sigma.
  double separation = 0.0;
  std::optional<double> radius;  // bound on |mu|; estimated when absent
  int m = 0;                     // sampled rows; 0 selects default_row_count
  std::uint64_t seed = 0;
  double probe = 0.45;
  double row_constant = 0.1;
};

// max(k + 2, ceil(C k^2 ln(k/delta) / min(D - gamma_upper, 1))).
int default_row_count(int k, double normalized_separation, double delta, double constant = 0.1);

ParameterEstimate tensor_resolve(OtfOracle &oracle, const TensorOptions &options);

// Rescales so that the centers lie within 1/3 of the origin, then resolves.
ParameterEstimate tensor_resolve(const PhotonBatch &batch, const TensorOptions &options);

// Condition number of V(a, j) = exp(-2 pi i <mu_j, w_a>) for m frequencies
// drawn uniformly from the radius-R disk. Infinite when V is numerically singular.
double empirical_kappa(std::span<const Vec2> centers, int m, double radius, std::uint64_t seed);

}  // namespace airy::tensor
