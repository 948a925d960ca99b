#pragma once

#include <numbers>

#include "airy/vec2.hpp"

namespace airy {

// First positive zero of J0 and J1.
inline constexpr double kJ0FirstZero = 2.404825557695772768621631879326;
inline constexpr double kJ1FirstZero = 3.831705970207512315614435886309;

// Separation constants bracketing the diffraction threshold, in units of sigma*pi.
// Above gamma_upper the tensor learner applies; below gamma_lower the lattice
// instances are statistically indistinguishable.
inline constexpr double kGammaUpper = 2.0 * kJ0FirstZero / std::numbers::pi;
inline const double kGammaLower = std::sqrt(4.0 / 3.0);

class SpreadParameter {
 public:
  // Throws std::invalid_argument unless sigma is finite and positive.
  explicit SpreadParameter(double sigma);
  double value() const noexcept { return sigma_; }

 private:
  double sigma_;
};

struct ResolutionCriteria {
  double abbe;
  double rayleigh;
  double sparrow;
  double houston;
  double buxton;
  double schuster;
  double dawes;
};

ResolutionCriteria resolution_criteria(SpreadParameter sigma);

// Airy density centred at `center`: (1/(pi sigma^2)) (J1(t)/t)^2, t = |z - center|/sigma.
double airy_psf(Vec2 point, Vec2 center, SpreadParameter sigma);

// Same density as a function of t = |z - center|/sigma, without the 1/sigma^2 factor.
double airy_profile(double t);

// Fourier transform of the Airy density at frequency radius r; zero at and
// beyond the cutoff 1/(pi sigma).
double otf(double radius, SpreadParameter sigma);

inline double otf_cutoff(SpreadParameter sigma) {
  return 1.0 / (std::numbers::pi * sigma.value());
}

// Probability that a photon lands within t*sigma of its centre: 1 - J0(t)^2 - J1(t)^2.
double radial_cdf(double t);

// 1 - radial_cdf(t), computed without cancellation.
double radial_survival(double t);

// Radial marginal density 2 J1(t)^2 / t.
double radial_density(double t);

}  // namespace airy
