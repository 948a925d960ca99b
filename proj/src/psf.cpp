#include "airy/psf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "airy/bessel.hpp"

namespace airy {

SpreadParameter::SpreadParameter(double sigma) : sigma_(sigma) {
  if (!(std::isfinite(sigma) && sigma > 0.0)) {
    throw std::invalid_argument("sigma must be finite and positive, got " + std::to_string(sigma));
  }
}

ResolutionCriteria resolution_criteria(SpreadParameter sigma) {
  const double abbe = std::numbers::pi * sigma.value();
  return {abbe, 1.22 * abbe, 0.94 * abbe, 1.03 * abbe, 1.46 * abbe, 2.44 * abbe, 1.02 * abbe};
}

double airy_profile(double t) {
  t = std::abs(t);
  double ratio;
  if (t < 1e-6) {
    ratio = 0.5 - t * t / 16.0;
  } else {
    ratio = bessel_j(1, t) / t;
  }
  return ratio * ratio / std::numbers::pi;
}

double airy_psf(Vec2 point, Vec2 center, SpreadParameter sigma) {
  const double s = sigma.value();
  return airy_profile(distance(point, center) / s) / (s * s);
}

double otf(double radius, SpreadParameter sigma) {
  const double s = std::clamp(std::numbers::pi * sigma.value() * radius, -1.0, 1.0);
  if (s >= 1.0) return 0.0;
  return (2.0 / std::numbers::pi) * (std::acos(s) - s * std::sqrt(1.0 - s * s));
}

namespace {

// 1 - J0^2 - J1^2 = sum_{n>=1} (-1)^(n+1) (2n)! q^n / ((n!)^4 (n+1)),  q = t^2/4.
// Alternating with no cancellation for t <= 2, unlike the Bessel form near 0.
double cdf_series(double t) {
  const double q = t * t / 4.0;
  double coeff = 2.0;  // (2n)!/(n!)^4 at n = 1
  double qn = q;
  double sum = 0.0;
  for (int n = 1; n < 40; ++n) {
    const double term = coeff * qn / (n + 1);
    sum += (n % 2 == 1) ? term : -term;
    if (term < 1e-18 * sum) break;
    // (2n+2)!/((n+1)!)^4 = (2n)!/(n!)^4 * (2n+1)(2n+2)/(n+1)^4
    coeff *= (2.0 * n + 1.0) * (2.0 * n + 2.0) / std::pow(n + 1.0, 4);
    qn *= q;
  }
  return sum;
}

constexpr double kSeriesLimit = 2.0;

}  // namespace

double radial_cdf(double t) {
  if (t <= 0.0) return 0.0;
  if (t <= kSeriesLimit) return cdf_series(t);
  const BesselJ01 j = bessel_j01(t);
  return 1.0 - j.j0 * j.j0 - j.j1 * j.j1;
}

double radial_survival(double t) {
  if (t <= 0.0) return 1.0;
  if (t <= kSeriesLimit) return 1.0 - cdf_series(t);
  const BesselJ01 j = bessel_j01(t);
  return j.j0 * j.j0 + j.j1 * j.j1;
}

double radial_density(double t) {
  if (t <= 0.0) return 0.0;
  if (t < 1e-6) return t / 2.0;
  const double j1 = bessel_j(1, t);
  return 2.0 * j1 * j1 / t;
}

}  // namespace airy
