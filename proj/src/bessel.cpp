#include "airy/bessel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace airy {
namespace {

// Below this the ascending series in double is accurate to ~1e-14; between it
// and kAsymptoticStart the series runs in extended precision to survive the
// cancellation between terms of size up to ~I_0(x).
constexpr double kDoubleSeriesLimit = 8.0;
constexpr double kAsymptoticStart = 17.0;

template <typename Real>
Real ascending_series(int order, Real x) {
  const Real q = x * x / 4;
  Real lead = 1;
  for (int i = 1; i <= order; ++i) lead *= x / (2 * i);
  Real term = lead;
  Real sum = lead;
  for (int m = 1; m < 80; ++m) {
    term *= -q / (Real(m) * Real(m + order));
    sum += term;
    if (std::abs(term) < std::numeric_limits<Real>::epsilon() * Real(1e-3)) break;
  }
  return sum;
}

// Hankel's expansion: J_nu(x) = sqrt(2/(pi x)) (P cos chi - Q sin chi),
// chi = x - (nu/2 + 1/4) pi. Summed until terms stop shrinking.
struct Hankel {
  double p;
  double q;
};

Hankel hankel_pq(int order, double x) {
  const double mu = 4.0 * order * order;
  double p = 1.0, q = 0.0;
  double term = 1.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (k * 8.0 * x);
    const double mag = std::abs(term);
    if (mag > prev) break;
    prev = mag;
    // a_k / x^k contributes to Q for odd k, P for even k, with alternating sign
    // within each series.
    const int half = k / 2;
    const double sign = (half % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 1) {
      q += sign * term;
    } else {
      p += sign * term;
    }
    if (mag < 1e-17) break;
  }
  return {p, q};
}

// cos(x - phase) and sin(x - phase) for phase = (2 nu + 1) pi / 4.
void shifted_sincos(int order, double x, double &c, double &s) {
  const double sx = std::sin(x), cx = std::cos(x);
  constexpr double h = std::numbers::sqrt2 / 2.0;
  // phase pi/4, 3pi/4, 5pi/4
  double cp, sp;
  switch (order) {
    case 0: cp = h; sp = h; break;
    case 1: cp = -h; sp = h; break;
    default: cp = -h; sp = -h; break;
  }
  c = cx * cp + sx * sp;
  s = sx * cp - cx * sp;
}

double asymptotic(int order, double x) {
  const Hankel h = hankel_pq(order, x);
  double c, s;
  shifted_sincos(order, x, c, s);
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (h.p * c - h.q * s);
}

double positive_branch(int order, double x) {
  if (x <= kDoubleSeriesLimit) return ascending_series<double>(order, x);
  if (x <= kAsymptoticStart) {
    return static_cast<double>(ascending_series<long double>(order, static_cast<long double>(x)));
  }
  return asymptotic(order, x);
}

}  // namespace

double bessel_j(int order, double x) {
  if (order < 0 || order > 2) throw std::invalid_argument("bessel_j: order must be 0, 1 or 2");
  if (std::isnan(x)) return x;
  const double ax = std::abs(x);
  const double v = positive_branch(order, ax);
  return (x < 0 && order == 1) ? -v : v;
}

BesselJ01 bessel_j01(double x) {
  if (std::isnan(x)) return {x, x};
  const double ax = std::abs(x);
  double j0, j1;
  if (ax <= kAsymptoticStart) {
    j0 = positive_branch(0, ax);
    j1 = positive_branch(1, ax);
  } else {
    const Hankel h0 = hankel_pq(0, ax);
    const Hankel h1 = hankel_pq(1, ax);
    const double sx = std::sin(ax), cx = std::cos(ax);
    constexpr double h = std::numbers::sqrt2 / 2.0;
    // chi0 = x - pi/4, chi1 = x - 3pi/4
    const double c0 = h * (cx + sx), s0 = h * (sx - cx);
    const double c1 = h * (sx - cx), s1 = -h * (cx + sx);
    const double amp = std::sqrt(2.0 / (std::numbers::pi * ax));
    j0 = amp * (h0.p * c0 - h0.q * s0);
    j1 = amp * (h1.p * c1 - h1.q * s1);
  }
  if (x < 0) j1 = -j1;
  return {j0, j1};
}

}  // namespace airy
