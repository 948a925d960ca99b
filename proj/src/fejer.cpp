#include <cmath>
#include <numbers>

#include "airy/errors.hpp"
#include "airy/lowerbound.hpp"

namespace airy::lowerbound {

double fejer_eval_series(int ell, double x) {
  if (ell < 1) throw std::invalid_argument("fejer: ell must be positive");
  double total = ell;
  for (int j = 1; j < ell; ++j) total += 2.0 * (ell - j) * std::cos(2.0 * std::numbers::pi * j * x);
  return total / (static_cast<double>(ell) * ell);
}

double fejer_eval(int ell, double x) {
  if (ell < 1) throw std::invalid_argument("fejer: ell must be positive");
  // Reduce to [-1/2, 1/2) first; the kernel has period 1.
  const double y = x - std::floor(x + 0.5);
  const double den = std::sin(std::numbers::pi * y);
  if (std::abs(den) < 1e-6) return fejer_eval_series(ell, y);
  const double q = std::sin(ell * std::numbers::pi * y) / den;
  return q * q / (static_cast<double>(ell) * ell);
}

double FejerCoefficients::at(int j) const {
  const int h = half_width();
  if (j < -h || j > h) return 0.0;
  return coeffs[static_cast<std::size_t>(j + h)];
}

FejerCoefficients fejer_power_coeffs(int ell, int r) {
  if (ell < 2 || ell % 2 != 0) throw BadShape("fejer_power_coeffs: ell must be even and positive");
  if (r < 1) throw BadShape("fejer_power_coeffs: r must be positive");
  const double l2 = static_cast<double>(ell) * ell;
  std::vector<double> base(static_cast<std::size_t>(2 * ell + 1));
  for (int j = -ell; j <= ell; ++j) base[static_cast<std::size_t>(j + ell)] = (ell - std::abs(j)) / l2;

  std::vector<double> acc = base;
  for (int p = 1; p < r; ++p) {
    std::vector<double> next(acc.size() + base.size() - 1, 0.0);
    for (std::size_t a = 0; a < acc.size(); ++a) {
      for (std::size_t b = 0; b < base.size(); ++b) next[a + b] += acc[a] * base[b];
    }
    acc = std::move(next);
  }
  FejerCoefficients out;
  out.ell = ell;
  out.r = r;
  out.coeffs = std::move(acc);
  return out;
}

}  // namespace airy::lowerbound
