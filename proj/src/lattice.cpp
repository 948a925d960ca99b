#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "airy/errors.hpp"
#include "airy/lowerbound.hpp"
#include "airy/psf.hpp"

namespace airy::lowerbound {

LatticeInstance lattice_instance(const LatticeParams &params) {
  const int ell = params.ell;
  const int r = params.r;
  if (ell < 2 || ell % 2 != 0) throw BadShape("lattice: ell must be even and positive");
  if (r < 1) throw BadShape("lattice: r must be positive");
  if (params.m < 1 || params.m % 2 == 0) throw BadShape("lattice: m must be a positive odd integer");
  const double eps = params.epsilon.value_or(std::min(4.0 / ell, 0.9));
  if (!(eps > 0.0 && eps < 1.0)) throw BadShape("lattice: epsilon must lie in (0, 1)");

  const FejerCoefficients alpha = fejer_power_coeffs(ell, r);
  const int h = alpha.half_width();
  const int side = 2 * h + 1;

  const double separation = 2.0 / params.m;
  const double sigma_value = 2.0 / ((1.0 - eps) * kGammaLower * std::numbers::pi * params.m);

  auto coeff = [&](int j) {
    const double a = alpha.at(j);
    return (params.literal_alpha_prime && j != 0) ? params.m * a : a;
  };
  const double half = separation / 2.0;
  const double row = std::sqrt(3.0) * half;
  std::vector<double> u;
  std::vector<Vec2> nodes;
  std::vector<double> pos, neg;
  std::vector<Vec2> pos_c, neg_c;
  for (int j1 = -h; j1 <= h; ++j1) {
    for (int j2 = -h; j2 <= h; ++j2) {
      const Vec2 node{half * j1, row * j2};
      const double mag = coeff(j1) * coeff(j2);
      const bool even = ((j1 + j2) % 2) == 0;
      nodes.push_back(node);
      u.push_back(even ? mag : -mag);
      (even ? pos : neg).push_back(mag);
      (even ? pos_c : neg_c).push_back(node);
    }
  }
  // Exact per-class normalisation; both classes then sum to 1.
  double sp = 0.0, sn = 0.0;
  for (double w : pos) sp += w;
  for (double w : neg) sn += w;
  if (!(sp > 0.0 && sn > 0.0)) throw BadShape("lattice: a sign class has zero mass");
  for (double &w : u) w /= (w >= 0.0 ? sp : sn);
  const SpreadParameter sigma(sigma_value);
  return LatticeInstance{
      .rho = SuperpositionModel::normalized(std::move(pos), std::move(pos_c), sigma),
      .rho_prime = SuperpositionModel::normalized(std::move(neg), std::move(neg_c), sigma),
      .u = std::move(u),
      .nodes = std::move(nodes),
      .ell = ell,
      .r = r,
      .side = side,
      .k = side * side,
      .m = params.m,
      .epsilon = eps,
      .sigma = sigma_value,
      .separation = separation,
  };
}

double exp_sum_sup(const LatticeInstance &inst, int res) {
  if (res < 64) throw std::invalid_argument("exp_sum_sup: grid resolution must be at least 64");
  const int side = inst.side;
  const int h = side / 2;
  const double half = inst.separation / 2.0;
  const double row = std::sqrt(3.0) * half;
  const double radius = 1.0 / (std::numbers::pi * inst.sigma);

  double best = 0.0;
#pragma omp parallel for schedule(dynamic) reduction(max : best)
  for (int i = 0; i < res; ++i) {
    const double rho = radius * i / (res - 1.0);
    std::vector<std::complex<double>> p1(static_cast<std::size_t>(side)), p2(static_cast<std::size_t>(side));
    for (int a = 0; a < res; ++a) {
      const double th = 2.0 * std::numbers::pi * a / res;
      const double x1 = rho * std::cos(th), x2 = rho * std::sin(th);
      for (int j = -h; j <= h; ++j) {
        p1[static_cast<std::size_t>(j + h)] = std::polar(1.0, -2.0 * std::numbers::pi * half * j * x1);
        p2[static_cast<std::size_t>(j + h)] = std::polar(1.0, -2.0 * std::numbers::pi * row * j * x2);
      }
      std::complex<double> total = 0.0;
      for (int j1 = 0; j1 < side; ++j1) {
        std::complex<double> inner = 0.0;
        const double *u = inst.u.data() + static_cast<std::size_t>(j1) * side;
        for (int j2 = 0; j2 < side; ++j2) inner += u[j2] * p2[static_cast<std::size_t>(j2)];
        total += p1[static_cast<std::size_t>(j1)] * inner;
      }
      best = std::max(best, std::norm(total));
    }
  }
  return best;
}

}  // namespace airy::lowerbound
