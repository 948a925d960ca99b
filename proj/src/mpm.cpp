#include "airy/mpm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "airy/errors.hpp"
#include "airy/linalg.hpp"

namespace airy::mpm {

using linalg::ComplexMatrix;
using linalg::ComplexVector;

namespace {

// Stacked real and imaginary residuals of sum_j w_j exp(-2 pi i l m_j / 4k) - v_l.
Eigen::VectorXd moment_residual(const Eigen::VectorXd &p, std::span<const std::complex<double>> v, int k) {
  Eigen::VectorXd r(4 * k);
  for (int l = 0; l < 2 * k; ++l) {
    std::complex<double> s = -v[l];
    for (int j = 0; j < k; ++j) s += p(k + j) * std::polar(1.0, -2.0 * std::numbers::pi * l * p(j) / (4.0 * k));
    r(l) = s.real();
    r(2 * k + l) = s.imag();
  }
  return r;
}

// Gauss-Newton on (m, w) against all 2k moments. The pencil's eigenvalues lose
// roughly an order of magnitude more than the data's own conditioning allows;
// a few steps recover it. A step is kept only if it lowers the residual.
void polish(std::vector<double> &m, std::vector<double> &w, std::span<const std::complex<double>> v, int k) {
  Eigen::VectorXd p(2 * k);
  for (int j = 0; j < k; ++j) {
    p(j) = m[j];
    p(k + j) = w[j];
  }
  double current = moment_residual(p, v, k).squaredNorm();
  for (int it = 0; it < 4 && current > 0.0; ++it) {
    Eigen::MatrixXd jac(4 * k, 2 * k);
    for (int l = 0; l < 2 * k; ++l) {
      for (int j = 0; j < k; ++j) {
        const double turn = -2.0 * std::numbers::pi * l / (4.0 * k);
        const std::complex<double> e = std::polar(1.0, turn * p(j));
        const std::complex<double> dm = p(k + j) * std::complex<double>(0.0, turn) * e;
        jac(l, j) = dm.real();
        jac(2 * k + l, j) = dm.imag();
        jac(l, k + j) = e.real();
        jac(2 * k + l, k + j) = e.imag();
      }
    }
    const Eigen::VectorXd step = jac.colPivHouseholderQr().solve(-moment_residual(p, v, k));
    if (!step.allFinite()) return;
    const Eigen::VectorXd next = p + step;
    const double trial = moment_residual(next, v, k).squaredNorm();
    if (!(trial < current)) break;
    p = next;
    current = trial;
  }
  for (int j = 0; j < k; ++j) {
    m[j] = p(j);
    w[j] = p(k + j);
  }
}

}  // namespace

std::vector<Vec2> pencil_frequencies(Vec2 direction, int k) {
  if (k < 1) throw std::invalid_argument("pencil_frequencies: k must be positive");
  std::vector<Vec2> freqs;
  freqs.reserve(2 * static_cast<std::size_t>(k));
  for (int l = 0; l < 2 * k; ++l) freqs.push_back(direction * (static_cast<double>(l) / (4.0 * k)));
  return freqs;
}

ProjectedEstimate pencil_from_moments(Vec2 direction, std::span<const std::complex<double>> moments, int k) {
  if (k < 1) throw std::invalid_argument("pencil_from_moments: k must be positive");
  if (moments.size() < 2 * static_cast<std::size_t>(k)) {
    throw std::invalid_argument("pencil_from_moments: need 2k moments");
  }
  std::vector<std::complex<double>> v(moments.begin(), moments.begin() + 2 * k);
  v[0] = 1.0;

  ComplexMatrix x(k, k), y(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      x(i, j) = v[i + j];
      y(i, j) = v[i + j + 1];
    }
  }
  // Y u = alpha X u, so alpha_j = exp(-2 pi i m_j / 4k) on exact moments.
  const ComplexVector alpha = linalg::generalized_eig(y, x);

  ProjectedEstimate out;
  out.direction = direction;
  out.proj_centers.resize(k);
  for (int j = 0; j < k; ++j) {
    const double mag = std::abs(alpha(j));
    if (!(mag > 1e-8) || !std::isfinite(mag)) {
      throw PencilFailure("generalized eigenvalue with modulus " + std::to_string(mag));
    }
    const double phase = std::arg(alpha(j) / mag);
    // |m| < k keeps the phase within (-pi/2, pi/2); anything beyond cannot come
    // from centers inside radius 1/3.
    if (std::abs(phase) >= std::numbers::pi / 2.0) {
      throw PencilFailure("eigenvalue phase " + std::to_string(phase) + " outside (-pi/2, pi/2)");
    }
    out.proj_centers[j] = -phase * (4.0 * k) / (2.0 * std::numbers::pi);
  }

  // Weights from all 2k moments in least squares; the square k-row system
  // loses about one more digit at close nodes.
  ComplexMatrix vand(2 * k, k);
  for (int j = 0; j < k; ++j) {
    std::complex<double> p = 1.0;
    for (int l = 0; l < 2 * k; ++l) {
      vand(l, j) = p;
      p *= alpha(j);
    }
  }
  ComplexVector rhs(2 * k);
  for (int l = 0; l < 2 * k; ++l) rhs(l) = v[l];
  ComplexVector lambda;
  try {
    lambda = linalg::least_squares(vand, rhs);
  } catch (const RankDeficient &e) {
    throw PencilFailure(std::string("Vandermonde system: ") + e.what());
  }
  out.weights.resize(k);
  for (int j = 0; j < k; ++j) out.weights[j] = lambda(j).real();
  polish(out.proj_centers, out.weights, v, k);
  return out;
}

ProjectedEstimate modified_mpm(Vec2 direction, OtfOracle &oracle, int k) {
  const auto freqs = pencil_frequencies(direction, k);
  const auto moments = query_deconvolved(oracle, freqs);
  return pencil_from_moments(direction, moments, k);
}

Eigen::MatrixXcd vandermonde(std::span<const double> nodes) {
  const auto k = static_cast<Eigen::Index>(nodes.size());
  Eigen::MatrixXcd v(k, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    for (Eigen::Index l = 0; l < k; ++l) {
      v(l, j) = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(l) * nodes[j]);
    }
  }
  return v;
}

ConditioningReport vandermonde_bounds(double delta_prime, int k) {
  if (!(delta_prime > 0.0 && delta_prime <= 1.0 / 16.0)) {
    throw std::invalid_argument("vandermonde_bounds: delta_prime must lie in (0, 1/16]");
  }
  if (k < 1) throw std::invalid_argument("vandermonde_bounds: k must be positive");
  ConditioningReport r;
  r.delta_prime = delta_prime;
  const double kd = k;
  r.sigma_min_sq_lb = std::pow(std::pow(delta_prime, kd) / (kd * kd), kd - 1.0);
  r.kappa_sq_ub = std::pow(kd, 2.0 * kd - 1.0) / std::pow(delta_prime, kd * (kd - 1.0));
  std::vector<double> nodes(k);
  for (int j = 0; j < k; ++j) nodes[j] = j * delta_prime;
  const auto v = vandermonde(nodes);
  r.measured_sigma_min = linalg::min_singular_value(v);
  r.measured_kappa = linalg::condition_number(v);
  return r;
}

ParameterEstimate pre_consolidate(Vec2 w1, Vec2 w2, const ProjectedEstimate &e1, const ProjectedEstimate &e2) {
  const std::size_t k = e1.proj_centers.size();
  if (e2.proj_centers.size() != k || e1.weights.size() != k) {
    throw std::invalid_argument("pre_consolidate: projected estimates differ in size");
  }
  const double det = w1.x * w2.y - w1.y * w2.x;
  if (!(std::abs(det) >= 1e-14)) throw DegenerateDirections("|det| = " + std::to_string(std::abs(det)));

  auto ascending = [](const std::vector<double> &values) {
    std::vector<std::size_t> idx(values.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    return idx;
  };
  const auto i1 = ascending(e1.proj_centers);
  const auto i2 = ascending(e2.proj_centers);

  ParameterEstimate out;
  out.weights.resize(k);
  out.centers.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double a = e1.proj_centers[i1[i]];
    const double b = e2.proj_centers[i2[i]];
    out.centers[i] = {(w2.y * a - w1.y * b) / det, (w1.x * b - w2.x * a) / det};
    out.weights[i] = e1.weights[i1[i]];
  }
  return out;
}

}  // namespace airy::mpm
