#include "airy/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "airy/errors.hpp"
#include "airy/linalg.hpp"
#include "airy/mpm.hpp"
#include "airy/psf.hpp"
#include "airy/rng.hpp"

namespace airy::tensor {

namespace {

constexpr double kMarginFloor = 1e-3;
constexpr double kRankFloor = 1e-12;
constexpr double kEigenGap = 1e-10;
// Largest probe length (frame units) keeping 2 pi <mu, probe> within 0.9 pi for |mu| <= 1/3.
constexpr double kProbeCap = 1.35;

Vec2 uniform_in_disk(CounterRng &rng, double radius) {
  const double rho = radius * std::sqrt(rng.uniform());
  return unit_vector(2.0 * std::numbers::pi * rng.uniform()) * rho;
}

}  // namespace

Vec2 SteeringFrequencies::shift(int i) const {
  switch (i) {
    case 0: return v * r;
    case 1: return v * (2.0 * r);
    case 2: return {0.0, 0.0};
    default: throw std::out_of_range("steering shift index must be 0, 1 or 2");
  }
}

SteeringFrequencies steering_for(double normalized_separation, Vec2 v) {
  const double margin = normalized_separation - kGammaUpper;
  if (!(margin > kMarginFloor)) {
    throw MarginTooSmall("normalised separation " + std::to_string(normalized_separation) +
                         " is within 1e-3 of gamma_upper " + std::to_string(kGammaUpper));
  }
  const double c = 0.5 * (normalized_separation + kGammaUpper);
  SteeringFrequencies s;
  s.R = kGammaUpper / (2.0 * c);
  s.r = (1.0 - 2.0 * s.R) / 4.0;
  s.v = v;
  return s;
}

Eigen::MatrixXcd MeasurementTensor::slice(int i) const {
  Eigen::MatrixXcd out(m_prime, m_prime);
  for (int a = 0; a < m_prime; ++a) {
    for (int b = 0; b < m_prime; ++b) out(a, b) = at(a, b, i);
  }
  return out;
}

MeasurementTensor build_tensor(OtfOracle &oracle, int k, double separation, int m, std::uint64_t seed,
                               double probe) {
  if (k < 1) throw std::invalid_argument("build_tensor: k must be positive");
  if (m < 1) throw std::invalid_argument("build_tensor: m must be positive");
  if (!(probe > 0.0)) throw std::invalid_argument("build_tensor: probe must be positive");
  const SpreadParameter sigma(oracle.sigma());
  const double fc = otf_cutoff(sigma);

  CounterRng rng(seed, streams::kTensorFrequencies);
  const Vec2 v = unit_vector(2.0 * std::numbers::pi * rng.uniform());
  MeasurementTensor t;
  t.steering = steering_for(separation / (std::numbers::pi * sigma.value()), v);
  t.cutoff = fc;
  t.m_prime = m + 3;
  t.probe_radius = std::min({probe * fc, t.steering.R * fc, kProbeCap});

  t.rows.reserve(static_cast<std::size_t>(t.m_prime));
  for (int a = 0; a < m; ++a) t.rows.push_back(uniform_in_disk(rng, t.steering.R * fc));
  t.rows.push_back({t.probe_radius, 0.0});
  t.rows.push_back({0.0, t.probe_radius});
  t.rows.push_back({0.0, 0.0});
  for (int i = 0; i < 3; ++i) t.shifts.push_back(t.steering.shift(i) * fc);

  // Every row lies in the radius-R disk, so this only trips on rounding at the
  // margin floor; checked on the actual frequencies all the same.
  double widest = 0.0;
  for (const Vec2 &a : t.rows) {
    for (const Vec2 &b : t.rows) {
      for (const Vec2 &s : t.shifts) widest = std::max(widest, norm(a + b + s));
    }
  }
  if (widest >= (1.0 - kCutoffGuard) * fc) {
    throw CutoffViolation("tensor frequency " + std::to_string(widest / fc) + " of the cutoff");
  }

  t.entries = oracle.query_sums(t.rows, t.shifts);
  const std::size_t mp = static_cast<std::size_t>(t.m_prime);
  for (std::size_t a = 0; a < mp; ++a) {
    for (std::size_t b = 0; b < mp; ++b) {
      for (std::size_t i = 0; i < 3; ++i) {
        t.entries[(a * mp + b) * 3 + i] /= otf(norm(t.rows[a] + t.rows[b] + t.shifts[i]), sigma);
      }
    }
  }
  return t;
}

Eigen::MatrixXcd jennrich(const MeasurementTensor &tensor, int k) {
  if (k < 1 || k > tensor.m_prime) throw std::invalid_argument("jennrich: need 1 <= k <= m'");
  const Eigen::MatrixXcd t1 = tensor.slice(0);
  const Eigen::MatrixXcd t2 = tensor.slice(1);

  const auto svd = linalg::truncated_svd(t1, static_cast<std::size_t>(k));
  const double s1 = svd.singular_values(0);
  const double sk = svd.singular_values(k - 1);
  if (!(s1 > 0.0) || !(sk >= kRankFloor * s1)) {
    throw WhiteningRankDeficient("singular value " + std::to_string(k) + " is " + std::to_string(sk) +
                                 " against a leading " + std::to_string(s1));
  }
  const Eigen::MatrixXcd &p = svd.u;
  // The slices are complex symmetric, T = V D V^T, so whiten with P^H . conj(P).
  const Eigen::MatrixXcd e1 = p.adjoint() * t1 * p.conjugate();
  const Eigen::MatrixXcd e2 = p.adjoint() * t2 * p.conjugate();
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu2(e2.transpose());
  if (!(std::abs(lu2.determinant()) > 0.0)) throw WhiteningRankDeficient("whitened second slice is singular");
  const Eigen::MatrixXcd ratio = lu2.solve(e1.transpose()).transpose();  // E1 E2^-1

  const auto pairs = linalg::eig(ratio);
  std::vector<int> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const auto &x = pairs.values(a);
    const auto &y = pairs.values(b);
    if (std::abs(x) != std::abs(y)) return std::abs(x) > std::abs(y);
    if (x.real() != y.real()) return x.real() > y.real();
    return x.imag() > y.imag();
  });
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) {
      const double gap = std::abs(pairs.values(a) - pairs.values(b));
      if (!(gap >= kEigenGap)) throw EigCollision("eigenvalues " + std::to_string(a) + " and " + std::to_string(b) +
                                                  " differ by " + std::to_string(gap));
    }
  }

  Eigen::MatrixXcd u(k, k);
  const double target = std::sqrt(static_cast<double>(tensor.m_prime));
  for (int j = 0; j < k; ++j) {
    const auto col = pairs.vectors.col(order[static_cast<std::size_t>(j)]);
    u.col(j) = col * (target / col.norm());
  }
  Eigen::MatrixXcd v_hat = p * u;
  const int ref = tensor.zero_row();
  for (int j = 0; j < k; ++j) {
    const cplx scale = v_hat(ref, j);
    if (!(std::abs(scale) > 0.0)) throw WhiteningRankDeficient("reference row vanishes in column " + std::to_string(j));
    v_hat.col(j) /= scale;
  }
  return v_hat;
}

ParameterEstimate decode(const MeasurementTensor &tensor, const Eigen::MatrixXcd &v_hat) {
  const auto k = v_hat.cols();
  ParameterEstimate out;
  out.centers.resize(static_cast<std::size_t>(k));
  const double turn = 2.0 * std::numbers::pi * tensor.probe_radius;
  for (Eigen::Index j = 0; j < k; ++j) {
    out.centers[static_cast<std::size_t>(j)] = {-std::arg(v_hat(tensor.probe_x_row(), j)) / turn,
                                                -std::arg(v_hat(tensor.probe_y_row(), j)) / turn};
  }
  // T(a, zero, 2) = F(w_a), the weighted column V lambda.
  linalg::ComplexVector b(tensor.m_prime);
  for (int a = 0; a < tensor.m_prime; ++a) b(a) = tensor.at(a, tensor.zero_row(), 2);
  const linalg::ComplexVector lambda = linalg::least_squares(v_hat, b);
  out.weights.resize(static_cast<std::size_t>(k));
  for (Eigen::Index j = 0; j < k; ++j) out.weights[static_cast<std::size_t>(j)] = lambda(j).real();
  return out;
}

int default_row_count(int k, double normalized_separation, double delta, double constant) {
  if (k < 1) throw std::invalid_argument("default_row_count: k must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("default_row_count: delta must lie in (0, 1)");
  const double margin = normalized_separation - kGammaUpper;
  if (!(margin > kMarginFloor)) throw MarginTooSmall("separation margin " + std::to_string(margin));
  const double kd = k;
  const double raw = constant * kd * kd * std::log(kd / delta) / std::min(margin, 1.0);
  return std::max(k + 2, static_cast<int>(std::ceil(raw)));
}

ParameterEstimate tensor_resolve(OtfOracle &oracle, const TensorOptions &options) {
  const int k = options.k;
  const double sigma = oracle.sigma();
  const double normalized = options.separation / (std::numbers::pi * sigma);
  const int m = options.m > 0 ? options.m : default_row_count(k, normalized, options.delta, options.row_constant);

  const MeasurementTensor t = build_tensor(oracle, k, options.separation, m, options.seed, options.probe);
  ParameterEstimate out = decode(t, jennrich(t, k));

  out.meta.method = "tensor";
  out.meta.seed = options.seed;
  out.meta.separation = options.separation;
  out.meta.iterations = 1;
  out.meta.queries = oracle.queries();
  out.meta.directions = {t.steering.v};
  const std::size_t count = static_cast<std::size_t>(t.m_prime) * t.m_prime * 3;
  const double widest = 0.5 + t.steering.R;  // in cutoff units
  out.meta.eta_certified = oracle.certified_eta(count, widest * t.cutoff);
  // Entrywise error eta / A_hat(widest) summed over the m' x m' slice in
  // Frobenius norm, held below min(eps1, eps2) / k; implicit constants set to 1.
  const double floor_otf = otf(widest * t.cutoff, SpreadParameter(sigma));
  out.meta.eta_required = std::min(options.eps1, options.eps2) * floor_otf / (k * static_cast<double>(t.m_prime));
  out.meta.budget_shortfall = out.meta.eta_certified > out.meta.eta_required;
  return out;
}

ParameterEstimate tensor_resolve(const PhotonBatch &batch, const TensorOptions &options) {
  if (!(batch.sigma > 0.0)) throw std::invalid_argument("tensor_resolve: photon batch has no sigma");
  const double radius = options.radius.value_or(mpm::estimate_radius(batch, 0.1));
  const Rescaling rescale = Rescaling::for_radius(radius);
  PhotonOracle oracle(rescale.apply(batch));
  TensorOptions frame = options;
  frame.separation = options.separation * rescale.scale;
  frame.eps1 = options.eps1 * rescale.scale;

  ParameterEstimate out = tensor_resolve(oracle, frame);
  for (Vec2 &c : out.centers) c = rescale.unscale(c);
  out.meta.scale = rescale.scale;
  out.meta.separation = options.separation;
  return out;
}

double empirical_kappa(std::span<const Vec2> centers, int m, double radius, std::uint64_t seed) {
  const auto k = static_cast<Eigen::Index>(centers.size());
  if (k < 1 || m < k) throw std::invalid_argument("empirical_kappa: need m >= k >= 1");
  CounterRng rng(seed, streams::kKappa);
  Eigen::MatrixXcd v(m, k);
  for (int a = 0; a < m; ++a) {
    const Vec2 w = uniform_in_disk(rng, radius);
    for (Eigen::Index j = 0; j < k; ++j) {
      v(a, j) = std::polar(1.0, -2.0 * std::numbers::pi * dot(centers[static_cast<std::size_t>(j)], w));
    }
  }
  const double kappa = linalg::condition_number(v);
  return std::isfinite(kappa) ? kappa : std::numeric_limits<double>::infinity();
}

}  // namespace airy::tensor
