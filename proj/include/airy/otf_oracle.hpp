#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

#include "airy/model.hpp"
#include "airy/sampling.hpp"
#include "airy/vec2.hpp"

namespace airy {

using cplx = std::complex<double>;

// Guard band below the cutoff inside which deconvolution is refused.
inline constexpr double kCutoffGuard = 1e-3;

// Oracle for the Fourier transform of the photon density,
//   rho_hat(w) = E[exp(-2 pi i <w, x>)] = sum_j lambda_j A_hat(|w|) exp(-2 pi i <mu_j, w>).
// The value is complex unless the configuration is centrally symmetric; its
// real part is the cosine average.
class OtfOracle {
 public:
  virtual ~OtfOracle() = default;

  virtual std::vector<cplx> query(std::span<const Vec2> freqs) = 0;

  // Values at rows[a] + rows[b] + shifts[i], flattened as (a * rows + b) * shifts + i.
  virtual std::vector<cplx> query_sums(std::span<const Vec2> rows, std::span<const Vec2> shifts);

  // Spread parameter of the coordinate frame the oracle answers in.
  virtual double sigma() const = 0;

  // Additive accuracy certified for a budget of m queries at frequency radius
  // `radius`; zero for exact oracles.
  virtual double certified_eta(std::size_t m, double radius) const = 0;

  std::size_t queries() const noexcept { return queries_; }

 protected:
  std::size_t queries_ = 0;
};

// Empirical estimate from a photon batch. Answers are cached by frequency, so
// repeated queries reuse the same samples; the cache is internally locked.
class PhotonOracle final : public OtfOracle {
 public:
  explicit PhotonOracle(const PhotonBatch &batch, double beta = 0.05);

  std::vector<cplx> query(std::span<const Vec2> freqs) override;
  std::vector<cplx> query_sums(std::span<const Vec2> rows, std::span<const Vec2> shifts) override;
  double sigma() const override { return sigma_; }
  double certified_eta(std::size_t m, double radius) const override;

  std::size_t sample_count() const noexcept { return xs_.size(); }
  double beta() const noexcept { return beta_; }
  double granularity() const noexcept { return granularity_; }

 private:
  std::vector<double> xs_, ys_;
  double sigma_;
  double granularity_;
  double beta_;
  std::mutex mutex_;
  std::map<std::pair<double, double>, cplx> cache_;
};

// Closed-form rho_hat of a model, optionally perturbed by a deterministic
// pseudo-random offset of modulus at most `noise` per frequency.
class ExactOracle final : public OtfOracle {
 public:
  explicit ExactOracle(SuperpositionModel model, double noise = 0.0, std::uint64_t seed = 0);

  std::vector<cplx> query(std::span<const Vec2> freqs) override;
  double sigma() const override { return model_.sigma().value(); }
  double certified_eta(std::size_t, double) const override { return noise_; }

  const SuperpositionModel &model() const noexcept { return model_; }

 private:
  SuperpositionModel model_;
  double noise_;
  std::uint64_t seed_;
};

// rho_hat(w) of a model at one frequency.
cplx model_transform(const SuperpositionModel &model, Vec2 freq);

// F(w) = sum_j lambda_j exp(-2 pi i <mu_j, w>), the transform with the OTF divided out.
cplx exponential_sum(std::span<const double> weights, std::span<const Vec2> centers, Vec2 freq);

// Photons needed for accuracy eta over m queries with failure probability beta:
// ceil(4 ln(2m/beta) / eta^2).
std::size_t required_samples(double eta, std::size_t m, double beta);

// Hoeffding radius for n samples and m queries: sqrt(4 ln(2m/beta) / n).
double hoeffding_eta(std::size_t n, std::size_t m, double beta);

// Lipschitz constant of w -> exp(-2 pi i <w, x>) in x is 2 pi |w|, so moving
// each photon by at most the granularity adds at most this much error.
double granularity_error(double granularity, double radius);

struct OtfEstimate {
  std::vector<Vec2> frequencies;
  std::vector<cplx> values;
  double eta = 0.0;  // certified additive accuracy at probability 1 - beta
  std::size_t n_used = 0;

  std::vector<double> real_parts() const;
};

struct DeconvolvedEstimate {
  std::vector<Vec2> frequencies;
  std::vector<cplx> values;    // estimates of F(w)
  std::vector<double> accuracy;  // eta / A_hat(|w|)
};

OtfEstimate estimate_otf(const PhotonBatch &batch, std::span<const Vec2> freqs, double beta = 0.05);

// Divides by the OTF. Throws CutoffViolation if any pi sigma |w| >= 1 - kCutoffGuard.
DeconvolvedEstimate deconvolve(const OtfEstimate &estimate, SpreadParameter sigma);

// Queries the oracle and divides by the OTF of the oracle's frame.
std::vector<cplx> query_deconvolved(OtfOracle &oracle, std::span<const Vec2> freqs);

// Uniform coordinate scaling used to bring all centers inside radius 1/3.
struct Rescaling {
  double scale = 1.0;

  // scale = min(1/(3 radius), max_scale); identity for radius <= 0.
  static Rescaling for_radius(double radius, double max_scale = std::numeric_limits<double>::infinity());

  PhotonBatch apply(const PhotonBatch &batch) const;
  SuperpositionModel apply(const SuperpositionModel &model) const;
  Vec2 unscale(Vec2 p) const { return p * (1.0 / scale); }
};

}  // namespace airy
