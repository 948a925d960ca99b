#include "airy/otf_oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "airy/errors.hpp"
#include "airy/psf.hpp"
#include "airy/rng.hpp"
#include "fast_cis.hpp"

namespace airy {
namespace {

constexpr std::size_t kBlock = 512;
constexpr std::size_t kLanes = 8;
constexpr std::size_t kGemmBlock = 2048;

using Key = std::pair<double, double>;

Key key_of(Vec2 f) { return {f.x, f.y}; }

// Sum over photons [begin, end) of exp(-2 pi i <f, x>) for every f, into
// sums[2 * j] (real) and sums[2 * j + 1] (imaginary). Fixed summation order.
void accumulate_chunk(const double *xs, const double *ys, std::size_t begin, std::size_t end,
                      std::span<const Vec2> freqs, double *sums) {
  alignas(64) double c[kBlock];
  alignas(64) double s[kBlock];
  for (std::size_t j = 0; j < freqs.size(); ++j) sums[2 * j] = sums[2 * j + 1] = 0.0;
  for (std::size_t b = begin; b < end; b += kBlock) {
    const std::size_t len = std::min(kBlock, end - b);
    const double *x = xs + b;
    const double *y = ys + b;
    for (std::size_t j = 0; j < freqs.size(); ++j) {
      const double fx = freqs[j].x, fy = freqs[j].y;
      for (std::size_t i = 0; i < len; ++i) detail::cis_turns(fx * x[i] + fy * y[i], c[i], s[i]);
      std::array<double, kLanes> ac{}, as{};
      std::size_t i = 0;
      for (; i + kLanes <= len; i += kLanes) {
        for (std::size_t l = 0; l < kLanes; ++l) {
          ac[l] += c[i + l];
          as[l] += s[i + l];
        }
      }
      for (; i < len; ++i) {
        ac[0] += c[i];
        as[0] += s[i];
      }
      double tc = 0.0, ts = 0.0;
      for (std::size_t l = 0; l < kLanes; ++l) {
        tc += ac[l];
        ts += as[l];
      }
      sums[2 * j] += tc;
      sums[2 * j + 1] -= ts;
    }
  }
}

}  // namespace

std::vector<cplx> OtfOracle::query_sums(std::span<const Vec2> rows, std::span<const Vec2> shifts) {
  std::vector<Vec2> freqs;
  freqs.reserve(rows.size() * rows.size() * shifts.size());
  for (const Vec2 &a : rows) {
    for (const Vec2 &b : rows) {
      for (const Vec2 &v : shifts) freqs.push_back((a + b) + v);
    }
  }
  return query(freqs);
}

PhotonOracle::PhotonOracle(const PhotonBatch &batch, double beta)
    : sigma_(batch.sigma), granularity_(batch.granularity), beta_(beta) {
  if (batch.points.empty()) throw std::invalid_argument("PhotonOracle: empty photon batch");
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("PhotonOracle: beta must lie in (0, 1)");
  xs_.reserve(batch.points.size());
  ys_.reserve(batch.points.size());
  for (const Vec2 &p : batch.points) {
    xs_.push_back(p.x);
    ys_.push_back(p.y);
  }
}

double PhotonOracle::certified_eta(std::size_t m, double radius) const {
  return hoeffding_eta(xs_.size(), std::max<std::size_t>(m, 1), beta_) + granularity_error(granularity_, radius);
}

std::vector<cplx> PhotonOracle::query(std::span<const Vec2> freqs) {
  std::vector<Vec2> missing;
  {
    std::lock_guard lock(mutex_);
    for (const Vec2 &f : freqs) {
      if (!cache_.count(key_of(f))) missing.push_back(f);
    }
  }
  std::sort(missing.begin(), missing.end(), [](Vec2 a, Vec2 b) { return key_of(a) < key_of(b); });
  missing.erase(std::unique(missing.begin(), missing.end()), missing.end());

  if (!missing.empty()) {
    const std::size_t n = xs_.size();
    const std::size_t chunks = (n + kSampleChunk - 1) / kSampleChunk;
    std::vector<double> partial(chunks * missing.size() * 2);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t ch = 0; ch < chunks; ++ch) {
      const std::size_t begin = ch * kSampleChunk;
      const std::size_t end = std::min(n, begin + kSampleChunk);
      accumulate_chunk(xs_.data(), ys_.data(), begin, end, missing, partial.data() + ch * missing.size() * 2);
    }
    std::lock_guard lock(mutex_);
    for (std::size_t j = 0; j < missing.size(); ++j) {
      double re = 0.0, im = 0.0;
      for (std::size_t ch = 0; ch < chunks; ++ch) {
        re += partial[(ch * missing.size() + j) * 2];
        im += partial[(ch * missing.size() + j) * 2 + 1];
      }
      cache_.emplace(key_of(missing[j]), cplx(re / static_cast<double>(n), im / static_cast<double>(n)));
    }
    queries_ += missing.size();
  }

  std::vector<cplx> out;
  out.reserve(freqs.size());
  std::lock_guard lock(mutex_);
  for (const Vec2 &f : freqs) out.push_back(cache_.at(key_of(f)));
  return out;
}

// exp(-2 pi i <a + b + v, x>) factorises, so each shift's m x m block is
// E^T diag(w_v) E over photon blocks: one GEMM instead of m^2 transcendental
// evaluations per photon.
std::vector<cplx> PhotonOracle::query_sums(std::span<const Vec2> rows, std::span<const Vec2> shifts) {
  const auto m = static_cast<Eigen::Index>(rows.size());
  const std::size_t ns = shifts.size();
  const std::size_t n = xs_.size();
  const std::size_t chunks = (n + kSampleChunk - 1) / kSampleChunk;
  std::vector<Eigen::MatrixXcd> partial(chunks * ns);

#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t ch = 0; ch < chunks; ++ch) {
    const std::size_t begin = ch * kSampleChunk;
    const std::size_t end = std::min(n, begin + kSampleChunk);
    for (std::size_t s = 0; s < ns; ++s) partial[ch * ns + s] = Eigen::MatrixXcd::Zero(m, m);
    Eigen::MatrixXcd e(kGemmBlock, m);
    Eigen::MatrixXcd we(kGemmBlock, m);
    Eigen::VectorXcd w(kGemmBlock);
    std::vector<double> c(kGemmBlock), sn(kGemmBlock);
    for (std::size_t b = begin; b < end; b += kGemmBlock) {
      const auto len = static_cast<Eigen::Index>(std::min(kGemmBlock, end - b));
      for (Eigen::Index a = 0; a < m; ++a) {
        const double fx = rows[a].x, fy = rows[a].y;
        for (Eigen::Index i = 0; i < len; ++i) detail::cis_turns(fx * xs_[b + i] + fy * ys_[b + i], c[i], sn[i]);
        for (Eigen::Index i = 0; i < len; ++i) e(i, a) = cplx(c[i], -sn[i]);
      }
      for (std::size_t s = 0; s < ns; ++s) {
        const double fx = shifts[s].x, fy = shifts[s].y;
        for (Eigen::Index i = 0; i < len; ++i) {
          detail::cis_turns(fx * xs_[b + i] + fy * ys_[b + i], c[i], sn[i]);
          w(i) = cplx(c[i], -sn[i]);
        }
        we.topRows(len).noalias() = w.head(len).asDiagonal() * e.topRows(len);
        partial[ch * ns + s].noalias() += e.topRows(len).transpose() * we.topRows(len);
      }
    }
  }

  std::vector<cplx> out(rows.size() * rows.size() * ns);
  std::lock_guard lock(mutex_);
  for (std::size_t s = 0; s < ns; ++s) {
    Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(m, m);
    for (std::size_t ch = 0; ch < chunks; ++ch) total += partial[ch * ns + s];
    total /= static_cast<double>(n);
    for (Eigen::Index a = 0; a < m; ++a) {
      for (Eigen::Index b = 0; b < m; ++b) {
        // Keep the tensor exactly symmetric in (a, b).
        const cplx v = (a <= b) ? total(a, b) : total(b, a);
        const Vec2 f = (rows[a] + rows[b]) + shifts[s];
        auto [it, inserted] = cache_.emplace(key_of(f), v);
        if (inserted) ++queries_;
        out[(static_cast<std::size_t>(a) * rows.size() + static_cast<std::size_t>(b)) * ns + s] = it->second;
      }
    }
  }
  return out;
}

ExactOracle::ExactOracle(SuperpositionModel model, double noise, std::uint64_t seed)
    : model_(std::move(model)), noise_(noise), seed_(seed) {
  if (!(noise >= 0.0 && std::isfinite(noise))) throw std::invalid_argument("ExactOracle: noise must be >= 0");
}

std::vector<cplx> ExactOracle::query(std::span<const Vec2> freqs) {
  std::vector<cplx> out;
  out.reserve(freqs.size());
  for (const Vec2 &f : freqs) {
    cplx v = model_transform(model_, f);
    if (noise_ > 0.0) {
      std::uint64_t bx, by;
      std::memcpy(&bx, &f.x, sizeof bx);
      std::memcpy(&by, &f.y, sizeof by);
      CounterRng rng(seed_, streams::kOracleNoise, CounterRng::mix(bx) ^ by);
      const double radius = noise_ * std::sqrt(rng.uniform());
      v += std::polar(radius, 2.0 * std::numbers::pi * rng.uniform());
    }
    out.push_back(v);
  }
  queries_ += freqs.size();
  return out;
}

cplx exponential_sum(std::span<const double> weights, std::span<const Vec2> centers, Vec2 freq) {
  cplx sum = 0.0;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    sum += std::polar(weights[j], -2.0 * std::numbers::pi * dot(centers[j], freq));
  }
  return sum;
}

cplx model_transform(const SuperpositionModel &model, Vec2 freq) {
  return otf(norm(freq), model.sigma()) * exponential_sum(model.weights(), model.centers(), freq);
}

std::size_t required_samples(double eta, std::size_t m, double beta) {
  return static_cast<std::size_t>(std::ceil(4.0 * std::log(2.0 * static_cast<double>(m) / beta) / (eta * eta)));
}

double hoeffding_eta(std::size_t n, std::size_t m, double beta) {
  return std::sqrt(4.0 * std::log(2.0 * static_cast<double>(m) / beta) / static_cast<double>(n));
}

double granularity_error(double granularity, double radius) {
  return 2.0 * std::numbers::pi * granularity * radius;
}

std::vector<double> OtfEstimate::real_parts() const {
  std::vector<double> out;
  out.reserve(values.size());
  for (const cplx &v : values) out.push_back(v.real());
  return out;
}

OtfEstimate estimate_otf(const PhotonBatch &batch, std::span<const Vec2> freqs, double beta) {
  PhotonOracle oracle(batch, beta);
  OtfEstimate est;
  est.frequencies.assign(freqs.begin(), freqs.end());
  est.values = oracle.query(freqs);
  double max_radius = 0.0;
  for (const Vec2 &f : freqs) max_radius = std::max(max_radius, norm(f));
  est.eta = oracle.certified_eta(freqs.size(), max_radius);
  est.n_used = batch.points.size();
  return est;
}

namespace {
void check_cutoff(Vec2 f, double sigma) {
  if (std::numbers::pi * sigma * norm(f) >= 1.0 - kCutoffGuard) {
    std::ostringstream msg;
    msg << "frequency (" << f.x << ", " << f.y << ") is within " << kCutoffGuard
        << " of the cutoff 1/(pi sigma) for sigma = " << sigma;
    throw CutoffViolation(msg.str());
  }
}
}  // namespace

DeconvolvedEstimate deconvolve(const OtfEstimate &estimate, SpreadParameter sigma) {
  DeconvolvedEstimate out;
  out.frequencies = estimate.frequencies;
  for (std::size_t j = 0; j < estimate.frequencies.size(); ++j) {
    const Vec2 f = estimate.frequencies[j];
    check_cutoff(f, sigma.value());
    const double a = otf(norm(f), sigma);
    out.values.push_back(estimate.values[j] / a);
    out.accuracy.push_back(estimate.eta / a);
  }
  return out;
}

std::vector<cplx> query_deconvolved(OtfOracle &oracle, std::span<const Vec2> freqs) {
  const SpreadParameter sigma(oracle.sigma());
  for (const Vec2 &f : freqs) check_cutoff(f, sigma.value());
  auto values = oracle.query(freqs);
  for (std::size_t j = 0; j < freqs.size(); ++j) values[j] /= otf(norm(freqs[j]), sigma);
  return values;
}

Rescaling Rescaling::for_radius(double radius, double max_scale) {
  if (!(radius > 0.0)) return {std::isfinite(max_scale) ? std::min(1.0, max_scale) : 1.0};
  return {std::min(1.0 / (3.0 * radius), max_scale)};
}

PhotonBatch Rescaling::apply(const PhotonBatch &batch) const {
  PhotonBatch out = batch;
  for (Vec2 &p : out.points) p *= scale;
  out.sigma *= scale;
  out.granularity *= scale;
  return out;
}

SuperpositionModel Rescaling::apply(const SuperpositionModel &model) const {
  std::vector<Vec2> centers = model.centers();
  for (Vec2 &c : centers) c *= scale;
  return SuperpositionModel(model.weights(), std::move(centers), SpreadParameter(model.sigma().value() * scale));
}

}  // namespace airy
