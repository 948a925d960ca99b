#include "airy/model.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace airy {

SuperpositionModel::SuperpositionModel(std::vector<double> weights, std::vector<Vec2> centers,
                                       SpreadParameter sigma)
    : weights_(std::move(weights)), centers_(std::move(centers)), sigma_(sigma) {
  if (weights_.empty()) throw std::invalid_argument("model needs at least one component");
  if (weights_.size() != centers_.size()) {
    throw std::invalid_argument("model weights and centers differ in length");
  }
  for (double w : weights_) {
    if (!(std::isfinite(w) && w >= 0.0)) throw std::invalid_argument("model weights must be nonnegative");
  }
  for (Vec2 c : centers_) {
    if (!(std::isfinite(c.x) && std::isfinite(c.y))) throw std::invalid_argument("model centers must be finite");
  }
  const double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("model weights must sum to 1 (got " + std::to_string(total) + ")");
  }
}

SuperpositionModel SuperpositionModel::normalized(std::vector<double> weights, std::vector<Vec2> centers,
                                                  SpreadParameter sigma) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw std::invalid_argument("model weights must have positive sum");
  for (double &w : weights) w /= total;
  return SuperpositionModel(std::move(weights), std::move(centers), sigma);
}

double SuperpositionModel::min_separation() const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < centers_.size(); ++i) {
    for (std::size_t j = i + 1; j < centers_.size(); ++j) best = std::min(best, distance(centers_[i], centers_[j]));
  }
  return best;
}

double SuperpositionModel::radius() const {
  double r = 0.0;
  for (Vec2 c : centers_) r = std::max(r, norm(c));
  return r;
}

double SuperpositionModel::density(Vec2 point) const {
  double d = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (weights_[i] != 0.0) d += weights_[i] * airy_psf(point, centers_[i], sigma_);
  }
  return d;
}

}  // namespace airy
