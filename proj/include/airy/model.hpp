#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "airy/psf.hpp"
#include "airy/vec2.hpp"

namespace airy {

// Mixture of k Airy disks sharing one spread parameter.
class SuperpositionModel {
 public:
  // Throws std::invalid_argument unless weights are nonnegative, sum to 1
  // within 1e-12, and match the centers in count (at least one).
  SuperpositionModel(std::vector<double> weights, std::vector<Vec2> centers, SpreadParameter sigma);

  // Rescales nonnegative weights to sum to one before validating.
  static SuperpositionModel normalized(std::vector<double> weights, std::vector<Vec2> centers,
                                       SpreadParameter sigma);

  const std::vector<double> &weights() const noexcept { return weights_; }
  const std::vector<Vec2> &centers() const noexcept { return centers_; }
  SpreadParameter sigma() const noexcept { return sigma_; }
  std::size_t size() const noexcept { return weights_.size(); }

  // Minimum pairwise center distance; +inf for a single component.
  double min_separation() const;
  // Largest center norm.
  double radius() const;

  double density(Vec2 point) const;

 private:
  std::vector<double> weights_;
  std::vector<Vec2> centers_;
  SpreadParameter sigma_;
};

}  // namespace airy
