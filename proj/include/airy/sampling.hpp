#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "airy/model.hpp"
#include "airy/vec2.hpp"

namespace airy {

struct PhotonBatch {
  std::vector<Vec2> points;
  double sigma = 0.0;        // spread of the model that produced the batch
  double granularity = 0.0;  // every point lies on the pitch granularity/sqrt(2) grid when > 0
  std::uint64_t seed = 0;
  bool poisson = false;
  std::uint64_t requested = 0;  // n before any Poisson draw
};

struct SamplingOptions {
  double granularity = 0.0;
  bool poisson = false;
};

// Photons per independently seeded chunk. Fixed so that output does not depend
// on the number of worker threads.
inline constexpr std::size_t kSampleChunk = 65536;

// sigma * t with radial_cdf(t) = uniform. Throws std::invalid_argument for
// uniform outside (0, 1).
double sample_airy_radius(SpreadParameter sigma, double uniform);

// The same root in units of sigma.
double airy_radius_quantile(double uniform);

// Nearest point of the square grid with pitch granularity/sqrt(2); moves the
// point by at most granularity/2.
Vec2 snap_to_grid(Vec2 p, double granularity);

PhotonBatch sample(const SuperpositionModel &model, std::uint64_t n, std::uint64_t seed,
                   const SamplingOptions &options = {});

}  // namespace airy
