#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "airy/vec2.hpp"

namespace airy {

struct EstimateMeta {
  std::string method;
  std::uint64_t seed = 0;
  double scale = 1.0;           // rescaling applied before learning
  double separation = 0.0;      // separation assumed, original units
  double eta_certified = 0.0;   // accuracy the sample size certifies
  double eta_required = 0.0;    // accuracy the guarantee asks for
  bool budget_shortfall = false;
  int iterations = 0;
  int failed_iterations = 0;
  std::size_t queries = 0;
  std::vector<Vec2> directions;
};

// Recovered mixture parameters; weights[i] pairs with centers[i].
struct ParameterEstimate {
  std::vector<double> weights;
  std::vector<Vec2> centers;
  EstimateMeta meta;
};

}  // namespace airy
