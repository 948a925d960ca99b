#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "airy/vec2.hpp"

namespace airy::linalg {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

struct EigenPairs {
  ComplexVector values;
  ComplexMatrix vectors;  // unit-norm columns aligned with `values`
};

// Throws NonConvergence if the QR iteration does not settle.
EigenPairs eig(const ComplexMatrix &m);

// Values lambda with a v = lambda b v, computed as eig(b^-1 a). A near-singular
// b is ridge-regularised by 1e-12 |b|; a null direction shared by a and b
// throws SingularPencil.
ComplexVector generalized_eig(const ComplexMatrix &a, const ComplexMatrix &b);

struct TruncatedSvd {
  ComplexMatrix u;                  // rows x k
  Eigen::VectorXd singular_values;  // k, descending
  ComplexMatrix v;                  // cols x k
};

TruncatedSvd truncated_svd(const ComplexMatrix &m, std::size_t k);

// argmin |a x - b|; throws RankDeficient when sigma_min(a) < 1e-12 sigma_max(a).
ComplexVector least_squares(const ComplexMatrix &a, const ComplexVector &b);

double condition_number(const ComplexMatrix &m);
double min_singular_value(const ComplexMatrix &m);

struct Matching {
  // truth[i] is matched with estimated[permutation[i]].
  std::vector<std::size_t> permutation;
  double max_distance = 0.0;
};

// Bottleneck assignment between equal-length point sets. Throws
// std::invalid_argument on a length mismatch.
Matching match_points(const std::vector<Vec2> &estimated, const std::vector<Vec2> &truth);

// Same objective for an arbitrary square cost matrix cost(i, j) between truth
// i and estimate j.
Matching bottleneck_assignment(const Eigen::MatrixXd &cost);

}  // namespace airy::linalg
