#include "airy/linalg.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

#include "airy/errors.hpp"

namespace airy::linalg {

namespace {
constexpr int kIterationsPerRow = 300;
constexpr double kRidge = 1e-12;
}  // namespace

EigenPairs eig(const ComplexMatrix &m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("eig: matrix must be square");
  if (!m.allFinite()) throw NonConvergence("eig: non-finite input");
  if (m.rows() == 0) return {};
  Eigen::ComplexEigenSolver<ComplexMatrix> solver;
  solver.setMaxIterations(kIterationsPerRow * m.rows());
  solver.compute(m, true);
  if (solver.info() != Eigen::Success) {
    throw NonConvergence("eig: QR iteration did not converge for " + std::to_string(m.rows()) +
                         "x" + std::to_string(m.cols()) + " matrix");
  }
  EigenPairs out{solver.eigenvalues(), solver.eigenvectors()};
  for (Eigen::Index j = 0; j < out.vectors.cols(); ++j) out.vectors.col(j).normalize();
  return out;
}

ComplexVector generalized_eig(const ComplexMatrix &a, const ComplexMatrix &b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    throw std::invalid_argument("generalized_eig: matrices must be square and the same shape");
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(b, Eigen::ComputeFullV);
  const auto &s = svd.singularValues();
  const double smax = s.size() ? s(0) : 0.0;
  const double smin = s.size() ? s(s.size() - 1) : 0.0;
  ComplexMatrix bb = b;
  if (smin < kRidge * smax || smax == 0.0) {
    const ComplexVector null_dir = svd.matrixV().col(b.cols() - 1);
    const double anorm = a.norm();
    if (smax == 0.0 || (a * null_dir).norm() <= kRidge * std::max(anorm, smax)) {
      throw SingularPencil("generalized_eig: pencil is singular in a shared null direction");
    }
    bb += ComplexMatrix::Identity(b.rows(), b.cols()) * (kRidge * smax);
  }
  return eig(bb.partialPivLu().solve(a)).values;
}

TruncatedSvd truncated_svd(const ComplexMatrix &m, std::size_t k) {
  const auto kk = static_cast<Eigen::Index>(k);
  if (kk == 0 || kk > std::min(m.rows(), m.cols())) {
    throw std::invalid_argument("truncated_svd: k must be in [1, min(rows, cols)]");
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {svd.matrixU().leftCols(kk), svd.singularValues().head(kk), svd.matrixV().leftCols(kk)};
}

ComplexVector least_squares(const ComplexMatrix &a, const ComplexVector &b) {
  if (a.rows() < a.cols()) throw std::invalid_argument("least_squares: need rows >= cols");
  if (a.rows() != b.size()) throw std::invalid_argument("least_squares: shape mismatch");
  Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto &s = svd.singularValues();
  if (s.size() == 0 || !(s(s.size() - 1) >= kRidge * s(0)) || s(0) == 0.0) {
    throw RankDeficient("least_squares: sigma_min/sigma_max below 1e-12");
  }
  return svd.solve(b);
}

double condition_number(const ComplexMatrix &m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const auto &s = svd.singularValues();
  if (s.size() == 0) return 1.0;
  const double smin = s(s.size() - 1);
  return smin > 0.0 ? s(0) / smin : std::numeric_limits<double>::infinity();
}

double min_singular_value(const ComplexMatrix &m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const auto &s = svd.singularValues();
  return s.size() ? s(s.size() - 1) : 0.0;
}

}  // namespace airy::linalg
