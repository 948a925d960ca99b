#include <algorithm>
#include <cmath>
#include <string>

#include "airy/errors.hpp"
#include "airy/lowerbound.hpp"

namespace airy::lowerbound {

namespace {

// Gaussian elimination with partial pivoting, in long double.
std::vector<long double> solve(std::vector<std::vector<long double>> a, std::vector<long double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t row = col + 1; row < n; ++row) {
      if (std::abs(a[row][col]) > std::abs(a[piv][col])) piv = row;
    }
    if (!(std::abs(a[piv][col]) >= 1e-14L)) {
      throw SingularSystem("pivot " + std::to_string(static_cast<double>(std::abs(a[piv][col]))) + " in column " +
                           std::to_string(col));
    }
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t row = col + 1; row < n; ++row) {
      const long double f = a[row][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[row][c] -= f * a[col][c];
      b[row] -= f * b[col];
    }
  }
  std::vector<long double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    long double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  return x;
}

}  // namespace

MomentMatchInstance moment_match_instance(int k, double delta, double sigma) {
  if (k < 2 || k % 2 != 0) throw BadShape("moment_match: k must be even and at least 2");
  if (!(delta > 0.0)) throw std::invalid_argument("moment_match: delta must be positive");
  const int half = k / 2;
  std::vector<double> a(static_cast<std::size_t>(half)), b(static_cast<std::size_t>(half));
  for (int i = 1; i <= half; ++i) {
    a[static_cast<std::size_t>(i - 1)] = delta / 2.0 * (2.0 * i - (k + 3) / 2.0);
    b[static_cast<std::size_t>(i - 1)] = delta / 2.0 * (2.0 * i - (k + 1) / 2.0);
  }
  // The moment equations are homogeneous, so nodes may be scaled freely; put
  // them in [-1, 1] to keep the powers well scaled.
  double span = 0.0;
  for (double x : a) span = std::max(span, std::abs(x));
  for (double x : b) span = std::max(span, std::abs(x));

  // Unknowns [lambda_1..lambda_h, lambda'_1..lambda'_h]. Rows: both
  // normalisations, then moments of degree 1 .. k - 2.
  const auto n = static_cast<std::size_t>(k);
  std::vector<std::vector<long double>> m(n, std::vector<long double>(n, 0.0L));
  std::vector<long double> rhs(n, 0.0L);
  for (std::size_t i = 0; i < static_cast<std::size_t>(half); ++i) {
    m[0][i] = 1.0L;
    m[1][half + i] = 1.0L;
  }
  rhs[0] = rhs[1] = 1.0L;
  for (int deg = 1; deg <= k - 2; ++deg) {
    auto &row = m[static_cast<std::size_t>(deg + 1)];
    for (std::size_t i = 0; i < static_cast<std::size_t>(half); ++i) {
      row[i] = std::pow(static_cast<long double>(a[i] / span), deg);
      row[half + i] = -std::pow(static_cast<long double>(b[i] / span), deg);
    }
  }
  const auto x = solve(std::move(m), std::move(rhs));

  std::vector<double> la(static_cast<std::size_t>(half)), lb(static_cast<std::size_t>(half));
  std::vector<Vec2> ca, cb;
  for (std::size_t i = 0; i < static_cast<std::size_t>(half); ++i) {
    la[i] = static_cast<double>(x[i]);
    lb[i] = static_cast<double>(x[half + i]);
    ca.push_back({a[i], 0.0});
    cb.push_back({b[i], 0.0});
    if (la[i] < 0.0 || lb[i] < 0.0) {
      throw SingularSystem("moment-matching weights are negative at k = " + std::to_string(k));
    }
  }
  const SpreadParameter s(sigma);
  return MomentMatchInstance{
      .rho = SuperpositionModel::normalized(std::move(la), std::move(ca), s),
      .rho_prime = SuperpositionModel::normalized(std::move(lb), std::move(cb), s),
      .k = k,
      .delta = delta,
  };
}

}  // namespace airy::lowerbound
