#pragma once

namespace airy {

// J_order(x) for order in {0, 1, 2}; absolute error below 1e-12 for |x| <= 1e4.
// Throws std::invalid_argument for other orders. NaN in, NaN out.
double bessel_j(int order, double x);

struct BesselJ01 {
  double j0;
  double j1;
};

// J0 and J1 together; cheaper than two bessel_j calls on the asymptotic branch.
BesselJ01 bessel_j01(double x);

// Landau's uniform envelope: |J_nu(r)| <= kLandauConstant * r^(-1/3).
// sup_r r^(1/3) |J0(r)|, attained near r = 0.7837; 0.7857 is its truncation
// and is exceeded there by about 5e-5.
inline constexpr double kLandauConstant = 0.7857468704983701;

}  // namespace airy
