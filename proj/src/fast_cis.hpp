#pragma once

#include <cmath>

namespace airy::detail {

// cos(2 pi t) and sin(2 pi t). Branch-free so loops over arrays vectorise;
// absolute error ~2e-16 after exact quarter-turn reduction.
inline void cis_turns(double t, double &c, double &s) {
  // Round 4t to the nearest integer with the 1.5 * 2^52 trick; valid for |t| < 2^49.
  constexpr double kRound = 6755399441055744.0;
  const double quarter = (4.0 * t + kRound) - kRound;
  const double r = t - 0.25 * quarter;  // |r| <= 1/8, exact
  const double x = 6.283185307179586476925286766559 * r;
  const double x2 = x * x;
  // Taylor to x^17 / x^16; remainder below 2e-17 on |x| <= pi/4.
  double sp = -1.0 / 355687428096000.0;
  sp = sp * x2 + 1.0 / 1307674368000.0;
  sp = sp * x2 - 1.0 / 6227020800.0;
  sp = sp * x2 + 1.0 / 39916800.0;
  sp = sp * x2 - 1.0 / 362880.0;
  sp = sp * x2 + 1.0 / 5040.0;
  sp = sp * x2 - 1.0 / 120.0;
  sp = sp * x2 + 1.0 / 6.0;
  const double sn = x - x * x2 * sp;
  double cp = 1.0 / 20922789888000.0;
  cp = cp * x2 - 1.0 / 87178291200.0;
  cp = cp * x2 + 1.0 / 479001600.0;
  cp = cp * x2 - 1.0 / 3628800.0;
  cp = cp * x2 + 1.0 / 40320.0;
  cp = cp * x2 - 1.0 / 720.0;
  cp = cp * x2 + 1.0 / 24.0;
  cp = cp * x2 - 0.5;
  const double cs = 1.0 + x2 * cp;
  // Rotate by quarter * pi/2 using the low two bits, without branches.
  const auto q = static_cast<long long>(quarter);
  const bool odd = (q & 1) != 0;
  const double cos_sign = (((q + 1) & 2) != 0) ? -1.0 : 1.0;
  const double sin_sign = ((q & 2) != 0) ? -1.0 : 1.0;
  const double base_c = odd ? sn : cs;
  const double base_s = odd ? cs : sn;
  c = cos_sign * base_c;
  s = sin_sign * base_s;
}

}  // namespace airy::detail
