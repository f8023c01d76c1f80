#pragma once

// 50-digit ascending-series Bessel functions, independent of the library backend.
// Accurate for moderate arguments (r <= 50); cancellation is absorbed by the extra digits.

#include <cmath>

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_dec_float.hpp>

namespace oracle {

using mp = boost::multiprecision::cpp_dec_float_50;

inline mp series_j(const mp& nu, const mp& x) {
  const mp half = x / 2;
  const mp q = -half * half;
  mp term = pow(half, nu) / boost::math::tgamma(nu + 1);
  mp sum = term;
  const mp eps("1e-48");
  for (int k = 1; k < 2000; ++k) {
    term *= q / (mp(k) * (nu + k));
    sum += term;
    if (abs(term) < eps * abs(sum) && k > abs(x)) break;
  }
  return sum;
}

// Integer order m >= 0 via the logarithmic series.
inline mp series_y_integer(int m, const mp& x) {
  const mp pi = boost::math::constants::pi<mp>();
  const mp euler = boost::math::constants::euler<mp>();
  const mp half = x / 2;
  mp finite = 0;
  for (int k = 0; k < m; ++k) {
    finite += boost::math::tgamma(mp(m - k)) / boost::math::tgamma(mp(k + 1)) * pow(half, 2 * k - m);
  }
  // psi(k+1) + psi(m+k+1) with psi(j+1) = -euler + H_j
  mp hk = 0, hmk = 0;
  for (int j = 1; j <= m; ++j) hmk += mp(1) / j;
  const mp q = -half * half;
  mp term = pow(half, m) / boost::math::tgamma(mp(m + 1));
  mp sum = term * (hk + hmk - 2 * euler);
  const mp eps("1e-48");
  for (int k = 1; k < 2000; ++k) {
    term *= q / (mp(k) * (m + k));
    hk += mp(1) / k;
    hmk += mp(1) / (m + k);
    const mp t = term * (hk + hmk - 2 * euler);
    sum += t;
    if (abs(term) < eps && k > abs(x)) break;
  }
  return -finite / pi + 2 / pi * log(half) * series_j(mp(m), x) - sum / pi;
}

inline mp series_y(const mp& nu, const mp& x) {
  const mp r = round(nu);
  if (abs(nu - r) < mp("1e-30")) return series_y_integer(static_cast<int>(r), x);
  const mp pi = boost::math::constants::pi<mp>();
  return (series_j(nu, x) * cos(nu * pi) - series_j(-nu, x)) / sin(nu * pi);
}

inline double J(double nu, double x) { return static_cast<double>(series_j(mp(nu), mp(x))); }
inline double Y(double nu, double x) { return static_cast<double>(series_y(mp(nu), mp(x))); }

// (n+1)-dimensional Bessel functions from the same series.
inline mp dim_factor(double n, double r) {
  const mp a = (mp(n) - 1) / 2;
  return pow(mp(2), a) * boost::math::tgamma(a + 1) * pow(mp(r), -a);
}
inline double Jn(double n, int ell, double r) {
  return static_cast<double>(dim_factor(n, r) * series_j(mp(ell) + (mp(n) - 1) / 2, mp(r)));
}
inline double Yn(double n, int ell, double r) {
  return static_cast<double>(dim_factor(n, r) * series_y(mp(ell) + (mp(n) - 1) / 2, mp(r)));
}

} // namespace oracle
