#pragma once

#include <utility>
#include <vector>

namespace turingrad {

// Real-order Bessel pair (J_nu(r), Y_nu(r)), nu >= -1/2, r > 0.
std::pair<double, double> bessel_jy(double nu, double r);

// (n+1)-dimensional Bessel functions
//   Z_l^{(n)}(r) = 2^{(n-1)/2} Gamma((n+1)/2) r^{-(n-1)/2} Z_{l+(n-1)/2}(r).
// jn accepts r >= 0 and returns the analytic limit at r = 0.
double jn(double n, int ell, double r);
double yn(double n, int ell, double r);

struct SampledRadial {
  double r0 = 0.0;  // first sample location
  double h = 0.0;   // uniform spacing
  std::vector<double> values;

  double r(std::size_t i) const { return r0 + h * static_cast<double>(i); }
};

// (d/dr + k/r) f with fourth-order differences, one-sided near the ends. Requires r > 0.
SampledRadial bessel_operator_apply(double k, const SampledRadial& f);

enum class BesselKind { First, Second };

// Leading large-r term 2^{n/2} Gamma((n+1)/2)/sqrt(pi) r^{-n/2} cos(r - n pi/4 - l pi/2)
// (sin for the second kind).
double asymptotic_leading(double n, int ell, double r, BesselKind kind);

// r^n [J_1 Y_0 - J_0 Y_1](r) - 2^n Gamma((n+1)/2)^2 / pi
double wronskian_defect(double n, double r);

} // namespace turingrad
