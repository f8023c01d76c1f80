#include "turingrad/besseln.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/bessel.hpp>

#include "turingrad/errors.hpp"

namespace turingrad {

namespace {

void check_order(double n, int ell) {
  if (!(n >= 0.0)) throw DomainError("dimension parameter n must be >= 0");
  if (ell < 0) throw DomainError("ell must be >= 0");
}

double dimension_factor(double n) {
  return std::pow(2.0, 0.5 * (n - 1.0)) * std::tgamma(0.5 * (n + 1.0));
}

// Weights of the derivative at offset x of the Lagrange interpolant on nodes 0..4.
void edge_weights(double x, double w[5]) {
  for (int j = 0; j < 5; ++j) {
    double num = 0.0;
    for (int a = 0; a < 5; ++a) {
      if (a == j) continue;
      double prod = 1.0;
      for (int c = 0; c < 5; ++c) {
        if (c != j && c != a) prod *= (x - c);
      }
      num += prod;
    }
    double den = 1.0;
    for (int c = 0; c < 5; ++c) {
      if (c != j) den *= (j - c);
    }
    w[j] = num / den;
  }
}

} // namespace

std::pair<double, double> bessel_jy(double nu, double r) {
  if (!(r > 0.0)) throw DomainError("bessel_jy requires r > 0");
  if (!(nu >= -0.5)) throw DomainError("bessel_jy requires nu >= -1/2");
  return {boost::math::cyl_bessel_j(nu, r), boost::math::cyl_neumann(nu, r)};
}

double jn(double n, int ell, double r) {
  check_order(n, ell);
  if (r < 0.0 || !std::isfinite(r)) throw DomainError("jn requires r >= 0");
  if (r == 0.0) return ell == 0 ? 1.0 : 0.0;
  if (r < 1e-8) {
    // Leading ascending-series term; the next term is O(r^2) relative.
    const double a = 0.5 * (n + 1.0);
    return std::tgamma(a) / (std::pow(2.0, ell) * std::tgamma(a + ell)) * std::pow(r, ell);
  }
  const double nu = ell + 0.5 * (n - 1.0);
  return dimension_factor(n) * std::pow(r, -0.5 * (n - 1.0)) * boost::math::cyl_bessel_j(nu, r);
}

double yn(double n, int ell, double r) {
  check_order(n, ell);
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("yn requires r > 0");
  const double nu = ell + 0.5 * (n - 1.0);
  return dimension_factor(n) * std::pow(r, -0.5 * (n - 1.0)) * boost::math::cyl_neumann(nu, r);
}

SampledRadial bessel_operator_apply(double k, const SampledRadial& f) {
  const std::size_t m = f.values.size();
  if (m < 5) throw GridTooCoarse("bessel_operator_apply needs at least 5 samples");
  if (!(f.r0 > 0.0) && k != 0.0) throw DomainError("bessel_operator_apply requires r > 0");
  if (!(f.h > 0.0)) throw DomainError("grid spacing must be positive");
  const auto& v = f.values;
  const double ih = 1.0 / f.h;
  SampledRadial out{f.r0, f.h, std::vector<double>(m)};
  for (std::size_t i = 0; i < m; ++i) {
    double d;
    if (i >= 2 && i + 2 < m) {
      d = (v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]) / 12.0;
    } else {
      // Derivative of the quartic interpolant through the five edge samples.
      const std::size_t b = i < 2 ? 0 : m - 5;
      double w[5];
      edge_weights(static_cast<double>(i - b), w);
      d = 0.0;
      for (int j = 0; j < 5; ++j) d += w[j] * v[b + j];
    }
    const double r = f.r(i);
    out.values[i] = d * ih + (k == 0.0 ? 0.0 : k / r * v[i]);
  }
  return out;
}

double asymptotic_leading(double n, int ell, double r, BesselKind kind) {
  using std::numbers::pi;
  const double amp = std::pow(2.0, 0.5 * n) * std::tgamma(0.5 * (n + 1.0)) / std::sqrt(pi) *
                     std::pow(r, -0.5 * n);
  const double phase = r - n * pi / 4.0 - ell * pi / 2.0;
  return amp * (kind == BesselKind::First ? std::cos(phase) : std::sin(phase));
}

double wronskian_defect(double n, double r) {
  if (!(r > 0.0)) throw DomainError("wronskian_defect requires r > 0");
  const double g = std::tgamma(0.5 * (n + 1.0));
  const double target = std::pow(2.0, n) * g * g / std::numbers::pi;
  const double w = std::pow(r, n) * (jn(n, 1, r) * yn(n, 0, r) - jn(n, 0, r) * yn(n, 1, r));
  return w - target;
}

} // namespace turingrad
