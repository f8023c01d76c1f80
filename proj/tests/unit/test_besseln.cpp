#include <cmath>
#include <functional>
#include <numbers>

#include <doctest.h>

#include "bessel_series.hpp"
#include "frozen.hpp"
#include "turingrad/besseln.hpp"
#include "turingrad/errors.hpp"

using namespace turingrad;

namespace {

constexpr double kPi = std::numbers::pi;

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

SampledRadial sample(const std::function<double(double)>& f, double a, double b, double h) {
  SampledRadial s;
  s.r0 = a;
  s.h = h;
  const int m = static_cast<int>(std::lround((b - a) / h)) + 1;
  for (int i = 0; i < m; ++i) s.values.push_back(f(s.r(i)));
  return s;
}

// Max error relative to max(1, max |f|), skipping `skip` samples at each end.
double max_diff(const SampledRadial& s, const std::function<double(double)>& f, std::size_t skip = 0) {
  double e = 0.0, scale = 1.0;
  for (std::size_t i = skip; i + skip < s.values.size(); ++i) {
    const double t = f(s.r(i));
    e = std::max(e, std::abs(s.values[i] - t));
    scale = std::max(scale, std::abs(t));
  }
  return e / scale;
}

using Zfun = double (*)(double, int, double);

// Max error of an identity evaluated on [0.5, 30] at spacing h.
using Identity = std::function<double(double h)>;

void check_grid_order(const Identity& err, double h = 0.01) {
  const double coarse = err(h), fine = err(h / 2);
  CAPTURE(coarse);
  CAPTURE(fine);
  CHECK(fine < coarse);
  CHECK(coarse / fine > 10.0);  // fourth-order stencils: ideal ratio 16
  CHECK(fine < 1e-3);
}

} // namespace

TEST_SUITE("besseln") {

TEST_CASE("bessel_jy agrees with the ascending-series oracle") {
  for (double nu : {-0.5, 0.0, 0.2, 0.5, 1.0, 1.5, 2.7, 5.0}) {
    for (double r : {0.01, 0.3, 1.0, 3.7, 9.9, 17.0, 33.3, 50.0}) {
      CAPTURE(nu);
      CAPTURE(r);
      const auto [j, y] = bessel_jy(nu, r);
      const double jo = oracle::J(nu, r), yo = oracle::Y(nu, r);
      CHECK(std::abs(j - jo) < 1e-10 * std::max(1.0, std::abs(jo)));
      CHECK(std::abs(y - yo) < 1e-10 * std::max(1.0, std::abs(yo)));
    }
  }
}

TEST_CASE("bessel_jy against frozen reference values") {
  auto [j1, y1] = bessel_jy(1.5, 1.0);
  CHECK(rel(j1, frozen::J_1p5_at_1) < 1e-10);
  CHECK(rel(y1, frozen::Y_1p5_at_1) < 1e-10);
  auto [j2, y2] = bessel_jy(0.2, 3.7);
  CHECK(rel(j2, frozen::J_0p2_at_3p7) < 1e-10);
  CHECK(rel(y2, frozen::Y_0p2_at_3p7) < 1e-10);
  auto [j3, y3] = bessel_jy(7.25, 800.0);
  CHECK(rel(j3, frozen::J_7p25_at_800) < 1e-10);
  CHECK(rel(y3, frozen::Y_7p25_at_800) < 1e-10);
}

TEST_CASE("closed-form values") {
  CHECK(std::abs(bessel_jy(0.5, kPi).first) < 1e-15);
  CHECK(std::abs(bessel_jy(0.0, frozen::J0_first_zero).first) < 1e-12);
  CHECK(std::abs(oracle::J(0.0, frozen::J0_first_zero)) < 1e-12);
  CHECK(jn(2, 0, kPi / 2) == doctest::Approx(2.0 / kPi).epsilon(1e-14));
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(bessel_jy(1.0, 0.0), DomainError);
  CHECK_THROWS_AS(bessel_jy(1.0, -1.0), DomainError);
  CHECK_THROWS_AS(bessel_jy(-0.6, 1.0), DomainError);
  CHECK_THROWS_AS(jn(1.0, 0, -0.1), DomainError);
  CHECK_THROWS_AS(yn(1.0, 0, 0.0), DomainError);
  CHECK_THROWS_AS(jn(-1.0, 0, 1.0), DomainError);
  CHECK_THROWS_AS(jn(1.0, -1, 1.0), DomainError);
  CHECK_THROWS_AS(wronskian_defect(1.0, 0.0), DomainError);
}

TEST_CASE("first-kind functions equal one at the origin") {
  for (double n : {0.3, 1.0, 2.0, 5.0}) CHECK(jn(n, 0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(jn(1.0, 1, 0.0) == 0.0);
  CHECK(jn(0.7, 0, 1e-8) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("dimension reductions") {
  double e0 = 0, e1 = 0, e2 = 0;
  for (int i = 1; i <= 5000; ++i) {
    const double r = 0.01 * i;
    const double s = std::sin(r), c = std::cos(r);
    e0 = std::max({e0, std::abs(jn(0, 0, r) - c), std::abs(jn(0, 1, r) - s), std::abs(yn(0, 0, r) - s),
                   std::abs(yn(0, 1, r) + c)});
    e2 = std::max({e2, std::abs(jn(2, 0, r) - s / r), std::abs(jn(2, 1, r) - (s / (r * r) - c / r)),
                   std::abs(yn(2, 0, r) + c / r), std::abs(yn(2, 1, r) - (-c / (r * r) - s / r))});
    if (i % 10 == 0) {
      e1 = std::max({e1, std::abs(jn(1, 0, r) - oracle::J(0, r)), std::abs(jn(1, 1, r) - oracle::J(1, r)),
                     std::abs(yn(1, 0, r) - oracle::Y(0, r)), std::abs(yn(1, 1, r) - oracle::Y(1, r))});
    }
  }
  CAPTURE(e0);
  CAPTURE(e1);
  CAPTURE(e2);
  CHECK(e0 < 1e-9);
  CHECK(e1 < 1e-9);
  CHECK(e2 < 1e-9);
}

TEST_CASE("fractional dimensions against the oracle") {
  for (double n : {0.5, 1.5, 2.5, 3.5}) {
    for (int ell : {0, 1, 2}) {
      for (double r : {0.2, 2.0, 11.0, 45.0}) {
        CAPTURE(n);
        CAPTURE(ell);
        CAPTURE(r);
        CHECK(std::abs(jn(n, ell, r) - oracle::Jn(n, ell, r)) < 1e-10 * std::max(1.0, std::abs(oracle::Jn(n, ell, r))));
        CHECK(std::abs(yn(n, ell, r) - oracle::Yn(n, ell, r)) < 1e-10 * std::max(1.0, std::abs(oracle::Yn(n, ell, r))));
      }
    }
  }
}

TEST_CASE("Wronskian identity") {
  double worst = 0.0;
  for (double n : {0.1, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5}) {
    for (double r : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 25.0, 50.0}) worst = std::max(worst, std::abs(wronskian_defect(n, r)));
  }
  CAPTURE(worst);
  CHECK(worst < 1e-10);
  CHECK(std::abs(wronskian_defect(1, 1)) < 1e-10);
  CHECK(std::abs(wronskian_defect(2, 10)) < 1e-10);
  CHECK(std::abs(wronskian_defect(0.7, 0.01)) < 1e-8);
}

TEST_CASE("leading asymptotics") {
  const double a = asymptotic_leading(1, 0, 50, BesselKind::First);
  CHECK(std::abs(jn(1, 0, 50) - a) < std::pow(50.0, -1.5));
  for (double r : {10.0, 13.0, 77.0}) CHECK(asymptotic_leading(0, 0, r, BesselKind::Second) == doctest::Approx(std::sin(r)).epsilon(1e-14));
  CHECK(rel(asymptotic_leading(2, 0, 40, BesselKind::First), jn(2, 0, 40)) < 1e-2);
  // Remainder decays like r^{-(n+2)/2}.
  const double e1 = std::abs(yn(1.5, 1, 100) - asymptotic_leading(1.5, 1, 100, BesselKind::Second));
  const double e2 = std::abs(yn(1.5, 1, 400) - asymptotic_leading(1.5, 1, 400, BesselKind::Second));
  CHECK(e2 < e1);
}

TEST_CASE("Bessel operator of a constant") {
  const auto one = sample([](double) { return 1.0; }, 0.0, 2.0, 0.1);
  const auto d = bessel_operator_apply(0.0, one);
  for (double v : d.values) CHECK(std::abs(v) < 1e-12);
  SampledRadial tiny;
  tiny.r0 = 1.0;
  tiny.h = 0.1;
  tiny.values = {1, 2, 3, 4};
  CHECK_THROWS_AS(bessel_operator_apply(1.0, tiny), GridTooCoarse);
}

TEST_CASE("lowering recurrence holds to grid order") {
  for (double n : {0.5, 1.0, 2.0, 3.5}) {
    for (int ell : {1, 2}) {
      for (Zfun Z : {static_cast<Zfun>(&jn), static_cast<Zfun>(&yn)}) {
        CAPTURE(n);
        CAPTURE(ell);
        check_grid_order([&](double h) {
          const auto f = sample([&](double r) { return Z(n, ell, r); }, 0.5, 30.0, h);
          return max_diff(bessel_operator_apply(n - 1 + ell, f), [&](double r) { return Z(n, ell - 1, r); });
        });
      }
    }
  }
}

TEST_CASE("raising recurrence holds to grid order") {
  for (double n : {0.5, 1.0, 2.0, 3.5}) {
    for (int ell : {0, 1, 2}) {
      for (Zfun Z : {static_cast<Zfun>(&jn), static_cast<Zfun>(&yn)}) {
        CAPTURE(n);
        CAPTURE(ell);
        check_grid_order([&](double h) {
          const auto f = sample([&](double r) { return Z(n, ell, r); }, 0.5, 30.0, h);
          return max_diff(bessel_operator_apply(-ell, f), [&](double r) { return -Z(n, ell + 1, r); });
        });
      }
    }
  }
}

TEST_CASE("generalized Bessel equation holds to grid order") {
  // Delta_n = D_n D_0, and Delta_n Z_0 = -Z_0.
  for (double n : {0.5, 1.0, 2.0, 3.5}) {
    CAPTURE(n);
    check_grid_order([&](double h) {
      const auto f = sample([&](double r) { return jn(n, 0, r); }, 0.5, 30.0, h);
      const auto lap = bessel_operator_apply(n, bessel_operator_apply(0.0, f));
      // Nested one-sided end stencils lose an order; compare away from the ends.
      return max_diff(lap, [&](double r) { return -jn(n, 0, r); }, 4);
    }, 0.1);
  }
}

TEST_CASE("r Z_1 is a generalized kernel element of (Delta_n + 1)^2") {
  // (Delta_n + 1)(r J_1) = 2 J_0.
  for (double n : {0.5, 1.0, 2.0, 3.0}) {
    CAPTURE(n);
    check_grid_order([&](double h) {
      const auto f = sample([&](double r) { return r * jn(n, 1, r); }, 0.5, 30.0, h);
      auto lap = bessel_operator_apply(n, bessel_operator_apply(0.0, f));
      for (std::size_t i = 0; i < lap.values.size(); ++i) lap.values[i] += f.values[i];
      return max_diff(lap, [&](double r) { return 2.0 * jn(n, 0, r); }, 4);
    }, 0.1);
  }
}

}
