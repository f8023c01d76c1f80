#include <cmath>
#include <numbers>

#include <doctest.h>

#include "turingrad/asymptotics.hpp"
#include "turingrad/besseln.hpp"
#include "turingrad/errors.hpp"
#include "turingrad/radialpde.hpp"

using namespace turingrad;

namespace {

constexpr double kPi = std::numbers::pi;

TuringData sh(double nu = 1.6) { return turing_data(sh_as_rd(nu)); }

double core_prefactor(double n) { return std::sqrt(kPi) / (std::pow(2.0, n / 2) * std::tgamma((n + 1) / 2)); }

double slope(const std::function<double(double)>& amp, double mu1, double mu2) {
  return std::log(std::abs(amp(mu2) / amp(mu1))) / std::log(mu2 / mu1);
}

// mu with gamma_plus(mu) = gamma at the default matching radii, by bisection in log mu.
double fold_mu(double n, double gamma, double c0, double c3) {
  double lo = std::log(1e-40), hi = std::log(1e-6);
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (fold_curve_gamma(n, std::exp(mid), 20.0, 0.1, c0, c3).first < gamma) lo = mid; else hi = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

} // namespace

TEST_SUITE("asymptotics") {

TEST_CASE("core solutions at the origin") {
  const auto td = sh();
  for (double n : {0.5, 1.0, 2.0, 3.0}) {
    const auto cb = core_basis(n, td, {0.0, 0.5});
    CHECK((cb.V[0][0].head<2>() - core_prefactor(n) * td.U0hat).norm() < 1e-15);
    CHECK(cb.V[0][0].tail<2>().norm() == 0.0);
    CHECK(std::isnan(cb.V[2][0][0]));
    CHECK(std::isnan(cb.W[0][0][0]));
  }
  CHECK_THROWS_AS(core_basis(0.0, td, {1.0}), DomainError);
}

TEST_CASE("core and adjoint solutions are biorthonormal") {
  const std::vector<double> r{0.5, 1.0, 5.0, 10.0};
  for (double n : {0.5, 1.0, 2.0, 3.0}) {
    CAPTURE(n);
    CHECK(core_basis(n, sh(), r).pairing_defect() < 1e-8);
  }
  // A chain that is not the unit basis.
  RDSystem s = sh_as_rd(1.6);
  s.M1 << -3, 4, -1, 1;
  const auto td = turing_data(s);
  for (double n : {0.5, 2.0}) CHECK(core_basis(n, td, r).pairing_defect() < 1e-8);
}

TEST_CASE("core solutions solve the linear problem") {
  const auto td = sh();
  Mat2 M1;
  M1 << -1, 1, 0, -1;
  for (double n : {0.5, 1.0, 2.0, 3.0}) {
    auto worst = [&](double h) {
      double w = 0.0;
      for (double r = 0.5; r <= 10.0; r += 0.25) {
        const auto cb = core_basis(n, td, {r - h, r, r + h});
        for (int j = 0; j < 4; ++j) {
          const Vec2 um = cb.V[j][0].head<2>(), u0 = cb.V[j][1].head<2>(), up = cb.V[j][2].head<2>();
          const Vec2 d1 = (up - um) / (2 * h), d2 = (up - 2 * u0 + um) / (h * h);
          // (Delta_n - M1) u = 0, and the second block is u'.
          w = std::max(w, (d2 + n / r * d1 - M1 * u0).norm() / std::max(1.0, u0.norm()));
          w = std::max(w, (d1 - cb.V[j][1].tail<2>()).norm() / std::max(1.0, u0.norm()));
        }
      }
      return w;
    };
    CAPTURE(n);
    const double e1 = worst(2e-3), e2 = worst(1e-3);
    CHECK(e2 < 1e-4);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
  }
}

TEST_CASE("spot A profile") {
  const auto td = sh();
  const std::vector<double> grid = radial_grid(20.0, 0.05);
  for (double n : {0.5, 1.0, 2.0, 3.0}) {
    const double mu = 1e-3;
    const auto p = spot_a(td, n, mu, grid);
    const double u0 = std::sqrt(td.c0 * mu) * std::sqrt(kPi) / (nu_n(n) * td.gamma * std::pow(2.0, n / 2) * std::tgamma((n + 1) / 2));
    CHECK((p.values[0] - u0 * td.U0hat).norm() < 1e-15);
    const double s = slope([&](double m) { return spot_a(td, n, m, {0.0}).values[0][0]; }, 1e-4, 1e-2);
    CHECK(std::abs(s - 0.5) < 1e-10);
    CHECK(p.remainder_exponent == 1.0);
  }
  // Planar case against a direct evaluation with the standard library.
  const auto p = spot_a(td, 1.0, 0.01, grid);
  const double amp = std::sqrt(0.25 * 0.01) * std::sqrt(kPi) / (0.5 * std::sqrt(kPi / 6.0) * 1.6 * std::sqrt(2.0));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    REQUIRE(std::abs(p.values[i][0] - amp * std::cyl_bessel_j(0.0, grid[i])) < 1e-12);
    REQUIRE(p.values[i][1] == 0.0);
  }
  CHECK_THROWS_AS(spot_a(sh(0.0), 1.0, 0.01, grid), DegenerateGamma);
  CHECK_THROWS_AS(spot_a(td, 1.0, 0.0, grid), DomainError);
  CHECK_THROWS_AS(spot_a(td, 1.0, 0.01, {-1.0}), DomainError);
}

TEST_CASE("ring profiles") {
  const auto td = sh();
  const std::vector<double> grid = radial_grid(20.0, 0.05);
  const double q = 2.18;
  for (double n : {1.0, 2.0, 3.0}) {
    const auto plus = ring(td, n, 1e-3, +1, grid, q);
    const auto minus = ring(td, n, 1e-3, -1, grid, q);
    CHECK(plus.values[0][0] == 0.0);
    CHECK(plus.values[0][1] != 0.0);
    for (std::size_t i = 0; i < grid.size(); ++i) REQUIRE((plus.values[i] + minus.values[i]).norm() == 0.0);
    const double s = slope([&](double m) { return ring(td, n, m, 1, {0.0}, q).values[0][1]; }, 1e-4, 1e-2);
    CHECK(std::abs(s - (4 - n) / 4) < 1e-10);
    CHECK(plus.kind == PatternKind::RingPlus);
    CHECK(minus.kind == PatternKind::RingMinus);
  }
  CHECK_THROWS_AS(ring(td, 4.0, 1e-3, 1, grid, q), DomainError);
  CHECK_THROWS_AS(ring(sh(0.5), 1.0, 1e-3, 1, grid, q), DomainError);
  CHECK_THROWS_AS(ring(td, 1.0, 1e-3, 0, grid, q), DomainError);
  CHECK_THROWS_AS(ring(td, 1.0, 1e-3, 1, grid, 0.0), DomainError);
}

TEST_CASE("spot B profile") {
  const std::vector<double> grid = radial_grid(20.0, 0.05);
  const double q = 2.18;
  for (double nu : {1.6, -1.6}) {
    const auto td = sh(nu);
    const auto p = spot_b(td, 1.0, 1e-3, grid, q);
    CHECK((p.values[0].dot(td.U0star) > 0) == (nu < 0));
    for (double n : {0.5, 1.0, 2.0, 3.0}) {
      const double s = slope([&](double m) { return spot_b(td, n, m, {0.0}, q).values[0][0]; }, 1e-4, 1e-2);
      CHECK(std::abs(s - (4 - n) / 8) < 1e-10);
    }
    // Planar reduction is a multiple of J_0.
    for (std::size_t i = 0; i < grid.size(); ++i) {
      REQUIRE(std::abs(p.values[i][0] - p.amplitude * std::cyl_bessel_j(0.0, grid[i])) < 1e-14);
    }
  }
  CHECK_THROWS_AS(spot_b(sh(0.5), 1.0, 1e-3, grid, q), DomainError);
  CHECK_THROWS_AS(spot_b(sh(0.0), 1.0, 1e-3, grid, q), DegenerateGamma);
}

TEST_CASE("spherical profiles reduce to sin r / r") {
  const auto td = sh();
  for (double r : {0.3, 2.0, 7.5, 19.0}) {
    const auto a = spot_a(td, 2.0, 1e-3, {0.0, r});
    CHECK(a.values[1][0] / a.values[0][0] == doctest::Approx(std::sin(r) / r).epsilon(1e-12));
  }
}

TEST_CASE("matching amplitudes") {
  const auto td = sh();
  const double q = 2.18, r0 = 20.0, r1 = 0.1;
  for (double n : {0.5, 1.0, 2.0}) {
    const double mu = 1e-3;
    const auto a = matching_amplitudes(PatternKind::SpotA, td, n, mu, q, r0, r1);
    CHECK(a.d1 == doctest::Approx(std::sqrt(td.c0 * mu) / (nu_n(n) * td.gamma)).epsilon(1e-14));
    CHECK(a.d2 == 0.0);
    CHECK(a.phase_offset == 0.0);
    CHECK(a.d1 * core_prefactor(n) == doctest::Approx(spot_a(td, n, mu, {0.0}).amplitude).epsilon(1e-13));

    const auto b = matching_amplitudes(PatternKind::SpotB, td, n, mu, q, r0, r1);
    CHECK(b.d1 * core_prefactor(n) == doctest::Approx(spot_b(td, n, mu, {0.0}, q).amplitude).epsilon(1e-13));
    CHECK(b.phase_offset == 0.0);
    CHECK(matching_amplitudes(PatternKind::SpotB, sh(-1.6), n, mu, q, r0, r1).phase_offset == -2.0);

    const auto rp = matching_amplitudes(PatternKind::RingPlus, td, n, mu, q, r0, r1);
    const auto rm = matching_amplitudes(PatternKind::RingMinus, td, n, mu, q, r0, r1);
    CHECK(rp.d1 == 0.0);
    CHECK(rp.d2 == -rm.d2);
    CHECK(rp.phase_offset == 3.0);
    CHECK(rm.phase_offset == 1.0);
    CHECK(rp.d2 * core_prefactor(n) == doctest::Approx(ring(td, n, mu, 1, {0.0}, q).amplitude).epsilon(1e-13));
  }
}

TEST_CASE("E_n(mu)") {
  const double r0 = 20.0, r1 = 0.1;
  for (double mu : {1e-6, 1e-8, 1e-12}) {
    CHECK(en_mu(1.0, mu, r0, r1) == doctest::Approx(1.0 / std::sqrt(std::log(r1 / std::sqrt(mu) / r0))).epsilon(1e-13));
  }
  // n = 2: 1/E^2 = mu^{-1/2} (1/r0 - sqrt(mu)/r1), so E ~ sqrt(r0) mu^{1/4}.
  CHECK(en_mu(2.0, 1e-12, r0, r1) / std::pow(1e-12, 0.25) == doctest::Approx(std::sqrt(r0)).epsilon(1e-3));
  CHECK(en_mu(2.0, 1e-16, r0, r1) / std::pow(1e-16, 0.25) == doctest::Approx(std::sqrt(r0)).epsilon(1e-4));
  // n = 0.5 stays bounded: E -> (2 sqrt(r1))^{-1/2}.
  const double lim = 1.0 / std::sqrt(2.0 * std::sqrt(r1));
  CHECK(en_mu(0.5, 1e-16, r0, r1) == doctest::Approx(lim).epsilon(0.02));
  CHECK(std::abs(en_mu(0.5, 1e-20, r0, r1) - lim) < std::abs(en_mu(0.5, 1e-16, r0, r1) - lim));
  CHECK_THROWS_AS(en_mu(1.0, 1e-2, r0, r1), DomainError);
  CHECK_THROWS_AS(en_mu(1.0, 0.0, r0, r1), DomainError);
}

TEST_CASE("fold curve") {
  const double r0 = 20.0, r1 = 0.1, c0 = 0.25, c3 = 0.5;
  for (double n : {0.5, 1.0, 1.5, 2.0, 3.0}) {
    for (double mu : {1e-6, 1e-8}) {
      const auto [gp, gm] = fold_curve_gamma(n, mu, r0, r1, c0, c3);
      CHECK(gp > 0.0);
      CHECK(gm == -gp);
      CHECK(std::abs(fold_discriminant_gamma(n, mu, r0, r1, c0, c3) - gp) / gp < 1e-12);
      // On the curve the matching discriminant vanishes.
      TuringData td;
      td.c0 = c0;
      td.c3 = c3;
      td.gamma = gp;
      const auto fm = spot_a_fold_matching(td, n, mu, r0, r1);
      CHECK(std::abs(fm.discriminant) < 1e-12 * std::sqrt(c0) * c3);
      td.gamma = 1.01 * gp;
      CHECK(spot_a_fold_matching(td, n, mu, r0, r1).d1.has_value());
      td.gamma = 0.99 * gp;
      CHECK_FALSE(spot_a_fold_matching(td, n, mu, r0, r1).d1.has_value());
    }
  }
  // Planar curve ~ mu^{1/4} |log mu|^{1/2}.
  auto ratio = [&](double mu) {
    return fold_curve_gamma(1.0, mu, r0, r1, c0, c3).first / (std::pow(mu, 0.25) * std::sqrt(std::abs(std::log(mu))));
  };
  CHECK(std::abs(ratio(1e-100) / ratio(1e-200) - 1.0) < 0.02);
  CHECK(std::abs(ratio(1e-100) / ratio(1e-200) - 1.0) < std::abs(ratio(1e-20) / ratio(1e-40) - 1.0));
  CHECK_THROWS_AS(fold_curve_gamma(1.0, 1e-6, r0, r1, c0, -1.0), DomainError);
  CHECK_THROWS_AS(fold_curve_gamma(1.0, 1e-6, r0, r1, c0, 0.0), DomainError);
  CHECK_THROWS_AS(fold_discriminant_gamma(1.0, 1e-6, r0, r1, c0, -1.0), DomainError);
}

TEST_CASE("fold point increases with dimension") {
  double prev = 0.0;
  for (double n : {0.5, 1.0, 1.5, 2.0, 2.5, 3.0}) {
    const double mu = fold_mu(n, 1e-3, 0.25, 0.5);
    CAPTURE(n);
    CAPTURE(mu);
    CHECK(mu > prev);
    prev = mu;
  }
}

TEST_CASE("far-field envelope") {
  const double c0 = 0.25;
  for (double n : {0.0, 1.0, 2.0}) {
    const double mu = 1e-2, r = 1e4, h = 1e-2;
    const double d = (std::log(far_field_envelope(n, mu, c0, r + h)) - std::log(far_field_envelope(n, mu, c0, r - h))) / (2 * h);
    CHECK(d == doctest::Approx(-std::sqrt(c0 * mu)).epsilon(1e-3));
  }
  for (double r : {0.5, 3.0, 40.0}) {
    CHECK(far_field_envelope(0.0, 1e-2, c0, r) == doctest::Approx(std::exp(-0.05 * r)).epsilon(1e-15));
    const double rate1 = -std::log(far_field_envelope(0.0, 1e-2, c0, r)) / r;
    const double rate2 = -std::log(far_field_envelope(0.0, 2e-2, c0, r)) / r;
    CHECK(rate2 / rate1 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(far_field_envelope(1.0, 1e-2, c0, 0.0), DomainError);
}

TEST_CASE("profiles are invariant under the chain gauge") {
  const auto sys = sh_as_rd(1.6);
  const auto td = turing_data(sys);
  const std::vector<double> grid = radial_grid(30.0, 0.1);
  for (double beta : {0.5, 2.0}) {
    const auto tb = rescale_chain(td, sys, beta);
    for (auto kind : {PatternKind::SpotA, PatternKind::RingPlus, PatternKind::RingMinus, PatternKind::SpotB}) {
      for (double n : {0.5, 1.0, 2.0, 3.0}) {
        const auto a = make_profile(kind, td, n, 1e-3, grid, 2.18);
        const auto b = make_profile(kind, tb, n, 1e-3, grid, 2.18);
        for (std::size_t i = 0; i < grid.size(); ++i) REQUIRE((a.values[i].array() == b.values[i].array()).all());
      }
    }
  }
}

TEST_CASE("remainder exponents") {
  CHECK(remainder_exponent(PatternKind::SpotA, 2.0) == 1.0);
  CHECK(remainder_exponent(PatternKind::RingPlus, 2.0) == 1.0);
  CHECK(remainder_exponent(PatternKind::RingMinus, 1.0) == 1.25);
  CHECK(remainder_exponent(PatternKind::RingPlus, 3.0) == 0.5);
  CHECK(remainder_exponent(PatternKind::SpotB, 1.0) == 0.75);
  CHECK(remainder_exponent(PatternKind::SpotB, 0.5) == 0.875);
}

TEST_CASE("pattern names round trip") {
  for (auto k : {PatternKind::SpotA, PatternKind::RingPlus, PatternKind::RingMinus, PatternKind::SpotB}) {
    CHECK(parse_pattern(to_string(k)) == k);
  }
  CHECK_THROWS_AS(parse_pattern("hexagon"), DomainError);
}

TEST_CASE("radial grid") {
  const auto g = radial_grid(20.0, 0.05);
  CHECK(g.size() == 401);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == doctest::Approx(20.0));
  CHECK_THROWS_AS(radial_grid(0.0, 0.1), DomainError);
}

}
