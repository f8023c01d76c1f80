#include "turingrad/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "turingrad/besseln.hpp"
#include "turingrad/errors.hpp"

namespace turingrad {

namespace {

using std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// 2^{n/2} Gamma((n+1)/2)
double core_denominator(double n) { return std::pow(2.0, 0.5 * n) * std::tgamma(0.5 * (n + 1.0)); }

void check_mu(double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw DomainError("mu must be positive");
}

void check_c0(const TuringData& td) {
  if (!(td.c0 > 0.0)) throw DomainError("profiles require c0 > 0");
}

void check_gamma(const TuringData& td) {
  if (std::abs(td.gamma) < kDegeneracyTol) throw DegenerateGamma("gamma vanishes");
}

void check_subcritical(const TuringData& td, double n) {
  if (!(n < 4.0)) throw DomainError("rings and spot B require n < 4");
  if (!(td.c3 < 0.0)) throw DomainError("rings and spot B require c3 < 0");
}

void check_grid(const std::vector<double>& grid) {
  for (double r : grid) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("radial grid must be finite and >= 0");
  }
}

Profile scalar_core(PatternKind kind, const TuringData& td, double n, double mu,
                    const std::vector<double>& grid, double amp) {
  Profile p;
  p.kind = kind;
  p.n = n;
  p.mu = mu;
  p.r = grid;
  p.amplitude = amp;
  p.remainder_exponent = remainder_exponent(kind, n);
  p.values.reserve(grid.size());
  for (double r : grid) p.values.push_back(amp * jn(n, 0, r) * td.U0hat);
  return p;
}

} // namespace

std::string to_string(PatternKind kind) {
  switch (kind) {
    case PatternKind::SpotA: return "spotA";
    case PatternKind::RingPlus: return "ring+";
    case PatternKind::RingMinus: return "ring-";
    case PatternKind::SpotB: return "spotB";
  }
  return "unknown";
}

PatternKind parse_pattern(const std::string& name) {
  if (name == "spotA") return PatternKind::SpotA;
  if (name == "ring+" || name == "ring") return PatternKind::RingPlus;
  if (name == "ring-") return PatternKind::RingMinus;
  if (name == "spotB") return PatternKind::SpotB;
  throw DomainError("unknown pattern '" + name + "' (expected spotA, ring+, ring-, spotB)");
}

double CoreBasis::pairing_defect() const {
  double d = 0.0;
  for (std::size_t k = 0; k < r.size(); ++k) {
    if (!(r[k] > 0.0)) continue;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        d = std::max(d, std::abs(W[i][k].dot(V[j][k]) - (i == j ? 1.0 : 0.0)));
  }
  return d;
}

CoreBasis core_basis(double n, const TuringData& td, const std::vector<double>& grid) {
  if (!(n > 0.0)) throw DomainError("core_basis requires n > 0");
  check_grid(grid);
  CoreBasis cb;
  cb.n = n;
  cb.r = grid;
  const double p = std::sqrt(pi) / core_denominator(n);
  const double q = std::sqrt(pi / 2.0) / (std::pow(2.0, 0.5 * (n + 1.0)) * std::tgamma(0.5 * (n + 1.0)));
  const Vec2 &U0 = td.U0hat, &U1 = td.U1hat, &S0 = td.U0star, &S1 = td.U1star;
  auto pack = [](const Vec2& a, const Vec2& b) {
    Vec4 v;
    v << a, b;
    return v;
  };
  const Vec4 nan4 = Vec4::Constant(kNaN);
  for (auto& v : cb.V) v.reserve(grid.size());
  for (auto& w : cb.W) w.reserve(grid.size());
  for (double r : grid) {
    const double J0 = jn(n, 0, r), J1 = jn(n, 1, r);
    cb.V[0].push_back(p * pack(J0 * U0, -J1 * U0));
    cb.V[1].push_back(p * pack(r * J1 * U0 + 2.0 * J0 * U1, (r * J0 - (n - 1.0) * J1) * U0 - 2.0 * J1 * U1));
    if (r > 0.0) {
      const double Y0 = yn(n, 0, r), Y1 = yn(n, 1, r);
      const double rn = std::pow(r, n);
      cb.V[2].push_back(p * pack(Y0 * U0, -Y1 * U0));
      cb.V[3].push_back(p * pack(r * Y1 * U0 + 2.0 * Y0 * U1, (r * Y0 - (n - 1.0) * Y1) * U0 - 2.0 * Y1 * U1));
      cb.W[0].push_back(q * pack(rn * (r * Y0 * S1 - 2.0 * Y1 * S0),
                                 -rn * ((r * Y1 - (n - 1.0) * Y0) * S1 + 2.0 * Y0 * S0)));
      cb.W[1].push_back(q * pack(-rn * Y1 * S1, -rn * Y0 * S1));
      cb.W[2].push_back(q * pack(-rn * (r * J0 * S1 - 2.0 * J1 * S0),
                                 rn * ((r * J1 - (n - 1.0) * J0) * S1 + 2.0 * J0 * S0)));
      cb.W[3].push_back(q * pack(rn * J1 * S1, rn * J0 * S1));
    } else {
      cb.V[2].push_back(nan4);
      cb.V[3].push_back(nan4);
      for (auto& w : cb.W) w.push_back(nan4);
    }
  }
  return cb;
}

double remainder_exponent(PatternKind kind, double n) {
  switch (kind) {
    case PatternKind::SpotA: return 1.0;
    case PatternKind::RingPlus:
    case PatternKind::RingMinus: return std::min((6.0 - n) / 4.0, (4.0 - n) / 2.0);
    case PatternKind::SpotB: return std::min((8.0 - n) / 8.0, (4.0 - n) / 4.0);
  }
  return 0.0;
}

Profile spot_a(const TuringData& td, double n, double mu, const std::vector<double>& grid) {
  check_mu(mu);
  check_c0(td);
  check_gamma(td);
  check_grid(grid);
  const double amp = std::sqrt(td.c0 * mu) * std::sqrt(pi) / (nu_n(n) * td.gamma) / core_denominator(n);
  return scalar_core(PatternKind::SpotA, td, n, mu, grid, amp);
}

Profile ring(const TuringData& td, double n, double mu, int sign, const std::vector<double>& grid,
             double q_n) {
  check_mu(mu);
  check_c0(td);
  check_subcritical(td, n);
  check_grid(grid);
  if (!(n >= 0.0)) throw DomainError("n must be >= 0");
  if (sign != 1 && sign != -1) throw DomainError("ring sign must be +1 or -1");
  if (!(q_n > 0.0)) throw DomainError("q_n must be positive");
  Profile p;
  p.kind = sign > 0 ? PatternKind::RingPlus : PatternKind::RingMinus;
  p.n = n;
  p.mu = mu;
  p.r = grid;
  p.amplitude = sign * std::pow(td.c0 * mu, 0.25 * (4.0 - n)) * (2.0 * std::sqrt(pi) * q_n / std::sqrt(-td.c3)) /
                core_denominator(n);
  p.remainder_exponent = remainder_exponent(p.kind, n);
  p.values.reserve(grid.size());
  for (double r : grid) {
    p.values.push_back(p.amplitude * (r * jn(n, 1, r) * td.U0hat + 2.0 * jn(n, 0, r) * td.U1hat));
  }
  return p;
}

Profile spot_b(const TuringData& td, double n, double mu, const std::vector<double>& grid, double q_n) {
  check_mu(mu);
  check_c0(td);
  check_gamma(td);
  check_subcritical(td, n);
  check_grid(grid);
  if (!(q_n > 0.0)) throw DomainError("q_n must be positive");
  const double sg = td.gamma > 0.0 ? 1.0 : -1.0;
  const double amp = -sg * std::pow(td.c0 * mu, (4.0 - n) / 8.0) *
                     std::sqrt(pi * q_n / (nu_n(n) * std::abs(td.gamma) * std::sqrt(-td.c3))) /
                     (std::pow(2.0, 0.5 * (n - 1.0)) * std::tgamma(0.5 * (n + 1.0)));
  return scalar_core(PatternKind::SpotB, td, n, mu, grid, amp);
}

Profile make_profile(PatternKind kind, const TuringData& td, double n, double mu,
                     const std::vector<double>& grid, double q_n) {
  switch (kind) {
    case PatternKind::SpotA: return spot_a(td, n, mu, grid);
    case PatternKind::RingPlus: return ring(td, n, mu, +1, grid, q_n);
    case PatternKind::RingMinus: return ring(td, n, mu, -1, grid, q_n);
    case PatternKind::SpotB: return spot_b(td, n, mu, grid, q_n);
  }
  throw DomainError("unknown pattern kind");
}

MatchingAmplitudes matching_amplitudes(PatternKind kind, const TuringData& td, double n, double mu,
                                       double q_n, double r0, double r1) {
  check_mu(mu);
  check_c0(td);
  if (!(r0 > 0.0 && r1 > 0.0)) throw DomainError("r0 and r1 must be positive");
  MatchingAmplitudes m;
  switch (kind) {
    case PatternKind::SpotA:
      check_gamma(td);
      m.d1 = std::sqrt(td.c0 * mu) / (nu_n(n) * td.gamma);
      m.phase_offset = 0.0;
      break;
    case PatternKind::RingPlus:
    case PatternKind::RingMinus: {
      check_subcritical(td, n);
      if (!(q_n > 0.0)) throw DomainError("q_n must be positive");
      const double s = kind == PatternKind::RingPlus ? 1.0 : -1.0;
      m.d2 = s * 2.0 * q_n * std::pow(td.c0 * mu, 0.25 * (4.0 - n)) / std::sqrt(-td.c3);
      m.phase_offset = 2.0 + s;
      break;
    }
    case PatternKind::SpotB: {
      check_gamma(td);
      check_subcritical(td, n);
      if (!(q_n > 0.0)) throw DomainError("q_n must be positive");
      const double sg = td.gamma > 0.0 ? 1.0 : -1.0;
      m.d1 = -sg * std::sqrt(2.0 * q_n / (nu_n(n) * std::abs(td.gamma) * std::sqrt(-td.c3))) *
             std::pow(td.c0 * mu, (4.0 - n) / 8.0);
      m.phase_offset = sg - 1.0;
      break;
    }
  }
  return m;
}

FoldMatching spot_a_fold_matching(const TuringData& td, double n, double mu, double r0, double r1) {
  check_c0(td);
  const double E = en_mu(n, mu, r0, r1);
  const double nu = nu_n(n);
  FoldMatching f;
  f.gamma_tilde = td.gamma * E * std::pow(mu, -0.25 * n);
  f.discriminant = nu * nu * f.gamma_tilde * f.gamma_tilde - std::sqrt(td.c0) * td.c3;
  if (f.discriminant >= 0.0 && td.c3 != 0.0) {
    const double root = std::sqrt(f.discriminant);
    const double scale = 2.0 / td.c3 * std::pow(mu, 0.25 * (2.0 - n)) * E;
    f.d1 = std::make_pair(scale * (nu * f.gamma_tilde + root), scale * (nu * f.gamma_tilde - root));
  }
  return f;
}

double en_mu(double n, double mu, double r0, double r1) {
  check_mu(mu);
  if (!(r0 > 0.0 && r1 > 0.0)) throw DomainError("r0 and r1 must be positive");
  const double a = r1 / std::sqrt(mu);
  if (!(r0 < a)) throw DomainError("en_mu requires r0 < r1 mu^{-1/2}");
  const double L = std::log(a / r0);
  const double x = (1.0 - n) * L;
  const double phi = std::abs(x) < 1e-300 ? 1.0 : std::expm1(x) / x;
  const double inv_e2 = std::pow(mu, 0.5 * (1.0 - n)) * std::pow(r0, 1.0 - n) * L * phi;
  return 1.0 / std::sqrt(inv_e2);
}

std::pair<double, double> fold_curve_gamma(double n, double mu, double r0, double r1, double c0,
                                           double c3) {
  check_mu(mu);
  if (!(c3 > 0.0)) throw DomainError("fold curve requires c3 > 0");
  if (!(c0 > 0.0)) throw DomainError("fold curve requires c0 > 0");
  if (!(r0 > 0.0 && r1 > 0.0)) throw DomainError("r0 and r1 must be positive");
  const double a = r1 / std::sqrt(mu);
  if (!(r0 < a)) throw DomainError("fold curve requires r0 < r1 mu^{-1/2}");
  double bracket;
  if (n == 1.0) {
    bracket = std::log(a / r0);
  } else {
    // ((a^{n-1} - r0^{n-1}) / ((n-1) a^{n-1} r0^{n-1}), numerator without cancellation
    const double A = std::pow(a, n - 1.0), B = std::pow(r0, n - 1.0);
    const double diff = B * std::expm1((n - 1.0) * std::log(a / r0));
    bracket = diff / ((n - 1.0) * A * B);
  }
  const double g = std::pow(c0 * mu, 0.25) * std::sqrt(bracket) * std::sqrt(std::abs(c3)) / nu_n(n);
  return {g, -g};
}

double fold_discriminant_gamma(double n, double mu, double r0, double r1, double c0, double c3) {
  if (!(c3 > 0.0)) throw DomainError("fold locus requires c3 > 0");
  const double gamma_tilde = std::sqrt(std::sqrt(c0) * c3) / nu_n(n);
  return std::pow(mu, 0.25 * n) / en_mu(n, mu, r0, r1) * gamma_tilde;
}

double far_field_envelope(double n, double mu, double c0, double r) {
  if (!(r > 0.0)) throw DomainError("far_field_envelope requires r > 0");
  return std::pow(r, -0.5 * n) * std::exp(-std::sqrt(c0 * mu) * r);
}

std::vector<double> radial_grid(double rmax, double dr) {
  if (!(rmax > 0.0 && dr > 0.0)) throw DomainError("rmax and dr must be positive");
  const auto count = static_cast<std::size_t>(std::floor(rmax / dr + 1e-9)) + 1;
  std::vector<double> g(count);
  for (std::size_t i = 0; i < count; ++i) g[i] = dr * static_cast<double>(i);
  return g;
}

} // namespace turingrad
