#include "turingrad/rdmodel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "turingrad/besseln.hpp"
#include "turingrad/errors.hpp"

namespace turingrad {

Vec2 RDSystem::quadratic(const Vec2& u, const Vec2& v) const {
  return Vec2(u.dot(Q[0] * v), u.dot(Q[1] * v));
}

Vec2 RDSystem::cubic(const Vec2& u, const Vec2& v, const Vec2& w) const {
  Vec2 out;
  for (int k = 0; k < 2; ++k) {
    out[k] = u[0] * v.dot(C[k][0] * w) + u[1] * v.dot(C[k][1] * w);
  }
  return out;
}

Mat2 RDSystem::quadratic_jacobian(const Vec2& u) const {
  Mat2 J;
  J.row(0) = 2.0 * (Q[0] * u).transpose();
  J.row(1) = 2.0 * (Q[1] * u).transpose();
  return J;
}

Mat2 RDSystem::cubic_jacobian(const Vec2& u) const {
  Mat2 J;
  for (int k = 0; k < 2; ++k) {
    Mat2 contracted = u[0] * C[k][0] + u[1] * C[k][1];  // C_k(u, ., .)
    J.row(k) = 3.0 * (contracted * u).transpose();
  }
  return J;
}

double RDSystem::symmetrize() {
  double change = 0.0;
  for (int k = 0; k < 2; ++k) {
    Mat2 s = 0.5 * (Q[k] + Q[k].transpose());
    change = std::max(change, (s - Q[k]).cwiseAbs().maxCoeff());
    Q[k] = s;
  }
  for (int k = 0; k < 2; ++k) {
    std::array<Mat2, 2> s{Mat2::Zero(), Mat2::Zero()};
    auto at = [&](int i, int j, int l) { return C[k][i](j, l); };
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int l = 0; l < 2; ++l)
          s[i](j, l) = (at(i, j, l) + at(i, l, j) + at(j, i, l) + at(j, l, i) +
                        at(l, i, j) + at(l, j, i)) / 6.0;
    for (int i = 0; i < 2; ++i) {
      change = std::max(change, (s[i] - C[k][i]).cwiseAbs().maxCoeff());
      C[k][i] = s[i];
    }
  }
  return change;
}

bool RDSystem::all_finite() const {
  bool ok = M1.allFinite() && M2.allFinite();
  for (int k = 0; k < 2; ++k) {
    ok = ok && Q[k].allFinite() && C[k][0].allFinite() && C[k][1].allFinite();
  }
  return ok;
}

bool RDSystem::operator==(const RDSystem& o) const {
  bool eq = M1 == o.M1 && M2 == o.M2;
  for (int k = 0; k < 2; ++k) {
    eq = eq && Q[k] == o.Q[k] && C[k][0] == o.C[k][0] && C[k][1] == o.C[k][1];
  }
  return eq;
}

double find_turing_wavenumber(const Mat2& M1) {
  const double tr = M1.trace();
  const double det = M1.determinant();
  if (!(tr < 0.0)) throw NoTuringPoint("tr(M1) must be negative");
  const double kc2 = -0.5 * tr;
  const double target = kc2 * kc2;
  if (std::abs(det - target) > 1e-10 * std::max(1.0, target)) {
    throw NoTuringPoint("det(M1) = " + std::to_string(det) + " differs from (tr/2)^2 = " +
                        std::to_string(target));
  }
  const Mat2 N = M1 + kc2 * Mat2::Identity();
  if (N.cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, kc2)) {
    throw GeometricallyDouble("M1 is a scalar matrix; the eigenvalue is geometrically double");
  }
  return std::sqrt(kc2);
}

JordanChain generalized_eigenvectors(const Mat2& M1, double k_c) {
  const double kc2 = k_c * k_c;
  const Mat2 N = M1 + kc2 * Mat2::Identity();
  // N is rank one and nilpotent: its range is its kernel.
  const int col = N.col(1).norm() > N.col(0).norm() ? 1 : 0;
  Vec2 a = N.col(col);
  const int big = std::abs(a[1]) > std::abs(a[0]) ? 1 : 0;
  JordanChain ch;
  ch.U0hat = a / a[big];
  // Minimal-norm solution of N x = kc^2 U0 via the rank-one pseudo-inverse N^T / |N|_F^2.
  ch.U1hat = kc2 * (N.transpose() * ch.U0hat) / N.squaredNorm();
  Mat2 P;
  P.col(0) = ch.U0hat;
  P.col(1) = ch.U1hat;
  const Mat2 Pinv = P.inverse();
  ch.U0star = Pinv.row(0).transpose();
  ch.U1star = Pinv.row(1).transpose();
  return ch;
}

Coefficients coefficients(const RDSystem& s, double /*k_c*/, const JordanChain& ch) {
  const Vec2 Q00 = s.quadratic(ch.U0hat, ch.U0hat);
  const Vec2 Q01 = s.quadratic(ch.U0hat, ch.U1hat);
  const Vec2 C000 = s.cubic(ch.U0hat, ch.U0hat, ch.U0hat);
  Coefficients c;
  c.c0 = 0.25 * ch.U1star.dot(-(s.M2 * ch.U0hat));
  c.gamma = ch.U1star.dot(Q00);
  const double a = ch.U0star.dot(Q00) + ch.U1star.dot(Q01);
  c.c3 = -((5.0 / 6.0 * a + 19.0 / 18.0 * c.gamma) * c.gamma + 0.75 * ch.U1star.dot(C000));
  c.c0_degenerate = std::abs(c.c0) < kDegeneracyTol;
  c.gamma_degenerate = std::abs(c.gamma) < kDegeneracyTol;
  c.c3_degenerate = std::abs(c.c3) < kDegeneracyTol;
  return c;
}

RDSystem normalize_wavenumber(const RDSystem& system, double k_c) {
  if (!(k_c > 0.0)) throw DomainError("k_c must be positive");
  const double f = 1.0 / (k_c * k_c);
  RDSystem out = system;
  out.M1 *= f;
  out.M2 *= f;
  for (int k = 0; k < 2; ++k) {
    out.Q[k] *= f;
    out.C[k][0] *= f;
    out.C[k][1] *= f;
  }
  return out;
}

RDSystem orient_bifurcation(const RDSystem& system, bool* flipped) {
  const double kc = find_turing_wavenumber(system.M1);
  const auto ch = generalized_eigenvectors(system.M1, kc);
  const auto c = coefficients(system, kc, ch);
  RDSystem out = system;
  const bool flip = c.c0 < 0.0 && !c.c0_degenerate;
  if (flip) out.M2 = -out.M2;
  if (flipped) *flipped = flip;
  return out;
}

namespace {

TuringData assemble(double kc, const JordanChain& ch, const Coefficients& c) {
  TuringData td;
  td.k_c = kc;
  td.U0hat = ch.U0hat;
  td.U1hat = ch.U1hat;
  td.U0star = ch.U0star;
  td.U1star = ch.U1star;
  td.c0 = c.c0;
  td.gamma = c.gamma;
  td.c3 = c.c3;
  return td;
}

} // namespace

TuringData turing_data(const RDSystem& system) {
  const double kc = find_turing_wavenumber(system.M1);
  const auto ch = generalized_eigenvectors(system.M1, kc);
  return assemble(kc, ch, coefficients(system, kc, ch));
}

TuringData rescale_chain(const TuringData& td, const RDSystem& system, double beta) {
  JordanChain ch{beta * td.U0hat, beta * td.U1hat, td.U0star / beta, td.U1star / beta};
  return assemble(td.k_c, ch, coefficients(system, td.k_c, ch));
}

TuringAnalysis analyze_system(const RDSystem& system) {
  TuringAnalysis out;
  out.k_c = find_turing_wavenumber(system.M1);
  RDSystem work = system;
  if (out.k_c != 1.0) {
    work = normalize_wavenumber(system, out.k_c);
    out.notes.push_back("rescaled r -> k_c r to unit critical wavenumber");
  }
  out.normalized = orient_bifurcation(work, &out.mu_flipped);
  if (out.mu_flipped) out.notes.push_back("c0 < 0: M2 negated, mu is the flipped parameter");
  const double kc = find_turing_wavenumber(out.normalized.M1);
  const auto ch = generalized_eigenvectors(out.normalized.M1, kc);
  out.flags = coefficients(out.normalized, kc, ch);
  out.data = assemble(out.k_c, ch, out.flags);
  if (out.flags.c0_degenerate) out.notes.push_back("c0 = 0: linear non-degeneracy fails");
  if (out.flags.gamma_degenerate) out.notes.push_back("gamma = 0: no spot A or spot B");
  if (out.flags.c3_degenerate) out.notes.push_back("c3 = 0: cubic non-degeneracy fails");
  if (!out.flags.c3_degenerate && out.flags.c3 > 0.0)
    out.notes.push_back("c3 > 0: no rings or spot B; spot A folds");
  return out;
}

double nu_n(double n) {
  if (!(n > 0.0)) throw DomainError("nu_n requires n > 0");
  return std::pow(3.0 / 8.0, 0.5 * n) * std::numbers::pi / (3.0 * std::tgamma(0.5 * n));
}

namespace {

// Wynn epsilon extrapolation of a sequence of partial sums; returns the last two
// even-column estimates.
std::pair<double, double> wynn_epsilon(const std::vector<double>& s) {
  const std::size_t N = s.size();
  std::vector<double> prev(N + 1, 0.0), cur(s.begin(), s.end());
  double best = s.back(), second = s.size() > 1 ? s[s.size() - 2] : s.back();
  for (std::size_t col = 1; cur.size() > 1 && col <= 16; ++col) {
    std::vector<double> next(cur.size() - 1);
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
      const double diff = cur[i + 1] - cur[i];
      const double p = (col == 1) ? 0.0 : prev[i + 1];
      if (diff == 0.0) return {cur[i + 1], cur[i]};
      next[i] = p + 1.0 / diff;
    }
    prev = std::move(cur);
    cur = std::move(next);
    if (col % 2 == 0 && cur.size() >= 2) {
      best = cur.back();
      second = cur[cur.size() - 2];
    }
  }
  return {best, second};
}

} // namespace

QuadratureResult nu_n_quadrature(double n, double tol) {
  if (!(n > 0.0)) throw DomainError("nu_n_quadrature requires n > 0");
  using std::numbers::pi;
  const double pref = std::sqrt(pi / 2.0) / (std::pow(2.0, 0.5 * (n - 1.0)) * std::tgamma(0.5 * (n + 1.0)));
  const double scale = 0.5 * pref * pref * pref;
  auto f = [n](double s) {
    const double j = jn(n, 0, s);
    return std::pow(s, n) * j * j * j;
  };
  double quad_err = 0.0;
  // First block carries the s^n endpoint behaviour.
  boost::math::quadrature::tanh_sinh<double> ts;
  double err0 = 0.0;
  double first = ts.integrate(f, 0.0, pi, 1e-14, &err0);
  quad_err += std::abs(err0);

  constexpr int kBlocks = 60;
  std::vector<double> partial;
  partial.reserve(kBlocks);
  double sum = first;
  for (int k = 1; k <= kBlocks; ++k) {
    double e = 0.0;
    sum += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, k * pi, (k + 1) * pi, 10,
                                                                         1e-14, &e);
    quad_err += std::abs(e);
    partial.push_back(sum);
  }
  auto [est, prev] = wynn_epsilon(partial);
  QuadratureResult r;
  r.value = scale * est;
  r.error_estimate = scale * (std::abs(est - prev) + quad_err);
  r.blocks = kBlocks + 1;
  if (!(r.error_estimate <= tol * std::abs(r.value)) || !std::isfinite(r.value)) {
    throw ConvergenceFailure("nu_n quadrature tail estimate exceeds tolerance", r.error_estimate);
  }
  return r;
}

} // namespace turingrad
