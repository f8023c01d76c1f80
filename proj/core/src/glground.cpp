#include "turingrad/glground.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <boost/numeric/odeint.hpp>

#include "turingrad/besseln.hpp"
#include "turingrad/errors.hpp"

namespace turingrad {

namespace {

namespace odeint = boost::numeric::odeint;
using State = std::array<double, 2>;

constexpr double kSeriesStart = 1e-4;
constexpr double kShootMax = 80.0;
constexpr double kSingularCutoff = 2.5;  // taper exp(-s^4) is below 1e-17 here

void check_n(double n) {
  if (!(n > 0.0 && n < 4.0)) throw DomainError("ground state requires 0 < n < 4");
}

std::vector<double> uniform_grid(double S, int m) {
  if (!(S > 0.0)) throw DomainError("S must be positive");
  if (m < 5) throw GridTooCoarse("ground-state grid needs at least 5 points");
  std::vector<double> g(m);
  const double h = S / (m - 1);
  for (int i = 0; i < m; ++i) g[i] = h * i;
  g.back() = S;
  return g;
}

// Small-s expansion Q = q + q s^2/6 - q^3 s^{4-n}/((4-n)(5-n)).
State series_state(double n, double q, double s) {
  const double q3 = q * q * q;
  return {q + q * s * s / 6.0 - q3 * std::pow(s, 4.0 - n) / ((4.0 - n) * (5.0 - n)),
          q * s / 3.0 - q3 * std::pow(s, 3.0 - n) / (5.0 - n)};
}

struct Trajectory {
  int verdict = 0;  // +1 crosses zero (q too large), -1 turns upward (q too small)
  double end = 0.0;
  std::vector<double> samples;  // grid samples up to `end`, NaN beyond
};

Trajectory integrate(double n, double q, const std::vector<double>* grid) {
  auto rhs = [n](const State& x, State& dx, double s) {
    dx[0] = x[1];
    dx[1] = -2.0 * x[1] / s + x[0] - std::pow(s, 2.0 - n) * x[0] * x[0] * x[0];
  };
  // Start where the singular series term is below 1e-8 relative: q^2 s^{4-n} / ((4-n)(5-n)) <= 1e-8.
  const double s0 = std::min(kSeriesStart, std::pow(1e-8 * (4.0 - n) * (5.0 - n) / (q * q), 1.0 / (4.0 - n)));
  Trajectory tr;
  std::size_t gi = 0;
  if (grid) {
    tr.samples.assign(grid->size(), std::numeric_limits<double>::quiet_NaN());
    while (gi < grid->size() && (*grid)[gi] <= s0) {
      tr.samples[gi] = series_state(n, q, (*grid)[gi])[0];
      ++gi;
    }
  }
  auto stepper = odeint::make_dense_output(1e-13, 1e-12, odeint::runge_kutta_dopri5<State>());
  stepper.initialize(series_state(n, q, s0), s0, 0.1 * s0);
  bool descended = false;
  const double blowup = 10.0 * std::max(q, 1.0);
  while (stepper.current_time() < kShootMax) {
    stepper.do_step(rhs);
    const double t1 = stepper.current_time();
    if (grid) {
      State x;
      while (gi < grid->size() && (*grid)[gi] <= t1) {
        stepper.calc_state((*grid)[gi], x);
        tr.samples[gi] = x[0];
        ++gi;
      }
    }
    const State& x = stepper.current_state();
    tr.end = t1;
    if (x[0] < 0.0) {
      tr.verdict = +1;
      return tr;
    }
    if (x[1] < 0.0) descended = true;
    if ((descended && x[1] > 0.0) || x[0] > blowup) {
      tr.verdict = -1;
      return tr;
    }
  }
  tr.verdict = stepper.current_state()[1] >= 0.0 ? -1 : +1;
  return tr;
}

int classify(double n, double q) { return integrate(n, q, nullptr).verdict; }

std::pair<double, double> find_bracket(double n, double q_guess) {
  if (q_guess > 0.0) {
    double lo = 0.97 * q_guess, hi = 1.03 * q_guess;
    for (int k = 0; k < 6; ++k) {
      const int vlo = classify(n, lo), vhi = classify(n, hi);
      if (vlo < 0 && vhi > 0) return {lo, hi};
      if (vlo > 0) lo *= 0.8;
      if (vhi < 0) hi *= 1.25;
    }
  }
  double lo = 0.05;
  if (classify(n, lo) > 0) throw NoGroundState("smallest trial amplitude already overshoots");
  for (double q = lo * 1.2; q < 1e3; q *= 1.2) {
    if (classify(n, q) > 0) return {lo, q};
    lo = q;
  }
  throw NoGroundState("no sign change of the shooting classifier found");
}

void tail_continue(const std::vector<double>& grid, std::vector<double>& vals, std::size_t from) {
  if (from == 0 || from >= grid.size()) return;
  const double s0 = grid[from - 1], v0 = vals[from - 1];
  for (std::size_t i = from; i < grid.size(); ++i) {
    vals[i] = v0 * (s0 / grid[i]) * std::exp(-(grid[i] - s0));
  }
}

struct FVGeometry {
  std::vector<double> face;  // s^2 at s_{i+1/2}, i = 0..m-2
  std::vector<double> vol;   // int s^2 over cell i
  std::vector<double> wgt;   // int s^{4-n} over cell i
  // Flux defect of the singular part psi(s) = -s^{4-n}/((4-n)(5-n)) of Q near s = 0,
  // s^2 [psi'(s) - (psi_{i+1} - psi_i)/h] at face i+1/2; scaled by Q(0)^3 in the residual.
  // Only needed for n > 2; tapered smoothly so the discrete solution stays smooth.
  std::vector<double> kappa;
  double h = 0.0, S = 0.0;
};

FVGeometry fv_geometry(double n, const std::vector<double>& grid) {
  const std::size_t m = grid.size();
  FVGeometry g;
  g.h = grid[1] - grid[0];
  g.S = grid.back();
  g.face.resize(m - 1);
  g.vol.resize(m);
  g.wgt.resize(m);
  const double p = 5.0 - n;
  for (std::size_t i = 0; i < m; ++i) {
    const double a = i == 0 ? 0.0 : 0.5 * (grid[i - 1] + grid[i]);
    const double b = i + 1 == m ? g.S : 0.5 * (grid[i] + grid[i + 1]);
    if (i + 1 < m) g.face[i] = b * b;
    g.vol[i] = (b * b * b - a * a * a) / 3.0;
    g.wgt[i] = (std::pow(b, p) - std::pow(a, p)) / p;
  }
  auto psi = [n](double x) { return -std::pow(x, 4.0 - n) / ((4.0 - n) * (5.0 - n)); };
  auto dpsi = [n](double x) { return -std::pow(x, 3.0 - n) / (5.0 - n); };
  for (std::size_t i = 0; n > 2.0 && i + 1 < m; ++i) {
    const double sf = 0.5 * (grid[i] + grid[i + 1]);
    if (sf > kSingularCutoff) break;
    const double taper = std::exp(-sf * sf * sf * sf);
    g.kappa.push_back(taper * g.face[i] * (dpsi(sf) - (psi(grid[i + 1]) - psi(grid[i])) / g.h));
  }
  return g;
}

Eigen::VectorXd fv_residual(const FVGeometry& g, const Eigen::VectorXd& U) {
  const Eigen::Index m = U.size();
  Eigen::VectorXd F(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    double flux_out = (i + 1 < m) ? g.face[i] * (U[i + 1] - U[i]) / g.h
                                  : -g.S * g.S * (1.0 + 1.0 / g.S) * U[i];
    double flux_in = (i > 0) ? g.face[i - 1] * (U[i] - U[i - 1]) / g.h : 0.0;
    F[i] = flux_out - flux_in - g.vol[i] * U[i] + g.wgt[i] * U[i] * U[i] * U[i];
  }
  const double a = U[0] * U[0] * U[0];
  for (std::size_t f = 0; f < g.kappa.size(); ++f) {
    F[f] += a * g.kappa[f];
    F[f + 1] -= a * g.kappa[f];
  }
  return F;
}

Eigen::SparseMatrix<double> fv_jacobian(const FVGeometry& g, const Eigen::VectorXd& U) {
  const Eigen::Index m = U.size();
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(3 * m);
  for (Eigen::Index i = 0; i < m; ++i) {
    double d = -g.vol[i] + 3.0 * g.wgt[i] * U[i] * U[i];
    if (i + 1 < m) {
      d -= g.face[i] / g.h;
      t.emplace_back(i, i + 1, g.face[i] / g.h);
    } else {
      d -= g.S * g.S * (1.0 + 1.0 / g.S);
    }
    if (i > 0) {
      d -= g.face[i - 1] / g.h;
      t.emplace_back(i, i - 1, g.face[i - 1] / g.h);
    }
    t.emplace_back(i, i, d);
  }
  const double da = 3.0 * U[0] * U[0];
  for (std::size_t f = 0; f < g.kappa.size(); ++f) {
    t.emplace_back(static_cast<Eigen::Index>(f), 0, da * g.kappa[f]);
    t.emplace_back(static_cast<Eigen::Index>(f + 1), 0, -da * g.kappa[f]);
  }
  Eigen::SparseMatrix<double> J(m, m);
  J.setFromTriplets(t.begin(), t.end());
  return J;
}

double scaled_norm(const FVGeometry& g, const Eigen::VectorXd& F) {
  double r = 0.0;
  for (Eigen::Index i = 0; i < F.size(); ++i) r = std::max(r, std::abs(F[i]) / g.vol[i]);
  return r;
}

// Segment [ia, ib] of the grid with `pad` extra samples on each side where available, r > 0.
struct Segment {
  std::size_t lo, hi;  // sampled range
  std::size_t ia, ib;  // reported range
};

Segment segment(const std::vector<double>& grid, double smin, double smax, std::size_t pad) {
  const double h = grid[1] - grid[0];
  std::size_t ia = static_cast<std::size_t>(std::max(1.0, std::ceil(smin / h - 1e-9)));
  std::size_t ib = static_cast<std::size_t>(std::floor(smax / h + 1e-9));
  ib = std::min(ib, grid.size() - 1);
  if (ia > ib) throw DomainError("empty evaluation window");
  Segment s;
  s.ia = ia;
  s.ib = ib;
  s.lo = ia > pad ? ia - pad : 1;
  s.hi = std::min(ib + pad, grid.size() - 1);
  if (s.hi - s.lo + 1 < 5) throw GridTooCoarse("evaluation window has fewer than 5 samples");
  return s;
}

SampledRadial slice(const std::vector<double>& grid, const std::vector<double>& v, const Segment& s) {
  SampledRadial f;
  f.r0 = grid[s.lo];
  f.h = grid[1] - grid[0];
  f.values.assign(v.begin() + s.lo, v.begin() + s.hi + 1);
  return f;
}

Eigen::VectorXd solve_sparse(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& b,
                             const char* what) {
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw ConvergenceFailure(std::string(what) + ": singular system", 0.0);
  return lu.solve(b);
}

} // namespace

ShootingResult shoot_ground_state(double n, const std::vector<double>& grid, const GLConfig& cfg,
                                  double q_guess) {
  check_n(n);
  auto [lo, hi] = find_bracket(n, q_guess);
  ShootingResult res;
  while (hi - lo > cfg.shoot_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (classify(n, mid) > 0 ? hi : lo) = mid;
    ++res.bisection_steps;
    if (res.bisection_steps > 200) break;
  }
  res.q_n = 0.5 * (lo + hi);
  auto tlo = integrate(n, lo, &grid);
  auto thi = integrate(n, hi, &grid);
  res.Qvals = tlo.samples;
  std::size_t valid = 0;
  const double tol = 1e-7 * res.q_n;
  while (valid < grid.size() && std::isfinite(tlo.samples[valid]) && std::isfinite(thi.samples[valid]) &&
         std::abs(tlo.samples[valid] - thi.samples[valid]) < tol && tlo.samples[valid] > tol) {
    ++valid;
  }
  if (valid < 2) throw NoGroundState("shooting bracket does not resolve the profile");
  res.valid_radius = grid[valid - 1];
  tail_continue(grid, res.Qvals, valid);
  return res;
}

CollocationResult collocate_ground_state(double n, const std::vector<double>& grid,
                                         const std::vector<double>& initial, const GLConfig& cfg) {
  check_n(n);
  if (initial.size() != grid.size()) throw ShapeMismatch("initial guess does not match the grid");
  const FVGeometry g = fv_geometry(n, grid);
  Eigen::VectorXd U = Eigen::Map<const Eigen::VectorXd>(initial.data(), initial.size());
  Eigen::VectorXd F = fv_residual(g, U);
  double fnorm = F.norm();
  CollocationResult res;
  bool converged = false;
  for (int it = 0; it < cfg.max_iter; ++it) {
    const Eigen::VectorXd dU = solve_sparse(fv_jacobian(g, U), -F, "collocation Newton");
    double t = 1.0;
    Eigen::VectorXd trial;
    Eigen::VectorXd Ft;
    for (;;) {
      trial = U + t * dU;
      Ft = fv_residual(g, trial);
      if (Ft.norm() <= (1.0 - 1e-4 * t) * fnorm || t < 1e-6) break;
      t *= 0.5;
    }
    U = trial;
    F = Ft;
    fnorm = F.norm();
    res.iterations = it + 1;
    if (t * dU.cwiseAbs().maxCoeff() <= cfg.newton_tol * std::max(1.0, U.cwiseAbs().maxCoeff())) {
      converged = true;
      break;
    }
  }
  res.residual_norm = scaled_norm(g, F);
  if (!converged) throw ConvergenceFailure("ground-state collocation Newton", res.residual_norm);
  res.Qvals.assign(U.data(), U.data() + U.size());
  return res;
}

GroundStateSolution solve_canonical(double n, const GLConfig& cfg, double q_guess) {
  check_n(n);
  if (cfg.S < 20.0) throw DomainError("GLConfig.S must be at least 20");
  if (cfg.m < 2000) throw GridTooCoarse("GLConfig.m must be at least 2000");
  GroundStateSolution sol;
  sol.n = n;
  sol.grid = uniform_grid(cfg.S, cfg.m);
  auto shot = shoot_ground_state(n, sol.grid, cfg, q_guess);
  auto col = collocate_ground_state(n, sol.grid, shot.Qvals, cfg);
  for (std::size_t i = 0; i + 1 < col.Qvals.size(); ++i) {
    if (!(col.Qvals[i] > 0.0)) throw NoGroundState("collocation converged to a non-positive state");
  }
  sol.Qvals = std::move(col.Qvals);
  sol.qvals.resize(sol.grid.size());
  for (std::size_t i = 0; i < sol.grid.size(); ++i) {
    const double s = sol.grid[i];
    if (s == 0.0) {
      sol.qvals[i] = n < 2.0 ? 0.0 : (n == 2.0 ? sol.Qvals[0] : std::numeric_limits<double>::infinity());
    } else {
      sol.qvals[i] = std::pow(s, 0.5 * (2.0 - n)) * sol.Qvals[i];
    }
  }
  sol.q_n_shooting = shot.q_n;
  sol.q_n_collocation = sol.Qvals[0];
  sol.q_n = shot.q_n;
  sol.cross_difference = std::abs(sol.q_n_shooting - sol.q_n_collocation);
  sol.shooting_valid_radius = shot.valid_radius;
  sol.residual_norm = col.residual_norm;
  sol.newton_iterations = col.iterations;
  sol.method = GroundMethod::Collocation;
  const TailFit tail = extract_tail(sol);
  sol.p_n = tail.p_n;
  sol.tail_slope = tail.slope;
  sol.tail_residual = tail.residual;
  if (n >= 3.0) {
    sol.warnings.push_back("3 <= n < 4: existence of the ground state is assumed, not proven");
  }
  return sol;
}

GLProfile to_gl_profile(const GroundStateSolution& sol) { return {sol.grid, sol.qvals}; }

GLProfile rescale(const GLProfile& q, double c0, double c3) {
  if (!(c0 > 0.0)) throw DomainError("rescale requires c0 > 0");
  if (!(c3 < 0.0)) throw DomainError("rescale requires c3 < 0: no bounded nontrivial state for c3 >= 0");
  const double b = std::sqrt(c0);
  const double a = b / std::sqrt(-c3);
  GLProfile out;
  out.s.resize(q.s.size());
  out.q.resize(q.q.size());
  for (std::size_t i = 0; i < q.s.size(); ++i) {
    out.s[i] = q.s[i] / b;
    out.q[i] = a * q.q[i];
  }
  return out;
}

double gl_equation_residual(const GLProfile& q, double n, double c0, double c3, double smin,
                            double smax) {
  const Segment seg = segment(q.s, smin, smax, 8);
  const SampledRadial f = slice(q.s, q.q, seg);
  const SampledRadial dd = bessel_operator_apply(0.5 * n, bessel_operator_apply(0.5 * n, f));
  double r = 0.0;
  for (std::size_t i = seg.ia; i <= seg.ib; ++i) {
    const double v = q.q[i];
    r = std::max(r, std::abs(dd.values[i - seg.lo] - c0 * v - c3 * v * v * v));
  }
  return r;
}

TailFit extract_tail(const GroundStateSolution& sol, double a, double b) {
  const double S = sol.S();
  if (!(0.0 < a && a < b && b <= 1.0)) throw DomainError("tail window must satisfy 0 < a < b <= 1");
  if (!(sol.Qvals.front() > 0.0 && sol.Qvals.back() > 0.0) ||
      std::log(sol.Qvals.front() / sol.Qvals.back()) < 10.0) {
    throw TailTooShort("solution decays over fewer than 10 e-foldings before truncation");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t cnt = 0;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 1; i < sol.grid.size(); ++i) {
    const double s = sol.grid[i];
    if (s < a * S || s > b * S) continue;
    const double y = std::log(s * sol.Qvals[i]);
    pts.emplace_back(s, y);
    sx += s;
    sy += y;
    sxx += s * s;
    sxy += s * y;
    ++cnt;
  }
  if (cnt < 3) throw TailTooShort("tail window contains fewer than 3 samples");
  const double N = static_cast<double>(cnt);
  TailFit fit;
  fit.slope = (N * sxy - sx * sy) / (N * sxx - sx * sx);
  const double icpt = (sy - fit.slope * sx) / N;
  fit.p_n = std::exp(icpt);
  double ss = 0.0;
  for (auto [s, y] : pts) ss += (y - icpt - fit.slope * s) * (y - icpt - fit.slope * s);
  fit.residual = std::sqrt(ss / N);
  return fit;
}

std::vector<ScanRow> scan_qn(double n_min, double n_max, int steps, const GLConfig& cfg) {
  if (steps < 1) throw DomainError("steps must be >= 1");
  if (!(0.0 < n_min && n_min <= n_max && n_max < 4.0)) throw DomainError("scan requires 0 < n_min <= n_max < 4");
  if (steps > 1 && !(n_min < n_max)) throw DomainError("scan requires n_min < n_max");
  std::vector<ScanRow> rows;
  double guess = 0.0;
  for (int k = 0; k < steps; ++k) {
    ScanRow row;
    row.n = steps == 1 ? n_min : n_min + (n_max - n_min) * k / (steps - 1);
    try {
      const auto sol = solve_canonical(row.n, cfg, guess);
      row.q_n = sol.q_n;
      row.p_n = sol.p_n;
      row.residual = sol.residual_norm;
      row.cross_difference = sol.cross_difference;
      row.ok = true;
      guess = sol.q_n;
      if (!sol.warnings.empty()) row.message = sol.warnings.front();
    } catch (const Error& e) {
      row.ok = false;
      row.message = std::string(e.kind()) + ": " + e.what();
    }
    rows.push_back(row);
  }
  return rows;
}

NondegeneracyReport nondegeneracy_probe(const GroundStateSolution& sol) {
  const std::size_t m = sol.grid.size();
  const std::size_t stride = std::max<std::size_t>(1, (m - 1 + 3999) / 4000);
  const double H = sol.h() * stride;
  std::vector<double> s, pot;
  for (std::size_t i = stride; i + stride < m; i += stride) {
    const double si = sol.grid[i];
    s.push_back(si);
    pot.push_back(1.0 - 3.0 * std::pow(si, 2.0 - sol.n) * sol.Qvals[i] * sol.Qvals[i]);
  }
  const Eigen::Index M = static_cast<Eigen::Index>(s.size());
  // w = s v turns the radial 3D operator into -w'' + (1 - 3 s^{2-n} Q^2) w with w(0) = w(S) = 0.
  Eigen::VectorXd diag(M), sub(M - 1);
  for (Eigen::Index i = 0; i < M; ++i) diag[i] = 2.0 / (H * H) + pot[i];
  sub.setConstant(-1.0 / (H * H));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw EigensolveFailure("tridiagonal eigensolve failed");
  const Eigen::VectorXd& ev = es.eigenvalues();
  NondegeneracyReport rep;
  Eigen::Index best = 0;
  for (Eigen::Index i = 0; i < M; ++i) {
    if (ev[i] < 0.0) ++rep.negative_count;
    if (std::abs(ev[i]) < std::abs(ev[best])) best = i;
  }
  rep.eigenvalue = ev[best];
  // Inverse iteration for the associated mode.
  const double shift = rep.eigenvalue + 1e-9 * std::max(1.0, std::abs(rep.eigenvalue));
  std::vector<Eigen::Triplet<double>> t;
  for (Eigen::Index i = 0; i < M; ++i) {
    t.emplace_back(i, i, diag[i] - shift);
    if (i + 1 < M) {
      t.emplace_back(i, i + 1, sub[i]);
      t.emplace_back(i + 1, i, sub[i]);
    }
  }
  Eigen::SparseMatrix<double> A(M, M);
  A.setFromTriplets(t.begin(), t.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw EigensolveFailure("inverse iteration factorisation failed");
  Eigen::VectorXd x = Eigen::VectorXd::Ones(M);
  for (int k = 0; k < 4; ++k) {
    x = lu.solve(x);
    const double nx = x.norm();
    if (!(nx > 0.0) || !std::isfinite(nx)) throw EigensolveFailure("inverse iteration diverged");
    x /= nx;
  }
  // Boundary behaviour of v = w / s relative to its maximum.
  double vmax = 0.0;
  for (Eigen::Index i = 0; i < M; ++i) vmax = std::max(vmax, std::abs(x[i] / s[i]));
  rep.boundary_ratio = std::abs(x[M - 1] / s[M - 1]) / vmax;
  rep.degenerate = std::abs(rep.eigenvalue) < 1e-3 && rep.boundary_ratio < 1e-2;
  return rep;
}

std::vector<double> apply_linearization(const GroundStateSolution& sol, const std::vector<double>& v,
                                        double smin, double smax) {
  if (v.size() != sol.grid.size()) throw ShapeMismatch("field does not match the ground-state grid");
  const Segment seg = segment(sol.grid, smin, smax, 8);
  const SampledRadial f = slice(sol.grid, v, seg);
  const SampledRadial lap = bessel_operator_apply(2.0, bessel_operator_apply(0.0, f));
  std::vector<double> out;
  out.reserve(seg.ib - seg.ia + 1);
  for (std::size_t i = seg.ia; i <= seg.ib; ++i) {
    const double s = sol.grid[i];
    const double Q = sol.Qvals[i];
    out.push_back(-lap.values[i - seg.lo] + v[i] - 3.0 * std::pow(s, 2.0 - sol.n) * Q * Q * v[i]);
  }
  return out;
}

LinearizationDefects linearization_defects(const GroundStateSolution& sol, double smin, double smax) {
  SampledRadial full{0.0, sol.h(), sol.Qvals};
  const SampledRadial dQ = bessel_operator_apply(0.0, full);
  std::vector<double> Q1(sol.grid.size());
  for (std::size_t i = 0; i < Q1.size(); ++i) {
    Q1[i] = sol.grid[i] * dQ.values[i] + 0.5 * (4.0 - sol.n) * sol.Qvals[i];
  }
  const auto LQ = apply_linearization(sol, sol.Qvals, smin, smax);
  const auto LQ1 = apply_linearization(sol, Q1, smin, smax);
  const Segment seg = segment(sol.grid, smin, smax, 8);
  LinearizationDefects d;
  for (std::size_t i = seg.ia; i <= seg.ib; ++i) {
    const double s = sol.grid[i], Q = sol.Qvals[i];
    d.LQ = std::max(d.LQ, std::abs(LQ[i - seg.ia] + 2.0 * std::pow(s, 2.0 - sol.n) * Q * Q * Q));
    d.LQ1 = std::max(d.LQ1, std::abs(LQ1[i - seg.ia] + 2.0 * Q));
  }
  return d;
}

double ground_state_at(const GroundStateSolution& sol, double s) {
  if (s < 0.0) throw DomainError("ground_state_at requires s >= 0");
  const double S = sol.S();
  if (s >= S) return sol.Qvals.back() * (S / s) * std::exp(-(s - S));
  const double x = s / sol.h();
  const std::size_t i = std::min(static_cast<std::size_t>(x), sol.grid.size() - 2);
  const double t = x - static_cast<double>(i);
  return (1.0 - t) * sol.Qvals[i] + t * sol.Qvals[i + 1];
}

} // namespace turingrad
