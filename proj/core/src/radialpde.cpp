#include "turingrad/radialpde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/SparseLU>

#include "turingrad/besseln.hpp"
#include "turingrad/parallel.hpp"

namespace turingrad {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplets = std::vector<Eigen::Triplet<double>>;

void check_shape(const Eigen::VectorXd& u, const Discretization& disc) {
  if (u.size() != disc.size()) throw ShapeMismatch("field size does not match the discretisation");
}

// Stencil weights (left, centre, right) of Delta_n at node i (interior or axis).
struct Stencil {
  double left, centre, right;
};

Stencil laplacian_stencil(const Discretization& d, int i) {
  const double h = d.h(), ih2 = 1.0 / (h * h);
  if (i == 0) return {0.0, -2.0 * (d.n + 1.0) * ih2, 2.0 * (d.n + 1.0) * ih2};
  const double c = d.n / (2.0 * h * d.r(i));
  return {ih2 - c, -2.0 * ih2, ih2 + c};
}

Vec2 at(const Eigen::VectorXd& u, int i) { return u.segment<2>(2 * i); }

// Delta_n phi for a scalar field, zero at the Dirichlet node.
Eigen::VectorXd scalar_laplacian(const Eigen::VectorXd& phi, const Discretization& d) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(d.m);
  for (int i = 0; i + 1 < d.m; ++i) {
    const Stencil s = laplacian_stencil(d, i);
    const double left = i > 0 ? phi[i - 1] : 0.0;
    out[i] = s.left * left + s.centre * phi[i] + s.right * phi[i + 1];
  }
  return out;
}

Eigen::VectorXd chain_field(const Eigen::VectorXd& phi, const TuringData& td, const Discretization& d) {
  Eigen::VectorXd lap = scalar_laplacian(phi, d);
  Eigen::VectorXd u(d.size());
  for (int i = 0; i < d.m; ++i) {
    const double psi = i + 1 < d.m ? lap[i] + phi[i] : 0.0;
    u.segment<2>(2 * i) = phi[i] * td.U0hat + psi * td.U1hat;
  }
  u.tail<2>().setZero();
  return u;
}

} // namespace

Discretization make_discretization(double n, double R, int m) {
  if (!(n >= 0.0)) throw DomainError("Discretization requires n >= 0");
  if (!(R > 0.0)) throw DomainError("Discretization requires R > 0");
  if (m < 4) throw GridTooCoarse("Discretization requires m >= 4");
  return Discretization{n, R, m};
}

Discretization discretization_for_spacing(double n, double R, double h) {
  if (!(h > 0.0)) throw DomainError("grid spacing must be positive");
  const int m = static_cast<int>(std::lround(R / h)) + 1;
  return make_discretization(n, h * (m - 1), m);
}

Eigen::VectorXd assemble_residual(const Eigen::VectorXd& u, double mu, const RDSystem& sys,
                                  const Discretization& disc) {
  check_shape(u, disc);
  const int m = disc.m;
  Eigen::VectorXd F(disc.size());
  const Mat2 L = sys.M1 + mu * sys.M2;
  for (int i = 0; i + 1 < m; ++i) {
    const Stencil s = laplacian_stencil(disc, i);
    const Vec2 ui = at(u, i);
    const Vec2 left = i > 0 ? at(u, i - 1) : Vec2::Zero();
    const Vec2 lap = s.left * left + s.centre * ui + s.right * at(u, i + 1);
    F.segment<2>(2 * i) = lap - L * ui - sys.quadratic(ui, ui) - sys.cubic(ui, ui, ui);
  }
  F.segment<2>(2 * (m - 1)) = at(u, m - 1);
  return F;
}

SpMat assemble_jacobian(const Eigen::VectorXd& u, double mu, const RDSystem& sys,
                        const Discretization& disc) {
  check_shape(u, disc);
  const int m = disc.m;
  const Mat2 L = sys.M1 + mu * sys.M2;
  Triplets t;
  t.reserve(static_cast<std::size_t>(10) * m);
  for (int i = 0; i + 1 < m; ++i) {
    const Stencil s = laplacian_stencil(disc, i);
    const Vec2 ui = at(u, i);
    const Mat2 local = -(L + sys.quadratic_jacobian(ui) + sys.cubic_jacobian(ui));
    for (int k = 0; k < 2; ++k) {
      const int row = 2 * i + k;
      if (i > 0) t.emplace_back(row, 2 * (i - 1) + k, s.left);
      t.emplace_back(row, 2 * (i + 1) + k, s.right);
      for (int l = 0; l < 2; ++l) {
        t.emplace_back(row, 2 * i + l, local(k, l) + (k == l ? s.centre : 0.0));
      }
    }
  }
  t.emplace_back(2 * (m - 1), 2 * (m - 1), 1.0);
  t.emplace_back(2 * (m - 1) + 1, 2 * (m - 1) + 1, 1.0);
  SpMat J(disc.size(), disc.size());
  J.setFromTriplets(t.begin(), t.end());
  return J;
}

Eigen::VectorXd residual_mu_derivative(const Eigen::VectorXd& u, const RDSystem& sys,
                                       const Discretization& disc) {
  check_shape(u, disc);
  Eigen::VectorXd g(disc.size());
  for (int i = 0; i + 1 < disc.m; ++i) g.segment<2>(2 * i) = -(sys.M2 * at(u, i));
  g.tail<2>().setZero();
  return g;
}

NewtonResult newton_solve(const Eigen::VectorXd& u0, double mu, const RDSystem& sys,
                          const Discretization& disc, double tol, int max_iter) {
  check_shape(u0, disc);
  if (!u0.allFinite()) throw DomainError("initial guess is not finite");
  NewtonResult res;
  res.u = u0;
  Eigen::VectorXd F = assemble_residual(res.u, mu, sys, disc);
  res.residual = F.cwiseAbs().maxCoeff();
  Eigen::SparseLU<SpMat> lu;
  bool analysed = false;
  while (res.residual >= tol) {
    if (res.iterations >= max_iter) throw ConvergenceFailure("Newton iteration limit reached", res.residual);
    const SpMat J = assemble_jacobian(res.u, mu, sys, disc);
    if (!analysed) {
      lu.analyzePattern(J);
      analysed = true;
    }
    lu.factorize(J);
    if (lu.info() != Eigen::Success) throw ConvergenceFailure("singular Jacobian in Newton", res.residual);
    const Eigen::VectorXd du = lu.solve(-F);
    const double f0 = F.squaredNorm();
    double t = 1.0;
    Eigen::VectorXd trial, Ft;
    for (;;) {
      trial = res.u + t * du;
      Ft = assemble_residual(trial, mu, sys, disc);
      if (Ft.squaredNorm() <= (1.0 - 1e-4 * t) * f0 || t < 1e-4) break;
      t *= 0.5;
    }
    res.u = std::move(trial);
    F = std::move(Ft);
    res.residual = F.cwiseAbs().maxCoeff();
    ++res.iterations;
    if (!std::isfinite(res.residual)) throw ConvergenceFailure("Newton diverged", res.residual);
  }
  return res;
}

double sup_norm(const Eigen::VectorXd& u) { return u.size() ? u.cwiseAbs().maxCoeff() : 0.0; }

double l2_norm(const Eigen::VectorXd& u, const Discretization& disc) {
  check_shape(u, disc);
  double s = 0.0;
  const double h = disc.h();
  for (int i = 0; i < disc.m; ++i) s += h * std::pow(disc.r(i), disc.n) * at(u, i).squaredNorm();
  return std::sqrt(s);
}

double core_norm(const Eigen::VectorXd& u, const Discretization& disc, double radius) {
  check_shape(u, disc);
  double c = 0.0;
  for (int i = 0; i < disc.m && disc.r(i) <= radius; ++i) c = std::max(c, at(u, i).cwiseAbs().maxCoeff());
  return c;
}

namespace {

BranchPoint make_point(const Eigen::VectorXd& u, double mu, double residual, const Discretization& disc,
                       const ContinuationConfig& cfg) {
  const bool keep = cfg.keep_solutions;
  BranchPoint p;
  p.mu = mu;
  p.sup_norm = sup_norm(u);
  p.l2_norm = l2_norm(u, disc);
  p.core_norm = core_norm(u, disc, cfg.core_radius);
  p.residual = residual;
  if (keep) p.u = u;
  return p;
}

// Weighted arclength metric: RMS over field entries plus mu.
struct Metric {
  double wu;
  double dot(const Eigen::VectorXd& a, double amu, const Eigen::VectorXd& b, double bmu) const {
    return wu * a.dot(b) + amu * bmu;
  }
};

} // namespace

Branch continue_branch(const Eigen::VectorXd& u0, double mu0, const RDSystem& sys,
                       const Discretization& disc, const ContinuationConfig& cfg) {
  check_shape(u0, disc);
  if (cfg.direction != 1 && cfg.direction != -1) throw DomainError("direction must be +1 or -1");
  Branch br;
  br.n = disc.n;
  br.disc = disc;
  const Metric metric{1.0 / static_cast<double>(disc.size())};

  auto first = newton_solve(u0, mu0, sys, disc, cfg.tol, 40);
  br.points.push_back(make_point(first.u, mu0, first.residual, disc, cfg));
  const double dmu = cfg.direction * std::max(std::abs(mu0) * 0.02, 1e-5);
  auto second = newton_solve(first.u, mu0 + dmu, sys, disc, cfg.tol, 40);
  br.points.push_back(make_point(second.u, mu0 + dmu, second.residual, disc, cfg));

  Eigen::VectorXd Xu0 = first.u, Xu1 = second.u;
  double Xm0 = mu0, Xm1 = mu0 + dmu;
  double ds = std::clamp(cfg.ds, cfg.ds_min, cfg.ds_max);
  double prev_tmu = 0.0;
  bool have_prev = false;
  int after_fold = -1;

  const Eigen::Index N = disc.size();
  Eigen::SparseLU<SpMat> lu;
  bool analysed = false;

  for (int step = 0; step < cfg.max_steps; ++step) {
    Eigen::VectorXd tu = Xu1 - Xu0;
    double tm = Xm1 - Xm0;
    const double tn = std::sqrt(metric.dot(tu, tm, tu, tm));
    tu /= tn;
    tm /= tn;
    if (have_prev && (tm > 0.0) != (prev_tmu > 0.0)) {
      br.folds.push_back(br.points.size() - 2);
      if (cfg.max_folds > 0 && static_cast<int>(br.folds.size()) >= cfg.max_folds && after_fold < 0) {
        after_fold = 0;
      }
    }
    prev_tmu = tm;
    have_prev = true;
    if (after_fold >= cfg.post_fold_steps) break;

    int halvings = 0;
    bool accepted = false;
    Eigen::VectorXd U;
    double mu = 0.0, resid = 0.0;
    int used = 0;
    while (!accepted) {
      U = Xu1 + ds * tu;
      mu = Xm1 + ds * tm;
      bool ok = false;
      for (used = 0; used < cfg.corrector_iter; ++used) {
        const Eigen::VectorXd F = assemble_residual(U, mu, sys, disc);
        const double g = metric.dot(tu, tm, U - Xu1, mu - Xm1) - ds;
        resid = F.cwiseAbs().maxCoeff();
        if (!std::isfinite(resid)) break;
        if (resid < cfg.tol && std::abs(g) < cfg.tol) {
          ok = true;
          break;
        }
        const SpMat J = assemble_jacobian(U, mu, sys, disc);
        const Eigen::VectorXd Fmu = residual_mu_derivative(U, sys, disc);
        Triplets t;
        t.reserve(J.nonZeros() + 2 * N + 1);
        for (int k = 0; k < J.outerSize(); ++k)
          for (SpMat::InnerIterator it(J, k); it; ++it) t.emplace_back(it.row(), it.col(), it.value());
        for (Eigen::Index i = 0; i < N; ++i) {
          if (Fmu[i] != 0.0) t.emplace_back(i, N, Fmu[i]);
          t.emplace_back(N, i, metric.wu * tu[i]);
        }
        t.emplace_back(N, N, tm);
        SpMat A(N + 1, N + 1);
        A.setFromTriplets(t.begin(), t.end());
        if (!analysed) {
          lu.analyzePattern(A);
          analysed = true;
        }
        lu.factorize(A);
        if (lu.info() != Eigen::Success) break;
        Eigen::VectorXd rhs(N + 1);
        rhs << -F, -g;
        const Eigen::VectorXd dx = lu.solve(rhs);
        if (!dx.allFinite()) break;
        U += dx.head(N);
        mu += dx[N];
      }
      if (ok) {
        const Eigen::VectorXd du = U - (Xu1 + ds * tu);
        const double dm = mu - (Xm1 + ds * tm);
        ok = std::sqrt(metric.dot(du, dm, du, dm)) <= cfg.max_correction * ds;
      }
      if (ok) {
        accepted = true;
      } else {
        ds *= 0.5;
        ++halvings;
        if (halvings > cfg.stall_halvings || ds < cfg.ds_min) {
          throw StallDetected("continuation stalled: step size below floor", br);
        }
      }
    }
    Xu0 = std::move(Xu1);
    Xm0 = Xm1;
    Xu1 = U;
    Xm1 = mu;
    br.points.push_back(make_point(U, mu, resid, disc, cfg));
    if (after_fold >= 0) ++after_fold;
    if (halvings == 0 && used <= 4) ds = std::min(ds * 1.5, cfg.ds_max);
    if (mu <= cfg.mu_min || mu <= 0.0 || mu >= cfg.mu_max) break;
  }
  return br;
}

ScalingFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw WindowTooSparse("power-law fit needs at least 2 points");
  const double N = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0)) throw DomainError("power-law fit needs positive data");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = N * sxx - sx * sx;
  if (!(den > 0.0)) throw WindowTooSparse("degenerate abscissae in power-law fit");
  ScalingFit f;
  f.points = static_cast<int>(x.size());
  f.slope = (N * sxy - sx * sy) / den;
  const double icpt = (sy - f.slope * sx) / N;
  if (x.size() > 2) {
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double e = std::log(y[i]) - icpt - f.slope * std::log(x[i]);
      ss += e * e;
    }
    f.stderr_ = std::sqrt(ss / (N - 2.0) * N / den);
  }
  return f;
}

ScalingFit fit_scaling_exponent(const Branch& branch, double mu_lo, double mu_hi, AmplitudeMeasure measure) {
  const std::size_t end = branch.folds.empty() ? branch.points.size() : branch.folds.front() + 1;
  std::vector<double> x, y;
  for (std::size_t i = 0; i < end; ++i) {
    const auto& p = branch.points[i];
    if (p.mu >= mu_lo && p.mu <= mu_hi) {
      x.push_back(p.mu);
      y.push_back(measure == AmplitudeMeasure::Sup ? p.sup_norm : p.core_norm);
    }
  }
  if (x.size() < 8) {
    throw WindowTooSparse("only " + std::to_string(x.size()) + " pre-fold branch points in the window");
  }
  return fit_power_law(x, y);
}

ScalingStudy continuation_scaling(PatternKind kind, const TuringData& td, const RDSystem& sys, double n,
                                  double mu_lo, double mu_hi, const GroundStateSolution* ground,
                                  const ScalingStudyConfig& cfg) {
  if (!(mu_lo > 0.0 && mu_hi > mu_lo)) throw DomainError("scaling window needs 0 < mu_lo < mu_hi");
  ScalingStudy out;
  switch (kind) {
    case PatternKind::SpotA: out.target = 0.5; break;
    case PatternKind::RingPlus:
    case PatternKind::RingMinus: out.target = (4.0 - n) / 4.0; break;
    case PatternKind::SpotB: out.target = (4.0 - n) / 8.0; break;
  }
  const double R = cfg.R > 0.0 ? cfg.R : std::max(cfg.R_min, cfg.decay_lengths / std::sqrt(td.c0 * mu_lo));
  const Discretization disc = discretization_for_spacing(n, R, cfg.h);
  ContinuationConfig cc;
  cc.direction = -1;
  cc.ds = cfg.ds;
  cc.ds_max = cfg.ds_max;
  cc.max_steps = cfg.max_steps;
  cc.mu_min = 0.9 * mu_lo;
  cc.tol = cfg.newton_tol;
  cc.keep_solutions = false;
  cc.core_radius = cfg.core_radius;
  const Branch br = continue_branch(seed_state(kind, td, disc, mu_hi, ground), mu_hi, sys, disc, cc);
  out.branch_points = br.points.size();
  for (const auto f : br.folds) out.folds_mu.push_back(br.points[f].mu);
  out.fit = fit_scaling_exponent(br, mu_lo, mu_hi, AmplitudeMeasure::Core);
  out.pass = std::abs(out.fit.slope - out.target) <= cfg.tolerance;
  return out;
}

RDSystem sh_as_rd(double nu) {
  RDSystem s;
  s.M1 << -1.0, 1.0, 0.0, -1.0;
  s.M2 << 0.0, 0.0, -1.0, 0.0;
  s.Q[1](0, 0) = nu;
  s.C[1][0](0, 0) = -1.0;
  return s;
}

Eigen::VectorXd seed_state(PatternKind kind, const TuringData& td, const Discretization& disc, double mu,
                           const GroundStateSolution* ground) {
  using std::numbers::pi;
  const double n = disc.n;
  const double kappa = std::sqrt(td.c0 * mu);
  Eigen::VectorXd phi(disc.m);
  std::vector<double> r(disc.m);
  for (int i = 0; i < disc.m; ++i) r[i] = disc.r(i);

  auto window = [&](double ri) {
    if (!ground) throw DomainError("ring and spot B seeds need a ground state");
    return ground_state_at(*ground, kappa * ri) / ground->q_n;
  };

  switch (kind) {
    case PatternKind::SpotA: {
      if (n == 0.0) {
        // One-dimensional spot A: Ginzburg-Landau sech pulse (nu_0 vanishes).
        if (!(td.c3 < 0.0)) throw DomainError("n = 0 spot A seed requires c3 < 0");
        const double a = 2.0 * std::sqrt(mu) * std::sqrt(2.0 * td.c0 / -td.c3);
        for (int i = 0; i < disc.m; ++i) phi[i] = a / std::cosh(kappa * r[i]) * std::cos(r[i]);
        break;
      }
      const Profile p = spot_a(td, n, mu, r);
      for (int i = 0; i < disc.m; ++i) phi[i] = p.amplitude * jn(n, 0, r[i]) * std::exp(-kappa * r[i]);
      break;
    }
    case PatternKind::RingPlus:
    case PatternKind::RingMinus: {
      const Profile p = make_profile(kind, td, n, mu, r, ground ? ground->q_n : 0.0);
      for (int i = 0; i < disc.m; ++i) phi[i] = p.amplitude * r[i] * jn(n, 1, r[i]) * window(r[i]);
      break;
    }
    case PatternKind::SpotB: {
      if (!ground) throw DomainError("spot B seed needs a ground state");
      const auto d = matching_amplitudes(kind, td, n, mu, ground->q_n, 20.0, 0.1);
      const double pref = std::sqrt(pi) / (std::pow(2.0, 0.5 * n) * std::tgamma(0.5 * (n + 1.0)));
      const double quad = nu_n(n) * td.gamma * d.d1 * d.d1;
      for (int i = 0; i < disc.m; ++i) {
        // Core J0 term plus the growing far-field response to the quadratic term.
        const double th = std::tanh(r[i] / 5.0);
        const double far = -std::pow(r[i], 1.0 - 0.5 * n) * std::cos(r[i] - n * pi / 4.0) * th * th / pref;
        phi[i] = pref * (d.d1 * jn(n, 0, r[i]) + quad * far) * window(r[i]);
      }
      break;
    }
  }
  return chain_field(phi, td, disc);
}

ValidationReport validate_profile(PatternKind kind, const TuringData& td, const RDSystem& sys, double n,
                                  const std::vector<double>& mu_list, const GroundStateSolution* ground,
                                  const ValidationConfig& cfg) {
  ValidationReport rep;
  rep.kind = kind;
  rep.n = n;
  rep.target_order = remainder_exponent(kind, n);
  rep.entries.resize(mu_list.size());
  const double q_n = ground ? ground->q_n : 0.0;
  parallel_for(mu_list.size(), [&](std::size_t k) {
    ValidationEntry& e = rep.entries[k];
    e.mu = mu_list[k];
    try {
      const double R = std::max(cfg.R_min, cfg.decay_lengths / std::sqrt(td.c0 * e.mu));
      const Discretization disc = discretization_for_spacing(n, R, cfg.h);
      const Eigen::VectorXd seed = seed_state(kind, td, disc, e.mu, ground);
      const NewtonResult nr = newton_solve(seed, e.mu, sys, disc, cfg.tol, cfg.max_iter);
      std::vector<double> core;
      for (int i = 0; i < disc.m && disc.r(i) <= cfg.r0 + 1e-9; ++i) core.push_back(disc.r(i));
      const Profile p = make_profile(kind, td, n, e.mu, core, q_n);
      double c = 0.0;
      for (std::size_t i = 0; i < core.size(); ++i) {
        c = std::max(c, (nr.u.segment<2>(2 * i) - p.values[i]).cwiseAbs().maxCoeff());
      }
      e.correction = c;
      e.iterations = nr.iterations;
      e.residual = nr.residual;
      e.converged = true;
    } catch (const Error& err) {
      e.converged = false;
      e.message = std::string(err.kind()) + ": " + err.what();
    }
  });
  std::vector<double> x, y;
  for (const auto& e : rep.entries) {
    if (e.converged && e.correction > 0.0) {
      x.push_back(e.mu);
      y.push_back(e.correction);
    }
  }
  if (x.size() >= 2) {
    const ScalingFit f = fit_power_law(x, y);
    rep.fitted_order = f.slope;
    rep.order_stderr = f.stderr_;
    rep.pass = std::abs(f.slope - rep.target_order) <= cfg.order_tolerance;
  }
  return rep;
}

} // namespace turingrad
