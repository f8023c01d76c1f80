#pragma once

#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "turingrad/asymptotics.hpp"
#include "turingrad/errors.hpp"
#include "turingrad/glground.hpp"
#include "turingrad/rdmodel.hpp"

namespace turingrad {

// Uniform grid r_i = i h on [0, R], h = R / (m - 1).
struct Discretization {
  double n = 1.0;
  double R = 100.0;
  int m = 1001;

  double h() const { return R / (m - 1); }
  double r(int i) const { return i == m - 1 ? R : h() * i; }
  Eigen::Index size() const { return 2 * static_cast<Eigen::Index>(m); }
};

Discretization make_discretization(double n, double R, int m);
Discretization discretization_for_spacing(double n, double R, double h);

// Discrete fields are interleaved: u[2 i + k] is component k at r_i.
Eigen::VectorXd assemble_residual(const Eigen::VectorXd& u, double mu, const RDSystem& sys,
                                  const Discretization& disc);
// Block-tridiagonal (bandwidth 3 in the interleaved ordering), stored sparse.
Eigen::SparseMatrix<double> assemble_jacobian(const Eigen::VectorXd& u, double mu, const RDSystem& sys,
                                              const Discretization& disc);
// d(residual)/d(mu) = -M2 u (zero on the Dirichlet rows).
Eigen::VectorXd residual_mu_derivative(const Eigen::VectorXd& u, const RDSystem& sys,
                                       const Discretization& disc);

struct NewtonResult {
  Eigen::VectorXd u;
  int iterations = 0;
  double residual = 0.0;
};

NewtonResult newton_solve(const Eigen::VectorXd& u0, double mu, const RDSystem& sys,
                          const Discretization& disc, double tol = 1e-10, int max_iter = 30);

struct BranchPoint {
  double mu = 0.0;
  Eigen::VectorXd u;
  double sup_norm = 0.0;
  double l2_norm = 0.0;  // (sum_i h r_i^n |u_i|^2)^{1/2}
  double core_norm = 0.0;  // max |u_i| over r_i <= core_radius
  double residual = 0.0;
};

struct Branch {
  double n = 0.0;
  std::string system_hash;
  Discretization disc;
  std::vector<BranchPoint> points;
  std::vector<std::size_t> folds;  // indices of local mu-extrema
};

struct ContinuationConfig {
  int max_steps = 200;
  double ds = 1e-3;
  double ds_min = 1e-7;
  double ds_max = 1e-2;
  int direction = +1;  // sign of the first mu increment
  double mu_min = 0.0;
  double mu_max = std::numeric_limits<double>::infinity();
  int max_folds = 0;         // stop this many points after reaching max_folds folds (0: never)
  int post_fold_steps = 5;
  int stall_halvings = 12;   // consecutive step halvings before StallDetected
  double tol = 1e-9;
  int corrector_iter = 12;
  double max_correction = 1.0;  // reject steps whose corrector moves further than this times ds
  bool keep_solutions = true;
  double core_radius = 20.0;    // bounded interval for BranchPoint::core_norm
};

class StallDetected : public Error {
public:
  StallDetected(const std::string& what, Branch partial)
      : Error(what, ErrorClass::Convergence), partial_(std::move(partial)) {}
  const Branch& partial() const noexcept { return partial_; }
  const char* kind() const noexcept override { return "StallDetected"; }

private:
  Branch partial_;
};

double sup_norm(const Eigen::VectorXd& u);
double l2_norm(const Eigen::VectorXd& u, const Discretization& disc);
double core_norm(const Eigen::VectorXd& u, const Discretization& disc, double radius);

Branch continue_branch(const Eigen::VectorXd& u0, double mu0, const RDSystem& sys,
                       const Discretization& disc, const ContinuationConfig& cfg = {});

struct ScalingFit {
  double slope = 0.0;
  double stderr_ = 0.0;
  int points = 0;
};

enum class AmplitudeMeasure { Sup, Core };

// Least squares of log y against log x.
ScalingFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y);
// Uses pre-fold points with mu in [mu_lo, mu_hi]; needs at least 8.
ScalingFit fit_scaling_exponent(const Branch& branch, double mu_lo, double mu_hi,
                                AmplitudeMeasure measure = AmplitudeMeasure::Sup);

struct ScalingStudyConfig {
  double h = 0.1;
  double R = 0.0;              // 0: max(R_min, decay_lengths / sqrt(c0 mu_lo))
  double decay_lengths = 6.0;
  double R_min = 60.0;
  double ds = 1e-4;
  double ds_max = 5e-4;
  int max_steps = 4000;
  double newton_tol = 1e-9;
  double tolerance = 0.05;     // |slope - target| bound
  double core_radius = 20.0;   // amplitudes are measured on [0, core_radius]
};

struct ScalingStudy {
  ScalingFit fit;
  double target = 0.0;
  bool pass = false;
  std::size_t branch_points = 0;
  std::vector<double> folds_mu;
};

// Continues the branch seeded at mu_hi downward past mu_lo and fits log core-norm vs log mu.
// Targets 1/2, (4-n)/4, (4-n)/8 for spot A, rings, spot B. The core norm matters for rings:
// r J_1 grows out to the envelope radius, so their global sup-norm scales like mu^{1/2}.
ScalingStudy continuation_scaling(PatternKind kind, const TuringData& td, const RDSystem& sys, double n,
                                  double mu_lo, double mu_hi, const GroundStateSolution* ground,
                                  const ScalingStudyConfig& cfg = {});

RDSystem sh_as_rd(double nu);

// Initial guess phi U0 + ((Delta_n + 1) phi) U1 built from the leading-order profile with a
// far-field window; ring and spot B need the ground state for the window.
Eigen::VectorXd seed_state(PatternKind kind, const TuringData& td, const Discretization& disc, double mu,
                           const GroundStateSolution* ground = nullptr);

struct ValidationConfig {
  double h = 0.1;
  double decay_lengths = 8.0;  // R = max(R_min, decay_lengths / sqrt(c0 mu))
  double R_min = 60.0;
  double r0 = 20.0;            // correction measured on [0, r0]
  double tol = 1e-10;
  int max_iter = 60;
  double order_tolerance = 0.25;
};

struct ValidationEntry {
  double mu = 0.0;
  bool converged = false;
  double correction = 0.0;  // max over [0, r0] of |u_newton - u_profile|
  int iterations = 0;
  double residual = 0.0;
  std::string message;
};

struct ValidationReport {
  PatternKind kind = PatternKind::SpotA;
  double n = 0.0;
  std::vector<ValidationEntry> entries;
  double fitted_order = std::numeric_limits<double>::quiet_NaN();
  double order_stderr = std::numeric_limits<double>::quiet_NaN();
  double target_order = 0.0;
  bool pass = false;
};

// Newton-corrects the leading-order profile at each mu and fits the correction order.
ValidationReport validate_profile(PatternKind kind, const TuringData& td, const RDSystem& sys, double n,
                                  const std::vector<double>& mu_list, const GroundStateSolution* ground,
                                  const ValidationConfig& cfg = {});

} // namespace turingrad
