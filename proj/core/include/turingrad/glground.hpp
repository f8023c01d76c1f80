#pragma once

#include <string>
#include <vector>

namespace turingrad {

// Radial ground state of Delta u = u - s^{2-n} u^3 in three dimensions.
struct GLConfig {
  double S = 20.0;         // truncation radius
  int m = 40001;           // collocation grid points on [0, S]
  double shoot_tol = 1e-13;
  double newton_tol = 1e-11;
  int max_iter = 50;
};

enum class GroundMethod { Shooting, Collocation };

struct GroundStateSolution {
  double n = 0.0;
  std::vector<double> grid;   // uniform on [0, S]
  std::vector<double> Qvals;  // collocation samples of Q(s)
  std::vector<double> qvals;  // q(s) = s^{(2-n)/2} Q(s)
  double q_n = 0.0;           // Q(0), from shooting (bisection accuracy)
  double p_n = 0.0;
  double residual_norm = 0.0;  // collocation residual, max over cells (per unit volume)
  GroundMethod method = GroundMethod::Collocation;  // origin of Qvals

  double q_n_shooting = 0.0;
  double q_n_collocation = 0.0;
  double cross_difference = 0.0;
  double shooting_valid_radius = 0.0;
  double tail_slope = 0.0;
  double tail_residual = 0.0;
  int newton_iterations = 0;
  std::vector<std::string> warnings;

  double h() const { return grid.size() > 1 ? grid[1] - grid[0] : 0.0; }
  double S() const { return grid.empty() ? 0.0 : grid.back(); }
};

struct ShootingResult {
  double q_n = 0.0;
  double valid_radius = 0.0;     // trajectories from the final bracket agree up to here
  std::vector<double> Qvals;     // on the supplied grid, tail-continued beyond valid_radius
  int bisection_steps = 0;
};

// Shooting on Q(0) with bisection between "crosses zero" and "turns upward".
// q_guess > 0 seeds the bracket search (warm start).
ShootingResult shoot_ground_state(double n, const std::vector<double>& grid, const GLConfig& cfg,
                                  double q_guess = 0.0);

struct CollocationResult {
  std::vector<double> Qvals;
  double residual_norm = 0.0;
  int iterations = 0;
};

// Finite-volume discretisation with Robin far-field condition, damped Newton.
CollocationResult collocate_ground_state(double n, const std::vector<double>& grid,
                                         const std::vector<double>& initial, const GLConfig& cfg);

GroundStateSolution solve_canonical(double n, const GLConfig& cfg = {}, double q_guess = 0.0);

struct GLProfile {
  std::vector<double> s;
  std::vector<double> q;
};

GLProfile to_gl_profile(const GroundStateSolution& sol);
// q_hat(s) = |c3|^{-1/2} sqrt(c0) q(sqrt(c0) s), sampled on the grid s_i / sqrt(c0).
GLProfile rescale(const GLProfile& q, double c0, double c3);

// max |D_{n/2} D_{n/2} q - c0 q - c3 q^3| over [smin, smax]
double gl_equation_residual(const GLProfile& q, double n, double c0, double c3, double smin,
                            double smax);

struct TailFit {
  double p_n = 0.0;
  double slope = 0.0;
  double residual = 0.0;  // RMS of the linear fit
};

// Linear fit of log(q s^{n/2}) = log(s Q) against s over [a S, b S].
TailFit extract_tail(const GroundStateSolution& sol, double a = 0.5, double b = 0.75);

struct ScanRow {
  double n = 0.0;
  double q_n = 0.0;
  double p_n = 0.0;
  double residual = 0.0;
  double cross_difference = 0.0;
  bool ok = false;
  std::string message;
};

// Sequential in n: each point warm-starts the next shooting bracket.
std::vector<ScanRow> scan_qn(double n_min, double n_max, int steps, const GLConfig& cfg = {});

struct NondegeneracyReport {
  double eigenvalue = 0.0;     // eigenvalue of L nearest 0 (radial sector)
  double boundary_ratio = 0.0; // |w(S)| / max |w| of the associated mode
  int negative_count = 0;
  bool degenerate = false;     // zero eigenvalue with bounded mode
};

// L = -Delta + 1 - 3 s^{2-n} Q^2 on radial functions.
NondegeneracyReport nondegeneracy_probe(const GroundStateSolution& sol);

// L v sampled at grid points in [smin, smax] (fourth-order differences of v).
std::vector<double> apply_linearization(const GroundStateSolution& sol, const std::vector<double>& v,
                                        double smin, double smax);

struct LinearizationDefects {
  double LQ = 0.0;   // max |L Q + 2 s^{2-n} Q^3|
  double LQ1 = 0.0;  // max |L Q1 + 2 Q|, Q1 = s D_{(4-n)/2} Q
};
LinearizationDefects linearization_defects(const GroundStateSolution& sol, double smin = 0.5,
                                           double smax = 10.0);

// Q(s) with linear interpolation on the grid and the e^{-s}/s tail beyond S.
double ground_state_at(const GroundStateSolution& sol, double s);

} // namespace turingrad
