#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace turingrad {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

// Truncated stationary system 0 = Delta_n u - M1 u - mu M2 u - Q(u,u) - C(u,u,u).
// Q_k(u,v) = u^T Q[k] v, C_k(u,v,w) = sum_{ijl} C[k][i](j,l) u_i v_j w_l.
struct RDSystem {
  Mat2 M1 = Mat2::Zero();
  Mat2 M2 = Mat2::Zero();
  std::array<Mat2, 2> Q{Mat2::Zero(), Mat2::Zero()};
  std::array<std::array<Mat2, 2>, 2> C{{{Mat2::Zero(), Mat2::Zero()}, {Mat2::Zero(), Mat2::Zero()}}};

  Vec2 quadratic(const Vec2& u, const Vec2& v) const;
  Vec2 cubic(const Vec2& u, const Vec2& v, const Vec2& w) const;
  // d/dv Q(v,v) at u, i.e. v -> 2 Q(u,v)
  Mat2 quadratic_jacobian(const Vec2& u) const;
  // d/dv C(v,v,v) at u, i.e. v -> 3 C(u,u,v)
  Mat2 cubic_jacobian(const Vec2& u) const;

  // Enforces Q(u,v)=Q(v,u) and full permutation symmetry of C.
  // Returns the largest entry change, so callers can warn about asymmetric input.
  double symmetrize();
  bool all_finite() const;
  bool operator==(const RDSystem& other) const;
};

struct TuringData {
  double k_c = 1.0;
  Vec2 U0hat = Vec2::Zero();
  Vec2 U1hat = Vec2::Zero();
  Vec2 U0star = Vec2::Zero();
  Vec2 U1star = Vec2::Zero();
  double c0 = 0.0;
  double gamma = 0.0;
  double c3 = 0.0;
};

struct JordanChain {
  Vec2 U0hat, U1hat, U0star, U1star;
};

struct Coefficients {
  double c0 = 0.0;
  double gamma = 0.0;
  double c3 = 0.0;
  bool c0_degenerate = false;
  bool gamma_degenerate = false;
  bool c3_degenerate = false;
};

inline constexpr double kDegeneracyTol = 1e-10;

double find_turing_wavenumber(const Mat2& M1);
JordanChain generalized_eigenvectors(const Mat2& M1, double k_c);
// Applies the coefficient formulas as stated; they presuppose k_c = 1.
Coefficients coefficients(const RDSystem& system, double k_c, const JordanChain& chain);

// Rescales r -> k_c r so that the rescaled system has unit critical wavenumber.
RDSystem normalize_wavenumber(const RDSystem& system, double k_c);
// If c0 < 0, negates M2 (mu -> -mu) so that the returned system has c0 > 0.
RDSystem orient_bifurcation(const RDSystem& system, bool* flipped = nullptr);

// Full pipeline on a system already normalised to k_c = 1.
TuringData turing_data(const RDSystem& system);
// Chain gauge U0 -> beta U0 (forced U1 -> beta U1, duals / beta), coefficients recomputed.
TuringData rescale_chain(const TuringData& td, const RDSystem& system, double beta);

struct TuringAnalysis {
  double k_c = 1.0;
  bool mu_flipped = false;
  RDSystem normalized;  // k_c = 1, c0 >= 0
  TuringData data;
  Coefficients flags;
  std::vector<std::string> notes;
};
TuringAnalysis analyze_system(const RDSystem& system);

double nu_n(double n);

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int blocks = 0;
};
QuadratureResult nu_n_quadrature(double n, double tol = 1e-9);

} // namespace turingrad
