#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace turingrad::cli {

// Physical and numerical defaults; every entry is overridable by a flag.
struct Defaults {
  static constexpr double nu = 1.6;        // Swift-Hohenberg instance without --system
  static constexpr double r0 = 20.0;       // matching radii
  static constexpr double r1 = 0.1;
  static constexpr double ground_S = 20.0;
  static constexpr int ground_m = 40001;
  static constexpr double bessel_rmax = 50.0;
  static constexpr double bessel_dr = 0.1;
  static constexpr double profile_rmax = 20.0;
  static constexpr double profile_dr = 0.05;
  static constexpr double pde_R = 200.0;
  static constexpr double pde_h = 0.1;
  static constexpr double ds = 1e-3;
  static constexpr double ds_min = 1e-7;
  static constexpr double ds_max = 1e-2;
  static constexpr int steps = 200;
  static constexpr double newton_tol = 1e-9;
  static constexpr int correction_points = 4;
};

// Runs one command line (without the program name). Exit codes: 0 success,
// 1 domain/validation/usage error, 2 convergence failure. Diagnostics go to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace turingrad::cli
