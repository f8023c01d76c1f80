#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "turingrad/rdmodel.hpp"

namespace turingrad {

using Vec4 = Eigen::Vector4d;

enum class PatternKind { SpotA, RingPlus, RingMinus, SpotB };

std::string to_string(PatternKind kind);
// Accepts spotA, ring+, ring-, spotB.
PatternKind parse_pattern(const std::string& name);

// Samples of the four core solutions and their adjoints; blocks are (u, u') along U0/U1.
// V3, V4 are NaN at r = 0 and all W need r > 0 (NaN otherwise).
struct CoreBasis {
  double n = 0.0;
  std::vector<double> r;
  std::array<std::vector<Vec4>, 4> V;
  std::array<std::vector<Vec4>, 4> W;

  // max |<W_i, V_j> - delta_ij| over samples with r > 0
  double pairing_defect() const;
};

CoreBasis core_basis(double n, const TuringData& td, const std::vector<double>& grid);

struct Profile {
  PatternKind kind = PatternKind::SpotA;
  double n = 0.0;
  double mu = 0.0;
  std::vector<double> r;
  std::vector<Vec2> values;  // original u-coordinates
  double amplitude = 0.0;    // leading scalar coefficient multiplying the Bessel core
  double remainder_exponent = 0.0;
};

// Remainder exponents of the leading-order profiles: 1, min((6-n)/4,(4-n)/2), min((8-n)/8,(4-n)/4).
double remainder_exponent(PatternKind kind, double n);

Profile spot_a(const TuringData& td, double n, double mu, const std::vector<double>& grid);
Profile ring(const TuringData& td, double n, double mu, int sign, const std::vector<double>& grid,
             double q_n);
Profile spot_b(const TuringData& td, double n, double mu, const std::vector<double>& grid, double q_n);
// q_n is ignored for spot A.
Profile make_profile(PatternKind kind, const TuringData& td, double n, double mu,
                     const std::vector<double>& grid, double q_n);

struct MatchingAmplitudes {
  double d1 = 0.0;
  double d2 = 0.0;
  double phase_offset = 0.0;  // in multiples of pi/2
};

MatchingAmplitudes matching_amplitudes(PatternKind kind, const TuringData& td, double n, double mu,
                                       double q_n, double r0, double r1);

// Fold-regime spot A matching: gamma = mu^{n/4} E_n(mu)^{-1} gamma_tilde,
// d1 = 2 [nu_n gamma_tilde +- sqrt(nu_n^2 gamma_tilde^2 - sqrt(c0) c3)] / c3 * mu^{(2-n)/4} E_n(mu).
struct FoldMatching {
  double gamma_tilde = 0.0;
  double discriminant = 0.0;  // nu_n^2 gamma_tilde^2 - sqrt(c0) c3
  std::optional<std::pair<double, double>> d1;
};
FoldMatching spot_a_fold_matching(const TuringData& td, double n, double mu, double r0, double r1);

// E_n(mu) from 1/E^2 = mu^{(1-n)/2} int_{r0}^{r1 mu^{-1/2}} p^{-n} dp.
double en_mu(double n, double mu, double r0, double r1);

// (gamma_plus, gamma_minus) of the spot A fold curve (requires c3 > 0).
std::pair<double, double> fold_curve_gamma(double n, double mu, double r0, double r1, double c0,
                                           double c3);

// Positive gamma on the locus nu_n^2 gamma_tilde^2 = sqrt(c0) c3, mapped back via E_n(mu).
double fold_discriminant_gamma(double n, double mu, double r0, double r1, double c0, double c3);

double far_field_envelope(double n, double mu, double c0, double r);

std::vector<double> radial_grid(double rmax, double dr);

} // namespace turingrad
