#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "lba/rational.hpp"

namespace lba {

/// Reference density of the linearized regime. The scheme is linear in this
/// library, so the value is a fixed constant rather than a parameter.
inline constexpr double kRho0 = 1.0;

/// Coefficients of the linear moment equilibrium.
///
/// theta ties the energy equilibrium to the sound speed: theta = 3 c0^2 - 2.
/// c1 and c3 scale the energy-flux and pseudovector equilibria and must be
/// -2 and 0 for an isotropic shear viscosity; c2 scales the squared-energy
/// flux; beta and xi scale the energy-square and energy-cube equilibria.
struct EquilibriumCoefficients {
  double c0 = 0.0;  // sound speed, lattice units (fraction of the lattice speed)
  double theta = 0.0;
  double c1 = -2.0;
  double c2 = 2.5;
  double c3 = 0.0;
  double beta = 0.0;
  double xi = 1.0;
};

/// One relaxation rate per non-conserved moment group.
struct RelaxationRates {
  double s_e = 0, s_x = 0, s_phi = 0, s_psi = 0, s_eps = 0;
  double s_xi = 0, s_gamma = 0, s_chi = 0, s_tau = 0, s_omega = 0;
};

/// Everything the collision kernel needs.
struct SchemeParameters {
  EquilibriumCoefficients eq;
  RelaxationRates rates;
};

/// Number of distinct relaxation-rate groups.
inline constexpr int kRateGroupCount = 10;

/// Group id per moment index (0..9), or -1 for the four conserved moments.
/// Groups: 0 {e}, 1 {XX,WW,XY,YZ,ZX}, 2 {phi}, 3 {psi}, 4 {eps}, 5 {e3},
/// 6 {XXe,WWe}, 7 {XYe,YZe,ZXe}, 8 {tau}, 9 {XYZ}.
const std::array<int, 27>& rate_group_of_moment();

/// Display name of a rate group ("s_e", "s_x", ...).
const char* rate_group_name(int group);

/// Rates as an ordered array indexed by group id.
std::array<double, kRateGroupCount> rate_array(const RelaxationRates& r);

/// Per-moment rate vector (0 at conserved slots).
std::array<double, 27> rate_vector(const RelaxationRates& r);

/// sigma = 1/s - 1/2. Domain: 0 < s <= 2 (s = 2 is the zero-sigma boundary).
double sigma_from_rate(double s);
/// s = 1/(sigma + 1/2). Domain: sigma >= 0.
double rate_from_sigma(double sigma);
Rational sigma_from_rate(const Rational& s);
Rational rate_from_sigma(const Rational& sigma);

/// Shear viscosity, bulk viscosity, sound attenuation, kinematic viscosity.
/// mu, zeta, gamma carry units of lambda*dx; nu = mu / rho0.
struct TransportCoefficients {
  double mu = 0, zeta = 0, gamma = 0, nu = 0;
};

/// mu = (1/3) lambda dx sigma_x; zeta = lambda dx sigma_e (5/9 - c0^2);
/// gamma = (zeta + (4/3) mu) / (2 rho0). Throws std::domain_error when a
/// viscosity comes out negative (c0^2 > 5/9 or a negative sigma).
TransportCoefficients transport(double c0, double sigma_e, double sigma_x, double lambda = 1.0,
                                double dx = 1.0);

/// A denominator of the closed-form parameter solution vanished. `which`
/// names the offending combination.
struct SingularCombination : std::domain_error {
  std::string which;
  explicit SingularCombination(const std::string& w)
      : std::domain_error("singular parameter combination: " + w), which(w) {}
};

/// A derived rate left the stable interval (0, 2).
struct StabilityViolation : std::domain_error {
  std::string rate;
  double value;
  StabilityViolation(const std::string& r, double v)
      : std::domain_error("rate " + r + " = " + std::to_string(v) + " outside (0,2)"),
        rate(r),
        value(v) {}
};

/// Free inputs of the fourth-order solution that the closed forms do not fix.
struct QuarticOptions {
  double s_psi = 1.3;
  double s_xi = 1.2;
  Rational xi = 1;
};

/// The fourth-order ("quartic") parameter set: the closed-form solution making
/// the shear and acoustic dispersion errors fourth-order accurate.
/// All members are exact rationals; scheme() rounds once to doubles.
struct QuarticParameters {
  Rational c0, sigma_e, sigma_x;
  Rational beta, c2;
  Rational sigma_phi, sigma_eps, sigma_gamma, sigma_chi, sigma_tau, sigma_omega;
  Rational s_e, s_x, s_phi, s_eps, s_gamma, s_chi, s_tau, s_omega;
  QuarticOptions options;

  SchemeParameters scheme() const;

  /// (name, exact value) pairs in a fixed order, for reporting at any
  /// requested precision.
  std::vector<std::pair<std::string, Rational>> named_values() const;
};

/// Evaluates the eight closed-form expressions in exact rational arithmetic
/// and converts each sigma to a rate. Preconditions: sigma_x != sigma_e,
/// sigma_x > 0, 12 sigma_x^2 != 1, 84 sigma_x^2 != 1, and three polynomial
/// denominators nonzero; violations throw SingularCombination. A derived rate
/// outside (0,2) throws StabilityViolation naming the rate.
QuarticParameters quartic_parameters(const Rational& c0, const Rational& sigma_e,
                                     const Rational& sigma_x, const QuarticOptions& opt = {});

/// Convenience overload; doubles are converted to their exact binary values.
QuarticParameters quartic_parameters(double c0, double sigma_e, double sigma_x,
                                     const QuarticOptions& opt = {});

/// Two-rate isotropic preset: c0 = 1/sqrt(3), beta = 4 - 9 c0^2 = 1,
/// sigma_phi = 1/(6 sigma_x) shared by {phi, psi, tau, omega} and sigma_x
/// shared by {e, xx, eps, e3, gamma, chi}; c1 = -2, c3 = 0, xi = 1,
/// c2 = 5/2. Only the isotropy of the fourth-order error terms is enforced,
/// not their removal. Throws std::domain_error for sigma_x <= 0.
SchemeParameters trt_isotropic_preset(double sigma_x);

/// Baseline second-order preset used for A/B comparisons: the isotropic
/// preset with the odd-group sigma replaced by sigma_x as well, i.e. every
/// moment relaxes with the same rate. This is the library's definition of
/// the "usual" scheme; nothing sharper is implied.
SchemeParameters usual_preset(double sigma_x);

/// Exact evaluation of one named polynomial piece of the closed-form solution
/// ("beta_num", "eps_num", "eps_den", "gam_num", "chi_num", "tau_num",
/// "tau_den", "om_num", "om_den"), term by term in table order, or
/// back-to-front when `reversed` is set. Exposed so tests can verify that the
/// assembled formulas and an independently ordered evaluation agree exactly.
Rational quartic_polynomial_piece(const std::string& name, const Rational& c0_sq,
                                  const Rational& sigma_e, const Rational& sigma_x,
                                  bool reversed = false);

/// Reference constant: the shear viscosity at which the analogous
/// fourth-order condition holds for the two-dimensional nine-velocity
/// stencil, mu = lambda dx / sqrt(108). Reporting only; no 2-D scheme is
/// built here.
double quartic_shear_condition_d2q9(double lambda = 1.0, double dx = 1.0);
/// Exact square of the same constant at lambda = dx = 1: 1/108.
Rational quartic_shear_condition_d2q9_squared();

}  // namespace lba
