#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "lba/params.hpp"
#include "lba/rational.hpp"

using lba::Rational;

namespace {

Rational R(const char* s) { return lba::rational_from_decimal(s); }

/// Canonical tuned operating point used across the suite.
lba::QuarticParameters canonical() {
  return lba::quartic_parameters(R("0.623538"), R("0.552"), R("0.039"));
}

}  // namespace

TEST_CASE("sigma/rate conversions round trip") {
  for (double s : {0.1, 0.5, 1.0, 1.3, 1.9945477114942149}) {
    const double sigma = lba::sigma_from_rate(s);
    CHECK(lba::rate_from_sigma(sigma) == doctest::Approx(s).epsilon(1e-15));
  }
  CHECK(lba::sigma_from_rate(2.0) == 0.0);
  CHECK(lba::sigma_from_rate(1.0) == doctest::Approx(0.5).epsilon(1e-16));

  // Exact rational overloads are exact.
  const Rational s(250, 263);
  CHECK(lba::rate_from_sigma(lba::sigma_from_rate(s)) == s);
  CHECK(lba::sigma_from_rate(Rational(1)) == Rational(1, 2));
}

TEST_CASE("rate groups cover the moment order") {
  const auto& groups = lba::rate_group_of_moment();
  for (int i = 0; i < 4; ++i) CHECK(groups[std::size_t(i)] == -1);
  CHECK(groups[4] == 0);                                    // e
  for (int i = 5; i <= 9; ++i) CHECK(groups[std::size_t(i)] == 1);  // tensors
  for (int i = 10; i <= 12; ++i) CHECK(groups[std::size_t(i)] == 2);
  for (int i = 13; i <= 15; ++i) CHECK(groups[std::size_t(i)] == 3);
  CHECK(groups[16] == 4);
  CHECK(groups[17] == 5);
  CHECK(groups[18] == 6);
  CHECK(groups[19] == 6);
  for (int i = 20; i <= 22; ++i) CHECK(groups[std::size_t(i)] == 7);
  for (int i = 23; i <= 25; ++i) CHECK(groups[std::size_t(i)] == 8);
  CHECK(groups[26] == 9);

  CHECK(std::string(lba::rate_group_name(0)) == "s_e");
  CHECK(std::string(lba::rate_group_name(9)) == "s_omega");

  lba::RelaxationRates r;
  r.s_e = 0.1; r.s_x = 0.2; r.s_phi = 0.3; r.s_psi = 0.4; r.s_eps = 0.5;
  r.s_xi = 0.6; r.s_gamma = 0.7; r.s_chi = 0.8; r.s_tau = 0.9; r.s_omega = 1.0;
  const auto arr = lba::rate_array(r);
  const auto vec = lba::rate_vector(r);
  for (int m = 0; m < 27; ++m) {
    const int g = groups[std::size_t(m)];
    CHECK(vec[std::size_t(m)] == (g < 0 ? 0.0 : arr[std::size_t(g)]));
  }
  CHECK(arr[0] == 0.1);
  CHECK(arr[3] == 0.4);
  CHECK(arr[9] == 1.0);
}

TEST_CASE("transport coefficients at the tuned point") {
  const lba::TransportCoefficients tc = lba::transport(0.623538, 0.552, 0.039);
  CHECK(tc.mu == doctest::Approx(0.013).epsilon(1e-15));
  CHECK(tc.zeta == doctest::Approx(0.09204926679757867).epsilon(1e-14));
  CHECK(tc.gamma == doctest::Approx(0.054691300065456).epsilon(1e-13));
  CHECK(tc.nu == doctest::Approx(tc.mu / lba::kRho0).epsilon(1e-16));
  // gamma = (zeta + (4/3) mu) / 2 at rho0 = 1.
  CHECK(tc.gamma == doctest::Approx((tc.zeta + 4.0 / 3.0 * tc.mu) / 2.0).epsilon(1e-15));
  // Scaling in lambda and dx is linear.
  const lba::TransportCoefficients scaled = lba::transport(0.623538, 0.552, 0.039, 2.0, 3.0);
  CHECK(scaled.mu == doctest::Approx(6.0 * tc.mu).epsilon(1e-15));
  CHECK(scaled.zeta == doctest::Approx(6.0 * tc.zeta).epsilon(1e-15));
}

TEST_CASE("transport rejects negative viscosities") {
  CHECK_THROWS_AS(lba::transport(0.8, 0.552, 0.039), std::domain_error);  // c0^2 > 5/9
  CHECK_THROWS_AS(lba::transport(0.623538, -0.1, 0.039), std::domain_error);
  CHECK_THROWS_AS(lba::transport(0.623538, 0.552, -0.039), std::domain_error);
}

TEST_CASE("closed-form coefficients match an independent evaluation exactly") {
  // Exact fractions computed by a symbolic evaluation of the same closed
  // forms, transcribed independently of the term tables used by the library.
  const lba::QuarticParameters q = canonical();
  CHECK(q.beta == R("18682908432518955745750529867/37109375000000000000000000000"));
  CHECK(q.c2 == R("1218059/500000"));
  CHECK(q.sigma_phi == R("250/117"));
  CHECK(q.sigma_eps ==
        R("107202406261337940562838737484335127/44309568357687582934205141841511500"));
  CHECK(q.sigma_gamma ==
        R("96858019376092078189884147939809/70864900374023437500000000000000000"));
  CHECK(q.sigma_chi ==
        R("577221646589058215107702646415577/2116304683593750000000000000000000"));
  CHECK(q.sigma_tau == R("42730346341931719094040560750/3031363911463024044536010982431"));
  CHECK(q.sigma_omega ==
        R("6613469079667071632957736247266202250/1900935382409386789849220563720582653"));
}

TEST_CASE("input rates are consistent with the input sigmas") {
  const lba::QuarticParameters q = canonical();
  CHECK(q.s_e == Rational(250, 263));    // 1/(0.552 + 1/2)
  CHECK(q.s_x == Rational(1000, 539));   // 1/(0.039 + 1/2)
  CHECK(q.s_phi == Rational(1) / (q.sigma_phi + Rational(1, 2)));
  CHECK(q.s_gamma == Rational(1) / (q.sigma_gamma + Rational(1, 2)));
}

TEST_CASE("derived rates match their frozen 17-digit values") {
  const lba::QuarticParameters q = canonical();
  CHECK(q.s_phi.get_d() == doctest::Approx(0.37925445705024311).epsilon(1e-15));
  CHECK(q.s_eps.get_d() == doctest::Approx(0.34253657030513141).epsilon(1e-15));
  CHECK(q.s_gamma.get_d() == doctest::Approx(1.9945477114942149).epsilon(1e-15));
  CHECK(q.s_chi.get_d() == doctest::Approx(1.2940799466197218).epsilon(1e-15));
  CHECK(q.s_tau.get_d() == doctest::Approx(1.9451616927239606).epsilon(1e-15));
  CHECK(q.s_omega.get_d() == doctest::Approx(0.25131560984615405).epsilon(1e-15));
}

TEST_CASE("scheme() rounds the exact values once") {
  const lba::QuarticParameters q = canonical();
  const lba::SchemeParameters p = q.scheme();
  CHECK(p.rates.s_e == q.s_e.get_d());
  CHECK(p.rates.s_x == q.s_x.get_d());
  CHECK(p.rates.s_phi == q.s_phi.get_d());
  CHECK(p.rates.s_eps == q.s_eps.get_d());
  CHECK(p.rates.s_gamma == q.s_gamma.get_d());
  CHECK(p.rates.s_chi == q.s_chi.get_d());
  CHECK(p.rates.s_tau == q.s_tau.get_d());
  CHECK(p.rates.s_omega == q.s_omega.get_d());
  CHECK(p.rates.s_psi == 1.3);  // defaults pass through
  CHECK(p.rates.s_xi == 1.2);
  CHECK(p.eq.c0 == q.c0.get_d());
  CHECK(p.eq.beta == q.beta.get_d());
  CHECK(p.eq.c2 == q.c2.get_d());
  CHECK(p.eq.c1 == -2.0);
  CHECK(p.eq.c3 == 0.0);
  CHECK(p.eq.xi == 1.0);
  // theta = 3 c0^2 - 2, evaluated exactly before rounding.
  const Rational theta = 3 * q.c0 * q.c0 - 2;
  CHECK(p.eq.theta == theta.get_d());
}

TEST_CASE("named_values reports every coefficient once") {
  const lba::QuarticParameters q = canonical();
  const auto nv = q.named_values();
  CHECK(nv.size() >= 16);
  bool saw_beta = false, saw_s_omega = false;
  for (const auto& [name, value] : nv) {
    if (name == "beta") {
      saw_beta = true;
      CHECK(value == q.beta);
    }
    if (name == "s_omega") {
      saw_s_omega = true;
      CHECK(value == q.s_omega);
    }
  }
  CHECK(saw_beta);
  CHECK(saw_s_omega);
}

TEST_CASE("polynomial pieces evaluate identically in either term order") {
  const Rational b(1, 3), e(1, 2), x(1, 10);
  for (const char* name : {"beta_num", "eps_num", "eps_den", "gam_num", "chi_num", "tau_num",
                           "tau_den", "om_num", "om_den"}) {
    CAPTURE(name);
    const Rational fwd = lba::quartic_polynomial_piece(name, b, e, x, false);
    const Rational rev = lba::quartic_polynomial_piece(name, b, e, x, true);
    CHECK(fwd == rev);
    CHECK(fwd != 0);  // pieces are nontrivial at a generic point
  }
  CHECK_THROWS_AS(lba::quartic_polynomial_piece("nope", b, e, x), std::invalid_argument);
}

TEST_CASE("pieces assemble into the published combinations") {
  const lba::QuarticParameters q = canonical();
  const Rational b = q.c0 * q.c0, e = q.sigma_e, x = q.sigma_x;
  const Rational x2 = x * x;
  using lba::quartic_polynomial_piece;

  CHECK(q.beta == -Rational(1, 2) * quartic_polynomial_piece("beta_num", b, e, x) / (x - e));
  CHECK(q.sigma_eps == -Rational(1, 48) * quartic_polynomial_piece("eps_num", b, e, x) /
                           (x * (x - e) * quartic_polynomial_piece("eps_den", b, e, x)));
  CHECK(q.sigma_gamma == quartic_polynomial_piece("gam_num", b, e, x) /
                             (336 * x * (12 * x2 - 1) * (x - e) * (x - e)));
  CHECK(q.sigma_chi == quartic_polynomial_piece("chi_num", b, e, x) /
                           (96 * x * (84 * x2 - 1) * (x - e) * (x - e)));
  CHECK(q.sigma_tau == Rational(1, 12) * quartic_polynomial_piece("tau_num", b, e, x) /
                           (x * quartic_polynomial_piece("tau_den", b, e, x)));
  CHECK(q.sigma_omega == Rational(1, 12) * quartic_polynomial_piece("om_num", b, e, x) /
                             (x * quartic_polynomial_piece("om_den", b, e, x)));
}

TEST_CASE("singular combinations are named") {
  try {
    lba::quartic_parameters(R("0.6"), R("0.5"), R("0.5"));
    FAIL("expected SingularCombination");
  } catch (const lba::SingularCombination& ex) {
    CHECK(ex.which == "sigma_x - sigma_e");
  }
  try {
    lba::quartic_parameters(R("0.6"), R("0.5"), Rational(0));
    FAIL("expected SingularCombination");
  } catch (const lba::SingularCombination& ex) {
    CHECK(ex.which == "sigma_x");
  }
  CHECK_THROWS_AS(lba::quartic_parameters(R("0.6"), R("0.5"), R("-0.1")), std::domain_error);
}

TEST_CASE("an out-of-range derived rate names itself") {
  // At this point the acoustic-tensor sigma comes out negative (-37/420),
  // which would put the rate beyond the stable interval.
  try {
    lba::quartic_parameters(Rational(3, 5), Rational(1, 2), Rational(1, 10));
    FAIL("expected StabilityViolation");
  } catch (const lba::StabilityViolation& ex) {
    CHECK(ex.rate == "s_gamma");
    CHECK(ex.value > 2.0);
  }
  // Bad free inputs are validated too.
  lba::QuarticOptions opt;
  opt.s_psi = 2.5;
  CHECK_THROWS_AS(lba::quartic_parameters(R("0.623538"), R("0.552"), R("0.039"), opt),
                  lba::StabilityViolation);
  opt.s_psi = 1.3;
  opt.s_xi = -1.0;
  CHECK_THROWS_AS(lba::quartic_parameters(R("0.623538"), R("0.552"), R("0.039"), opt),
                  lba::StabilityViolation);
}

TEST_CASE("two-rate isotropic preset") {
  const lba::SchemeParameters p = lba::trt_isotropic_preset(0.039);
  CHECK(p.eq.c0 == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(p.eq.theta == doctest::Approx(-1.0).epsilon(1e-14));  // 3/3 - 2
  CHECK(p.eq.beta == 1.0);
  CHECK(p.eq.c2 == 2.5);
  CHECK(p.eq.c1 == -2.0);
  CHECK(p.eq.c3 == 0.0);
  CHECK(p.eq.xi == 1.0);
  const double s_even = lba::rate_from_sigma(0.039);
  const double s_odd = lba::rate_from_sigma(1.0 / (6.0 * 0.039));
  CHECK(p.rates.s_e == s_even);
  CHECK(p.rates.s_x == s_even);
  CHECK(p.rates.s_eps == s_even);
  CHECK(p.rates.s_xi == s_even);
  CHECK(p.rates.s_gamma == s_even);
  CHECK(p.rates.s_chi == s_even);
  CHECK(p.rates.s_phi == s_odd);
  CHECK(p.rates.s_psi == s_odd);
  CHECK(p.rates.s_tau == s_odd);
  CHECK(p.rates.s_omega == s_odd);
  // The defining product: sigma_phi * sigma_x = 1/6 * ... is fixed at 1/(6).
  CHECK(lba::sigma_from_rate(p.rates.s_phi) * 0.039 == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  CHECK_THROWS_AS(lba::trt_isotropic_preset(0.0), std::domain_error);
  CHECK_THROWS_AS(lba::trt_isotropic_preset(-1.0), std::domain_error);
}

TEST_CASE("usual preset relaxes every moment at one rate") {
  const lba::SchemeParameters p = lba::usual_preset(0.039);
  const double s = lba::rate_from_sigma(0.039);
  for (double v : lba::rate_array(p.rates)) CHECK(v == s);
  CHECK(p.eq.c0 == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK_THROWS_AS(lba::usual_preset(-0.5), std::domain_error);
}

TEST_CASE("planar-stencil shear condition constant") {
  CHECK(lba::quartic_shear_condition_d2q9_squared() == Rational(1, 108));
  CHECK(lba::quartic_shear_condition_d2q9() ==
        doctest::Approx(1.0 / std::sqrt(108.0)).epsilon(1e-15));
  CHECK(lba::quartic_shear_condition_d2q9(2.0, 3.0) ==
        doctest::Approx(6.0 / std::sqrt(108.0)).epsilon(1e-15));
}
