#include "lba/params.hpp"

#include <cmath>
#include <cstddef>
#include <span>

namespace lba {

const std::array<int, 27>& rate_group_of_moment() {
  static const std::array<int, 27> groups = {
      -1, -1, -1, -1,      // rho, qx, qy, qz: conserved, no rate
      0,                   // e
      1,  1,  1,  1,  1,   // XX, WW, XY, YZ, ZX
      2,  2,  2,           // phi
      3,  3,  3,           // psi
      4,                   // eps
      5,                   // e3
      6,  6,               // XXe, WWe
      7,  7,  7,           // XYe, YZe, ZXe
      8,  8,  8,           // tau
      9};                  // XYZ
  return groups;
}

const char* rate_group_name(int group) {
  static const char* names[kRateGroupCount] = {"s_e",  "s_x",     "s_phi", "s_psi", "s_eps",
                                               "s_xi", "s_gamma", "s_chi", "s_tau", "s_omega"};
  if (group < 0 || group >= kRateGroupCount) throw std::out_of_range("rate_group_name");
  return names[group];
}

std::array<double, kRateGroupCount> rate_array(const RelaxationRates& r) {
  return {r.s_e, r.s_x, r.s_phi, r.s_psi, r.s_eps, r.s_xi, r.s_gamma, r.s_chi, r.s_tau, r.s_omega};
}

std::array<double, 27> rate_vector(const RelaxationRates& r) {
  const auto by_group = rate_array(r);
  std::array<double, 27> s{};
  for (int i = 0; i < 27; ++i) {
    int g = rate_group_of_moment()[i];
    s[i] = g < 0 ? 0.0 : by_group[g];
  }
  return s;
}

double sigma_from_rate(double s) {
  if (!(s > 0.0 && s <= 2.0)) throw std::domain_error("sigma_from_rate: rate outside (0, 2]");
  return 1.0 / s - 0.5;
}

double rate_from_sigma(double sigma) {
  if (!(sigma >= 0.0)) throw std::domain_error("rate_from_sigma: negative sigma");
  return 1.0 / (sigma + 0.5);
}

Rational sigma_from_rate(const Rational& s) {
  if (!(s > 0 && s <= 2)) throw std::domain_error("sigma_from_rate: rate outside (0, 2]");
  return Rational(1) / s - Rational(1, 2);
}

Rational rate_from_sigma(const Rational& sigma) {
  if (sigma < 0) throw std::domain_error("rate_from_sigma: negative sigma");
  return Rational(1) / (sigma + Rational(1, 2));
}

TransportCoefficients transport(double c0, double sigma_e, double sigma_x, double lambda,
                                double dx) {
  TransportCoefficients t;
  t.mu = lambda * dx * sigma_x / 3.0;
  t.zeta = lambda * dx * sigma_e * (5.0 / 9.0 - c0 * c0);
  if (t.mu < 0.0) throw std::domain_error("transport: negative shear viscosity (sigma_x < 0)");
  if (t.zeta < 0.0)
    throw std::domain_error("transport: negative bulk viscosity (sigma_e < 0 or c0^2 > 5/9)");
  t.gamma = (t.zeta + (4.0 / 3.0) * t.mu) / (2.0 * kRho0);
  t.nu = t.mu / kRho0;
  return t;
}

namespace {

// One monomial coef * b^pb * e^pe * x^px in b = c0^2, e = sigma_e, x = sigma_x.
struct PolyTerm {
  long coef;
  int pb, pe, px;
};

// Term tables of the closed-form solution, exponent-sorted. Machine-generated
// from the expanded polynomials and cross-checked against 50-digit reference
// evaluations; do not edit by hand.
constexpr PolyTerm kBetaNum[] = {
    {-8, 0, 0, 1}, {8, 0, 1, 0},   {-9, 1, 0, 1},  {144, 1, 0, 3},
    {-18, 1, 1, 0}, {180, 1, 2, 1}, {27, 2, 0, 1}, {-324, 2, 2, 1},
};

constexpr PolyTerm kEpsNum[] = {
    {-76, 0, 0, 2},    {240, 0, 0, 4},    {-3456, 0, 0, 6},  {80, 0, 1, 1},
    {-336, 0, 1, 3},   {6912, 0, 1, 5},   {-4, 0, 2, 0},     {-1344, 0, 2, 2},
    {8064, 0, 2, 4},   {1440, 0, 3, 1},   {2880, 0, 3, 3},   {-14400, 0, 4, 2},
    {27, 1, 0, 0},     {-468, 1, 0, 2},   {-864, 1, 0, 4},   {20736, 1, 0, 6},
    {324, 1, 1, 1},    {-10800, 1, 1, 3}, {62208, 1, 1, 5},  {-180, 1, 2, 0},
    {864, 1, 2, 2},    {31104, 1, 2, 4},  {-4752, 1, 3, 1},  {20736, 1, 3, 3},
    {51840, 1, 4, 2},  {-27, 2, 0, 0},    {324, 2, 0, 2},    {7776, 2, 0, 4},
    {-324, 2, 1, 1},   {324, 2, 2, 0},    {3888, 2, 2, 2},   {-93312, 2, 2, 4},
    {3888, 2, 3, 1},   {-46656, 2, 3, 3}, {-46656, 2, 4, 2},
};

constexpr PolyTerm kEpsDen[] = {
    {-23, 0, 0, 1}, {-84, 0, 0, 3}, {23, 0, 1, 0},  {84, 0, 1, 2},  {-27, 1, 0, 1},
    {432, 1, 0, 3}, {-54, 1, 1, 0}, {540, 1, 2, 1}, {81, 2, 0, 1},  {-972, 2, 2, 1},
};

constexpr PolyTerm kGamNum[] = {
    {-76, 0, 0, 2},   {1968, 0, 0, 4},   {-12672, 0, 0, 6}, {80, 0, 1, 1},
    {-1344, 0, 1, 3}, {4608, 0, 1, 5},   {-4, 0, 2, 0},     {-624, 0, 2, 2},
    {8064, 0, 2, 4},  {27, 1, 0, 0},     {-144, 1, 0, 2},   {-15552, 1, 0, 4},
    {82944, 1, 0, 6}, {-180, 1, 2, 0},   {103680, 1, 2, 4}, {-27, 2, 0, 0},
    {15552, 2, 0, 4}, {324, 2, 2, 0},    {-186624, 2, 2, 4},
};

constexpr PolyTerm kChiNum[] = {
    {76, 0, 0, 2},    {192, 0, 0, 4},   {-6336, 0, 0, 6}, {-80, 0, 1, 1},
    {-384, 0, 1, 3},  {2304, 0, 1, 5},  {4, 0, 2, 0},     {192, 0, 2, 2},
    {4032, 0, 2, 4},  {-27, 1, 0, 0},   {-828, 1, 0, 2},  {-2592, 1, 0, 4},
    {41472, 1, 0, 6}, {180, 1, 2, 0},   {6480, 1, 2, 2},  {51840, 1, 2, 4},
    {27, 2, 0, 0},    {972, 2, 0, 2},   {7776, 2, 0, 4},  {-324, 2, 2, 0},
    {-11664, 2, 2, 2}, {-93312, 2, 2, 4},
};

constexpr PolyTerm kTauNum[] = {
    {76, 0, 0, 2},   {-144, 0, 0, 4}, {-80, 0, 1, 1},  {-576, 0, 1, 3},
    {4, 0, 2, 0},    {720, 0, 2, 2},  {-27, 1, 0, 0},  {-504, 1, 0, 2},
    {3456, 1, 0, 4}, {180, 1, 2, 0},  {4320, 1, 2, 2}, {27, 2, 0, 0},
    {648, 2, 0, 2},  {-324, 2, 2, 0}, {-7776, 2, 2, 2},
};

constexpr PolyTerm kTauDen[] = {
    {76, 0, 0, 2},   {-528, 0, 0, 4}, {-80, 0, 1, 1},  {192, 0, 1, 3},
    {4, 0, 2, 0},    {336, 0, 2, 2},  {-27, 1, 0, 0},  {-504, 1, 0, 2},
    {3456, 1, 0, 4}, {180, 1, 2, 0},  {4320, 1, 2, 2}, {27, 2, 0, 0},
    {648, 2, 0, 2},  {-324, 2, 2, 0}, {-7776, 2, 2, 2},
};

constexpr PolyTerm kOmNum[] = {
    {76, 0, 0, 2},    {-816, 0, 0, 4},  {3456, 0, 0, 6},   {-80, 0, 1, 1},
    {1632, 0, 1, 3},  {-17280, 0, 1, 5}, {4, 0, 2, 0},     {-816, 0, 2, 2},
    {13824, 0, 2, 4}, {-27, 1, 0, 0},   {-828, 1, 0, 2},   {-2592, 1, 0, 4},
    {41472, 1, 0, 6}, {180, 1, 2, 0},   {6480, 1, 2, 2},   {51840, 1, 2, 4},
    {27, 2, 0, 0},    {972, 2, 0, 2},   {7776, 2, 0, 4},   {-324, 2, 2, 0},
    {-11664, 2, 2, 2}, {-93312, 2, 2, 4},
};

constexpr PolyTerm kOmDen[] = {
    {76, 0, 0, 2},    {-192, 0, 0, 4},  {-6336, 0, 0, 6},  {-80, 0, 1, 1},
    {384, 0, 1, 3},   {2304, 0, 1, 5},  {4, 0, 2, 0},      {-192, 0, 2, 2},
    {4032, 0, 2, 4},  {-27, 1, 0, 0},   {-828, 1, 0, 2},   {-2592, 1, 0, 4},
    {41472, 1, 0, 6}, {180, 1, 2, 0},   {6480, 1, 2, 2},   {51840, 1, 2, 4},
    {27, 2, 0, 0},    {972, 2, 0, 2},   {7776, 2, 0, 4},   {-324, 2, 2, 0},
    {-11664, 2, 2, 2}, {-93312, 2, 2, 4},
};

Rational eval_poly(std::span<const PolyTerm> terms, const Rational& b, const Rational& e,
                   const Rational& x, bool reversed) {
  // Power caches keep the evaluation O(terms); exponents are small.
  std::array<Rational, 3> bp = {1, b, b * b};
  std::array<Rational, 5> ep;
  std::array<Rational, 7> xp;
  ep[0] = 1;
  for (int i = 1; i < 5; ++i) ep[i] = ep[i - 1] * e;
  xp[0] = 1;
  for (int i = 1; i < 7; ++i) xp[i] = xp[i - 1] * x;
  Rational sum = 0;
  auto add = [&](const PolyTerm& t) { sum += t.coef * bp[t.pb] * ep[t.pe] * xp[t.px]; };
  if (!reversed)
    for (const auto& t : terms) add(t);
  else
    for (std::size_t i = terms.size(); i-- > 0;) add(terms[i]);
  return sum;
}

std::span<const PolyTerm> piece_table(const std::string& name) {
  if (name == "beta_num") return kBetaNum;
  if (name == "eps_num") return kEpsNum;
  if (name == "eps_den") return kEpsDen;
  if (name == "gam_num") return kGamNum;
  if (name == "chi_num") return kChiNum;
  if (name == "tau_num") return kTauNum;
  if (name == "tau_den") return kTauDen;
  if (name == "om_num") return kOmNum;
  if (name == "om_den") return kOmDen;
  throw std::invalid_argument("quartic_polynomial_piece: unknown piece '" + name + "'");
}

}  // namespace

Rational quartic_polynomial_piece(const std::string& name, const Rational& c0_sq,
                                  const Rational& sigma_e, const Rational& sigma_x,
                                  bool reversed) {
  return eval_poly(piece_table(name), c0_sq, sigma_e, sigma_x, reversed);
}

QuarticParameters quartic_parameters(const Rational& c0, const Rational& sigma_e,
                                     const Rational& sigma_x, const QuarticOptions& opt) {
  if (sigma_x < 0) throw std::domain_error("quartic_parameters: sigma_x must be positive");
  if (sigma_x == 0) throw SingularCombination("sigma_x");
  if (sigma_x == sigma_e) throw SingularCombination("sigma_x - sigma_e");
  const Rational b = c0 * c0;
  const Rational x = sigma_x, e = sigma_e;
  const Rational x2 = x * x;
  if (12 * x2 == 1) throw SingularCombination("1 - 12 sigma_x^2");
  if (84 * x2 == 1) throw SingularCombination("1 - 84 sigma_x^2");

  QuarticParameters q;
  q.c0 = c0;
  q.sigma_e = e;
  q.sigma_x = x;
  q.options = opt;

  q.beta = -Rational(1, 2) * eval_poly(kBetaNum, b, e, x, false) / (x - e);
  q.c2 = Rational(5, 2) - 42 * x2;
  q.sigma_phi = Rational(1) / (12 * x);

  const Rational eps_den = eval_poly(kEpsDen, b, e, x, false);
  if (eps_den == 0) throw SingularCombination("D_eps");
  q.sigma_eps = -Rational(1, 48) * eval_poly(kEpsNum, b, e, x, false) / (x * (x - e) * eps_den);

  q.sigma_gamma =
      eval_poly(kGamNum, b, e, x, false) / (336 * x * (12 * x2 - 1) * (x - e) * (x - e));
  q.sigma_chi = eval_poly(kChiNum, b, e, x, false) / (96 * x * (84 * x2 - 1) * (x - e) * (x - e));

  const Rational tau_den = eval_poly(kTauDen, b, e, x, false);
  if (tau_den == 0) throw SingularCombination("D_tau");
  q.sigma_tau = Rational(1, 12) * eval_poly(kTauNum, b, e, x, false) / (x * tau_den);

  const Rational om_den = eval_poly(kOmDen, b, e, x, false);
  if (om_den == 0) throw SingularCombination("D_omega");
  q.sigma_omega = Rational(1, 12) * eval_poly(kOmNum, b, e, x, false) / (x * om_den);

  // Convert to rates; anything outside the stable interval is an error tied
  // to the offending rate, not a silent clamp.
  auto to_rate = [](const char* name, const Rational& sigma) -> Rational {
    if (sigma <= 0) {
      double sd = sigma.get_d();
      throw StabilityViolation(name, sd == -0.5 ? HUGE_VAL : 1.0 / (sd + 0.5));
    }
    return Rational(1) / (sigma + Rational(1, 2));
  };
  q.s_e = to_rate("s_e", e);
  q.s_x = to_rate("s_x", x);
  q.s_phi = to_rate("s_phi", q.sigma_phi);
  q.s_eps = to_rate("s_eps", q.sigma_eps);
  q.s_gamma = to_rate("s_gamma", q.sigma_gamma);
  q.s_chi = to_rate("s_chi", q.sigma_chi);
  q.s_tau = to_rate("s_tau", q.sigma_tau);
  q.s_omega = to_rate("s_omega", q.sigma_omega);
  if (!(opt.s_psi > 0 && opt.s_psi < 2)) throw StabilityViolation("s_psi", opt.s_psi);
  if (!(opt.s_xi > 0 && opt.s_xi < 2)) throw StabilityViolation("s_xi", opt.s_xi);
  return q;
}

QuarticParameters quartic_parameters(double c0, double sigma_e, double sigma_x,
                                     const QuarticOptions& opt) {
  return quartic_parameters(Rational(c0), Rational(sigma_e), Rational(sigma_x), opt);
}

SchemeParameters QuarticParameters::scheme() const {
  SchemeParameters p;
  p.eq.c0 = c0.get_d();
  p.eq.theta = Rational(3 * c0 * c0 - 2).get_d();
  p.eq.c1 = -2.0;
  p.eq.c2 = c2.get_d();
  p.eq.c3 = 0.0;
  p.eq.beta = beta.get_d();
  p.eq.xi = options.xi.get_d();
  p.rates.s_e = s_e.get_d();
  p.rates.s_x = s_x.get_d();
  p.rates.s_phi = s_phi.get_d();
  p.rates.s_psi = options.s_psi;
  p.rates.s_eps = s_eps.get_d();
  p.rates.s_xi = options.s_xi;
  p.rates.s_gamma = s_gamma.get_d();
  p.rates.s_chi = s_chi.get_d();
  p.rates.s_tau = s_tau.get_d();
  p.rates.s_omega = s_omega.get_d();
  return p;
}

std::vector<std::pair<std::string, Rational>> QuarticParameters::named_values() const {
  return {
      {"c0", c0},
      {"sigma_e", sigma_e},
      {"sigma_x", sigma_x},
      {"theta", 3 * c0 * c0 - 2},
      {"beta", beta},
      {"c2", c2},
      {"sigma_phi", sigma_phi},
      {"sigma_eps", sigma_eps},
      {"sigma_gamma", sigma_gamma},
      {"sigma_chi", sigma_chi},
      {"sigma_tau", sigma_tau},
      {"sigma_omega", sigma_omega},
      {"s_e", s_e},
      {"s_x", s_x},
      {"s_phi", s_phi},
      {"s_eps", s_eps},
      {"s_gamma", s_gamma},
      {"s_chi", s_chi},
      {"s_tau", s_tau},
      {"s_omega", s_omega},
  };
}

namespace {

SchemeParameters isotropic_base(double sigma_x) {
  if (!(sigma_x > 0)) throw std::domain_error("trt_isotropic_preset: sigma_x must be positive");
  SchemeParameters p;
  p.eq.c0 = 1.0 / std::sqrt(3.0);
  p.eq.theta = -1.0;  // 3 c0^2 - 2 at c0^2 = 1/3 exactly
  p.eq.c1 = -2.0;
  p.eq.c2 = 2.5;
  p.eq.c3 = 0.0;
  p.eq.beta = 1.0;  // 4 - 9 c0^2 at c0^2 = 1/3
  p.eq.xi = 1.0;
  double even = rate_from_sigma(sigma_x);
  p.rates.s_e = p.rates.s_x = p.rates.s_eps = p.rates.s_xi = p.rates.s_gamma = p.rates.s_chi =
      even;
  return p;
}

}  // namespace

SchemeParameters trt_isotropic_preset(double sigma_x) {
  SchemeParameters p = isotropic_base(sigma_x);
  double odd = rate_from_sigma(1.0 / (6.0 * sigma_x));
  p.rates.s_phi = p.rates.s_psi = p.rates.s_tau = p.rates.s_omega = odd;
  return p;
}

SchemeParameters usual_preset(double sigma_x) {
  SchemeParameters p = isotropic_base(sigma_x);
  double even = rate_from_sigma(sigma_x);
  p.rates.s_phi = p.rates.s_psi = p.rates.s_tau = p.rates.s_omega = even;
  return p;
}

double quartic_shear_condition_d2q9(double lambda, double dx) {
  return lambda * dx / std::sqrt(108.0);
}

Rational quartic_shear_condition_d2q9_squared() { return Rational(1, 108); }

}  // namespace lba
