#include "lba/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <sstream>
#include <vector>

#include "lba/acoustics_bench.hpp"
#include "lba/eigen.hpp"
#include "lba/mrt_core.hpp"
#include "lba/params.hpp"
#include "lba/rational.hpp"
#include "lba/spectral.hpp"
#include "lba/stencil.hpp"
#include "lba/text_format.hpp"

namespace lba {

namespace {

/// The canonical fourth-order-accurate parameter point used throughout the
/// acceptance suite.
QuarticParameters canonical_quartic() {
  return quartic_parameters(rational_from_decimal("0.623538"), rational_from_decimal("0.552"),
                            rational_from_decimal("0.039"));
}

std::string fmt(double v) { return format_double(v, 6); }

// --- criterion 1 -----------------------------------------------------------

/// Reference digit strings for the derived coefficients and rates at
/// (c0, sigma_e, sigma_x) = (0.623538, 0.552, 0.039), transcribed from the
/// independent source; the library's values are produced by its own
/// polynomial evaluation, so the comparison crosses two distinct routes.
struct NamedRef {
  const char* name;
  const char* decimal;
};

constexpr NamedRef kQuarticRefs[] = {
    {"beta", "0.50345521670787922851706691010021052631578947368420"},
    {"c2", "2.436118000"},
    {"s_phi", "0.37925445705024311183144246353322528363047001620745"},
    {"s_eps", "0.34253657030513141274711235609982461596733955718034"},
    {"s_gamma", "1.9945477114942149093456286590460711496091258797386"},
    {"s_chi", "1.2940799466197218037166471960307116873345869400515"},
    {"s_tau", "1.9451616927239606019667013153498030552793202566039"},
    {"s_omega", "0.25131560984615404581501005329813711811837082814760"},
    {"s_e", "0.95057034220532319391634980988593155893536121673004"},
    {"s_x", "1.8552875695732838589981447124304267161410018552876"},
};

bool criterion_quartic_values(std::string& detail, int) {
  const QuarticParameters qp = canonical_quartic();
  const Rational* values[] = {&qp.beta,    &qp.c2,  &qp.s_phi, &qp.s_eps, &qp.s_gamma,
                              &qp.s_chi,   &qp.s_tau, &qp.s_omega, &qp.s_e, &qp.s_x};
  double worst = 1e9;
  const char* worst_name = "";
  for (std::size_t i = 0; i < std::size(kQuarticRefs); ++i) {
    const double d = digits_of_agreement(*values[i], rational_from_decimal(kQuarticRefs[i].decimal));
    if (d < worst) {
      worst = d;
      worst_name = kQuarticRefs[i].name;
    }
  }
  std::ostringstream os;
  os << "worst agreement " << fmt(worst) << " significant digits (" << worst_name
     << "), required >= 14";
  detail = os.str();
  return worst >= 14.0;
}

// --- criterion 2 -----------------------------------------------------------

bool criterion_transport(std::string& detail, int) {
  const TransportCoefficients tc = transport(0.623538, 0.552, 0.039);
  const double refs[3] = {0.013, 0.0920492, 0.0546913};
  const double got[3] = {tc.mu, tc.zeta, tc.gamma};
  const char* names[3] = {"mu", "zeta", "gamma"};
  double worst = 0.0;
  const char* worst_name = "";
  for (int i = 0; i < 3; ++i) {
    const double rel = std::abs(got[i] - refs[i]) / refs[i];
    if (rel > worst) {
      worst = rel;
      worst_name = names[i];
    }
  }
  std::ostringstream os;
  os << "mu=" << format_double(tc.mu) << " zeta=" << format_double(tc.zeta)
     << " gamma=" << format_double(tc.gamma) << "; worst relative deviation " << fmt(worst)
     << " (" << worst_name << "), required <= 1e-6";
  detail = os.str();
  return worst <= 1e-6;
}

// --- criterion 3 -----------------------------------------------------------

bool criterion_moment_matrix(std::string& detail, int) {
  const VelocitySet vs = build_velocities();
  const MomentMatrix M = build_moment_matrix();

  // Rows 0..3 are the conserved forms: all ones, then the velocity components.
  bool conserved_ok = true;
  for (int j = 0; j < 27; ++j) {
    if (M.rows[0][std::size_t(j)] != 1) conserved_ok = false;
    for (int a = 0; a < 3; ++a)
      if (M.rows[std::size_t(1 + a)][std::size_t(j)] != vs.velocities[std::size_t(j)][std::size_t(a)])
        conserved_ok = false;
  }

  // Pairwise orthogonality, exactly.
  bool orth_ok = true;
  for (int i = 0; i < 27 && orth_ok; ++i)
    for (int j = i + 1; j < 27 && orth_ok; ++j) {
      long long dot = 0;
      for (int t = 0; t < 27; ++t)
        dot += (long long)M.rows[std::size_t(i)][std::size_t(t)] *
               M.rows[std::size_t(j)][std::size_t(t)];
      if (dot != 0) orth_ok = false;
    }

  // M * M^-1 = I in exact rational arithmetic.
  bool inverse_ok = true;
  for (int i = 0; i < 27 && inverse_ok; ++i)
    for (int j = 0; j < 27 && inverse_ok; ++j) {
      Rational acc = 0;
      for (int t = 0; t < 27; ++t)
        acc += Rational(M.rows[std::size_t(i)][std::size_t(t)]) *
               M.inverse[std::size_t(t)][std::size_t(j)];
      if (acc != Rational(i == j ? 1 : 0)) inverse_ok = false;
    }

  std::ostringstream os;
  os << "integer rows, conserved rows " << (conserved_ok ? "match" : "MISMATCH")
     << ", exact orthogonality " << (orth_ok ? "holds" : "FAILS") << ", M*M^-1 = I "
     << (inverse_ok ? "exactly" : "FAILS");
  detail = os.str();
  return conserved_ok && orth_ok && inverse_ok;
}

// --- criterion 4 -----------------------------------------------------------

bool criterion_collision_spectrum(std::string& detail, int) {
  const MomentMatrix M = build_moment_matrix();
  const SchemeParameters p = canonical_quartic().scheme();
  const RealMatrix C = collision_update_matrix(M, p);
  const VelocitySet vs = build_velocities();
  const ComplexMatrix A = amplification_matrix(C, vs, {0.0, 0.0, 0.0});
  EigenDecomposition d = eigen_decompose(A);

  std::array<double, 27> ref = collision_spectrum_reference(p);
  std::vector<std::complex<double>> got = d.values;
  std::sort(got.begin(), got.end(), [](const auto& a, const auto& b) {
    return a.real() < b.real();
  });
  double worst = 0.0;
  for (int i = 0; i < 27; ++i)
    worst = std::max(worst, std::abs(got[std::size_t(i)] - std::complex<double>(ref[std::size_t(i)], 0.0)));
  std::ostringstream os;
  os << "multiset deviation " << fmt(worst) << ", required <= 1e-12";
  detail = os.str();
  return worst <= 1e-12;
}

// --- criterion 5 -----------------------------------------------------------

bool criterion_accuracy_orders(std::string& detail, int) {
  const MomentMatrix M = build_moment_matrix();
  const std::vector<double> ks = log_spaced_wavenumbers(kDefaultKMin, kDefaultKMax, kDefaultKCount);

  const SchemeParameters quartic = canonical_quartic().scheme();
  const DispersionScan sq = hydrodynamic_branches(M, quartic, {1.0, 0.0, 0.0}, ks);
  const PowerLawFit shear_q =
      fit_power_law(sq.kmags, branch_error_series(sq, Branch::Shear0, ErrorComponent::Real));
  const PowerLawFit ac_im =
      fit_power_law(sq.kmags, branch_error_series(sq, Branch::AcousticPlus, ErrorComponent::Imag));
  const PowerLawFit ac_re =
      fit_power_law(sq.kmags, branch_error_series(sq, Branch::AcousticPlus, ErrorComponent::Real));

  const SchemeParameters usual = usual_preset(0.039);
  const DispersionScan su = hydrodynamic_branches(M, usual, {1.0, 0.0, 0.0}, ks);
  const PowerLawFit shear_u =
      fit_power_law(su.kmags, branch_error_series(su, Branch::Shear0, ErrorComponent::Real));

  const bool ok = std::abs(shear_q.slope - 6.0) <= 0.4 && std::abs(ac_im.slope - 5.0) <= 0.4 &&
                  std::abs(ac_re.slope - 6.0) <= 0.4 && std::abs(shear_u.slope - 4.0) <= 0.4;
  std::ostringstream os;
  os << "slopes: shear " << fmt(shear_q.slope) << " (6 +- 0.4), acoustic Im " << fmt(ac_im.slope)
     << " (5 +- 0.4), acoustic Re " << fmt(ac_re.slope) << " (6 +- 0.4); two-rate preset shear "
     << fmt(shear_u.slope) << " (4 +- 0.4)";
  if (std::abs(ac_im.slope - 5.0) > 0.4) {
    // The windowed fit can sit below the asymptotic order when a higher-order
    // term partially cancels near the top of the window; report the local
    // slope at the small-k end so the asymptote is visible in the log.
    const std::vector<double> err =
        branch_error_series(sq, Branch::AcousticPlus, ErrorComponent::Imag);
    const double local0 =
        std::log(err[1] / err[0]) / std::log(sq.kmags[1] / sq.kmags[0]);
    os << "; note: acoustic Im local slope at the small-k end is " << fmt(local0)
       << " and tends to 5 as k -> 0; the windowed fit is dragged down by a "
          "higher-order cancellation near the top of the window";
  }
  detail = os.str();
  return ok;
}

// --- criterion 6 -----------------------------------------------------------

bool criterion_oracle_equivalence(std::string& detail, int threads) {
  const MomentMatrix M = build_moment_matrix();
  const SchemeParameters p = canonical_quartic().scheme();

  ShearDecayConfig sc;
  sc.nx = 64;
  sc.ny = 4;
  sc.nz = 4;
  sc.mode = 1;
  sc.steps = 400;
  sc.skip = 10;
  sc.init = WaveInit::Eigenmode;
  sc.threads = threads;
  const ShearDecayResult sr = run_shear_decay(M, p, sc);
  const double shear_rel = std::abs(sr.measured_rate - sr.spectral_rate) / sr.spectral_rate;

  // The tuned parameter set amplifies zone-edge rounding noise (spectral
  // radius 1.0938 at k = (pi,0,0)), so the fit window must end before that
  // noise climbs out of the double-precision floor; 700 steps leaves two
  // decades of headroom while the acoustic mode still completes three periods.
  PlaneWaveConfig pc;
  pc.nx = 128;
  pc.ny = 4;
  pc.nz = 4;
  pc.mode = 1;
  pc.steps = 700;
  pc.skip = 100;
  pc.init = WaveInit::Eigenmode;
  pc.threads = threads;
  const PlaneWaveResult pr = run_plane_wave(M, p, pc);
  const double rate_rel = std::abs(pr.measured_rate - pr.spectral_rate) / pr.spectral_rate;
  const double omega_rel = std::abs(pr.measured_omega - pr.spectral_omega) / pr.spectral_omega;

  const bool ok = shear_rel <= 1e-8 && rate_rel <= 1e-8 && omega_rel <= 1e-8;
  std::ostringstream os;
  os << "relative deviations: shear rate " << fmt(shear_rel) << ", acoustic rate "
     << fmt(rate_rel) << ", acoustic frequency " << fmt(omega_rel) << ", required <= 1e-8";
  detail = os.str();
  return ok;
}

// --- criterion 7 -----------------------------------------------------------

bool criterion_conservation(std::string& detail, int threads) {
  const MomentMatrix M = build_moment_matrix();
  const SchemeParameters quartic = canonical_quartic().scheme();
  // The long run uses the two-rate preset: it is linearly stable at every
  // lattice wavevector (spectral radius exactly 1), so the mass sum stays
  // meaningful over 1000 steps.  The tuned fourth-order set amplifies
  // zone-edge modes by e^{0.09 t}; a random state feeds them at O(1e-2), and
  // after 1000 steps the populations reach ~1e37, at which point a
  // double-precision sum of signed values that large cannot resolve the
  // invariant total of order 1e3 no matter how exactly each kernel conserves
  // it.  Conservation itself is structural (the collision projects onto
  // non-conserved moments; streaming permutes), independent of the rates.
  const SchemeParameters p = usual_preset(0.039);

  // Long-run mass conservation on a random macroscopic state.
  LatticeState state = make_lattice(16, 16, 16);
  std::mt19937_64 rng(20250817);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> rho_field(state.site_count());
  std::vector<std::array<double, 3>> q_field(state.site_count());
  for (std::size_t s = 0; s < state.site_count(); ++s) {
    rho_field[s] = 1.0 + 0.05 * u(rng);
    q_field[s] = {0.005 * u(rng), 0.005 * u(rng), 0.005 * u(rng)};
  }
  initialize_equilibrium(
      state, M, p.eq,
      [&](int x, int y, int z) { return rho_field[state.site_index(x, y, z)]; },
      [&](int x, int y, int z) { return q_field[state.site_index(x, y, z)]; });
  for (int t = 0; t < 1000; ++t) step(state, M, p, threads);
  const ConservationReport audit = conservation_audit(state);

  // Per-site conserved moments under a single collision on raw random
  // populations.
  LatticeState small = make_lattice(8, 8, 8);
  for (std::size_t s = 0; s < small.site_count(); ++s) {
    double* f = small.f[small.current].data() + 27 * s;
    for (int j = 0; j < 27; ++j) f[j] = (1.0 + 0.2 * u(rng)) / 27.0;
  }
  std::vector<double> before(small.site_count() * 4);
  for (std::size_t s = 0; s < small.site_count(); ++s) {
    double rho;
    std::array<double, 3> q;
    site_density_momentum(small, s, rho, q);
    before[4 * s] = rho;
    for (int c = 0; c < 3; ++c) before[4 * s + 1 + std::size_t(c)] = q[std::size_t(c)];
  }
  collide(small, M, quartic, threads);
  double worst_site = 0.0;
  for (std::size_t s = 0; s < small.site_count(); ++s) {
    double rho;
    std::array<double, 3> q;
    site_density_momentum(small, s, rho, q);
    worst_site = std::max(worst_site, std::abs(rho - before[4 * s]));
    for (int c = 0; c < 3; ++c)
      worst_site = std::max(worst_site, std::abs(q[std::size_t(c)] - before[4 * s + 1 + std::size_t(c)]));
  }

  const bool ok = audit.mass_drift_rel <= 1e-12 && worst_site <= 1e-13;
  std::ostringstream os;
  os << "mass drift " << fmt(audit.mass_drift_rel)
     << " over 1000 steps with the stable two-rate preset (<= 1e-12); collide "
     << "conserved-moment deviation " << fmt(worst_site)
     << " with the tuned fourth-order set (<= 1e-13)";
  detail = os.str();
  return ok;
}

// --- criterion 8 -----------------------------------------------------------

bool criterion_sphere(std::string& detail, int threads) {
  const MomentMatrix M = build_moment_matrix();
  const SchemeParameters quartic = canonical_quartic().scheme();
  const SchemeParameters usual = usual_preset(0.039);

  SphereConfig cfg;
  cfg.n = 48;
  cfg.radius = 23.0;
  cfg.period = 10.0;
  cfg.amplitude = 1e-4;
  cfg.steps = 40;
  cfg.threads = threads;

  // Constant-density wall: the rest state must be a fixed point.
  SphereConfig steady_cfg = cfg;
  steady_cfg.amplitude = 0.0;
  const SphereResult steady = run_sphere(M, quartic, steady_cfg);
  double steady_dev = 0.0;
  for (const auto& [r, rho] : steady.scatter) steady_dev = std::max(steady_dev, std::abs(rho - kRho0));

  const SphereResult rq = run_sphere(M, quartic, cfg);
  const SphereResult ru = run_sphere(M, usual, cfg);

  const bool ok = steady_dev <= 1e-13 && rq.isotropy_metric <= ru.isotropy_metric;
  std::ostringstream os;
  os << "steady-state deviation " << fmt(steady_dev) << " (<= 1e-13); isotropy metric "
     << fmt(rq.isotropy_metric) << " (quartic) vs " << fmt(ru.isotropy_metric)
     << " (two-rate preset), quartic must not exceed";
  if (rq.wavefront_reached_center) os << "; wavefront reached center (expected at this scale)";
  detail = os.str();
  return ok;
}

// --- criterion 9 -----------------------------------------------------------

bool criterion_eigensolver(std::string& detail, int) {
  std::mt19937_64 rng(987654321);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst_match = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    ComplexMatrix A(6);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) A.at(i, j) = std::complex<double>(u(rng), u(rng));
    EigenDecomposition d = eigen_decompose(A);
    const std::vector<std::complex<double>> roots = polynomial_roots(characteristic_polynomial(A));
    std::vector<bool> used(roots.size(), false);
    for (const auto& z : d.values) {
      double best = 1e300;
      std::size_t bidx = 0;
      for (std::size_t i = 0; i < roots.size(); ++i) {
        if (used[i]) continue;
        const double dist = std::abs(z - roots[i]);
        if (dist < best) {
          best = dist;
          bidx = i;
        }
      }
      used[bidx] = true;
      worst_match = std::max(worst_match, best);
    }
  }

  const MomentMatrix M = build_moment_matrix();
  const std::vector<double> ks = log_spaced_wavenumbers(kDefaultKMin, kDefaultKMax, kDefaultKCount);
  const DispersionScan sq =
      hydrodynamic_branches(M, canonical_quartic().scheme(), {1.0, 0.0, 0.0}, ks);
  const DispersionScan su = hydrodynamic_branches(M, usual_preset(0.039), {1.0, 0.0, 0.0}, ks);
  const double worst_backward = std::max(sq.max_backward_error, su.max_backward_error);

  const bool ok = worst_match <= 1e-9 && worst_backward <= 1e-12;
  std::ostringstream os;
  os << "worst oracle mismatch " << fmt(worst_match) << " over 100 random 6x6 (<= 1e-9); "
     << "worst dispersion-scan backward error " << fmt(worst_backward) << " (<= 1e-12)";
  detail = os.str();
  return ok;
}

struct Criterion {
  int id;
  const char* name;
  bool (*run)(std::string& detail, int threads);
};

constexpr Criterion kCriteria[] = {
    {1, "quartic parameter reproduction", criterion_quartic_values},
    {2, "transport coefficients", criterion_transport},
    {3, "moment matrix exactness", criterion_moment_matrix},
    {4, "collision spectrum at k = 0", criterion_collision_spectrum},
    {5, "dispersion accuracy orders", criterion_accuracy_orders},
    {6, "simulator/spectral oracle equivalence", criterion_oracle_equivalence},
    {7, "conservation", criterion_conservation},
    {8, "pulsating sphere isotropy", criterion_sphere},
    {9, "eigensolver validation", criterion_eigensolver},
};

}  // namespace

int acceptance_criterion_count() { return int(std::size(kCriteria)); }

std::vector<CriterionResult> run_acceptance(const std::vector<int>& only, int threads) {
  std::vector<CriterionResult> results;
  for (const Criterion& c : kCriteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    CriterionResult r;
    r.id = c.id;
    r.name = c.name;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      r.pass = c.run(r.detail, threads);
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    const auto t1 = std::chrono::steady_clock::now();
    r.seconds = std::chrono::duration<double>(t1 - t0).count();
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace lba
