#include "lba/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "lba/text_format.hpp"

namespace lba {

namespace {

using Complex = std::complex<double>;

RealMatrix multiply(const RealMatrix& A, const RealMatrix& B) {
  RealMatrix R(A.n);
  for (int i = 0; i < A.n; ++i)
    for (int t = 0; t < A.n; ++t) {
      const double v = A.at(i, t);
      if (v == 0.0) continue;
      for (int j = 0; j < A.n; ++j) R.at(i, j) += v * B.at(t, j);
    }
  return R;
}

double overlap(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  Complex s(0.0, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return std::abs(s);
}

std::string format_k(double k) { return format_double(k); }

}  // namespace

RealMatrix RealMatrix::identity(int size) {
  RealMatrix m(size);
  for (int i = 0; i < size; ++i) m.at(i, i) = 1.0;
  return m;
}

RealMatrix collision_update_matrix(const MomentMatrix& M, const SchemeParameters& p) {
  const int n = 27;
  const std::array<double, 27> s = rate_vector(p.rates);

  // Moment-space update N: conserved rows are identity; row k >= 4 keeps
  // (1 - s_k) of the moment plus s_k times its equilibrium, which is linear
  // in the conserved moments.
  RealMatrix N = RealMatrix::identity(n);
  for (int k = 4; k < n; ++k) N.at(k, k) = 1.0 - s[std::size_t(k)];
  N.at(4, 0) += s[4] * p.eq.theta;
  for (int a = 0; a < 3; ++a) {
    N.at(10 + a, 1 + a) += s[std::size_t(10 + a)] * p.eq.c1;
    N.at(13 + a, 1 + a) += s[std::size_t(13 + a)] * p.eq.c2;
    N.at(23 + a, 1 + a) += s[std::size_t(23 + a)] * p.eq.c3;
  }
  N.at(16, 0) += s[16] * p.eq.beta;
  N.at(17, 0) += s[17] * p.eq.xi;

  RealMatrix Minv(n), Mrows(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Minv.at(i, j) = M.inverse_d[std::size_t(i)][std::size_t(j)];
      Mrows.at(i, j) = M.rows_d[std::size_t(i)][std::size_t(j)];
    }
  return multiply(Minv, multiply(N, Mrows));
}

std::array<double, 27> collision_spectrum_reference(const SchemeParameters& p) {
  const std::array<double, 27> s = rate_vector(p.rates);
  std::array<double, 27> out{};
  for (int k = 0; k < 27; ++k) out[std::size_t(k)] = 1.0 - s[std::size_t(k)];
  std::sort(out.begin(), out.end());
  return out;
}

ComplexMatrix amplification_matrix(const RealMatrix& C, const VelocitySet& vs,
                                   const std::array<double, 3>& k) {
  if (C.n != VelocitySet::count)
    throw std::invalid_argument("amplification_matrix: collision matrix must be 27x27");
  ComplexMatrix A(C.n);
  for (int j = 0; j < C.n; ++j) {
    const auto& v = vs.velocities[std::size_t(j)];
    const double phase = k[0] * v[0] + k[1] * v[1] + k[2] * v[2];
    const Complex t = std::polar(1.0, phase);
    for (int l = 0; l < C.n; ++l) A.at(j, l) = t * C.at(j, l);
  }
  return A;
}

const char* branch_name(Branch b) {
  switch (b) {
    case Branch::Shear0:
      return "shear0";
    case Branch::Shear1:
      return "shear1";
    case Branch::AcousticPlus:
      return "acoustic_plus";
    case Branch::AcousticMinus:
      return "acoustic_minus";
  }
  return "unknown";
}

std::vector<double> log_spaced_wavenumbers(double kmin, double kmax, int count) {
  if (!(kmin > 0.0) || !(kmax > kmin) || count < 2)
    throw std::invalid_argument("log_spaced_wavenumbers: need 0 < kmin < kmax, count >= 2");
  std::vector<double> out(static_cast<std::size_t>(count));
  const double ratio = std::log(kmax / kmin);
  for (int i = 0; i < count; ++i)
    out[std::size_t(i)] = kmin * std::exp(ratio * double(i) / double(count - 1));
  out.front() = kmin;
  out.back() = kmax;
  return out;
}

DispersionScan hydrodynamic_branches(const MomentMatrix& M, const SchemeParameters& p,
                                     std::array<double, 3> direction,
                                     const std::vector<double>& kmags, double lambda,
                                     double dx) {
  const double dirnorm = std::sqrt(direction[0] * direction[0] + direction[1] * direction[1] +
                                   direction[2] * direction[2]);
  if (!(dirnorm > 0.0) || !std::isfinite(dirnorm))
    throw std::invalid_argument("hydrodynamic_branches: direction must be a nonzero vector");
  for (double& c : direction) c /= dirnorm;

  std::vector<double> ks = kmags;
  std::sort(ks.begin(), ks.end());
  if (ks.size() < 2) throw std::invalid_argument("hydrodynamic_branches: need at least 2 wavenumbers");
  for (double k : ks)
    if (!(k > 0.0) || !std::isfinite(k))
      throw std::invalid_argument("hydrodynamic_branches: wavenumbers must be positive");

  const VelocitySet vs = build_velocities();
  const RealMatrix C = collision_update_matrix(M, p);
  const TransportCoefficients tc =
      transport(p.eq.c0, sigma_from_rate(p.rates.s_e), sigma_from_rate(p.rates.s_x), lambda, dx);
  const double dt = dx / lambda;

  DispersionScan scan;
  scan.direction = direction;
  scan.kmags = ks;
  scan.viscosity = tc.nu;
  scan.sound_speed = p.eq.c0 * lambda;
  scan.sound_damping = tc.gamma;

  // Orthonormal basis of the conserved subspace in population space: the
  // first four columns of M^{-1} (mutually orthogonal by construction).
  std::array<std::vector<Complex>, 4> conserved;
  for (int i = 0; i < 4; ++i) {
    std::vector<Complex>& u = conserved[std::size_t(i)];
    u.resize(27);
    double nrm = 0.0;
    for (int j = 0; j < 27; ++j) {
      const double v = M.inverse_d[std::size_t(j)][std::size_t(i)];
      u[std::size_t(j)] = Complex(v, 0.0);
      nrm += v * v;
    }
    nrm = std::sqrt(nrm);
    for (auto& c : u) c /= nrm;
  }

  const auto decompose = [&](double kmag) {
    const std::array<double, 3> k = {kmag * direction[0], kmag * direction[1],
                                     kmag * direction[2]};
    return eigen_decompose(amplification_matrix(C, vs, k));
  };

  struct Tracked {
    std::vector<Complex> zs;                    // one per wavenumber
    std::vector<Complex> last_vector;           // for the overlap tie-break
  };
  std::array<Tracked, 4> tracks;

  // Identify the four hydrodynamic eigenvalues at the smallest wavenumber by
  // total overlap of the eigenvector with the conserved subspace.
  {
    EigenDecomposition d = decompose(ks.front());
    for (double be : d.backward_errors)
      scan.max_backward_error = std::max(scan.max_backward_error, be);
    const int n = int(d.values.size());
    std::vector<std::pair<double, int>> score(static_cast<std::size_t>(n));
    for (int idx = 0; idx < n; ++idx) {
      double s2 = 0.0;
      for (const auto& u : conserved) {
        const double o = overlap(u, d.vectors[std::size_t(idx)]);
        s2 += o * o;
      }
      score[std::size_t(idx)] = {s2, idx};
    }
    std::sort(score.begin(), score.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    if (score[3].first < 2.0 * score[4].first) {
      std::ostringstream w;
      w << "hydrodynamic identification ambiguous at k=" << format_k(ks.front())
        << ": 4th overlap " << score[3].first << " vs 5th " << score[4].first;
      scan.warnings.push_back(w.str());
    }
    for (int b = 0; b < 4; ++b) {
      const int idx = score[std::size_t(b)].second;
      tracks[std::size_t(b)].zs.push_back(d.values[std::size_t(idx)]);
      tracks[std::size_t(b)].last_vector = d.vectors[std::size_t(idx)];
    }
  }

  // Follow each branch by nearest-eigenvalue continuity; when the decision is
  // close, break the tie by eigenvector overlap and record a warning if the
  // tied candidates actually differ.
  for (std::size_t ik = 1; ik < ks.size(); ++ik) {
    EigenDecomposition d = decompose(ks[ik]);
    for (double be : d.backward_errors)
      scan.max_backward_error = std::max(scan.max_backward_error, be);
    const int n = int(d.values.size());
    std::vector<bool> used(std::size_t(n), false);
    for (auto& tr : tracks) {
      const Complex zprev = tr.zs.back();
      double dbest = std::numeric_limits<double>::infinity();
      for (int idx = 0; idx < n; ++idx)
        if (!used[std::size_t(idx)])
          dbest = std::min(dbest, std::abs(d.values[std::size_t(idx)] - zprev));
      std::vector<int> near;
      for (int idx = 0; idx < n; ++idx)
        if (!used[std::size_t(idx)] &&
            std::abs(d.values[std::size_t(idx)] - zprev) <= dbest + 1e-6)
          near.push_back(idx);
      int chosen = near.front();
      if (near.size() > 1) {
        double obest = -1.0;
        double zspread = 0.0;
        for (int idx : near) {
          const double o = overlap(tr.last_vector, d.vectors[std::size_t(idx)]);
          if (o > obest) {
            obest = o;
            chosen = idx;
          }
          zspread = std::max(zspread,
                             std::abs(d.values[std::size_t(idx)] - d.values[std::size_t(near.front())]));
        }
        if (zspread > 1e-9) {
          std::ostringstream w;
          w << "branch tracking ambiguous at k=" << format_k(ks[ik]) << ": " << near.size()
            << " candidates within 1e-6, spread " << zspread << "; resolved by eigenvector overlap";
          scan.warnings.push_back(w.str());
        }
      }
      used[std::size_t(chosen)] = true;
      tr.zs.push_back(d.values[std::size_t(chosen)]);
      tr.last_vector = d.vectors[std::size_t(chosen)];
    }
  }

  // Label the four tracks: the two with the largest mean |Im gamma| are the
  // acoustic pair (+/- by the sign of Im gamma at the largest wavenumber).
  std::array<std::vector<Complex>, 4> gammas;
  std::array<double, 4> mean_abs_im{};
  for (int t = 0; t < 4; ++t) {
    auto& g = gammas[std::size_t(t)];
    g.resize(ks.size());
    double acc = 0.0;
    for (std::size_t ik = 0; ik < ks.size(); ++ik) {
      g[ik] = -std::log(tracks[std::size_t(t)].zs[ik]) / dt;
      acc += std::abs(g[ik].imag());
    }
    mean_abs_im[std::size_t(t)] = acc / double(ks.size());
  }
  std::array<int, 4> order = {0, 1, 2, 3};
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return mean_abs_im[std::size_t(a)] < mean_abs_im[std::size_t(b)];
  });
  // order[0], order[1]: shear; order[2], order[3]: acoustic.
  int ac_plus = order[2];
  int ac_minus = order[3];
  if (gammas[std::size_t(ac_plus)].back().imag() < gammas[std::size_t(ac_minus)].back().imag())
    std::swap(ac_plus, ac_minus);
  if (!(gammas[std::size_t(ac_plus)].back().imag() > 0.0 &&
        gammas[std::size_t(ac_minus)].back().imag() < 0.0))
    scan.warnings.push_back("acoustic pair does not have opposite-signed frequencies");

  const std::array<int, 4> track_of_branch = {order[0], order[1], ac_plus, ac_minus};
  const double c0 = scan.sound_speed;
  const double gs = scan.sound_damping;
  const double nu = scan.viscosity;
  for (int b = 0; b < kBranchCount; ++b) {
    const int t = track_of_branch[std::size_t(b)];
    auto& out = scan.branches[std::size_t(b)];
    out.resize(ks.size());
    for (std::size_t ik = 0; ik < ks.size(); ++ik) {
      const double k = ks[ik];
      BranchSample s;
      s.kmag = k;
      s.z = tracks[std::size_t(t)].zs[ik];
      s.gamma = gammas[std::size_t(t)][ik];
      if (b <= 1) {
        s.gamma_ref = Complex(nu * k * k, 0.0);
      } else {
        const double omega = c0 * k * (1.0 - gs * gs * k * k / (2.0 * c0 * c0));
        s.gamma_ref = Complex(gs * k * k, b == 2 ? omega : -omega);
      }
      s.gamma_err = s.gamma - s.gamma_ref;
      out[ik] = s;
    }
  }
  return scan;
}

std::vector<double> branch_error_series(const DispersionScan& scan, Branch b,
                                        ErrorComponent component) {
  const auto& samples = scan.branches[std::size_t(int(b))];
  std::vector<double> out(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Complex e = samples[i].gamma_err;
    switch (component) {
      case ErrorComponent::Magnitude:
        out[i] = std::abs(e);
        break;
      case ErrorComponent::Real:
        out[i] = std::abs(e.real());
        break;
      case ErrorComponent::Imag:
        out[i] = std::abs(e.imag());
        break;
    }
  }
  return out;
}

PowerLawFit fit_power_law(const std::vector<double>& kmags, const std::vector<double>& err) {
  if (kmags.size() != err.size() || kmags.size() < 2)
    throw std::invalid_argument("fit_power_law: need matching series with >= 2 points");
  PowerLawFit fit;
  fit.count = int(kmags.size());
  fit.kmin = *std::min_element(kmags.begin(), kmags.end());
  fit.kmax = *std::max_element(kmags.begin(), kmags.end());
  const std::size_t n = kmags.size();
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(kmags[i] > 0.0))
      throw std::invalid_argument("fit_power_law: wavenumbers must be positive");
    double e = std::abs(err[i]);
    if (e < 1e-300) {
      e = 1e-300;
      fit.floored = true;
    }
    x[i] = std::log(kmags[i]);
    y[i] = std::log(e);
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double dn = double(n);
  const double det = dn * sxx - sx * sx;
  if (det == 0.0) throw std::invalid_argument("fit_power_law: degenerate abscissae");
  fit.slope = (dn * sxy - sx * sy) / det;
  fit.intercept = (sy * sxx - sx * sxy) / det;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss += r * r;
  }
  fit.residual_rms = std::sqrt(ss / dn);
  return fit;
}

void write_spectra_csv(std::ostream& os, const DispersionScan& scan) {
  os << "kmag,direction,branch,re_gamma,im_gamma,ref_re,ref_im,err_re,err_im\n";
  std::string dir = format_double(scan.direction[0]) + ":" + format_double(scan.direction[1]) +
                    ":" + format_double(scan.direction[2]);
  for (int b = 0; b < kBranchCount; ++b) {
    for (const BranchSample& s : scan.branches[std::size_t(b)]) {
      os << format_double(s.kmag) << ',' << dir << ',' << branch_name(Branch(b)) << ','
         << format_double(s.gamma.real()) << ',' << format_double(s.gamma.imag()) << ','
         << format_double(s.gamma_ref.real()) << ',' << format_double(s.gamma_ref.imag()) << ','
         << format_double(s.gamma_err.real()) << ',' << format_double(s.gamma_err.imag())
         << '\n';
    }
  }
}

}  // namespace lba
