#pragma once

#include <array>
#include <complex>
#include <ostream>
#include <string>
#include <vector>

#include "lba/eigen.hpp"
#include "lba/params.hpp"
#include "lba/stencil.hpp"

namespace lba {

/// Dense row-major real matrix used for the population-space update maps.
struct RealMatrix {
  int n = 0;
  std::vector<double> a;

  RealMatrix() = default;
  explicit RealMatrix(int size) : n(size), a(std::size_t(size) * size, 0.0) {}
  double& at(int i, int j) { return a[std::size_t(i) * n + j]; }
  const double& at(int i, int j) const { return a[std::size_t(i) * n + j]; }
  static RealMatrix identity(int size);
};

/// One-collision update matrix C in population space, f* = C f, assembled as
/// M^{-1} N M where N acts in moment space: conserved moments pass through,
/// every other moment is relaxed toward its (linear) equilibrium with its
/// group rate.
RealMatrix collision_update_matrix(const MomentMatrix& M, const SchemeParameters& p);

/// The 27 exact eigenvalues the collision matrix must have, sorted ascending:
/// 1 (multiplicity 4, conserved) and 1 - s_g with each group's multiplicity.
std::array<double, 27> collision_spectrum_reference(const SchemeParameters& p);

/// Amplification matrix of one full step for a spatial mode exp(-i k.x)
/// (the harmonic-wave ansatz exp(i(w t - k.x))): A(k) = T(k) C with
/// T_jj = exp(+i k.v_j dt), the phase picked up by pull streaming along
/// velocity v_j. A(0) = C, and A(-k) is the entrywise conjugate of A(k).
ComplexMatrix amplification_matrix(const RealMatrix& C, const VelocitySet& vs,
                                   const std::array<double, 3>& k);

/// The four hydrodynamic branches of the dispersion scan.
enum class Branch : int { Shear0 = 0, Shear1 = 1, AcousticPlus = 2, AcousticMinus = 3 };
inline constexpr int kBranchCount = 4;
const char* branch_name(Branch b);

/// One tracked eigenvalue at one wavenumber.
struct BranchSample {
  double kmag = 0.0;
  std::complex<double> z;          ///< amplification-matrix eigenvalue
  std::complex<double> gamma;      ///< -log(z)/dt (principal branch)
  std::complex<double> gamma_ref;  ///< hydrodynamic reference at this k
  std::complex<double> gamma_err;  ///< gamma - gamma_ref
};

/// Dispersion scan along one direction: the two shear branches and the two
/// acoustic branches, each tracked by continuity from the smallest
/// wavenumber upward.
struct DispersionScan {
  std::array<double, 3> direction{};  ///< unit propagation direction
  std::vector<double> kmags;          ///< ascending |k|
  std::array<std::vector<BranchSample>, kBranchCount> branches;
  double viscosity = 0.0;      ///< nu entering the shear reference
  double sound_speed = 0.0;    ///< c0 entering the acoustic reference
  double sound_damping = 0.0;  ///< gamma entering the acoustic reference
  double max_backward_error = 0.0;
  std::vector<std::string> warnings;  ///< ambiguous tracking decisions, if any
};

/// Scans the amplification spectrum along `direction` at the given |k| values
/// (sorted internally). The four hydrodynamic eigenvalues are identified at
/// the smallest wavenumber by eigenvector overlap with the conserved-moment
/// subspace, then followed by nearest-eigenvalue continuity with eigenvector
/// overlap as tie-break; ambiguous choices are recorded in `warnings`.
/// The two branches with the largest mean |Im gamma| are labeled acoustic
/// (+/- by sign of Im), the remaining near-real pair shear.
DispersionScan hydrodynamic_branches(const MomentMatrix& M, const SchemeParameters& p,
                                     std::array<double, 3> direction,
                                     const std::vector<double>& kmags, double lambda = 1.0,
                                     double dx = 1.0);

/// Log-spaced wavenumber grid, ascending, endpoints included.
std::vector<double> log_spaced_wavenumbers(double kmin, double kmax, int count);

/// Default fit window used by the accuracy-order scans.
inline constexpr double kDefaultKMin = 6.283185307179586476925286766559 / 128.0;
inline constexpr double kDefaultKMax = 6.283185307179586476925286766559 / 16.0;
inline constexpr int kDefaultKCount = 16;

/// Which part of the complex branch error a fit should look at.
enum class ErrorComponent { Magnitude, Real, Imag };

std::vector<double> branch_error_series(const DispersionScan& scan, Branch b,
                                        ErrorComponent component);

/// Least-squares fit of log|err| against log k.
struct PowerLawFit {
  double slope = 0.0;
  double intercept = 0.0;     ///< in log space
  double residual_rms = 0.0;  ///< RMS of log-space residuals
  double kmin = 0.0;
  double kmax = 0.0;
  int count = 0;
  bool floored = false;  ///< some magnitudes were zero and got floored
};

PowerLawFit fit_power_law(const std::vector<double>& kmags, const std::vector<double>& err);

/// Writes a scan in long form:
/// kmag,direction,branch,re_gamma,im_gamma,ref_re,ref_im,err_re,err_im
/// with the direction encoded as colon-separated components ("1:0:0") so the
/// row stays valid CSV.
void write_spectra_csv(std::ostream& os, const DispersionScan& scan);

}  // namespace lba
