#pragma once

#include <array>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "lba/rational.hpp"

namespace lba {

/// The 27 discrete velocities of the D3Q27 stencil in lattice units
/// (components in {-1, 0, +1}).
///
/// Index order is lexicographic in (ex, ey, ez) from -1 to +1, so
/// j = (ex+1)*9 + (ey+1)*3 + (ez+1); the rest velocity is j = 13 and the
/// opposite direction is always 26 - j. This order is part of the public
/// contract and stable across versions.
struct VelocitySet {
  static constexpr int dimension = 3;
  static constexpr int count = 27;
  std::array<std::array<int, 3>, 27> velocities;
  std::array<int, 27> opposite;
};

VelocitySet build_velocities();

/// Moment row names, in the fixed moment order used everywhere in the library:
/// rho, qx, qy, qz, e, XX, WW, XY, YZ, ZX, phix..z, psix..z, eps, e3,
/// XXe, WWe, XYe, YZe, ZXe, taux..z, XYZ.
const std::array<const char*, 27>& moment_names();

/// Raw (non-orthogonal) moment matrix. Row k gives moment m_k = sum_j M[k][j] f_j.
///
/// Rows, in order: density; momentum components; kinetic energy e = |v|^2;
/// diagonal second-order tensors XX = 2vx^2-vy^2-vz^2 and WW = vy^2-vz^2;
/// off-diagonal vx*vy, vy*vz, vz*vx; energy flux 3|v|^2 v_a; squared-energy
/// flux (9/2)|v|^4 v_a; energy square (3/2)|v|^4; energy cube (9/2)|v|^6;
/// energy-weighted tensors 3*XX*|v|^2, 3*WW*|v|^2, 3 v_a v_b |v|^2;
/// third-order pseudovector tau_a = v_a((v_{a+1})^2 - (v_{a-1})^2) with
/// cyclic indices on (x,y,z); and the fully antisymmetric vx*vy*vz.
///
/// The (9/2) and (3/2) prefactors make some entries half-integers, so rows
/// are carried as exact rationals; integrality holds only after
/// orthogonalization.
struct RawMomentMatrix {
  std::array<std::array<Rational, 27>, 27> rows;
};

/// Builds the raw moment rows for the D3Q27 set. Throws std::invalid_argument
/// for any other velocity set: the row definitions are stencil-specific.
RawMomentMatrix build_raw_moments(const VelocitySet& vs);

struct OrthogonalizationError : std::runtime_error {
  explicit OrthogonalizationError(const std::string& what) : std::runtime_error(what) {}
};

/// Row-orthogonal integer moment matrix produced by Gram-Schmidt.
struct OrthogonalMatrix {
  std::array<std::array<long, 27>, 27> rows;
  std::array<long, 27> row_norms;  // d_i = sum_j rows[i][j]^2
};

/// Gram-Schmidt over the raw rows, exact rational arithmetic, starting at
/// row 4 (the four conserved rows are already mutually orthogonal; checked).
/// Each new row is the raw row minus its projections onto all earlier final
/// rows. Throws OrthogonalizationError if a final entry is not an integer or
/// a row cancels to zero (either signals an indexing or prefactor bug).
OrthogonalMatrix orthogonalize(const RawMomentMatrix& raw);

/// Orthogonal moment matrix plus its exact inverse and rounded double copies
/// for the floating-point kernels.
struct MomentMatrix {
  std::array<std::array<long, 27>, 27> rows;
  std::array<long, 27> row_norms;
  std::array<std::array<Rational, 27>, 27> inverse;  // M^-1 = M^T diag(1/d_i)
  std::array<std::array<double, 27>, 27> rows_d;
  std::array<std::array<double, 27>, 27> inverse_d;
};

/// Exact inverse via M^-1 = M^T diag(1/d_i). Throws OrthogonalizationError on
/// a zero row norm.
MomentMatrix invert(const OrthogonalMatrix& m);

/// build_velocities -> build_raw_moments -> orthogonalize -> invert.
MomentMatrix build_moment_matrix();

/// CSV dumps for inspection and golden-file tests. Non-integer entries are
/// written as exact "p/q" strings.
void write_raw_csv(std::ostream& os, const RawMomentMatrix& raw);
void write_matrix_csv(std::ostream& os, const MomentMatrix& m);
void write_norms_csv(std::ostream& os, const MomentMatrix& m);
void write_inverse_csv(std::ostream& os, const MomentMatrix& m);

}  // namespace lba
