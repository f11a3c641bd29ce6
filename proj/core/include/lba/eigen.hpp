#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

namespace lba {

/// Dense row-major complex matrix (the spectra of interest are 27x27, but
/// the solver is size-generic so it can be validated on small random cases).
struct ComplexMatrix {
  int n = 0;
  std::vector<std::complex<double>> a;

  ComplexMatrix() = default;
  explicit ComplexMatrix(int size) : n(size), a(std::size_t(size) * size) {}
  std::complex<double>& at(int i, int j) { return a[std::size_t(i) * n + j]; }
  const std::complex<double>& at(int i, int j) const { return a[std::size_t(i) * n + j]; }
  static ComplexMatrix identity(int size);
};

struct EigenOptions {
  /// QR sweeps allowed per deflated eigenvalue before giving up.
  int max_sweeps = 80;
  bool want_vectors = true;
};

/// Full spectrum of a dense complex matrix.
struct EigenDecomposition {
  std::vector<std::complex<double>> values;
  /// Unit-norm eigenvectors, one per eigenvalue (empty if not requested).
  std::vector<std::vector<std::complex<double>>> vectors;
  /// ||A v - z v||_2 / ||A||_inf per pair with ||v||_2 = 1 (empty without
  /// vectors).
  std::vector<double> backward_errors;
};

/// QR iteration failed to deflate within the sweep budget. Never silent.
struct EigensolverNonConvergence : std::runtime_error {
  int remaining;
  explicit EigensolverNonConvergence(int rem)
      : std::runtime_error("eigensolver: QR iteration did not converge; " +
                           std::to_string(rem) + " eigenvalue(s) undeflated"),
        remaining(rem) {}
};

/// Dense complex eigensolver: Householder reduction to Hessenberg form, then
/// explicitly shifted QR with Wilkinson shifts (occasional exceptional shifts
/// to break cycles) accumulated into a full Schur decomposition A = Q T Q^H,
/// then eigenvectors by triangular back-substitution on T mapped back with Q.
/// Degenerate eigenvalues yield independent vectors as long as the matrix is
/// diagonalizable; a defective pair shows up as a large backward error.
EigenDecomposition eigen_decompose(const ComplexMatrix& A, const EigenOptions& opt = {});

/// Solves A x = b by partial-pivot LU. Throws std::domain_error on a
/// numerically singular pivot.
std::vector<std::complex<double>> solve_linear(const ComplexMatrix& A,
                                               const std::vector<std::complex<double>>& b);

/// Coefficients c of the monic characteristic polynomial,
/// p(z) = z^n + c[0] z^(n-1) + ... + c[n-1], by the trace recursion
/// (B_0 = I; c_k = -tr(A B_{k-1})/k; B_k = A B_{k-1} + c_k I).
/// Independent of the QR path; used as a validation oracle on small cases.
std::vector<std::complex<double>> characteristic_polynomial(const ComplexMatrix& A);

/// All roots of a monic polynomial with the coefficient convention above,
/// by simultaneous (Durand-Kerner) iteration from a deterministic start.
std::vector<std::complex<double>> polynomial_roots(const std::vector<std::complex<double>>& c,
                                                   int max_iterations = 2000,
                                                   double tolerance = 1e-13);

}  // namespace lba
