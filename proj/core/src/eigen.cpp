#include "lba/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lba {

namespace {

using Complex = std::complex<double>;

double infinity_norm(const ComplexMatrix& A) {
  double best = 0.0;
  for (int i = 0; i < A.n; ++i) {
    double row = 0.0;
    for (int j = 0; j < A.n; ++j) row += std::abs(A.at(i, j));
    best = std::max(best, row);
  }
  return best;
}

/// Householder reduction to upper Hessenberg form, in place, accumulating the
/// unitary transform: on return A_input = Q H Q^H.
void reduce_to_hessenberg(ComplexMatrix& H, ComplexMatrix& Q) {
  const int n = H.n;
  std::vector<Complex> u(static_cast<std::size_t>(n));
  for (int k = 0; k + 2 < n; ++k) {
    double sigma = 0.0;
    for (int i = k + 1; i < n; ++i) sigma += std::norm(H.at(i, k));
    sigma = std::sqrt(sigma);
    if (sigma == 0.0) continue;
    const Complex alpha = H.at(k + 1, k);
    const double amag = std::abs(alpha);
    const Complex phase = amag > 0.0 ? alpha / amag : Complex(1.0, 0.0);
    // Reflect the column onto -phase*sigma*e1; the sign choice avoids
    // cancellation in the leading component.
    u[std::size_t(k + 1)] = alpha + phase * sigma;
    for (int i = k + 2; i < n; ++i) u[std::size_t(i)] = H.at(i, k);
    double unorm = 0.0;
    for (int i = k + 1; i < n; ++i) unorm += std::norm(u[std::size_t(i)]);
    unorm = std::sqrt(unorm);
    if (unorm == 0.0) continue;
    for (int i = k + 1; i < n; ++i) u[std::size_t(i)] /= unorm;
    // Rows: H <- (I - 2 u u^H) H on the trailing block.
    for (int j = k; j < n; ++j) {
      Complex t(0.0, 0.0);
      for (int i = k + 1; i < n; ++i) t += std::conj(u[std::size_t(i)]) * H.at(i, j);
      t *= 2.0;
      for (int i = k + 1; i < n; ++i) H.at(i, j) -= u[std::size_t(i)] * t;
    }
    // Columns: H <- H (I - 2 u u^H) on every row, and likewise Q <- Q (I - 2 u u^H).
    for (int i = 0; i < n; ++i) {
      Complex t(0.0, 0.0);
      for (int j = k + 1; j < n; ++j) t += H.at(i, j) * u[std::size_t(j)];
      t *= 2.0;
      for (int j = k + 1; j < n; ++j) H.at(i, j) -= t * std::conj(u[std::size_t(j)]);
    }
    for (int i = 0; i < n; ++i) {
      Complex t(0.0, 0.0);
      for (int j = k + 1; j < n; ++j) t += Q.at(i, j) * u[std::size_t(j)];
      t *= 2.0;
      for (int j = k + 1; j < n; ++j) Q.at(i, j) -= t * std::conj(u[std::size_t(j)]);
    }
    // The reflection zeroes these entries analytically; do it exactly.
    for (int i = k + 2; i < n; ++i) H.at(i, k) = Complex(0.0, 0.0);
  }
}

struct Givens {
  double c = 1.0;   // real by construction
  Complex s{0.0, 0.0};
};

/// Rotation with G [a; b] = [r; 0], G = [[c, s], [-conj(s), c]], c real.
Givens make_givens(Complex a, Complex b) {
  Givens g;
  const double aa = std::abs(a);
  const double bb = std::abs(b);
  const double r = std::hypot(aa, bb);
  if (r == 0.0 || bb == 0.0) return g;  // identity
  if (aa == 0.0) {
    g.c = 0.0;
    g.s = std::conj(b) / bb;
    return g;
  }
  g.c = aa / r;
  g.s = (a / aa) * std::conj(b) / r;
  return g;
}

/// Eigenvalues of a complex 2x2 [[a, b], [c, d]]; the first returned value is
/// the one closer to d (the Wilkinson choice for the trailing block).
std::pair<Complex, Complex> eigenvalues_2x2(Complex a, Complex b, Complex c, Complex d) {
  const Complex tr = 0.5 * (a + d);
  const Complex det = a * d - b * c;
  const Complex disc = std::sqrt(tr * tr - det);
  const Complex l1 = tr + disc;
  const Complex l2 = tr - disc;
  if (std::abs(l1 - d) <= std::abs(l2 - d)) return {l1, l2};
  return {l2, l1};
}

/// Shifted QR iteration driving a Hessenberg matrix to upper triangular
/// (Schur) form, accumulating the rotations into Q so that the relation
/// A = Q H Q^H is maintained throughout. Fills `values` with the diagonal.
void hessenberg_qr(ComplexMatrix& H, ComplexMatrix& Q, std::vector<Complex>& values,
                   int max_sweeps) {
  const int n = H.n;
  values.assign(std::size_t(n), Complex(0.0, 0.0));
  const double eps = std::numeric_limits<double>::epsilon();
  const double hnorm = std::max(infinity_norm(H), 1e-300);
  std::vector<Givens> rot(static_cast<std::size_t>(n));

  int m = n - 1;
  int sweeps = 0;
  while (m >= 0) {
    // Find the top of the active block, deflating negligible subdiagonals.
    int l = m;
    while (l > 0) {
      double s = std::abs(H.at(l - 1, l - 1)) + std::abs(H.at(l, l));
      if (s == 0.0) s = hnorm;
      if (std::abs(H.at(l, l - 1)) <= eps * s) {
        H.at(l, l - 1) = Complex(0.0, 0.0);
        break;
      }
      --l;
    }
    if (l == m) {
      values[std::size_t(m)] = H.at(m, m);
      --m;
      sweeps = 0;
      continue;
    }
    if (sweeps >= max_sweeps) throw EigensolverNonConvergence(m + 1);

    Complex mu;
    if (sweeps > 0 && sweeps % 12 == 0) {
      // Exceptional shift to break potential cycles.
      mu = H.at(m, m) + Complex(0.75, 0.0) * std::abs(H.at(m, m - 1));
    } else {
      mu = eigenvalues_2x2(H.at(m - 1, m - 1), H.at(m - 1, m), H.at(m, m - 1), H.at(m, m))
               .first;
    }

    // Explicit single-shift step on the block: H - mu I = QR, then RQ + mu I.
    // Rotations act on full rows/columns so the off-block entries stay
    // consistent with the accumulated similarity.
    for (int i = l; i <= m; ++i) H.at(i, i) -= mu;
    for (int k = l; k < m; ++k) {
      const Givens g = make_givens(H.at(k, k), H.at(k + 1, k));
      rot[std::size_t(k)] = g;
      for (int j = k; j < n; ++j) {
        const Complex x = H.at(k, j);
        const Complex y = H.at(k + 1, j);
        H.at(k, j) = g.c * x + g.s * y;
        H.at(k + 1, j) = -std::conj(g.s) * x + g.c * y;
      }
    }
    for (int k = l; k < m; ++k) {
      const Givens g = rot[std::size_t(k)];
      for (int i = 0; i <= k + 1; ++i) {
        const Complex x = H.at(i, k);
        const Complex y = H.at(i, k + 1);
        H.at(i, k) = g.c * x + std::conj(g.s) * y;
        H.at(i, k + 1) = -g.s * x + g.c * y;
      }
      for (int i = 0; i < n; ++i) {
        const Complex x = Q.at(i, k);
        const Complex y = Q.at(i, k + 1);
        Q.at(i, k) = g.c * x + std::conj(g.s) * y;
        Q.at(i, k + 1) = -g.s * x + g.c * y;
      }
    }
    for (int i = l; i <= m; ++i) H.at(i, i) += mu;
    ++sweeps;
  }
}

/// Partial-pivot LU. With tiny > 0 a near-zero pivot is replaced by tiny.
struct LU {
  int n = 0;
  std::vector<Complex> a;  // packed L\U
  std::vector<int> perm;

  void factor(const ComplexMatrix& B, double tiny) {
    n = B.n;
    a = B.a;
    perm.resize(std::size_t(n));
    for (int i = 0; i < n; ++i) perm[std::size_t(i)] = i;
    for (int k = 0; k < n; ++k) {
      int piv = k;
      double best = std::abs(a[std::size_t(k) * n + k]);
      for (int i = k + 1; i < n; ++i) {
        const double v = std::abs(a[std::size_t(i) * n + k]);
        if (v > best) {
          best = v;
          piv = i;
        }
      }
      if (piv != k) {
        for (int j = 0; j < n; ++j)
          std::swap(a[std::size_t(piv) * n + j], a[std::size_t(k) * n + j]);
        std::swap(perm[std::size_t(piv)], perm[std::size_t(k)]);
      }
      Complex& pivot = a[std::size_t(k) * n + k];
      if (std::abs(pivot) < tiny) pivot = Complex(tiny, 0.0);
      for (int i = k + 1; i < n; ++i) {
        Complex& lik = a[std::size_t(i) * n + k];
        lik /= pivot;
        for (int j = k + 1; j < n; ++j)
          a[std::size_t(i) * n + j] -= lik * a[std::size_t(k) * n + j];
      }
    }
  }

  void solve(const std::vector<Complex>& b, std::vector<Complex>& x) const {
    x.resize(std::size_t(n));
    for (int i = 0; i < n; ++i) x[std::size_t(i)] = b[std::size_t(perm[std::size_t(i)])];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < i; ++j)
        x[std::size_t(i)] -= a[std::size_t(i) * n + j] * x[std::size_t(j)];
    for (int i = n - 1; i >= 0; --i) {
      for (int j = i + 1; j < n; ++j)
        x[std::size_t(i)] -= a[std::size_t(i) * n + j] * x[std::size_t(j)];
      x[std::size_t(i)] /= a[std::size_t(i) * n + i];
    }
  }
};

/// ||A v - z v||_2 for a unit vector v.
double residual_norm(const ComplexMatrix& A, const std::vector<Complex>& v, Complex z) {
  const int n = A.n;
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    Complex r = -z * v[std::size_t(i)];
    for (int j = 0; j < n; ++j) r += A.at(i, j) * v[std::size_t(j)];
    s += std::norm(r);
  }
  return std::sqrt(s);
}

}  // namespace

ComplexMatrix ComplexMatrix::identity(int size) {
  ComplexMatrix m(size);
  for (int i = 0; i < size; ++i) m.at(i, i) = Complex(1.0, 0.0);
  return m;
}

EigenDecomposition eigen_decompose(const ComplexMatrix& A, const EigenOptions& opt) {
  if (A.n <= 0 || A.a.size() != std::size_t(A.n) * std::size_t(A.n))
    throw std::invalid_argument("eigen_decompose: malformed matrix");
  const int n = A.n;

  EigenDecomposition out;
  ComplexMatrix T = A;
  ComplexMatrix Q = ComplexMatrix::identity(n);
  reduce_to_hessenberg(T, Q);
  hessenberg_qr(T, Q, out.values, opt.max_sweeps);
  if (!opt.want_vectors) return out;

  const double anorm = std::max(infinity_norm(A), 1e-300);
  const double eps = std::numeric_limits<double>::epsilon();
  // Floor for near-singular diagonal differences in the back-substitution;
  // keeps repeated eigenvalues from dividing by zero while staying small
  // enough not to perturb well-separated ones.
  const double smlnum = eps * anorm;

  out.vectors.assign(std::size_t(n), {});
  out.backward_errors.assign(std::size_t(n), 0.0);

  std::vector<Complex> x(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const Complex z = T.at(j, j);
    // Back-substitute (T - z I) x = 0 with x_j = 1, x_i = 0 for i > j.
    std::fill(x.begin(), x.end(), Complex(0.0, 0.0));
    x[std::size_t(j)] = Complex(1.0, 0.0);
    for (int i = j - 1; i >= 0; --i) {
      Complex num(0.0, 0.0);
      for (int k = i + 1; k <= j; ++k) num -= T.at(i, k) * x[std::size_t(k)];
      Complex den = T.at(i, i) - z;
      if (std::abs(den) < smlnum) den = Complex(smlnum, 0.0);
      x[std::size_t(i)] = num / den;
      // Guard against overflow from chained tiny denominators.
      const double mag = std::abs(x[std::size_t(i)]);
      if (mag > 1e200) {
        const double inv = 1.0 / mag;
        for (int k = i; k <= j; ++k) x[std::size_t(k)] *= inv;
      }
    }
    // Map back: v = Q x.
    std::vector<Complex> v(static_cast<std::size_t>(n), Complex(0.0, 0.0));
    for (int i = 0; i < n; ++i) {
      Complex s(0.0, 0.0);
      for (int k = 0; k <= j; ++k) s += Q.at(i, k) * x[std::size_t(k)];
      v[std::size_t(i)] = s;
    }
    double vnorm = 0.0;
    for (const Complex& c : v) vnorm += std::norm(c);
    vnorm = std::sqrt(vnorm);
    if (vnorm > 0.0)
      for (Complex& c : v) c /= vnorm;
    // Fix the arbitrary global phase so results are reproducible: make the
    // largest-magnitude component real and positive.
    int imax = 0;
    double vmax = 0.0;
    for (int i = 0; i < n; ++i) {
      const double mag = std::abs(v[std::size_t(i)]);
      if (mag > vmax) {
        vmax = mag;
        imax = i;
      }
    }
    if (vmax > 0.0) {
      const Complex phase = std::conj(v[std::size_t(imax)]) / vmax;
      for (Complex& c : v) c *= phase;
    }
    out.values[std::size_t(j)] = z;
    out.backward_errors[std::size_t(j)] = residual_norm(A, v, z) / anorm;
    out.vectors[std::size_t(j)] = std::move(v);
  }
  return out;
}

std::vector<Complex> solve_linear(const ComplexMatrix& A, const std::vector<Complex>& b) {
  if (A.n <= 0 || A.a.size() != std::size_t(A.n) * std::size_t(A.n) ||
      b.size() != std::size_t(A.n))
    throw std::invalid_argument("solve_linear: shape mismatch");
  const double anorm = std::max(infinity_norm(A), 1.0);
  LU lu;
  lu.factor(A, 0.0);
  for (int i = 0; i < A.n; ++i)
    if (std::abs(lu.a[std::size_t(i) * A.n + i]) <
        std::numeric_limits<double>::epsilon() * anorm * A.n)
      throw std::domain_error("solve_linear: matrix is numerically singular");
  std::vector<Complex> x;
  lu.solve(b, x);
  return x;
}

std::vector<Complex> characteristic_polynomial(const ComplexMatrix& A) {
  if (A.n <= 0 || A.a.size() != std::size_t(A.n) * std::size_t(A.n))
    throw std::invalid_argument("characteristic_polynomial: malformed matrix");
  const int n = A.n;
  std::vector<Complex> c(static_cast<std::size_t>(n));
  ComplexMatrix B = ComplexMatrix::identity(n);
  ComplexMatrix AB(n);
  for (int k = 1; k <= n; ++k) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Complex s(0.0, 0.0);
        for (int t = 0; t < n; ++t) s += A.at(i, t) * B.at(t, j);
        AB.at(i, j) = s;
      }
    Complex tr(0.0, 0.0);
    for (int i = 0; i < n; ++i) tr += AB.at(i, i);
    const Complex ck = -tr / double(k);
    c[std::size_t(k - 1)] = ck;
    B = AB;
    for (int i = 0; i < n; ++i) B.at(i, i) += ck;
  }
  return c;
}

std::vector<Complex> polynomial_roots(const std::vector<Complex>& c, int max_iterations,
                                      double tolerance) {
  const int n = int(c.size());
  std::vector<Complex> r(static_cast<std::size_t>(n));
  const Complex base(0.4, 0.9);
  Complex p(1.0, 0.0);
  for (int k = 0; k < n; ++k) {
    p *= base;
    r[std::size_t(k)] = p;
  }
  const auto eval = [&](Complex z) {
    Complex v(1.0, 0.0);
    for (int i = 0; i < n; ++i) v = v * z + c[std::size_t(i)];
    return v;
  };
  for (int iter = 0; iter < max_iterations; ++iter) {
    double move = 0.0;
    for (int k = 0; k < n; ++k) {
      Complex denom(1.0, 0.0);
      for (int j = 0; j < n; ++j)
        if (j != k) denom *= r[std::size_t(k)] - r[std::size_t(j)];
      if (std::abs(denom) == 0.0) {
        r[std::size_t(k)] += Complex(1e-12 * (k + 1), 1e-12);
        move = std::numeric_limits<double>::infinity();
        continue;
      }
      const Complex delta = eval(r[std::size_t(k)]) / denom;
      r[std::size_t(k)] -= delta;
      move = std::max(move, std::abs(delta) / std::max(1.0, std::abs(r[std::size_t(k)])));
    }
    if (move <= tolerance) break;
  }
  return r;
}

}  // namespace lba
