/// Microbenchmarks for the hot paths: the lattice update kernel, the
/// amplification-matrix eigensolve behind the dispersion scans, the exact
/// closed-form parameter evaluation, and the moment-matrix construction.

#include <benchmark/benchmark.h>

#include <array>
#include <cstddef>

#include "lba/eigen.hpp"
#include "lba/mrt_core.hpp"
#include "lba/params.hpp"
#include "lba/rational.hpp"
#include "lba/spectral.hpp"
#include "lba/stencil.hpp"

namespace {

const lba::MomentMatrix& moment_matrix() {
  static const lba::MomentMatrix M = lba::build_moment_matrix();
  return M;
}

lba::SchemeParameters tuned_scheme() {
  return lba::quartic_parameters(lba::rational_from_decimal("0.623538"),
                                 lba::rational_from_decimal("0.552"),
                                 lba::rational_from_decimal("0.039"))
      .scheme();
}

/// Exact construction of the orthogonal moment basis and its inverse.
void BM_BuildMomentMatrix(benchmark::State& state) {
  for (auto _ : state) {
    lba::MomentMatrix M = lba::build_moment_matrix();
    benchmark::DoNotOptimize(M.inverse_d[0][0]);
  }
}
BENCHMARK(BM_BuildMomentMatrix);

/// Exact rational evaluation of the closed-form fourth-order parameter set.
void BM_QuarticParameters(benchmark::State& state) {
  const lba::Rational c0 = lba::rational_from_decimal("0.623538");
  const lba::Rational se = lba::rational_from_decimal("0.552");
  const lba::Rational sx = lba::rational_from_decimal("0.039");
  for (auto _ : state) {
    lba::QuarticParameters q = lba::quartic_parameters(c0, se, sx);
    benchmark::DoNotOptimize(q.s_omega);
  }
}
BENCHMARK(BM_QuarticParameters);

/// One full lattice update (collide, stream, boundaries, swap) on an n^3
/// periodic box; args are {n, threads}. Throughput counter is site updates.
void BM_LatticeStep(benchmark::State& state) {
  const int n = int(state.range(0));
  const int threads = int(state.range(1));
  const lba::MomentMatrix& M = moment_matrix();
  const lba::SchemeParameters p = tuned_scheme();
  lba::LatticeState lat = lba::make_lattice(n, n, n);
  lba::initialize_equilibrium(
      lat, M, p.eq, [](int, int, int) { return 1.0; },
      [](int, int, int) { return std::array<double, 3>{0.0, 0.0, 0.0}; });
  for (auto _ : state) {
    lba::step(lat, M, p, threads);
    benchmark::DoNotOptimize(lat.site_f(0)[0]);
  }
  state.SetItemsProcessed(state.iterations() * long(lat.site_count()));
}
BENCHMARK(BM_LatticeStep)->ArgsProduct({{16, 32}, {1, 4}})->Unit(benchmark::kMillisecond);

/// Moment-space collision at a single site (the per-site kernel of collide).
void BM_SiteCollision(benchmark::State& state) {
  const lba::MomentMatrix& M = moment_matrix();
  const lba::SchemeParameters p = tuned_scheme();
  lba::LatticeState lat = lba::make_lattice(1, 1, 1);
  lba::initialize_equilibrium(
      lat, M, p.eq, [](int, int, int) { return 1.0 + 1e-4; },
      [](int, int, int) { return std::array<double, 3>{1e-5, 0.0, 0.0}; });
  for (auto _ : state) {
    lba::collide(lat, M, p, 1);
    benchmark::DoNotOptimize(lat.site_f(0)[0]);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SiteCollision);

/// Assembly of the 27x27 one-collision update matrix.
void BM_CollisionMatrixAssembly(benchmark::State& state) {
  const lba::MomentMatrix& M = moment_matrix();
  const lba::SchemeParameters p = tuned_scheme();
  for (auto _ : state) {
    lba::RealMatrix C = lba::collision_update_matrix(M, p);
    benchmark::DoNotOptimize(C.at(26, 26));
  }
}
BENCHMARK(BM_CollisionMatrixAssembly);

/// Full 27x27 complex eigensolve of the amplification matrix at one
/// wavevector, eigenvectors included (the inner loop of a dispersion scan).
void BM_AmplificationEigensolve(benchmark::State& state) {
  const lba::MomentMatrix& M = moment_matrix();
  const lba::SchemeParameters p = tuned_scheme();
  const lba::RealMatrix C = lba::collision_update_matrix(M, p);
  const lba::VelocitySet vs = lba::build_velocities();
  const std::array<double, 3> k{0.2, 0.0, 0.0};
  for (auto _ : state) {
    lba::ComplexMatrix A = lba::amplification_matrix(C, vs, k);
    lba::EigenDecomposition d = lba::eigen_decompose(A);
    benchmark::DoNotOptimize(d.values[0]);
  }
}
BENCHMARK(BM_AmplificationEigensolve)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
