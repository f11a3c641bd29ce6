#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "lba/params.hpp"
#include "lba/stencil.hpp"

namespace lba {

enum class Site : std::uint8_t { Fluid = 0, Solid = 1 };

/// Wall density schedule rho_b(t) = rho0 + amplitude * sin(2*pi*t / period).
/// amplitude = 0 gives the constant schedule.
struct BoundarySchedule {
  double rho0 = kRho0;
  double amplitude = 0.0;
  double period = 1.0;
  double value(double t) const;
};

/// Double-buffered population field over a 3-D grid.
///
/// Populations are stored one site at a time (f[site*27 + j]); the site index
/// is (x*ny + y)*nz + z. Only one buffer is current; `step` writes the other
/// and swaps. In a fully periodic (unmasked) domain streaming wraps around;
/// once any site is solid the domain is masked and every fluid site must be
/// strictly interior (validated), with solid-adjacent links closed by the
/// anti-bounce-back pressure rule.
struct LatticeState {
  int nx = 0, ny = 0, nz = 0;
  std::array<std::vector<double>, 2> f;
  int current = 0;
  std::vector<std::uint8_t> mask;
  long time = 0;
  bool masked = false;
  BoundarySchedule boundary;
  double initial_mass = 0.0;
  std::array<double, 3> initial_momentum{};

  std::size_t site_count() const { return std::size_t(nx) * ny * nz; }
  std::size_t site_index(int x, int y, int z) const {
    return (std::size_t(x) * ny + y) * std::size_t(nz) + z;
  }
  double* site_f(std::size_t site) { return f[current].data() + 27 * site; }
  const double* site_f(std::size_t site) const { return f[current].data() + 27 * site; }
  bool fluid(std::size_t site) const { return mask[site] == 0; }
};

/// Fully periodic all-fluid lattice with zeroed populations.
LatticeState make_lattice(int nx, int ny, int nz);

/// Classifies every site through `classify` and validates the result: in a
/// masked domain a fluid site on the domain edge has no wraparound and no
/// wall to close its links, so it is an error (std::invalid_argument).
void set_mask(LatticeState& state, const std::function<Site(int, int, int)>& classify);

/// The moment-space equilibrium, linear in (rho, q): conserved entries carry
/// (rho, q) themselves; e = theta*rho, eps = beta*rho, e3 = xi*rho;
/// phi = c1*q, psi = c2*q, tau = c3*q; all tensor moments vanish.
std::array<double, 27> equilibrium_moments(double rho, const std::array<double, 3>& q,
                                           const EquilibriumCoefficients& eq);

/// Populations of the rest-state equilibrium at unit density: w = M^-1 m_eq(1, 0).
/// f_eq(rho, 0) = w * rho by linearity.
std::array<double, 27> rest_equilibrium_populations(const MomentMatrix& M,
                                                    const EquilibriumCoefficients& eq);

/// m*_k = m_k + s_k (m_eq_k - m_k), with s = rate_vector(...) zero on the
/// conserved entries.
std::array<double, 27> relax(const std::array<double, 27>& m, const std::array<double, 27>& m_eq,
                             const std::array<double, 27>& s);

/// Sets every fluid site to the equilibrium populations of the given
/// macroscopic fields and records the initial mass/momentum totals
/// (fixed-order sums) for later drift audits. Resets time to 0.
void initialize_equilibrium(LatticeState& state, const MomentMatrix& M,
                            const EquilibriumCoefficients& eq,
                            const std::function<double(int, int, int)>& rho,
                            const std::function<std::array<double, 3>(int, int, int)>& q);

/// Moment-space relaxation at every fluid site, in place on the current
/// buffer. Parallel over site ranges; bitwise deterministic for any thread
/// count (sites are independent).
void collide(LatticeState& state, const MomentMatrix& M, const SchemeParameters& params,
             int threads = 1);

/// Pull streaming of the post-collision populations into the other buffer:
/// f_j(x, t+dt) = f*_j(x - v_j dt, t), wrapping periodically. Does not swap;
/// links whose upstream site is solid are left for apply_boundaries. Solid
/// sites hold zeros.
void stream(LatticeState& state, int threads = 1);

/// Anti-bounce-back pressure condition, completing the links stream left
/// open: for a fluid site x whose upstream neighbour along j is solid,
///   f_j(x, t+dt) = -f*_jbar(x, t) + 2 w_j rho_b(t),
/// with jbar the opposite direction and w the rest equilibrium populations.
/// A constant schedule at the initial density therefore preserves the
/// uniform rest state.
void apply_boundaries(LatticeState& state, const MomentMatrix& M, const SchemeParameters& params);

/// One full update: collide, stream, boundaries, buffer swap, time increment.
void step(LatticeState& state, const MomentMatrix& M, const SchemeParameters& params,
          int threads = 1);

/// Density and momentum of one site of the current buffer.
void site_density_momentum(const LatticeState& state, std::size_t site, double& rho,
                           std::array<double, 3>& q);

/// Per-site fields as CSV ("x,y,z,rho,qx,qy,qz", shortest round-trip floats).
void write_field_csv(std::ostream& os, const LatticeState& state);

/// Compact binary dump: ASCII magic "LBAF" + version, shape, and step counter
/// in the header, then rho,qx,qy,qz as little-endian 64-bit reals per site in
/// the same order as the CSV.
void write_field_binary(std::ostream& os, const LatticeState& state);

}  // namespace lba
