#include <array>
#include <sstream>
#include <string>

#include "doctest.h"
#include "lba/stencil.hpp"

using lba::MomentMatrix;
using lba::Rational;
using lba::VelocitySet;

namespace {

/// Frozen copy of the full orthogonal matrix. Any change to the construction
/// that alters a single entry is a breaking change to the public contract.
constexpr long kGolden[27][27] = {
    {1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1},
    {-1, -1, -1, -1, -1, -1, -1, -1, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1},
    {-1, -1, -1, 0, 0, 0, 1, 1, 1, -1, -1, -1, 0, 0, 0, 1, 1, 1, -1, -1, -1, 0, 0, 0, 1, 1, 1},
    {-1, 0, 1, -1, 0, 1, -1, 0, 1, -1, 0, 1, -1, 0, 1, -1, 0, 1, -1, 0, 1, -1, 0, 1, -1, 0, 1},
    {1, 0, 1, 0, -1, 0, 1, 0, 1, 0, -1, 0, -1, -2, -1, 0, -1, 0, 1, 0, 1, 0, -1, 0, 1, 0, 1},
    {0, 1, 0, 1, 2, 1, 0, 1, 0, -2, -1, -2, -1, 0, -1, -2, -1, -2, 0, 1, 0, 1, 2, 1, 0, 1, 0},
    {0, 1, 0, -1, 0, -1, 0, 1, 0, 0, 1, 0, -1, 0, -1, 0, 1, 0, 0, 1, 0, -1, 0, -1, 0, 1, 0},
    {1, 1, 1, 0, 0, 0, -1, -1, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0, -1, -1, -1, 0, 0, 0, 1, 1, 1},
    {1, 0, -1, 0, 0, 0, -1, 0, 1, 1, 0, -1, 0, 0, 0, -1, 0, 1, 1, 0, -1, 0, 0, 0, -1, 0, 1},
    {1, 0, -1, 1, 0, -1, 1, 0, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0, -1, 0, 1, -1, 0, 1, -1, 0, 1},
    {-2, 1, -2, 1, 4, 1, -2, 1, -2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 2, -1, 2, -1, -4, -1, 2, -1, 2},
    {-2, 1, -2, 0, 0, 0, 2, -1, 2, 1, 4, 1, 0, 0, 0, -1, -4, -1, -2, 1, -2, 0, 0, 0, 2, -1, 2},
    {-2, 0, 2, 1, 0, -1, -2, 0, 2, 1, 0, -1, 4, 0, -4, 1, 0, -1, -2, 0, 2, 1, 0, -1, -2, 0, 2},
    {-1, 2, -1, 2, -4, 2, -1, 2, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, -2, 1, -2, 4, -2, 1, -2, 1},
    {-1, 2, -1, 0, 0, 0, 1, -2, 1, 2, -4, 2, 0, 0, 0, -2, 4, -2, -1, 2, -1, 0, 0, 0, 1, -2, 1},
    {-1, 0, 1, 2, 0, -2, -1, 0, 1, 2, 0, -2, -4, 0, 4, 2, 0, -2, -1, 0, 1, 2, 0, -2, -1, 0, 1},
    {1, -1, 1, -1, 0, -1, 1, -1, 1, -1, 0, -1, 0, 4, 0, -1, 0, -1, 1, -1, 1, -1, 0, -1, 1, -1, 1},
    {1, -2, 1, -2, 4, -2, 1, -2, 1, -2, 4, -2, 4, -8, 4, -2, 4, -2, 1, -2, 1, -2, 4, -2, 1, -2, 1},
    {0, 1, 0, 1, -4, 1, 0, 1, 0, -2, 2, -2, 2, 0, 2, -2, 2, -2, 0, 1, 0, 1, -4, 1, 0, 1, 0},
    {0, 1, 0, -1, 0, -1, 0, 1, 0, 0, -2, 0, 2, 0, 2, 0, -2, 0, 0, 1, 0, -1, 0, -1, 0, 1, 0},
    {1, -2, 1, 0, 0, 0, -1, 2, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0, -1, 2, -1, 0, 0, 0, 1, -2, 1},
    {1, 0, -1, 0, 0, 0, -1, 0, 1, -2, 0, 2, 0, 0, 0, 2, 0, -2, 1, 0, -1, 0, 0, 0, -1, 0, 1},
    {1, 0, -1, -2, 0, 2, 1, 0, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0, -1, 0, 1, 2, 0, -2, -1, 0, 1},
    {0, -1, 0, 1, 0, 1, 0, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, -1, 0, -1, 0, 1, 0},
    {0, 1, 0, 0, 0, 0, 0, -1, 0, -1, 0, -1, 0, 0, 0, 1, 0, 1, 0, 1, 0, 0, 0, 0, 0, -1, 0},
    {0, 0, 0, -1, 0, 1, 0, 0, 0, 1, 0, -1, 0, 0, 0, 1, 0, -1, 0, 0, 0, -1, 0, 1, 0, 0, 0},
    {-1, 0, 1, 0, 0, 0, 1, 0, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, -1, 0, 0, 0, -1, 0, 1}};

constexpr long kNorms[27] = {27, 18, 18, 18, 18, 36, 12, 12, 12, 12, 72, 72, 72, 72,
                             72, 72, 36, 216, 72, 24, 24, 24, 24, 8, 8, 8, 8};

}  // namespace

TEST_CASE("velocity set layout") {
  const VelocitySet vs = lba::build_velocities();
  CHECK(vs.count == 27);
  // Lexicographic index law and the rest velocity.
  for (int j = 0; j < 27; ++j) {
    const auto& v = vs.velocities[std::size_t(j)];
    CHECK((v[0] + 1) * 9 + (v[1] + 1) * 3 + (v[2] + 1) == j);
    for (int a = 0; a < 3; ++a) {
      CHECK(v[std::size_t(a)] >= -1);
      CHECK(v[std::size_t(a)] <= 1);
    }
    CHECK(vs.opposite[std::size_t(j)] == 26 - j);
    for (int a = 0; a < 3; ++a)
      CHECK(vs.velocities[std::size_t(vs.opposite[std::size_t(j)])][std::size_t(a)] ==
            -v[std::size_t(a)]);
  }
  CHECK(vs.velocities[13][0] == 0);
  CHECK(vs.velocities[13][1] == 0);
  CHECK(vs.velocities[13][2] == 0);
  // Component sums vanish by symmetry.
  for (int a = 0; a < 3; ++a) {
    int sum = 0;
    for (int j = 0; j < 27; ++j) sum += vs.velocities[std::size_t(j)][std::size_t(a)];
    CHECK(sum == 0);
  }
}

TEST_CASE("raw moment spot values") {
  const VelocitySet vs = lba::build_velocities();
  const lba::RawMomentMatrix raw = lba::build_raw_moments(vs);
  const int j111 = 2 * 9 + 2 * 3 + 2;  // (1,1,1)
  const int j100 = 2 * 9 + 1 * 3 + 1;  // (1,0,0)
  CHECK(raw.rows[4][std::size_t(j111)] == Rational(3));   // e = |v|^2
  CHECK(raw.rows[13][std::size_t(j100)] == Rational(9, 2));  // psix = (9/2)|v|^4 vx
  CHECK(raw.rows[10][std::size_t(j100)] == Rational(3));  // phix = 3|v|^2 vx
  CHECK(raw.rows[26][std::size_t(j111)] == Rational(1));  // XYZ = vx vy vz
  CHECK(raw.rows[5][std::size_t(j100)] == Rational(2));   // XX = 2vx^2 - vy^2 - vz^2
  CHECK(raw.rows[16][std::size_t(13)] == Rational(0));    // eps at rest, before GS
}

TEST_CASE("orthogonal matrix matches the frozen golden copy") {
  const MomentMatrix M = lba::build_moment_matrix();
  for (int i = 0; i < 27; ++i) {
    CAPTURE(i);
    for (int j = 0; j < 27; ++j) CHECK(M.rows[std::size_t(i)][std::size_t(j)] == kGolden[i][j]);
    CHECK(M.row_norms[std::size_t(i)] == kNorms[i]);
  }
}

TEST_CASE("gram-schmidt changes exactly the rows with lower-order overlap") {
  // The energy row picks up a -2 rho/... shift: raw e at (1,1,1) is 3, final is 1.
  const MomentMatrix M = lba::build_moment_matrix();
  const int j111 = 26;
  CHECK(M.rows[4][std::size_t(j111)] == 1);
  CHECK(M.rows[4][13] == -2);  // rest entry of the centered energy
}

TEST_CASE("rows are exactly orthogonal and norms are the squared lengths") {
  const MomentMatrix M = lba::build_moment_matrix();
  for (int i = 0; i < 27; ++i)
    for (int j = i; j < 27; ++j) {
      long long dot = 0;
      for (int t = 0; t < 27; ++t)
        dot += static_cast<long long>(M.rows[std::size_t(i)][std::size_t(t)]) *
               M.rows[std::size_t(j)][std::size_t(t)];
      if (i == j)
        CHECK(dot == M.row_norms[std::size_t(i)]);
      else
        CHECK(dot == 0);
    }
}

TEST_CASE("inverse is exact both ways") {
  const MomentMatrix M = lba::build_moment_matrix();
  for (int i = 0; i < 27; ++i)
    for (int j = 0; j < 27; ++j) {
      Rational mm = 0, mim = 0;
      for (int t = 0; t < 27; ++t) {
        mm += Rational(M.rows[std::size_t(i)][std::size_t(t)]) *
              M.inverse[std::size_t(t)][std::size_t(j)];
        mim += M.inverse[std::size_t(i)][std::size_t(t)] *
               Rational(M.rows[std::size_t(t)][std::size_t(j)]);
      }
      const Rational want(i == j ? 1 : 0);
      CHECK(mm == want);
      CHECK(mim == want);
    }
}

TEST_CASE("inverse density column is uniform 1/27") {
  const MomentMatrix M = lba::build_moment_matrix();
  for (int j = 0; j < 27; ++j) CHECK(M.inverse[std::size_t(j)][0] == Rational(1, 27));
}

TEST_CASE("double copies round the exact entries") {
  const MomentMatrix M = lba::build_moment_matrix();
  for (int i = 0; i < 27; ++i)
    for (int j = 0; j < 27; ++j) {
      CHECK(M.rows_d[std::size_t(i)][std::size_t(j)] ==
            static_cast<double>(M.rows[std::size_t(i)][std::size_t(j)]));
      CHECK(M.inverse_d[std::size_t(i)][std::size_t(j)] ==
            M.inverse[std::size_t(i)][std::size_t(j)].get_d());
    }
}

TEST_CASE("moment names are stable") {
  const auto& names = lba::moment_names();
  CHECK(std::string(names[0]) == "rho");
  CHECK(std::string(names[1]) == "qx");
  CHECK(std::string(names[4]) == "e");
  CHECK(std::string(names[13]) == "psix");
  CHECK(std::string(names[16]) == "eps");
  CHECK(std::string(names[17]) == "e3");
  CHECK(std::string(names[26]) == "XYZ");
}

TEST_CASE("moment/population round trip is exact for integer data") {
  const MomentMatrix M = lba::build_moment_matrix();
  // f_j = j+1 exactly representable; m = M f; f' = M^-1 m must equal f.
  std::array<Rational, 27> f, m, back;
  for (int j = 0; j < 27; ++j) f[std::size_t(j)] = j + 1;
  for (int i = 0; i < 27; ++i) {
    m[std::size_t(i)] = 0;
    for (int j = 0; j < 27; ++j)
      m[std::size_t(i)] += Rational(M.rows[std::size_t(i)][std::size_t(j)]) * f[std::size_t(j)];
  }
  for (int j = 0; j < 27; ++j) {
    back[std::size_t(j)] = 0;
    for (int i = 0; i < 27; ++i)
      back[std::size_t(j)] += M.inverse[std::size_t(j)][std::size_t(i)] * m[std::size_t(i)];
    CHECK(back[std::size_t(j)] == f[std::size_t(j)]);
  }
}

TEST_CASE("raw moments reject foreign velocity sets") {
  VelocitySet vs = lba::build_velocities();
  vs.velocities[0][0] = 2;
  CHECK_THROWS_AS(lba::build_raw_moments(vs), std::invalid_argument);
}

TEST_CASE("orthogonalization reports degenerate input") {
  const VelocitySet vs = lba::build_velocities();
  lba::RawMomentMatrix raw = lba::build_raw_moments(vs);
  raw.rows[5] = raw.rows[4];  // duplicate row cancels to zero under GS
  CHECK_THROWS_AS(lba::orthogonalize(raw), lba::OrthogonalizationError);
}

TEST_CASE("csv writers emit one header and 27 rows") {
  const MomentMatrix M = lba::build_moment_matrix();
  std::ostringstream os;
  lba::write_matrix_csv(os, M);
  int lines = 0;
  for (char c : os.str())
    if (c == '\n') ++lines;
  CHECK(lines == 28);
  CHECK(os.str().rfind("moment,", 0) == 0);

  std::ostringstream norms;
  lba::write_norms_csv(norms, M);
  CHECK(norms.str().find("rho,27") != std::string::npos);
  CHECK(norms.str().find("e3,216") != std::string::npos);

  std::ostringstream inv;
  lba::write_inverse_csv(inv, M);
  CHECK(inv.str().find("1/27") != std::string::npos);
}
