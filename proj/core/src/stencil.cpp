#include "lba/stencil.hpp"

#include <ostream>

namespace lba {

VelocitySet build_velocities() {
  VelocitySet vs{};
  int j = 0;
  for (int ex = -1; ex <= 1; ++ex)
    for (int ey = -1; ey <= 1; ++ey)
      for (int ez = -1; ez <= 1; ++ez) vs.velocities[j++] = {ex, ey, ez};
  for (j = 0; j < 27; ++j) vs.opposite[j] = 26 - j;  // lexicographic order negates under 26-j
  return vs;
}

const std::array<const char*, 27>& moment_names() {
  static const std::array<const char*, 27> names = {
      "rho", "qx",   "qy",   "qz",   "e",    "XX",   "WW",   "XY",   "YZ",
      "ZX",  "phix", "phiy", "phiz", "psix", "psiy", "psiz", "eps",  "e3",
      "XXe", "WWe",  "XYe",  "YZe",  "ZXe",  "taux", "tauy", "tauz", "XYZ"};
  return names;
}

RawMomentMatrix build_raw_moments(const VelocitySet& vs) {
  const VelocitySet ref = build_velocities();
  if (vs.velocities != ref.velocities || vs.opposite != ref.opposite)
    throw std::invalid_argument("build_raw_moments: not the D3Q27 velocity set in canonical order");

  RawMomentMatrix raw;
  const Rational half(1, 2);
  for (int j = 0; j < 27; ++j) {
    const auto& v = vs.velocities[j];
    const long vx = v[0], vy = v[1], vz = v[2];
    const long e2 = vx * vx + vy * vy + vz * vz;
    auto& col = raw.rows;
    col[0][j] = 1;
    col[1][j] = vx;
    col[2][j] = vy;
    col[3][j] = vz;
    col[4][j] = e2;
    col[5][j] = 2 * vx * vx - vy * vy - vz * vz;
    col[6][j] = vy * vy - vz * vz;
    col[7][j] = vx * vy;
    col[8][j] = vy * vz;
    col[9][j] = vz * vx;
    col[10][j] = 3 * e2 * vx;
    col[11][j] = 3 * e2 * vy;
    col[12][j] = 3 * e2 * vz;
    col[13][j] = 9 * half * e2 * e2 * vx;
    col[14][j] = 9 * half * e2 * e2 * vy;
    col[15][j] = 9 * half * e2 * e2 * vz;
    col[16][j] = 3 * half * e2 * e2;
    col[17][j] = 9 * half * e2 * e2 * e2;
    col[18][j] = 3 * (2 * vx * vx - vy * vy - vz * vz) * e2;
    col[19][j] = 3 * (vy * vy - vz * vz) * e2;
    col[20][j] = 3 * vx * vy * e2;
    col[21][j] = 3 * vy * vz * e2;
    col[22][j] = 3 * vz * vx * e2;
    col[23][j] = vx * (vy * vy - vz * vz);
    col[24][j] = vy * (vz * vz - vx * vx);
    col[25][j] = vz * (vx * vx - vy * vy);
    col[26][j] = vx * vy * vz;
  }
  return raw;
}

namespace {

Rational dot(const std::array<Rational, 27>& a, const std::array<Rational, 27>& b) {
  Rational s = 0;
  for (int j = 0; j < 27; ++j) s += a[j] * b[j];
  return s;
}

}  // namespace

OrthogonalMatrix orthogonalize(const RawMomentMatrix& raw) {
  std::array<std::array<Rational, 27>, 27> work = raw.rows;

  // The conserved rows are left untouched; verify they are already orthogonal.
  for (int i = 0; i < 4; ++i)
    for (int l = 0; l < i; ++l)
      if (dot(work[i], work[l]) != 0)
        throw OrthogonalizationError("orthogonalize: conserved rows not orthogonal");

  for (int i = 4; i < 27; ++i) {
    for (int l = 0; l < i; ++l) {
      Rational g = dot(raw.rows[i], work[l]) / dot(work[l], work[l]);
      if (g == 0) continue;
      for (int j = 0; j < 27; ++j) work[i][j] -= g * work[l][j];
    }
    bool zero = true;
    for (int j = 0; j < 27; ++j)
      if (work[i][j] != 0) {
        zero = false;
        break;
      }
    if (zero)
      throw OrthogonalizationError("orthogonalize: row " + std::string(moment_names()[i]) +
                                   " vanished (linearly dependent input)");
  }

  OrthogonalMatrix out{};
  for (int i = 0; i < 27; ++i) {
    long norm = 0;
    for (int j = 0; j < 27; ++j) {
      if (work[i][j].get_den() != 1)
        throw OrthogonalizationError("orthogonalize: non-integer entry " +
                                     to_fraction_string(work[i][j]) + " in row " +
                                     moment_names()[i]);
      long v = work[i][j].get_num().get_si();
      out.rows[i][j] = v;
      norm += v * v;
    }
    out.row_norms[i] = norm;
  }
  return out;
}

MomentMatrix invert(const OrthogonalMatrix& m) {
  MomentMatrix out{};
  out.rows = m.rows;
  out.row_norms = m.row_norms;
  for (int i = 0; i < 27; ++i)
    if (m.row_norms[i] == 0) throw OrthogonalizationError("invert: zero row norm");
  for (int j = 0; j < 27; ++j)
    for (int i = 0; i < 27; ++i) {
      Rational entry(m.rows[i][j], m.row_norms[i]);
      entry.canonicalize();
      out.inverse[j][i] = entry;
    }
  for (int i = 0; i < 27; ++i)
    for (int j = 0; j < 27; ++j) {
      out.rows_d[i][j] = static_cast<double>(m.rows[i][j]);
      out.inverse_d[i][j] = out.inverse[i][j].get_d();
    }
  return out;
}

MomentMatrix build_moment_matrix() {
  return invert(orthogonalize(build_raw_moments(build_velocities())));
}

void write_raw_csv(std::ostream& os, const RawMomentMatrix& raw) {
  os << "moment";
  for (int j = 0; j < 27; ++j) os << ",v" << j;
  os << "\n";
  for (int i = 0; i < 27; ++i) {
    os << moment_names()[i];
    for (int j = 0; j < 27; ++j) os << "," << to_fraction_string(raw.rows[i][j]);
    os << "\n";
  }
}

void write_matrix_csv(std::ostream& os, const MomentMatrix& m) {
  os << "moment";
  for (int j = 0; j < 27; ++j) os << ",v" << j;
  os << "\n";
  for (int i = 0; i < 27; ++i) {
    os << moment_names()[i];
    for (int j = 0; j < 27; ++j) os << "," << m.rows[i][j];
    os << "\n";
  }
}

void write_norms_csv(std::ostream& os, const MomentMatrix& m) {
  os << "moment,row_norm\n";
  for (int i = 0; i < 27; ++i) os << moment_names()[i] << "," << m.row_norms[i] << "\n";
}

void write_inverse_csv(std::ostream& os, const MomentMatrix& m) {
  os << "velocity";
  for (int i = 0; i < 27; ++i) os << "," << moment_names()[i];
  os << "\n";
  for (int j = 0; j < 27; ++j) {
    os << "v" << j;
    for (int i = 0; i < 27; ++i) os << "," << to_fraction_string(m.inverse[j][i]);
    os << "\n";
  }
}

}  // namespace lba
