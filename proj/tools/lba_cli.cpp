/// Command-line entry point: parameter computation, moment-matrix inspection,
/// dispersion scans, order-of-accuracy fits, wave experiments, and the
/// verification suite. All configuration comes from flags or a JSON file
/// whose keys mirror the long flag names one-to-one (flags override).
///
/// Exit codes: 0 success, 1 failed verification, 2 configuration error (the
/// message names the offending field).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "lba/acceptance.hpp"
#include "lba/acoustics_bench.hpp"
#include "lba/eigen.hpp"
#include "lba/mrt_core.hpp"
#include "lba/params.hpp"
#include "lba/rational.hpp"
#include "lba/spectral.hpp"
#include "lba/stencil.hpp"
#include "lba/text_format.hpp"

namespace {

using nlohmann::ordered_json;
using lba::Rational;

/// Anything wrong with the configuration; the message names the field.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int default_threads() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

// --- parameter-set source ----------------------------------------------------

struct SourceOpts {
  bool quartic = false, trt = false, usual = false;
  std::string custom;
  std::string c0 = "0.623538", sigma_e = "0.552", sigma_x = "0.039";
  double s_psi = 1.3, s_xi = 1.2;
  std::string xi = "1";
};

/// Scheme parameters plus, for the closed-form source, the exact values.
struct ResolvedSource {
  std::string kind;
  lba::SchemeParameters scheme;
  std::optional<lba::QuarticParameters> exact;
};

void add_source_flags(CLI::App* sub, SourceOpts& src) {
  sub->add_flag("--quartic", src.quartic,
                "closed-form fourth-order parameter set (default source)");
  sub->add_flag("--trt", src.trt, "two-rate isotropic preset");
  sub->add_flag("--usual", src.usual, "single-rate baseline preset");
  sub->add_option("--custom", src.custom,
                  "JSON file with all equilibrium coefficients and rates");
  sub->add_option("--c0", src.c0, "sound speed (quartic source)")
      ->capture_default_str();
  sub->add_option("--sigma-e", src.sigma_e, "energy-moment sigma (quartic source)")
      ->capture_default_str();
  sub->add_option("--sigma-x", src.sigma_x, "tensor-moment sigma (quartic/trt/usual)")
      ->capture_default_str();
  sub->add_option("--s-psi", src.s_psi, "free rate of the squared-energy flux group")
      ->capture_default_str();
  sub->add_option("--s-xi", src.s_xi, "free rate of the energy-cube moment")
      ->capture_default_str();
  sub->add_option("--xi", src.xi, "free energy-cube equilibrium coefficient")
      ->capture_default_str();
}

double json_number(const ordered_json& obj, const std::string& section, const char* field) {
  const auto it = obj.find(field);
  if (it == obj.end() || !it->is_number())
    throw ConfigError("custom parameter file: missing or non-numeric field '" + section + "." +
                      field + "'");
  return it->get<double>();
}

lba::SchemeParameters load_custom(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("custom: cannot open '" + path + "'");
  ordered_json doc;
  try {
    doc = ordered_json::parse(in);
  } catch (const std::exception& ex) {
    throw ConfigError(std::string("custom: invalid JSON: ") + ex.what());
  }
  if (!doc.contains("eq") || !doc.contains("rates"))
    throw ConfigError("custom parameter file: need top-level objects 'eq' and 'rates'");
  const ordered_json& eq = doc["eq"];
  const ordered_json& rates = doc["rates"];

  lba::SchemeParameters p;
  p.eq.c0 = json_number(eq, "eq", "c0");
  p.eq.theta = json_number(eq, "eq", "theta");
  p.eq.c1 = json_number(eq, "eq", "c1");
  p.eq.c2 = json_number(eq, "eq", "c2");
  p.eq.c3 = json_number(eq, "eq", "c3");
  p.eq.beta = json_number(eq, "eq", "beta");
  p.eq.xi = json_number(eq, "eq", "xi");

  const char* names[10] = {"s_e", "s_x", "s_phi", "s_psi", "s_eps",
                           "s_xi", "s_gamma", "s_chi", "s_tau", "s_omega"};
  double* slots[10] = {&p.rates.s_e, &p.rates.s_x, &p.rates.s_phi, &p.rates.s_psi,
                       &p.rates.s_eps, &p.rates.s_xi, &p.rates.s_gamma, &p.rates.s_chi,
                       &p.rates.s_tau, &p.rates.s_omega};
  for (int i = 0; i < 10; ++i) {
    *slots[i] = json_number(rates, "rates", names[i]);
    if (!(*slots[i] > 0.0 && *slots[i] < 2.0))
      throw ConfigError(std::string("custom parameter file: rate 'rates.") + names[i] +
                        "' outside the stable interval (0, 2)");
  }
  return p;
}

ResolvedSource resolve_source(const SourceOpts& src) {
  const int picked = int(src.quartic) + int(src.trt) + int(src.usual) + int(!src.custom.empty());
  if (picked > 1)
    throw ConfigError(
        "parameter-set source: pick exactly one of --quartic / --trt / --usual / --custom");

  ResolvedSource out;
  if (src.trt) {
    out.kind = "trt";
    out.scheme = lba::trt_isotropic_preset(lba::rational_from_decimal(src.sigma_x).get_d());
    return out;
  }
  if (src.usual) {
    out.kind = "usual";
    out.scheme = lba::usual_preset(lba::rational_from_decimal(src.sigma_x).get_d());
    return out;
  }
  if (!src.custom.empty()) {
    out.kind = "custom";
    out.scheme = load_custom(src.custom);
    return out;
  }
  out.kind = "quartic";
  lba::QuarticOptions opt;
  opt.s_psi = src.s_psi;
  opt.s_xi = src.s_xi;
  opt.xi = lba::rational_from_decimal(src.xi);
  out.exact = lba::quartic_parameters(lba::rational_from_decimal(src.c0),
                                      lba::rational_from_decimal(src.sigma_e),
                                      lba::rational_from_decimal(src.sigma_x), opt);
  out.scheme = out.exact->scheme();
  return out;
}

// --- output plumbing ---------------------------------------------------------

/// Applies the optional LBA_OUTPUT_DIR override to a relative path.
std::string resolve_output_path(const std::string& path) {
  const char* dir = std::getenv("LBA_OUTPUT_DIR");
  if (dir && *dir && !path.empty() && path.front() != '/')
    return std::string(dir) + "/" + path;
  return path;
}

/// Opens the requested output (stdout when empty).
class OutputStream {
 public:
  explicit OutputStream(const std::string& path) {
    if (path.empty() || path == "-") return;
    const std::string full = resolve_output_path(path);
    file_.open(full);
    if (!file_) throw ConfigError("output: cannot open '" + full + "' for writing");
  }
  std::ostream& get() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void emit_rows_csv(std::ostream& os, const std::vector<std::pair<std::string, std::string>>& rows) {
  os << "name,value\n";
  for (const auto& [name, value] : rows) os << name << ',' << value << '\n';
}

void emit_rows_json(std::ostream& os, const std::vector<std::pair<std::string, std::string>>& rows) {
  ordered_json obj;
  for (const auto& [name, value] : rows) obj[name] = value;
  os << obj.dump(2) << '\n';
}

ordered_json audit_json(const lba::ConservationReport& a) {
  return ordered_json{{"mass_initial", a.mass_initial},
                      {"mass_now", a.mass_now},
                      {"mass_drift_rel", a.mass_drift_rel},
                      {"momentum_drift_abs", a.momentum_drift_abs}};
}

// --- params ------------------------------------------------------------------

struct ParamsOpts {
  SourceOpts src;
  std::string output, format = "csv";
  int digits = 17;  ///< 0 means shortest round-trip of the rounded doubles
};

int run_params(const ParamsOpts& o) {
  const ResolvedSource r = resolve_source(o.src);

  const auto fmt_exact = [&](const Rational& v) {
    return o.digits > 0 ? lba::decimal_string(v, o.digits) : lba::format_double(v.get_d());
  };
  const auto fmt_d = [&](double v) {
    return o.digits > 0 ? lba::format_double(v, o.digits) : lba::format_double(v);
  };

  std::vector<std::pair<std::string, std::string>> rows;
  rows.emplace_back("source", r.kind);
  if (r.exact) {
    for (const auto& [name, value] : r.exact->named_values())
      rows.emplace_back(name, fmt_exact(value));
    rows.emplace_back("s_psi", fmt_d(r.exact->options.s_psi));
    rows.emplace_back("s_xi", fmt_d(r.exact->options.s_xi));
    rows.emplace_back("xi", fmt_exact(r.exact->options.xi));
  } else {
    const lba::EquilibriumCoefficients& eq = r.scheme.eq;
    rows.emplace_back("c0", fmt_d(eq.c0));
    rows.emplace_back("theta", fmt_d(eq.theta));
    rows.emplace_back("c1", fmt_d(eq.c1));
    rows.emplace_back("c2", fmt_d(eq.c2));
    rows.emplace_back("c3", fmt_d(eq.c3));
    rows.emplace_back("beta", fmt_d(eq.beta));
    rows.emplace_back("xi", fmt_d(eq.xi));
    const auto arr = lba::rate_array(r.scheme.rates);
    for (int g = 0; g < lba::kRateGroupCount; ++g)
      rows.emplace_back(lba::rate_group_name(g), fmt_d(arr[std::size_t(g)]));
  }
  const lba::TransportCoefficients tc =
      lba::transport(r.scheme.eq.c0, lba::sigma_from_rate(r.scheme.rates.s_e),
                     lba::sigma_from_rate(r.scheme.rates.s_x));
  rows.emplace_back("mu", fmt_d(tc.mu));
  rows.emplace_back("zeta", fmt_d(tc.zeta));
  rows.emplace_back("gamma", fmt_d(tc.gamma));
  rows.emplace_back("nu", fmt_d(tc.nu));

  OutputStream out(o.output);
  if (o.format == "json")
    emit_rows_json(out.get(), rows);
  else
    emit_rows_csv(out.get(), rows);
  return 0;
}

// --- matrix ------------------------------------------------------------------

struct MatrixOpts {
  std::string kind = "matrix";
  std::string output, format = "csv";
};

int run_matrix(const MatrixOpts& o) {
  const lba::MomentMatrix M = lba::build_moment_matrix();
  OutputStream out(o.output);
  std::ostream& os = out.get();

  if (o.format == "csv") {
    if (o.kind == "matrix") lba::write_matrix_csv(os, M);
    else if (o.kind == "inverse") lba::write_inverse_csv(os, M);
    else if (o.kind == "norms") lba::write_norms_csv(os, M);
    else lba::write_raw_csv(os, lba::build_raw_moments(lba::build_velocities()));
    return 0;
  }

  ordered_json doc;
  doc["moments"] = ordered_json::array();
  for (const char* n : lba::moment_names()) doc["moments"].push_back(n);
  if (o.kind == "matrix") {
    for (int i = 0; i < 27; ++i) {
      ordered_json row = ordered_json::array();
      for (int j = 0; j < 27; ++j) row.push_back(M.rows[std::size_t(i)][std::size_t(j)]);
      doc["rows"].push_back(std::move(row));
    }
  } else if (o.kind == "inverse") {
    for (int i = 0; i < 27; ++i) {
      ordered_json row = ordered_json::array();
      for (int j = 0; j < 27; ++j)
        row.push_back(lba::to_fraction_string(M.inverse[std::size_t(i)][std::size_t(j)]));
      doc["rows"].push_back(std::move(row));
    }
  } else if (o.kind == "norms") {
    for (long d : M.row_norms) doc["norms"].push_back(d);
  } else {
    const lba::RawMomentMatrix raw = lba::build_raw_moments(lba::build_velocities());
    for (int i = 0; i < 27; ++i) {
      ordered_json row = ordered_json::array();
      for (int j = 0; j < 27; ++j)
        row.push_back(lba::to_fraction_string(raw.rows[std::size_t(i)][std::size_t(j)]));
      doc["rows"].push_back(std::move(row));
    }
  }
  os << doc.dump(2) << '\n';
  return 0;
}

// --- spectra -------------------------------------------------------------------

struct SpectraOpts {
  SourceOpts src;
  double kmin = lba::kDefaultKMin, kmax = lba::kDefaultKMax;
  int points = lba::kDefaultKCount;
  std::string direction = "1,0,0";
  std::string output, format = "csv";
};

std::array<double, 3> parse_triplet(const std::string& text, const char* field) {
  std::array<double, 3> v{};
  std::stringstream ss(text);
  std::string part;
  for (int i = 0; i < 3; ++i) {
    if (!std::getline(ss, part, ','))
      throw ConfigError(std::string(field) + ": need three comma-separated values, got '" + text +
                        "'");
    try {
      v[std::size_t(i)] = std::stod(part);
    } catch (const std::exception&) {
      throw ConfigError(std::string(field) + ": bad number '" + part + "'");
    }
  }
  if (std::getline(ss, part, ','))
    throw ConfigError(std::string(field) + ": need exactly three values, got '" + text + "'");
  return v;
}

lba::DispersionScan compute_scan(const SpectraOpts& o) {
  if (!(o.kmin > 0)) throw ConfigError("kmin: must be positive");
  if (!(o.kmax >= o.kmin)) throw ConfigError("kmax: must be >= kmin");
  if (o.points < 2) throw ConfigError("points: need at least 2");
  const std::array<double, 3> dir = parse_triplet(o.direction, "direction");
  const ResolvedSource r = resolve_source(o.src);
  const lba::MomentMatrix M = lba::build_moment_matrix();
  return lba::hydrodynamic_branches(M, r.scheme, dir,
                                    lba::log_spaced_wavenumbers(o.kmin, o.kmax, o.points));
}

int run_spectra(const SpectraOpts& o) {
  const lba::DispersionScan scan = compute_scan(o);
  OutputStream out(o.output);
  std::ostream& os = out.get();
  if (o.format == "csv") {
    lba::write_spectra_csv(os, scan);
    return 0;
  }
  ordered_json doc;
  doc["direction"] = scan.direction;
  doc["kmags"] = scan.kmags;
  doc["viscosity"] = scan.viscosity;
  doc["sound_speed"] = scan.sound_speed;
  doc["sound_damping"] = scan.sound_damping;
  doc["max_backward_error"] = scan.max_backward_error;
  doc["warnings"] = scan.warnings;
  for (int b = 0; b < lba::kBranchCount; ++b) {
    ordered_json rows = ordered_json::array();
    for (const lba::BranchSample& s : scan.branches[std::size_t(b)]) {
      rows.push_back(ordered_json{{"kmag", s.kmag},
                                  {"re_gamma", s.gamma.real()},
                                  {"im_gamma", s.gamma.imag()},
                                  {"ref_re", s.gamma_ref.real()},
                                  {"ref_im", s.gamma_ref.imag()},
                                  {"err_re", s.gamma_err.real()},
                                  {"err_im", s.gamma_err.imag()}});
    }
    doc["branches"][lba::branch_name(lba::Branch(b))] = std::move(rows);
  }
  os << doc.dump(2) << '\n';
  return 0;
}

// --- fit-order -----------------------------------------------------------------

struct FitOpts {
  std::string input;
  std::string component = "all";
  std::string output, format = "csv";
};

struct SpectraRow {
  double kmag = 0;
  std::string branch;
  double err_re = 0, err_im = 0;
};

std::vector<SpectraRow> parse_spectra_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("input: cannot open '" + path + "'");
  std::vector<SpectraRow> rows;
  std::string line;
  if (!std::getline(in, line) || line.rfind("kmag,direction,branch,", 0) != 0)
    throw ConfigError("input: '" + path + "' is not a dispersion-scan CSV");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 9)
      throw ConfigError("input: malformed row '" + line + "'");
    SpectraRow r;
    try {
      r.kmag = std::stod(fields[0]);
      r.branch = fields[2];
      r.err_re = std::stod(fields[7]);
      r.err_im = std::stod(fields[8]);
    } catch (const std::exception&) {
      throw ConfigError("input: malformed row '" + line + "'");
    }
    rows.push_back(std::move(r));
  }
  if (rows.empty()) throw ConfigError("input: '" + path + "' holds no samples");
  return rows;
}

int run_fit_order(const FitOpts& o) {
  if (o.component != "all" && o.component != "magnitude" && o.component != "real" &&
      o.component != "imag")
    throw ConfigError("component: expected one of all, magnitude, real, imag");
  const std::vector<SpectraRow> rows = parse_spectra_csv(o.input);

  std::vector<std::string> branches;
  for (const SpectraRow& r : rows)
    if (std::find(branches.begin(), branches.end(), r.branch) == branches.end())
      branches.push_back(r.branch);

  struct FitRow {
    std::string branch, component;
    lba::PowerLawFit fit;
  };
  std::vector<FitRow> fits;
  const std::vector<std::string> components =
      o.component == "all" ? std::vector<std::string>{"magnitude", "real", "imag"}
                           : std::vector<std::string>{o.component};
  for (const std::string& b : branches) {
    std::vector<double> ks, mag, re, im;
    for (const SpectraRow& r : rows)
      if (r.branch == b) {
        ks.push_back(r.kmag);
        mag.push_back(std::hypot(r.err_re, r.err_im));
        re.push_back(std::abs(r.err_re));
        im.push_back(std::abs(r.err_im));
      }
    for (const std::string& c : components) {
      const std::vector<double>& err = c == "magnitude" ? mag : (c == "real" ? re : im);
      fits.push_back({b, c, lba::fit_power_law(ks, err)});
    }
  }

  OutputStream out(o.output);
  std::ostream& os = out.get();
  if (o.format == "csv") {
    os << "branch,component,slope,intercept,residual_rms,count,kmin,kmax,floored\n";
    for (const FitRow& f : fits)
      os << f.branch << ',' << f.component << ',' << lba::format_double(f.fit.slope) << ','
         << lba::format_double(f.fit.intercept) << ',' << lba::format_double(f.fit.residual_rms)
         << ',' << f.fit.count << ',' << lba::format_double(f.fit.kmin) << ','
         << lba::format_double(f.fit.kmax) << ',' << (f.fit.floored ? 1 : 0) << '\n';
  } else {
    ordered_json doc = ordered_json::array();
    for (const FitRow& f : fits)
      doc.push_back(ordered_json{{"branch", f.branch},
                                 {"component", f.component},
                                 {"slope", f.fit.slope},
                                 {"intercept", f.fit.intercept},
                                 {"residual_rms", f.fit.residual_rms},
                                 {"count", f.fit.count},
                                 {"kmin", f.fit.kmin},
                                 {"kmax", f.fit.kmax},
                                 {"floored", f.fit.floored}});
    os << doc.dump(2) << '\n';
  }
  return 0;
}

// --- run -----------------------------------------------------------------------

struct RunOpts {
  SourceOpts src;
  std::string experiment = "shear";
  int nx = -1, ny = -1, nz = -1, mode = -1, steps = -1, skip = -1;
  double amplitude = -1.0;
  std::string init = "equilibrium";
  std::string probe;
  int n = -1;
  double radius = -1.0, period = -1.0;
  int threads = default_threads();
  std::string dump_field;               ///< write the final per-site fields here
  std::string dump_format = "csv";      ///< csv or binary
  std::string summary;                  ///< also write the JSON summary here
  std::string output, format = "csv";
};

/// Writes the JSON summary to its own file (alongside a CSV series output).
void write_summary_file(const std::string& path, const ordered_json& doc) {
  const std::string full = resolve_output_path(path);
  std::ofstream f(full);
  if (!f) throw ConfigError("summary: cannot open '" + full + "' for writing");
  f << doc.dump(2) << '\n';
}

/// Final-state dump hook for the experiment runners (empty when unused).
std::function<void(const lba::LatticeState&)> field_dump_hook(const RunOpts& o) {
  if (o.dump_field.empty()) return {};
  const std::string full = resolve_output_path(o.dump_field);
  const bool binary = o.dump_format == "binary";
  return [full, binary](const lba::LatticeState& state) {
    std::ofstream f(full, binary ? std::ios::binary : std::ios::out);
    if (!f) throw ConfigError("dump-field: cannot open '" + full + "' for writing");
    if (binary)
      lba::write_field_binary(f, state);
    else
      lba::write_field_csv(f, state);
  };
}

lba::WaveInit parse_init(const std::string& s) {
  if (s == "equilibrium") return lba::WaveInit::Equilibrium;
  if (s == "eigenmode") return lba::WaveInit::Eigenmode;
  throw ConfigError("init: expected 'equilibrium' or 'eigenmode'");
}

int run_experiment(const RunOpts& o) {
  const ResolvedSource r = resolve_source(o.src);
  const lba::MomentMatrix M = lba::build_moment_matrix();
  OutputStream out(o.output);
  std::ostream& os = out.get();

  if (o.experiment == "shear") {
    lba::ShearDecayConfig cfg;
    if (o.nx > 0) cfg.nx = o.nx;
    if (o.ny > 0) cfg.ny = o.ny;
    if (o.nz > 0) cfg.nz = o.nz;
    if (o.mode > 0) cfg.mode = o.mode;
    if (o.amplitude >= 0) cfg.amplitude = o.amplitude;
    if (o.steps > 0) cfg.steps = o.steps;
    if (o.skip >= 0) cfg.skip = o.skip;
    cfg.init = parse_init(o.init);
    cfg.threads = o.threads;
    cfg.on_final = field_dump_hook(o);
    const lba::ShearDecayResult res = lba::run_shear_decay(M, r.scheme, cfg);
    const ordered_json doc{{"experiment", "shear"},
                     {"k", res.k},
                     {"measured_rate", res.measured_rate},
                     {"spectral_rate", res.spectral_rate},
                     {"reference_rate", res.reference_rate},
                     {"rel_error_vs_spectral",
                      std::abs(res.measured_rate - res.spectral_rate) / res.spectral_rate},
                     {"rel_error_vs_reference",
                      std::abs(res.measured_rate - res.reference_rate) / res.reference_rate},
                     {"fit_window", {res.fit_begin, res.fit_end}},
                     {"first_non_monotone", res.first_non_monotone},
                     {"audit", audit_json(res.audit)}};
    if (!o.summary.empty()) write_summary_file(o.summary, doc);
    if (o.format == "csv")
      lba::write_series_csv(os, res.amplitudes, "amplitude");
    else
      os << doc.dump(2) << '\n';
    return 0;
  }

  if (o.experiment == "plane") {
    lba::PlaneWaveConfig cfg;
    if (o.nx > 0) cfg.nx = o.nx;
    if (o.ny > 0) cfg.ny = o.ny;
    if (o.nz > 0) cfg.nz = o.nz;
    if (o.mode > 0) cfg.mode = o.mode;
    if (o.amplitude >= 0) cfg.amplitude = o.amplitude;
    if (o.steps > 0) cfg.steps = o.steps;
    if (o.skip >= 0) cfg.skip = o.skip;
    cfg.init = parse_init(o.init);
    if (!o.probe.empty()) {
      const std::array<double, 3> p = parse_triplet(o.probe, "probe");
      cfg.probe = {int(p[0]), int(p[1]), int(p[2])};
    }
    cfg.threads = o.threads;
    cfg.on_final = field_dump_hook(o);
    const lba::PlaneWaveResult res = lba::run_plane_wave(M, r.scheme, cfg);
    const ordered_json doc{{"experiment", "plane"},
                     {"k", res.k},
                     {"measured_rate", res.measured_rate},
                     {"measured_omega", res.measured_omega},
                     {"spectral_rate", res.spectral_rate},
                     {"spectral_omega", res.spectral_omega},
                     {"reference_rate", res.reference_rate},
                     {"reference_omega", res.reference_omega},
                     {"rel_error_vs_spectral_rate",
                      std::abs(res.measured_rate - res.spectral_rate) / res.spectral_rate},
                     {"rel_error_vs_spectral_omega",
                      std::abs(res.measured_omega - res.spectral_omega) / res.spectral_omega},
                     {"fit_residual", res.fit_residual},
                     {"fit_window", {res.fit_begin, res.fit_end}},
                     {"audit", audit_json(res.audit)}};
    if (!o.summary.empty()) write_summary_file(o.summary, doc);
    if (o.format == "csv")
      lba::write_series_csv(os, res.probe_series, "delta_rho");
    else
      os << doc.dump(2) << '\n';
    return 0;
  }

  if (o.experiment == "sphere") {
    lba::SphereConfig cfg;
    if (o.n > 0) cfg.n = o.n;
    if (o.radius > 0) cfg.radius = o.radius;
    if (o.period > 0) cfg.period = o.period;
    if (o.amplitude >= 0) cfg.amplitude = o.amplitude;
    if (o.steps > 0) cfg.steps = o.steps;
    cfg.threads = o.threads;
    cfg.on_final = field_dump_hook(o);
    const lba::SphereResult res = lba::run_sphere(M, r.scheme, cfg);
    ordered_json bins = ordered_json::array();
    for (const lba::RadialBin& b : res.bins)
      bins.push_back(ordered_json{{"r_lo", b.r_lo},
                                  {"r_hi", b.r_hi},
                                  {"count", b.count},
                                  {"mean_rho", b.mean_rho},
                                  {"std_rho", b.std_rho}});
    ordered_json doc{{"experiment", "sphere"},
                     {"sites", res.scatter.size()},
                     {"isotropy_metric", res.isotropy_metric},
                     {"admitted_bins", res.admitted_bins},
                     {"wavefront_reached_center", res.wavefront_reached_center},
                     {"bins", std::move(bins)},
                     {"warnings", res.warnings},
                     {"audit", audit_json(res.audit)}};
    if (!o.summary.empty()) write_summary_file(o.summary, doc);
    if (o.format == "csv")
      lba::write_scatter_csv(os, res.scatter);
    else
      os << doc.dump(2) << '\n';
    return 0;
  }

  throw ConfigError("experiment: expected one of shear, plane, sphere");
}

// --- verify ----------------------------------------------------------------------

struct VerifyOpts {
  std::string only;
  int threads = default_threads();
  std::string output;
};

int run_verify(const VerifyOpts& o) {
  std::vector<int> only;
  if (!o.only.empty()) {
    std::stringstream ss(o.only);
    std::string part;
    while (std::getline(ss, part, ',')) {
      try {
        only.push_back(std::stoi(part));
      } catch (const std::exception&) {
        throw ConfigError("only: bad criterion id '" + part + "'");
      }
      if (only.back() < 1 || only.back() > lba::acceptance_criterion_count())
        throw ConfigError("only: criterion id '" + part + "' out of range");
    }
  }
  OutputStream out(o.output);
  std::ostream& os = out.get();
  const std::vector<lba::CriterionResult> results = lba::run_acceptance(only, o.threads);
  bool all = true;
  for (const lba::CriterionResult& r : results) {
    all = all && r.pass;
    std::ostringstream line;
    line << (r.pass ? "[PASS]" : "[FAIL]") << " criterion " << r.id << ": " << r.name;
    if (!r.detail.empty()) line << " -- " << r.detail;
    os << line.str() << '\n';
  }
  return all ? 0 : 1;
}

// --- JSON config mirroring -------------------------------------------------------

/// Expands --config FILE into flag tokens spliced in right after the
/// subcommand, so explicitly passed flags (parsed last) win.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw ConfigError("config: missing file path");
      path = args[i + 1];
      args.erase(args.begin() + long(i), args.begin() + long(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + long(i));
      break;
    }
  }
  if (path.empty()) return args;

  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  ordered_json doc;
  try {
    doc = ordered_json::parse(in);
  } catch (const std::exception& ex) {
    throw ConfigError(std::string("config: invalid JSON: ") + ex.what());
  }
  if (!doc.is_object()) throw ConfigError("config: top level must be an object of flag values");

  std::vector<std::string> expanded;
  for (const auto& [key, value] : doc.items()) {
    const std::string flag = "--" + key;
    if (value.is_boolean()) {
      if (value.get<bool>()) expanded.push_back(flag);
    } else if (value.is_string()) {
      expanded.push_back(flag);
      expanded.push_back(value.get<std::string>());
    } else if (value.is_number_integer()) {
      expanded.push_back(flag);
      expanded.push_back(std::to_string(value.get<long long>()));
    } else if (value.is_number()) {
      expanded.push_back(flag);
      expanded.push_back(lba::format_double(value.get<double>()));
    } else if (value.is_array()) {
      std::string joined;
      for (const auto& item : value) {
        if (!joined.empty()) joined += ",";
        joined += item.is_string() ? item.get<std::string>()
                                   : lba::format_double(item.get<double>());
      }
      expanded.push_back(flag);
      expanded.push_back(joined);
    } else {
      throw ConfigError("config: field '" + key + "' has an unsupported type");
    }
  }

  // Tokens go right after the subcommand name (args[0] when present).
  std::vector<std::string> result;
  std::size_t at = 0;
  if (!args.empty() && !args[0].empty() && args[0][0] != '-') {
    result.push_back(args[0]);
    at = 1;
  }
  result.insert(result.end(), expanded.begin(), expanded.end());
  result.insert(result.end(), args.begin() + long(at), args.end());
  return result;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattice kinetic acoustics toolkit"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  const auto add_common = [](CLI::App* sub, std::string& output, std::string* format) {
    sub->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    sub->add_option("--output", output, "write to this path instead of stdout");
    if (format)
      sub->add_option("--format", *format, "output representation")
          ->check(CLI::IsMember({"csv", "json"}))
          ->capture_default_str();
    // Registered so the flag is accepted anywhere; expansion happens up front.
    sub->add_option("--config", "JSON file whose keys mirror the long flags");
  };

  ParamsOpts params;
  CLI::App* sub_params = app.add_subcommand("params", "print the resolved parameter set");
  add_common(sub_params, params.output, &params.format);
  add_source_flags(sub_params, params.src);
  sub_params->add_option("--digits", params.digits,
                         "significant digits (0 = shortest round-trip of the double values; "
                         "larger values print the exact rationals)")
      ->check(CLI::Range(0, 60))
      ->capture_default_str();

  MatrixOpts matrix;
  CLI::App* sub_matrix = app.add_subcommand("matrix", "dump the moment matrix");
  add_common(sub_matrix, matrix.output, &matrix.format);
  sub_matrix->add_option("--kind", matrix.kind, "which table to dump")
      ->check(CLI::IsMember({"matrix", "inverse", "norms", "raw"}))
      ->capture_default_str();

  SpectraOpts spectra;
  CLI::App* sub_spectra = app.add_subcommand("spectra", "dispersion scan of the hydrodynamic branches");
  add_common(sub_spectra, spectra.output, &spectra.format);
  add_source_flags(sub_spectra, spectra.src);
  sub_spectra->add_option("--kmin", spectra.kmin, "smallest wavenumber")->capture_default_str();
  sub_spectra->add_option("--kmax", spectra.kmax, "largest wavenumber")->capture_default_str();
  sub_spectra->add_option("--points", spectra.points, "number of log-spaced wavenumbers")
      ->capture_default_str();
  sub_spectra->add_option("--direction", spectra.direction, "propagation direction x,y,z")
      ->capture_default_str();

  FitOpts fit;
  CLI::App* sub_fit = app.add_subcommand("fit-order", "fit error-vs-wavenumber slopes from a scan CSV");
  add_common(sub_fit, fit.output, &fit.format);
  sub_fit->add_option("--input", fit.input, "dispersion-scan CSV produced by `spectra`")
      ->required();
  sub_fit->add_option("--component", fit.component, "which error component to fit")
      ->check(CLI::IsMember({"all", "magnitude", "real", "imag"}))
      ->capture_default_str();

  RunOpts run;
  CLI::App* sub_run = app.add_subcommand("run", "run a wave experiment");
  add_common(sub_run, run.output, &run.format);
  add_source_flags(sub_run, run.src);
  sub_run->add_option("--experiment", run.experiment, "shear, plane, or sphere")
      ->check(CLI::IsMember({"shear", "plane", "sphere"}))
      ->capture_default_str();
  sub_run->add_option("--nx", run.nx, "grid size along the wave");
  sub_run->add_option("--ny", run.ny, "transverse grid size");
  sub_run->add_option("--nz", run.nz, "transverse grid size");
  sub_run->add_option("--mode", run.mode, "integer wavenumber index");
  sub_run->add_option("--amplitude", run.amplitude, "perturbation amplitude");
  sub_run->add_option("--steps", run.steps, "time steps");
  sub_run->add_option("--skip", run.skip, "steps dropped from the fit head");
  sub_run->add_option("--init", run.init, "equilibrium or eigenmode seeding")
      ->check(CLI::IsMember({"equilibrium", "eigenmode"}))
      ->capture_default_str();
  sub_run->add_option("--probe", run.probe, "density probe site x,y,z (plane)");
  sub_run->add_option("--n", run.n, "box size (sphere)");
  sub_run->add_option("--radius", run.radius, "sphere radius");
  sub_run->add_option("--period", run.period, "wall oscillation period (sphere)");
  sub_run->add_option("--threads", run.threads, "worker threads")->capture_default_str();
  sub_run->add_option("--dump-field", run.dump_field,
                      "also write the final per-site fields (x,y,z,rho,qx,qy,qz) to this path");
  sub_run->add_option("--dump-format", run.dump_format, "field dump representation")
      ->check(CLI::IsMember({"csv", "binary"}))
      ->capture_default_str();
  sub_run->add_option("--summary", run.summary,
                      "also write the JSON run summary to this path (so one invocation "
                      "yields the CSV series plus the summary)");

  VerifyOpts verify;
  CLI::App* sub_verify = app.add_subcommand("verify", "run the acceptance criteria");
  add_common(sub_verify, verify.output, nullptr);
  sub_verify->add_option("--only", verify.only, "comma-separated criterion ids");
  sub_verify->add_option("--threads", verify.threads, "worker threads")->capture_default_str();

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = expand_config(std::move(args));
    // CLI11 consumes tokens in reverse.
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 2;
  } catch (const ConfigError& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 2;
  }

  try {
    if (sub_params->parsed()) return run_params(params);
    if (sub_matrix->parsed()) return run_matrix(matrix);
    if (sub_spectra->parsed()) return run_spectra(spectra);
    if (sub_fit->parsed()) return run_fit_order(fit);
    if (sub_run->parsed()) return run_experiment(run);
    if (sub_verify->parsed()) return run_verify(verify);
  } catch (const ConfigError& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 2;
  } catch (const std::exception& ex) {
    // Library-level validation (singular combinations, stability violations,
    // bad grids) reports the offending quantity in its message.
    std::cerr << "error: " << ex.what() << '\n';
    return 2;
  }
  return 0;
}
