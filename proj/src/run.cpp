#include "vacpol/run.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "vacpol/errors.hpp"
#include "vacpol/pauli_villars.hpp"
#include "vacpol/renorm.hpp"
#include "vacpol/scf.hpp"

namespace vacpol {

namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

const std::map<std::string, Command>& command_names() {
  static const std::map<std::string, Command> names{{"multipliers", Command::Multipliers},
                                                    {"scf", Command::SCF},
                                                    {"renorm", Command::Renorm},
                                                    {"pv", Command::PV},
                                                    {"crosscheck", Command::Crosscheck}};
  return names;
}

std::vector<double> default_grid() {
  std::vector<double> g;
  for (int i = 1; i <= 100; ++i) g.push_back(i / 10.0);
  return g;
}

template <typename T>
T get_as(const Json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("config key '") + key + "': " + e.what());
  }
}

std::optional<double> optional_number(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return get_as<double>(j, key);
}

// Every emitted file starts with this line (CSV) or key (JSON).
std::string config_comment(const RunConfig& config) { return "# config: " + config_to_json(config); }

void write_file(const RunConfig& config, const std::string& name, const std::string& body) {
  std::error_code ec;
  fs::create_directories(config.output_dir, ec);
  const fs::path path = fs::path(config.output_dir) / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot open " + path.string() + " for writing");
  out << body;
  if (!out) throw ValidationError("failed writing " + path.string());
}

void write_json(const RunConfig& config, const std::string& name, Json fields) {
  Json doc;
  doc["config"] = Json::parse(config_to_json(config));
  for (auto& [key, value] : fields.items()) doc[key] = value;
  write_file(config, name, doc.dump(2) + "\n");
}

std::string table_rows(const MultiplierTable& t) {
  std::string out;
  const std::string cutoff = t.cutoff ? fmt(*t.cutoff) : "";
  for (std::size_t i = 0; i < t.grid.size(); ++i) {
    out += fmt(t.grid[i]) + "," + fmt(t.values[i]) + "," + to_string(t.kind) + "," + cutoff + "\n";
  }
  return out;
}

FourierLattice lattice_of(const RunConfig& c) { return build_lattice(c.box_length, c.cutoff, c.shape); }

ChargeDensity read_density_file(const std::string& path, const FourierLattice& lattice) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read density file " + path);
  ChargeDensity rho(lattice);
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line[0] == '#' || line.rfind("d1", 0) == 0) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    IntVec3 d{};
    double re = 0.0, im = 0.0;
    if (!(fields >> d[0] >> d[1] >> d[2] >> re >> im)) {
      throw ValidationError(path + ":" + std::to_string(row) + ": expected d1,d2,d3,re,im");
    }
    const auto idx = lattice.diff_index(d);
    if (!idx) {
      throw ValidationError(path + ":" + std::to_string(row) + ": mode outside the difference lattice");
    }
    rho[*idx] = Complex(re, im);
  }
  return rho;
}

ChargeDensity external_density(const RunConfig& c, const FourierLattice& lattice) {
  if (c.gaussian) return periodize(gaussian_profile(c.gaussian->charge, c.gaussian->width), lattice);
  return read_density_file(*c.density_file, lattice);
}

double require_alpha(const RunConfig& c) {
  if (!c.alpha) throw ValidationError(to_string(c.command) + " requires alpha");
  return *c.alpha;
}

const GaussianSpec& require_gaussian(const RunConfig& c) {
  if (!c.gaussian) throw ValidationError(to_string(c.command) + " requires a gaussian density");
  return *c.gaussian;
}

double gaussian_hat(const GaussianSpec& g, double k) {
  return g.charge * std::pow(2.0 * std::numbers::pi, -1.5) * std::exp(-0.5 * k * k * g.width * g.width);
}

SCFOptions options_of(const RunConfig& c) {
  SCFOptions o;
  o.max_iterations = c.max_iterations;
  o.residual_tol = c.residual_tol;
  o.degeneracy_tol = c.degeneracy_tol;
  if (c.fixed_damping) o.damping = FixedDamping{*c.fixed_damping};
  return o;
}

std::string density_csv(const RunConfig& c, const ChargeDensity& rho) {
  std::string out = config_comment(c) + "\nd1,d2,d3,re,im\n";
  const auto modes = rho.lattice().diff_modes();
  for (std::size_t d = 0; d < modes.size(); ++d) {
    out += std::to_string(modes[d][0]) + "," + std::to_string(modes[d][1]) + "," +
           std::to_string(modes[d][2]) + "," + fmt(rho[d].real()) + "," + fmt(rho[d].imag()) + "\n";
  }
  return out;
}

void run_multipliers(const RunConfig& c) {
  std::string out = config_comment(c) + "\nk,value,kind,lambda\n";
  out += table_rows(multiplier_table(MultiplierKind::U, c.k_grid, std::nullopt));
  std::vector<double> inside;
  for (double k : c.k_grid)
    if (k <= 2.0 * c.cutoff) inside.push_back(k);
  for (auto kind : {MultiplierKind::B0Const, MultiplierKind::Bk, MultiplierKind::UCutoff}) {
    out += table_rows(multiplier_table(kind, inside, c.cutoff));
  }
  const auto& m = c.pv_masses;
  out += table_rows(M_table(pv_scheme(m[0], m[1], m[2]), c.k_grid));
  write_file(c, "multipliers.csv", out);
}

Json report_fields(const SCFResult& r, const PeriodicModel& model, const ChargeDensity& nu,
                   double alpha) {
  const auto stability = stability_check(model, r.state, nu, alpha);
  Json j;
  j["converged"] = r.report.converged;
  j["iterations"] = r.report.iterations;
  j["energy"] = r.report.energy;
  j["relative_energy"] = r.report.relative_energy;
  j["residual"] = r.report.residual;
  j["fermi_level"] = r.report.fermi_level;
  j["relative_charge"] = r.report.relative_charge;
  j["degenerate_levels"] = r.report.degenerate_levels;
  j["uniqueness_condition_met"] = r.report.uniqueness_condition_met;
  j["exchange_energy"] = exchange_energy(model, r.state, alpha);
  j["stability_lhs"] = stability.lhs;
  j["stability_holds"] = stability.holds;
  j["modes"] = model.lattice().mode_count();
  j["dimension"] = model.lattice().dimension();
  j["zero_mode_shift"] = model.kernel().zero_mode_shift();
  j["external_charge"] = nu.total_charge();
  j["induced_charge"] = r.density.total_charge();
  return j;
}

int run_scf(const RunConfig& c, std::ostream& err) {
  const double alpha = require_alpha(c);
  const PeriodicModel model(lattice_of(c), c.mass);
  const ChargeDensity nu = external_density(c, model.lattice());
  const SCFOptions options = options_of(c);
  try {
    const SCFResult r = c.q == 0.0 ? scf_solve(model, nu, alpha, options)
                                   : scf_charge_sector(model, nu, alpha, c.q, options);
    write_json(c, "scf_report.json", report_fields(r, model, nu, alpha));
    write_file(c, "density.csv", density_csv(c, r.density));
  } catch (const SCFNoConvergence& e) {
    // Keep the best iterate for inspection, then report the failure.
    write_json(c, "scf_report.json", report_fields(e.best(), model, nu, alpha));
    write_file(c, "density.csv", density_csv(c, e.best().density));
    err << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

void run_renorm(const RunConfig& c) {
  if (c.alpha && c.alpha_ph) throw ValidationError("renorm takes alpha or alpha_ph, not both");
  Json fields;
  RenormPoint point;
  if (c.alpha) {
    if (c.z3) throw ValidationError("renorm: z3 is only used together with alpha_ph");
    fields["mode"] = "from_bare";
    point = renorm_point_from_bare(*c.alpha, c.cutoff);
  } else if (c.alpha_ph && c.z3) {
    fields["mode"] = "from_z3";
    const double cutoff = cutoff_from_Z3(*c.alpha_ph, *c.z3);
    point = bare_from_physical(*c.alpha_ph, cutoff);
    fields["log_lambda_asymptotic"] = log_cutoff_asymptotic(*c.alpha_ph, *c.z3);
  } else if (c.alpha_ph) {
    fields["mode"] = "from_physical";
    point = bare_from_physical(*c.alpha_ph, c.cutoff);
  } else {
    throw ValidationError("renorm requires alpha or alpha_ph");
  }
  fields["alpha_bare"] = point.alpha_bare;
  fields["alpha_ph"] = point.alpha_ph;
  fields["lambda"] = point.cutoff;
  fields["z3"] = point.z3;
  fields["B0"] = B0(point.cutoff);
  fields["B0_asymptotic"] = B0_asymptotic(point.cutoff);

  const GaussianSpec& g = require_gaussian(c);
  const auto nu_hat = SampledFunction::sample(c.k_grid, [&g](double k) { return gaussian_hat(g, k); });
  const auto terms = density_series(nu_hat, c.series_order);
  const auto physical = physical_density_linear(nu_hat, point.alpha_ph, point.cutoff);
  std::string series = config_comment(c) + "\nk";
  for (std::size_t n = 0; n < terms.size(); ++n) series += ",nu" + std::to_string(n);
  series += ",physical_linear\n";
  for (std::size_t i = 0; i < nu_hat.size(); ++i) {
    series += fmt(nu_hat.grid()[i]);
    for (const auto& t : terms) series += "," + fmt(t.values()[i]);
    series += "," + fmt(physical.values()[i]) + "\n";
  }

  const RadialProfile profile = gaussian_radial(g.charge, g.width);
  std::string uehling = config_comment(c) + "\nr,value\n";
  for (double r : c.uehling_radii) {
    uehling += fmt(r) + "," + fmt(uehling_potential(profile, point.alpha_ph, r)) + "\n";
  }

  write_json(c, "renorm_point.json", fields);
  write_file(c, "series.csv", series);
  write_file(c, "uehling.csv", uehling);
}

void run_pv(const RunConfig& c) {
  const auto& m = c.pv_masses;
  const PVScheme s = pv_scheme(m[0], m[1], m[2]);
  const auto defects = sum_rule_defects(s);
  const GaussianSpec& g = require_gaussian(c);

  // Electrostatic field of the Gaussian on radial shells along the z axis.
  FieldSample field;
  const auto& grid = c.k_grid;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double k = grid[i];
    if (k == 0.0) continue;
    const double lo = i == 0 ? k : grid[i - 1];
    const double hi = i + 1 == grid.size() ? k : grid[i + 1];
    const double width = 0.5 * (hi - lo);
    if (!(width > 0.0)) continue;
    field.k.emplace_back(0.0, 0.0, k);
    const Complex e(0.0, -4.0 * std::numbers::pi * gaussian_hat(g, k) / k);
    field.E.emplace_back(Complex(0.0), Complex(0.0), e);
    field.B.emplace_back(Complex(0.0), Complex(0.0), Complex(0.0));
    field.weights.push_back(4.0 * std::numbers::pi * k * k * width);
  }
  const F2Result f2 = F2_energy(field, s);

  Json j;
  j["m0"] = s.masses[0];
  j["m1"] = s.masses[1];
  j["m2"] = s.masses[2];
  j["c0"] = s.coefficients[0];
  j["c1"] = s.coefficients[1];
  j["c2"] = s.coefficients[2];
  j["lambda_avg"] = s.averaged_cutoff;
  j["M0"] = M_multiplier(s, 0.0);
  j["sum_rule_c"] = defects[0];
  j["sum_rule_cm2"] = defects[1];
  j["f2_value"] = f2.value;
  j["f2_magnetic"] = f2.magnetic;
  j["f2_electric"] = f2.electric;
  write_json(c, "pv_scheme.json", j);
  write_file(c, "multipliers.csv",
             config_comment(c) + "\nk,value,kind,lambda\n" + table_rows(M_table(s, grid)));
}

int run_crosscheck(const RunConfig& c, std::ostream& err) {
  const double alpha = require_alpha(c);
  const PeriodicModel model(lattice_of(c), c.mass);
  const auto& lattice = model.lattice();
  const ChargeDensity nu = external_density(c, lattice);
  SCFResult r = [&] {
    try {
      return scf_solve(model, nu, alpha, options_of(c));
    } catch (const SCFNoConvergence& e) {
      err << "warning: " << e.what() << "\n";
      throw;
    }
  }();

  // Linear response mode by mode, with the sharp continuum multiplier at this cutoff.
  ChargeDensity linear(lattice);
  std::map<double, std::array<double, 4>> shells;  // k -> nu, scf, linear, count
  const auto diffs = lattice.diff_modes();
  for (std::size_t d = 0; d < diffs.size(); ++d) {
    const double k = lattice.wavenumber(diffs[d]);
    const double b = k < 1e-8 ? B0(c.cutoff) : B_k(c.cutoff, k);
    linear[d] = alpha * b / (1.0 + alpha * b) * nu[d];
    auto& s = shells[k];
    s[0] += nu[d].real();
    s[1] += r.density[d].real();
    s[2] += linear[d].real();
    s[3] += 1.0;
  }
  // The zero mode is fixed by neutrality of the finite lattice and is left out.
  ChargeDensity diff = r.density - linear;
  diff[lattice.zero_diff()] = 0.0;
  ChargeDensity lin_nonzero = linear;
  lin_nonzero[lattice.zero_diff()] = 0.0;
  const double discrepancy = std::sqrt(std::max(0.0, coulomb_inner(diff, diff, model.kernel())));
  const double norm = std::sqrt(std::max(0.0, coulomb_inner(lin_nonzero, lin_nonzero, model.kernel())));

  Json table = Json::array();
  for (const auto& [k, s] : shells) {
    table.push_back({{"k", k},
                     {"nu", s[0] / s[3]},
                     {"rho_scf", s[1] / s[3]},
                     {"rho_linear", s[2] / s[3]},
                     {"modes", static_cast<int>(s[3])}});
  }
  Json j;
  j["alpha"] = alpha;
  j["box_length"] = c.box_length;
  j["cutoff"] = c.cutoff;
  j["shape"] = c.shape == CutoffShape::Sharp ? "sharp" : "quadratic";
  j["modes"] = lattice.mode_count();
  j["scf_iterations"] = r.report.iterations;
  j["scf_residual"] = r.report.residual;
  j["coulomb_discrepancy"] = discrepancy;
  j["linear_norm"] = norm;
  j["relative_discrepancy"] = norm > 0.0 ? discrepancy / norm : 0.0;
  j["per_k"] = table;
  write_json(c, "crosscheck.json", j);
  return 0;
}

}  // namespace

std::string to_string(Command command) {
  for (const auto& [name, value] : command_names())
    if (value == command) return name;
  return "unknown";
}

void RunConfig::validate() const {
  if (gaussian && density_file) throw ValidationError("config: give either a gaussian or a density file");
  if (!gaussian && !density_file) throw ValidationError("config: a density is required");
  if (gaussian && !(gaussian->width > 0.0)) throw ValidationError("config: gaussian width must be positive");
  if (!(box_length > 0.0) || !(cutoff > 0.0) || !(mass > 0.0)) {
    throw ValidationError("config: box_length, cutoff and mass must be positive");
  }
  if (!(residual_tol > 0.0) || !(degeneracy_tol >= 0.0) || max_iterations < 1) {
    throw ValidationError("config: tolerances must be positive");
  }
  if (fixed_damping && !(*fixed_damping > 0.0 && *fixed_damping <= 1.0)) {
    throw ValidationError("config: fixed damping must lie in (0, 1]");
  }
  if (k_grid.empty()) throw ValidationError("config: k_grid must not be empty");
  const SampledFunction check(k_grid, std::vector<double>(k_grid.size(), 0.0));
  for (double r : uehling_radii)
    if (!(r >= 0.0)) throw ValidationError("config: uehling_radii must be non-negative");
  if (!std::isfinite(q)) throw ValidationError("config: q must be finite");
}

RunConfig parse_config(const std::string& json_text) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  static const std::vector<std::string> known{
      "command", "box_length", "cutoff", "shape", "mass", "alpha", "alpha_ph", "z3", "q",
      "pv_masses", "density", "output_dir", "residual_tol", "max_iterations", "degeneracy_tol",
      "damping", "k_grid", "uehling_radii", "series_order"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ValidationError("config: unknown key '" + key + "'");
    }
  }

  RunConfig c;
  c.k_grid = default_grid();
  if (!j.contains("command")) throw ValidationError("config: command is required");
  const auto name = get_as<std::string>(j, "command");
  const auto it = command_names().find(name);
  if (it == command_names().end()) throw ValidationError("config: unknown command '" + name + "'");
  c.command = it->second;

  if (j.contains("box_length")) c.box_length = get_as<double>(j, "box_length");
  if (j.contains("cutoff")) c.cutoff = get_as<double>(j, "cutoff");
  if (j.contains("shape")) {
    const auto shape = get_as<std::string>(j, "shape");
    if (shape == "sharp") c.shape = CutoffShape::Sharp;
    else if (shape == "quadratic") c.shape = CutoffShape::Quadratic;
    else throw ValidationError("config: shape must be 'sharp' or 'quadratic'");
  }
  if (j.contains("mass")) c.mass = get_as<double>(j, "mass");
  c.alpha = optional_number(j, "alpha");
  c.alpha_ph = optional_number(j, "alpha_ph");
  c.z3 = optional_number(j, "z3");
  if (j.contains("q")) c.q = get_as<double>(j, "q");
  if (j.contains("pv_masses")) {
    const auto m = get_as<std::vector<double>>(j, "pv_masses");
    if (m.size() != 3) throw ValidationError("config: pv_masses needs three entries");
    c.pv_masses = {m[0], m[1], m[2]};
  }
  if (j.contains("density")) {
    const Json& d = j.at("density");
    if (!d.is_object()) throw ValidationError("config: density must be an object");
    if (d.contains("gaussian")) {
      const Json& g = d.at("gaussian");
      GaussianSpec spec;
      if (g.contains("charge")) spec.charge = get_as<double>(g, "charge");
      if (g.contains("width")) spec.width = get_as<double>(g, "width");
      c.gaussian = spec;
    }
    if (d.contains("file")) c.density_file = get_as<std::string>(d, "file");
  } else {
    c.gaussian = GaussianSpec{};
  }
  if (j.contains("output_dir")) c.output_dir = get_as<std::string>(j, "output_dir");
  if (j.contains("residual_tol")) c.residual_tol = get_as<double>(j, "residual_tol");
  if (j.contains("max_iterations")) c.max_iterations = get_as<int>(j, "max_iterations");
  if (j.contains("degeneracy_tol")) c.degeneracy_tol = get_as<double>(j, "degeneracy_tol");
  if (j.contains("damping")) {
    const Json& d = j.at("damping");
    if (d.is_string() && d.get<std::string>() == "optimal") c.fixed_damping.reset();
    else if (d.is_number()) c.fixed_damping = d.get<double>();
    else throw ValidationError("config: damping must be 'optimal' or a number in (0, 1]");
  }
  if (j.contains("k_grid")) c.k_grid = get_as<std::vector<double>>(j, "k_grid");
  if (j.contains("uehling_radii")) c.uehling_radii = get_as<std::vector<double>>(j, "uehling_radii");
  if (j.contains("series_order")) c.series_order = get_as<int>(j, "series_order");
  c.validate();
  return c;
}

std::string config_to_json(const RunConfig& c) {
  Json j;
  j["command"] = to_string(c.command);
  j["box_length"] = c.box_length;
  j["cutoff"] = c.cutoff;
  j["shape"] = c.shape == CutoffShape::Sharp ? "sharp" : "quadratic";
  j["mass"] = c.mass;
  j["alpha"] = c.alpha ? Json(*c.alpha) : Json(nullptr);
  j["alpha_ph"] = c.alpha_ph ? Json(*c.alpha_ph) : Json(nullptr);
  j["z3"] = c.z3 ? Json(*c.z3) : Json(nullptr);
  j["q"] = c.q;
  j["pv_masses"] = c.pv_masses;
  if (c.gaussian) {
    j["density"] = {{"gaussian", {{"charge", c.gaussian->charge}, {"width", c.gaussian->width}}}};
  } else {
    j["density"] = {{"file", *c.density_file}};
  }
  j["output_dir"] = c.output_dir;
  j["residual_tol"] = c.residual_tol;
  j["max_iterations"] = c.max_iterations;
  j["degeneracy_tol"] = c.degeneracy_tol;
  j["damping"] = c.fixed_damping ? Json(*c.fixed_damping) : Json("optimal");
  j["k_grid"] = c.k_grid;
  j["uehling_radii"] = c.uehling_radii;
  j["series_order"] = c.series_order;
  return j.dump();
}

int run(const RunConfig& config, std::ostream& err) {
  try {
    config.validate();
    switch (config.command) {
      case Command::Multipliers: run_multipliers(config); return 0;
      case Command::SCF: return run_scf(config, err);
      case Command::Renorm: run_renorm(config); return 0;
      case Command::PV: run_pv(config); return 0;
      case Command::Crosscheck: return run_crosscheck(config, err);
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}

int run_json(const std::string& json_text, std::ostream& err) {
  RunConfig config;
  try {
    config = parse_config(json_text);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return run(config, err);
}

}  // namespace vacpol
