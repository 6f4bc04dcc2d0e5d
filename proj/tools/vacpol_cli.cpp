#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vacpol/run.hpp"

namespace {

using Json = nlohmann::ordered_json;

struct Flags {
  std::string config_path;
  std::optional<double> box_length, cutoff, mass, alpha, alpha_ph, z3, q;
  std::optional<std::string> shape, density_file, output_dir, damping;
  std::optional<double> residual_tol, degeneracy_tol;
  std::optional<int> max_iterations, series_order;
  std::vector<double> pv_masses, gaussian, k_grid, radii;
};

void add_options(CLI::App& cmd, Flags& f) {
  cmd.add_option("-c,--config", f.config_path, "JSON config file; flags override its keys");
  cmd.add_option("--box-length", f.box_length, "Box side L");
  cmd.add_option("--cutoff", f.cutoff, "Momentum cutoff Lambda");
  cmd.add_option("--shape", f.shape, "Cutoff shape")->check(CLI::IsMember({"sharp", "quadratic"}));
  cmd.add_option("--mass", f.mass, "Fermion mass m");
  cmd.add_option("--alpha", f.alpha, "Bare coupling");
  cmd.add_option("--alpha-ph", f.alpha_ph, "Physical coupling");
  cmd.add_option("--z3", f.z3, "Charge renormalization factor Z3");
  cmd.add_option("--q", f.q, "Relative charge of the constrained SCF");
  cmd.add_option("--pv-masses", f.pv_masses, "Pauli-Villars masses m0 m1 m2")->expected(3);
  cmd.add_option("--gaussian", f.gaussian, "Gaussian external density: charge width")->expected(2);
  cmd.add_option("--density-file", f.density_file, "External density CSV (d1,d2,d3,re,im)");
  cmd.add_option("-o,--out", f.output_dir, "Output directory");
  cmd.add_option("--residual-tol", f.residual_tol, "SCF commutator tolerance");
  cmd.add_option("--degeneracy-tol", f.degeneracy_tol, "Level degeneracy tolerance");
  cmd.add_option("--max-iterations", f.max_iterations, "SCF iteration budget");
  cmd.add_option("--damping", f.damping, "'optimal' or a fixed step in (0, 1]");
  cmd.add_option("--k-grid", f.k_grid, "Momentum grid for multiplier tables");
  cmd.add_option("--radii", f.radii, "Radii for Uehling potential samples");
  cmd.add_option("--series-order", f.series_order, "Highest order of the density series");
}

template <typename T>
void put(Json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

Json overrides(const Flags& f) {
  Json j = Json::object();
  put(j, "box_length", f.box_length);
  put(j, "cutoff", f.cutoff);
  put(j, "shape", f.shape);
  put(j, "mass", f.mass);
  put(j, "alpha", f.alpha);
  put(j, "alpha_ph", f.alpha_ph);
  put(j, "z3", f.z3);
  put(j, "q", f.q);
  put(j, "output_dir", f.output_dir);
  put(j, "residual_tol", f.residual_tol);
  put(j, "degeneracy_tol", f.degeneracy_tol);
  put(j, "max_iterations", f.max_iterations);
  put(j, "series_order", f.series_order);
  if (f.damping) {
    if (*f.damping == "optimal") {
      j["damping"] = "optimal";
    } else {
      try {
        j["damping"] = std::stod(*f.damping);
      } catch (const std::exception&) {
        j["damping"] = *f.damping;  // rejected with a message by the config parser
      }
    }
  }
  if (!f.pv_masses.empty()) j["pv_masses"] = f.pv_masses;
  if (!f.k_grid.empty()) j["k_grid"] = f.k_grid;
  if (!f.radii.empty()) j["uehling_radii"] = f.radii;
  if (!f.gaussian.empty()) {
    j["density"] = {{"gaussian", {{"charge", f.gaussian[0]}, {"width", f.gaussian[1]}}}};
  }
  if (f.density_file) j["density"] = {{"file", *f.density_file}};
  if (!f.gaussian.empty() && f.density_file) {
    j["density"] = {{"gaussian", {{"charge", f.gaussian[0]}, {"width", f.gaussian[1]}}},
                    {"file", *f.density_file}};
  }
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Periodic reduced Bogoliubov-Dirac-Fock vacuum and renormalization multipliers"};
  app.require_subcommand(1);
  Flags flags;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"multipliers", "Tabulate U, B_Lambda, U_Lambda and M"},
      {"scf", "Self-consistent polarized vacuum on the lattice"},
      {"renorm", "Renormalization point, density series and Uehling potential"},
      {"pv", "Pauli-Villars scheme, M table and F2 energy"},
      {"crosscheck", "Compare the SCF density with linear response"}};
  for (const auto& [name, help] : commands) add_options(*app.add_subcommand(name, help), flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  Json config = Json::object();
  if (!flags.config_path.empty()) {
    std::ifstream in(flags.config_path);
    if (!in) {
      std::cerr << "error: cannot read config file " << flags.config_path << "\n";
      return 2;
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
      config = Json::parse(buffer.str());
    } catch (const Json::exception& e) {
      std::cerr << "error: config is not valid JSON: " << e.what() << "\n";
      return 2;
    }
    if (!config.is_object()) {
      std::cerr << "error: config must be a JSON object\n";
      return 2;
    }
  }
  config["command"] = app.get_subcommands().front()->get_name();
  Json flag_values = overrides(flags);
  // A density flag replaces the whole density setting from the file.
  for (auto& [key, value] : flag_values.items()) config[key] = value;
  return vacpol::run_json(config.dump(), std::cerr);
}
