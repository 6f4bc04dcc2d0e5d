#pragma once

#include <memory>
#include <variant>
#include <vector>

#include "vacpol/dirac.hpp"
#include "vacpol/errors.hpp"
#include "vacpol/lattice.hpp"
#include "vacpol/numerics.hpp"

namespace vacpol {

/// Lattice, Coulomb kernel and mass, together with the free Dirac matrix and
/// the free vacuum they determine. Built once and shared by every SCF call.
class PeriodicModel {
 public:
  PeriodicModel(FourierLattice lattice, CoulombKernel kernel, double mass);
  PeriodicModel(const FourierLattice& lattice, double mass);

  const FourierLattice& lattice() const { return lattice_; }
  const CoulombKernel& kernel() const { return kernel_; }
  double mass() const { return mass_; }
  const CMatrix& free_dirac() const { return free_dirac_; }
  const DensityMatrix& free_vacuum() const { return free_vacuum_; }
  /// E_per of the free vacuum, -tr|D| / 2.
  double free_energy() const { return free_energy_; }

 private:
  FourierLattice lattice_;
  CoulombKernel kernel_;
  double mass_;
  CMatrix free_dirac_;
  DensityMatrix free_vacuum_;
  double free_energy_;
};

struct FixedDamping {
  double t = 0.5;
};
struct OptimalDamping {};
using Damping = std::variant<FixedDamping, OptimalDamping>;

struct SCFOptions {
  int max_iterations = 500;
  double residual_tol = 1e-9;
  Damping damping = OptimalDamping{};
  double degeneracy_tol = 1e-9;

  void validate() const;
};

struct SCFReport {
  int iterations = 0;
  double energy = 0.0;
  double relative_energy = 0.0;
  /// ||[gamma, D_gamma]||_F.
  double residual = 0.0;
  double fermi_level = 0.0;
  /// tr(gamma) - 2N, the relative trace against the free vacuum.
  double relative_charge = 0.0;
  int degenerate_levels = 0;
  bool uniqueness_condition_met = false;
  bool converged = false;
  std::vector<double> energy_history;
};

struct SCFResult {
  DensityMatrix state;
  ChargeDensity density;
  SCFReport report;
};

/// Raised when the iteration budget runs out; the best iterate is attached.
class SCFNoConvergence : public NonConvergence {
 public:
  SCFNoConvergence(const std::string& what, SCFResult best)
      : NonConvergence(what), best_(std::make_shared<SCFResult>(std::move(best))) {}
  const SCFResult& best() const { return *best_; }

 private:
  std::shared_ptr<const SCFResult> best_;
};

/// tr(P Q P) + tr((I - P) Q (I - P)). Throws LatticeMismatch on size mismatch
/// and ValidationError when `reference` is not a projector.
double relative_trace(const CMatrix& q, const DensityMatrix& reference);

/// D + alpha (rho_rel - nu) * G_L as a block matrix on the lattice.
HermitianMatrix fock_operator(const PeriodicModel& model, const ChargeDensity& rho_rel,
                              const ChargeDensity& nu, double alpha);

/// tr(D (gamma - 1/2)) - alpha D(rho, nu) + (alpha / 2) D(rho, rho), rho = rho_{gamma - 1/2}.
double energy_per(const PeriodicModel& model, const DensityMatrix& gamma, const ChargeDensity& nu,
                  double alpha);

/// (alpha / 2) int int |(gamma - 1/2)(x, y)|^2 G_L(x - y) over the box.
/// Evaluated only; the solver minimizes the reduced energy.
double exchange_energy(const PeriodicModel& model, const DensityMatrix& gamma, double alpha);

/// 2^{11/6} pi^{1/6} alpha ||nu||_C < sqrt(m), with the lattice Coulomb norm.
bool uniqueness_condition(const PeriodicModel& model, const ChargeDensity& nu, double alpha);

/// Global minimizer of E_per (Fermi level 0), by optimally damped relaxation.
SCFResult scf_solve(const PeriodicModel& model, const ChargeDensity& nu, double alpha,
                    const SCFOptions& options = {});

/// Minimizer under tr(gamma) - 2N = q. Throws InfeasibleCharge when |q| > 2N.
SCFResult scf_charge_sector(const PeriodicModel& model, const ChargeDensity& nu, double alpha,
                            double q, const SCFOptions& options = {});

struct StabilityResult {
  double lhs = 0.0;
  bool holds = false;
};

/// E_per(gamma) - E_per(gamma0) + (alpha / 2) D(nu, nu), required to be >= -1e-9.
StabilityResult stability_check(const PeriodicModel& model, const DensityMatrix& gamma,
                                const ChargeDensity& nu, double alpha);

}  // namespace vacpol
