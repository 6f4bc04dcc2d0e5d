#include "vacpol/scf.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

namespace vacpol {

namespace {

double free_vacuum_energy(const CMatrix& dirac, const FourierLattice& lattice) {
  // Each symbol has eigenvalues +-E twice, so -tr|D| / 2 = -sum of 2E per mode.
  double sum = 0.0;
  for (std::size_t i = 0; i < lattice.mode_count(); ++i) {
    const Eigen::Matrix4cd b = dirac.block<4, 4>(4 * i, 4 * i);
    sum += std::sqrt((b * b).trace().real() / 4.0);
  }
  return -2.0 * sum;
}

// Re tr(A B) without forming the product.
double trace_product(const CMatrix& a, const CMatrix& b) {
  return (a.cwiseProduct(b.transpose())).sum().real();
}

double trace_dirac(const CMatrix& dirac, const CMatrix& gamma, std::size_t modes) {
  double sum = 0.0;
  for (std::size_t i = 0; i < modes; ++i) {
    sum += trace_product(dirac.block<4, 4>(4 * i, 4 * i), gamma.block<4, 4>(4 * i, 4 * i));
  }
  return sum;
}

double energy_from(const PeriodicModel& model, const CMatrix& gamma, const ChargeDensity& rho,
                   const ChargeDensity& nu, double alpha) {
  const auto& k = model.kernel();
  return trace_dirac(model.free_dirac(), gamma, model.lattice().mode_count()) -
         alpha * coulomb_inner(rho, nu, k) + 0.5 * alpha * coulomb_inner(rho, rho, k);
}

struct Occupation {
  Eigen::VectorXd values;
  double fermi_level = 0.0;
  int degenerate = 0;
};

// Filling below the Fermi level 0.
Occupation occupy_negative(const Eigen::VectorXd& levels, double degeneracy_tol) {
  Occupation out;
  out.values = Eigen::VectorXd::Zero(levels.size());
  for (Eigen::Index i = 0; i < levels.size(); ++i) {
    if (levels[i] <= 0.0) out.values[i] = 1.0;
    if (std::abs(levels[i]) <= degeneracy_tol) ++out.degenerate;
  }
  return out;
}

// Aufbau filling of `target` states from the ascending spectrum. A cluster of
// levels within degeneracy_tol straddling the boundary shares the remaining
// charge equally; otherwise the Fermi level sits mid-gap.
Occupation occupy_count(const Eigen::VectorXd& levels, double target, double degeneracy_tol) {
  const Eigen::Index n = levels.size();
  Occupation out;
  out.values = Eigen::VectorXd::Zero(n);
  const auto whole = static_cast<Eigen::Index>(std::floor(target + 1e-12));
  const double frac = std::max(0.0, target - static_cast<double>(whole));
  const bool integral = frac <= 1e-12;

  if (integral) {
    const bool separated =
        whole == 0 || whole == n || levels[whole] - levels[whole - 1] > degeneracy_tol;
    if (separated) {
      out.values.head(whole).setOnes();
      if (whole == 0) {
        out.fermi_level = levels[0] - 1.0;
      } else if (whole == n) {
        out.fermi_level = levels[n - 1] + 1.0;
      } else {
        out.fermi_level = 0.5 * (levels[whole - 1] + levels[whole]);
      }
      return out;
    }
  }
  const Eigen::Index pivot = integral ? whole - 1 : whole;
  const double level = levels[pivot];
  Eigen::Index lo = pivot;
  Eigen::Index hi = pivot + 1;
  while (lo > 0 && level - levels[lo - 1] <= degeneracy_tol) --lo;
  while (hi < n && levels[hi] - level <= degeneracy_tol) ++hi;
  out.values.head(lo).setOnes();
  const double share = (target - static_cast<double>(lo)) / static_cast<double>(hi - lo);
  out.values.segment(lo, hi - lo).setConstant(std::clamp(share, 0.0, 1.0));
  out.fermi_level = level;
  out.degenerate = static_cast<int>(hi - lo);
  return out;
}

DensityMatrix build_state(const FourierLattice& lattice, const EigenDecomposition& eig,
                          const Eigen::VectorXd& occupations) {
  std::vector<Eigen::Index> kept;
  for (Eigen::Index i = 0; i < occupations.size(); ++i)
    if (occupations[i] > 0.0) kept.push_back(i);
  CMatrix vectors(eig.vectors.rows(), static_cast<Eigen::Index>(kept.size()));
  Eigen::VectorXd occ(static_cast<Eigen::Index>(kept.size()));
  for (std::size_t c = 0; c < kept.size(); ++c) {
    vectors.col(static_cast<Eigen::Index>(c)) = eig.vectors.col(kept[c]);
    occ[static_cast<Eigen::Index>(c)] = occupations[kept[c]];
  }
  return DensityMatrix::from_spectrum(lattice, vectors, occ);
}

template <typename Occupy>
SCFResult relax(const PeriodicModel& model, const ChargeDensity& nu, double alpha,
                const SCFOptions& options, DensityMatrix start, Occupy occupy) {
  options.validate();
  if (!(alpha >= 0.0)) throw ValidationError("scf: alpha must be non-negative");
  if (!(nu.lattice() == model.lattice())) throw LatticeMismatch();
  const auto& lattice = model.lattice();
  const double two_n = 2.0 * static_cast<double>(lattice.mode_count());

  DensityMatrix gamma = std::move(start);
  SCFReport report;
  report.uniqueness_condition_met = uniqueness_condition(model, nu, alpha);
  double best_residual = INFINITY;
  std::optional<SCFResult> best;

  for (int it = 1; it <= options.max_iterations; ++it) {
    ChargeDensity rho = density_of(gamma);
    const HermitianMatrix fock = fock_operator(model, rho, nu, alpha);
    const CMatrix& f = fock.entries();
    const EigenDecomposition eig = eigh(fock);
    const Occupation occ = occupy(eig.values);
    const DensityMatrix target = build_state(lattice, eig, occ.values);

    const CMatrix& g = gamma.matrix();
    const double residual = (f * g - g * f).norm();
    const double energy = energy_from(model, g, rho, nu, alpha);
    const CMatrix delta = target.matrix() - g;
    const double slope = trace_product(f, delta);

    report.iterations = it;
    report.energy = energy;
    report.relative_energy = energy - model.free_energy();
    report.residual = residual;
    report.fermi_level = occ.fermi_level;
    report.degenerate_levels = occ.degenerate;
    report.relative_charge = g.trace().real() - two_n;
    report.energy_history.push_back(energy);

    if (residual <= options.residual_tol && -slope <= options.residual_tol) {
      report.converged = true;
      return {std::move(gamma), std::move(rho), std::move(report)};
    }
    if (residual < best_residual) {
      best_residual = residual;
      best = SCFResult{gamma, rho, report};
    }

    double t = 1.0;
    if (const auto* fixed = std::get_if<FixedDamping>(&options.damping)) {
      t = fixed->t;
    } else {
      // The energy is exactly quadratic along the segment towards the target.
      const ChargeDensity drho = density_of_operator(delta, lattice, 0.0);
      const double curvature = 0.5 * alpha * coulomb_inner(drho, drho, model.kernel());
      if (curvature > 0.0 && slope < 0.0) t = std::clamp(-slope / (2.0 * curvature), 0.0, 1.0);
    }
    gamma = DensityMatrix::mix(gamma, target, t);
  }
  best->report.converged = false;
  throw SCFNoConvergence("scf: no convergence after " + std::to_string(options.max_iterations) +
                             " iterations (best residual " + std::to_string(best_residual) + ")",
                         std::move(*best));
}

}  // namespace

PeriodicModel::PeriodicModel(FourierLattice lattice, CoulombKernel kernel, double mass)
    : lattice_(std::move(lattice)),
      kernel_(std::move(kernel)),
      mass_(mass),
      free_dirac_(free_dirac_matrix(lattice_, mass)),
      free_vacuum_(free_projector(lattice_, mass)),
      free_energy_(free_vacuum_energy(free_dirac_, lattice_)) {
  if (!(kernel_.lattice() == lattice_)) throw LatticeMismatch();
}

PeriodicModel::PeriodicModel(const FourierLattice& lattice, double mass)
    : PeriodicModel(lattice, coulomb_kernel(lattice), mass) {}

void SCFOptions::validate() const {
  if (max_iterations < 1) throw ValidationError("SCFOptions: max_iterations must be >= 1");
  if (!(residual_tol > 0.0)) throw ValidationError("SCFOptions: residual_tol must be positive");
  if (!(degeneracy_tol >= 0.0)) throw ValidationError("SCFOptions: degeneracy_tol must be >= 0");
  if (const auto* fixed = std::get_if<FixedDamping>(&damping)) {
    if (!(fixed->t > 0.0 && fixed->t <= 1.0)) {
      throw ValidationError("SCFOptions: fixed damping must lie in (0, 1]");
    }
  }
}

double relative_trace(const CMatrix& q, const DensityMatrix& reference) {
  if (q.rows() != reference.dimension() || q.cols() != reference.dimension()) {
    throw LatticeMismatch();
  }
  if (!reference.is_projector()) throw ValidationError("relative_trace: reference is not a projector");
  const CMatrix& p = reference.matrix();
  const CMatrix c = CMatrix::Identity(p.rows(), p.cols()) - p;
  return (p * q * p).trace().real() + (c * q * c).trace().real();
}

HermitianMatrix fock_operator(const PeriodicModel& model, const ChargeDensity& rho_rel,
                              const ChargeDensity& nu, double alpha) {
  const auto& lattice = model.lattice();
  if (!(rho_rel.lattice() == lattice) || !(nu.lattice() == lattice)) throw LatticeMismatch();
  if (!(alpha >= 0.0)) throw ValidationError("fock_operator: alpha must be non-negative");
  CMatrix f = model.free_dirac();
  if (alpha == 0.0) return HermitianMatrix::symmetrized(f);
  const std::size_t n = lattice.mode_count();
  std::vector<Complex> potential(lattice.diff_count());
  for (std::size_t d = 0; d < potential.size(); ++d) {
    potential[d] = alpha * model.kernel().coefficient(d) * (rho_rel[d] - nu[d]);
  }
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const Complex v = potential[lattice.pair_diff(i, j)];
      if (v == Complex(0.0, 0.0)) continue;
      for (int s = 0; s < 4; ++s) f(4 * i + s, 4 * j + s) += v;
    }
  }
  return HermitianMatrix::symmetrized(f);
}

double energy_per(const PeriodicModel& model, const DensityMatrix& gamma, const ChargeDensity& nu,
                  double alpha) {
  if (!(gamma.lattice() == model.lattice()) || !(nu.lattice() == model.lattice())) {
    throw LatticeMismatch();
  }
  return energy_from(model, gamma.matrix(), density_of(gamma), nu, alpha);
}

double exchange_energy(const PeriodicModel& model, const DensityMatrix& gamma, double alpha) {
  const auto& lattice = model.lattice();
  if (!(gamma.lattice() == lattice)) throw LatticeMismatch();
  const std::size_t n = lattice.mode_count();
  const auto modes = lattice.modes();
  CMatrix a = gamma.matrix();
  a.diagonal().array() -= 0.5;

  // Pair (j, k) with (j + q, k + q): q = modes[j2] - modes[j].
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t j2 = 0; j2 < n; ++j2) {
      const std::size_t q = lattice.pair_diff(j2, j);
      const double g = model.kernel().coefficient(q);
      if (g == 0.0) continue;
      const IntVec3& shift = lattice.diff_modes()[q];
      for (std::size_t k = 0; k < n; ++k) {
        const auto k2 = lattice.mode_index(
            {modes[k][0] + shift[0], modes[k][1] + shift[1], modes[k][2] + shift[2]});
        if (!k2) continue;
        sum += g * trace_product(a.block<4, 4>(4 * j, 4 * k),
                                 a.block<4, 4>(4 * j2, 4 * *k2).adjoint());
      }
    }
  }
  return 0.5 * alpha * sum / lattice.volume();
}

bool uniqueness_condition(const PeriodicModel& model, const ChargeDensity& nu, double alpha) {
  const double norm = std::sqrt(std::max(0.0, coulomb_inner(nu, nu, model.kernel())) /
                                (4.0 * std::numbers::pi));
  const double constant = std::pow(2.0, 11.0 / 6.0) * std::pow(std::numbers::pi, 1.0 / 6.0);
  return constant * alpha * norm < std::sqrt(model.mass());
}

SCFResult scf_solve(const PeriodicModel& model, const ChargeDensity& nu, double alpha,
                    const SCFOptions& options) {
  const double tol = options.degeneracy_tol;
  return relax(model, nu, alpha, options, model.free_vacuum(),
               [tol](const Eigen::VectorXd& levels) { return occupy_negative(levels, tol); });
}

SCFResult scf_charge_sector(const PeriodicModel& model, const ChargeDensity& nu, double alpha,
                            double q, const SCFOptions& options) {
  const auto& lattice = model.lattice();
  const double two_n = 2.0 * static_cast<double>(lattice.mode_count());
  if (!std::isfinite(q) || std::abs(q) > two_n) {
    throw InfeasibleCharge("scf_charge_sector: |q| = " + std::to_string(std::abs(q)) +
                           " exceeds 2N = " + std::to_string(two_n));
  }
  options.validate();
  const double target = two_n + q;
  const double tol = options.degeneracy_tol;
  auto occupy = [target, tol](const Eigen::VectorXd& levels) {
    return occupy_count(levels, target, tol);
  };
  const EigenDecomposition free = eigh(HermitianMatrix::symmetrized(model.free_dirac()));
  DensityMatrix start = build_state(lattice, free, occupy(free.values).values);
  return relax(model, nu, alpha, options, std::move(start), occupy);
}

StabilityResult stability_check(const PeriodicModel& model, const DensityMatrix& gamma,
                                const ChargeDensity& nu, double alpha) {
  const double lhs = energy_per(model, gamma, nu, alpha) - model.free_energy() +
                     0.5 * alpha * coulomb_inner(nu, nu, model.kernel());
  return {lhs, lhs >= -1e-9};
}

}  // namespace vacpol
