#include "vacpol/renorm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vacpol/errors.hpp"
#include "vacpol/numerics.hpp"

namespace vacpol {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSmallK = 1e-3;
constexpr double kZeroK = 1e-8;
// Past this the gap 1 - z_max underflows.
constexpr double kLargestCutoff = 1e150;

void require_cutoff(double cutoff, const char* where) {
  if (!(cutoff > 0.0 && std::isfinite(cutoff))) {
    throw ValidationError(std::string(where) + ": cutoff must be positive and finite");
  }
  if (cutoff > kLargestCutoff) {
    throw DomainError(std::string(where) + ": cutoff above 1e150 is not representable");
  }
}

void require_k(double cutoff, double k, const char* where) {
  if (!(k >= 0.0) || k > 2.0 * cutoff * (1.0 + 1e-14)) {
    throw DomainError(std::string(where) + ": k = " + std::to_string(k) +
                      " outside [0, 2 cutoff] with cutoff " + std::to_string(cutoff));
  }
}

// 1 / (sqrt(1 + a^2) + a) = sqrt(1 + a^2) - a without cancellation.
double root_minus(double a) {
  if (a >= 0.0) return 1.0 / (std::hypot(1.0, a) + a);
  return std::hypot(1.0, a) - a;
}

// 1 - Z_L(k).
double z_gap(double cutoff, double k) {
  const double s = std::hypot(1.0, cutoff);
  if (k < kZeroK) return 1.0 / (s * (s + cutoff));
  const double r = std::hypot(1.0, cutoff - k);
  return (root_minus(cutoff) + root_minus(cutoff - k)) / (s + r);
}

}  // namespace

double B0(double cutoff) {
  require_cutoff(cutoff, "B0");
  const double gap = 1.0 / (std::hypot(1.0, cutoff) * (std::hypot(1.0, cutoff) + cutoff));
  const auto r = integrate_toward_one(
      [](double z, double omz) { return (z * z - z * z * z * z / 3.0) / (omz * (1.0 + z)); }, gap,
      1e-12);
  return r.value / kPi;
}

double B0_asymptotic(double cutoff) {
  require_cutoff(cutoff, "B0_asymptotic");
  return 2.0 / (3.0 * kPi) * std::log(cutoff) - 5.0 / (9.0 * kPi) +
         2.0 / (3.0 * kPi) * std::log(2.0);
}

double Z_cutoff(double cutoff, double k) {
  require_cutoff(cutoff, "Z_cutoff");
  require_k(cutoff, k, "Z_cutoff");
  if (k < kZeroK) return cutoff / std::hypot(1.0, cutoff);
  return (2.0 * cutoff - k) / (std::hypot(1.0, cutoff) + std::hypot(1.0, cutoff - k));
}

double B_k(double cutoff, double k) {
  require_cutoff(cutoff, "B_k");
  require_k(cutoff, k, "B_k");
  const double gap = z_gap(cutoff, k);
  if (gap >= 1.0) return 0.0;
  const double s = std::hypot(1.0, cutoff);
  const double k2 = k * k;
  const auto r = integrate_toward_one(
      [k, k2, s](double z, double omz) {
        const double one_minus_z2 = omz * (1.0 + z);
        const double first =
            (z * z - z * z * z * z / 3.0) / (one_minus_z2 * (1.0 + 0.25 * k2 * one_minus_z2));
        const double second = 0.5 * k * (z - z * z * z / 3.0) / (s - 0.5 * k * z);
        return (first + second) / kPi;
      },
      gap, 1e-10);
  return r.value;
}

double uehling_U_closed(double k) {
  if (!(k > 0.0)) throw DomainError("uehling_U_closed: k must be positive");
  const double k2 = k * k;
  const double root = std::sqrt(4.0 + k2);
  // log((root + k) / (root - k)) = 2 atanh(k / root).
  const double log_ratio = 2.0 * std::atanh(k / root);
  return (12.0 - 5.0 * k2) / (9.0 * kPi * k2) +
         root / (3.0 * kPi * k2 * k) * (k2 - 2.0) * log_ratio;
}

double uehling_U_integral(double k) {
  if (!(k >= 0.0)) throw DomainError("uehling_U_integral: k must be non-negative");
  if (k == 0.0) return 0.0;
  const double k2 = k * k;
  const auto r = integrate_adaptive(
      [k2](double z) {
        const double z2 = z * z;
        return (z2 - z2 * z2 / 3.0) / (1.0 + 0.25 * k2 * (1.0 - z2));
      },
      0.0, 1.0, 1e-15);
  return k2 / (4.0 * kPi) * r.value;
}

double uehling_U(double k) {
  if (!(k >= 0.0)) throw DomainError("uehling_U: k must be non-negative");
  return k <= kSmallK ? uehling_U_integral(k) : uehling_U_closed(k);
}

double U_cutoff(double cutoff, double k) {
  require_cutoff(cutoff, "U_cutoff");
  require_k(cutoff, k, "U_cutoff");
  if (k == 0.0) return 0.0;
  return B0(cutoff) - B_k(cutoff, k);
}

RenormPoint renorm_point_from_bare(double alpha, double cutoff) {
  if (!(alpha >= 0.0 && std::isfinite(alpha))) {
    throw ValidationError("renorm_point_from_bare: alpha must be non-negative");
  }
  const double b0 = B0(cutoff);
  RenormPoint p;
  p.alpha_bare = alpha;
  p.cutoff = cutoff;
  p.alpha_ph = alpha / (1.0 + alpha * b0);
  p.z3 = 1.0 - p.alpha_ph * b0;
  return p;
}

RenormPoint bare_from_physical(double alpha_ph, double cutoff) {
  if (!(alpha_ph >= 0.0 && std::isfinite(alpha_ph))) {
    throw ValidationError("bare_from_physical: alpha_ph must be non-negative");
  }
  const double b0 = B0(cutoff);
  const double screening = alpha_ph * b0;
  if (screening >= 1.0) {
    throw LandauPole("bare_from_physical: Landau pole, alpha_ph * B0(cutoff) = " +
                     std::to_string(screening) + " >= 1");
  }
  RenormPoint p;
  p.alpha_ph = alpha_ph;
  p.cutoff = cutoff;
  p.alpha_bare = alpha_ph / (1.0 - screening);
  p.z3 = 1.0 - screening;
  return p;
}

double cutoff_from_Z3(double alpha_ph, double z3) {
  if (!(alpha_ph > 0.0 && std::isfinite(alpha_ph))) {
    throw ValidationError("cutoff_from_Z3: alpha_ph must be positive");
  }
  if (!(z3 > 0.0)) throw ValidationError("cutoff_from_Z3: Z3 must be positive");
  if (z3 >= 1.0) throw Degenerate("cutoff_from_Z3: Z3 >= 1 forces the cutoff to 0");
  const double target = (1.0 - z3) / alpha_ph;
  const double lo = std::log(1e-30);
  const double hi = std::log(kLargestCutoff);
  auto f = [target](double u) { return B0(std::exp(u)) - target; };
  if (f(lo) >= 0.0 || f(hi) <= 0.0) {
    throw Degenerate("cutoff_from_Z3: no cutoff in [1e-30, 1e150] gives B0 = " +
                     std::to_string(target));
  }
  return std::exp(find_root_monotone(f, lo, hi, 1e-12));
}

double log_cutoff_asymptotic(double alpha_ph, double z3) {
  if (!(alpha_ph > 0.0)) throw ValidationError("log_cutoff_asymptotic: alpha_ph must be positive");
  return 1.5 * kPi * (1.0 - z3) / alpha_ph + 5.0 / 6.0 - std::log(2.0);
}

SampledFunction::SampledFunction(std::vector<double> grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (grid_.size() != values_.size()) {
    throw ValidationError("SampledFunction: grid and values differ in length");
  }
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    if (!std::isfinite(grid_[i]) || grid_[i] < 0.0) {
      throw ValidationError("SampledFunction: grid points must be finite and non-negative");
    }
    if (i > 0 && !(grid_[i] > grid_[i - 1])) {
      throw ValidationError("SampledFunction: grid must be strictly increasing");
    }
    if (!std::isfinite(values_[i])) throw ValidationError("SampledFunction: values must be finite");
  }
}

SampledFunction SampledFunction::sample(std::vector<double> grid,
                                        const std::function<double(double)>& f) {
  std::vector<double> values;
  values.reserve(grid.size());
  for (double k : grid) values.push_back(f(k));
  return SampledFunction(std::move(grid), std::move(values));
}

double SampledFunction::at(double k) const {
  const auto it = std::lower_bound(grid_.begin(), grid_.end(), k);
  if (it == grid_.end() || *it != k) {
    throw DomainError("SampledFunction: k = " + std::to_string(k) + " is not a grid point");
  }
  return values_[static_cast<std::size_t>(it - grid_.begin())];
}

std::string to_string(MultiplierKind kind) {
  switch (kind) {
    case MultiplierKind::B0Const: return "B0const";
    case MultiplierKind::Bk: return "Bk";
    case MultiplierKind::U: return "U";
    case MultiplierKind::UCutoff: return "ULambda";
    case MultiplierKind::M: return "M";
  }
  return "unknown";
}

MultiplierTable multiplier_table(MultiplierKind kind, const std::vector<double>& grid,
                                 std::optional<double> cutoff) {
  MultiplierTable table;
  table.kind = kind;
  const SampledFunction checked(grid, std::vector<double>(grid.size(), 0.0));
  table.grid = grid;
  if (kind == MultiplierKind::U) {
    for (double k : grid) table.values.push_back(uehling_U(k));
    return table;
  }
  if (kind == MultiplierKind::M) {
    throw ValidationError("multiplier_table: M tables need a Pauli-Villars scheme");
  }
  if (!cutoff) throw ValidationError("multiplier_table: " + to_string(kind) + " needs a cutoff");
  table.cutoff = cutoff;
  const double b0 = B0(*cutoff);
  for (double k : grid) {
    switch (kind) {
      case MultiplierKind::B0Const: table.values.push_back(b0); break;
      case MultiplierKind::Bk: table.values.push_back(k < kZeroK ? b0 : B_k(*cutoff, k)); break;
      default: table.values.push_back(k == 0.0 ? 0.0 : b0 - B_k(*cutoff, k)); break;
    }
  }
  return table;
}

std::vector<SampledFunction> density_series(const SampledFunction& nu_hat, int order) {
  if (order < 0) throw ValidationError("density_series: order must be non-negative");
  if (order >= 3) {
    throw Unsupported("density_series: orders >= 3 need the nonlinear densities F_j");
  }
  std::vector<double> u;
  u.reserve(nu_hat.size());
  for (double k : nu_hat.grid()) u.push_back(uehling_U(k));
  std::vector<SampledFunction> terms{nu_hat};
  for (int n = 1; n <= order; ++n) {
    std::vector<double> next = terms.back().values();
    for (std::size_t i = 0; i < next.size(); ++i) next[i] *= u[i];
    terms.emplace_back(nu_hat.grid(), std::move(next));
  }
  return terms;
}

RadialProfile gaussian_radial(double charge, double width) {
  if (!(width > 0.0)) throw ValidationError("gaussian_radial: width must be positive");
  const double norm = charge * std::pow(2.0 * kPi * width * width, -1.5);
  return {[norm, width](double r) { return norm * std::exp(-0.5 * r * r / (width * width)); },
          14.0 * width};
}

namespace {

// Angular average of e^{-mu |x - y|} / |x - y| over |y| = r at |x| = x.
double yukawa_shell(double mu, double x, double r) {
  if (x == 0.0) return std::exp(-mu * r) / r;
  if (r == 0.0) return std::exp(-mu * x) / x;
  const double lo = std::min(x, r);
  const double hi = std::max(x, r);
  return std::exp(-mu * (hi - lo)) * (-std::expm1(-2.0 * mu * lo)) / (2.0 * mu * x * r);
}

double shell_integral(const RadialProfile& nu, double mu, double x, double tol) {
  // Breakpoints resolve the boundary layer of width 1/mu around r = x.
  std::vector<double> cuts{0.0, nu.extent};
  if (x > 0.0 && x < nu.extent) cuts.push_back(x);
  for (double w : {1.0, 8.0, 40.0}) {
    for (double c : {x - w / mu, x + w / mu})
      if (c > 0.0 && c < nu.extent) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  const double pieces = static_cast<double>(cuts.size() - 1);
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    sum += integrate_adaptive(
               [&](double r) {
                 return 4.0 * kPi * r * r * nu.density(r) * yukawa_shell(mu, x, r);
               },
               cuts[i], cuts[i + 1], tol / pieces)
               .value;
  }
  return sum;
}

}  // namespace

double uehling_potential(const RadialProfile& nu, double alpha_ph, double r, double rel_tol) {
  if (!(r >= 0.0 && std::isfinite(r))) throw ValidationError("uehling_potential: r must be >= 0");
  if (!(nu.extent > 0.0)) throw ValidationError("uehling_potential: profile extent must be positive");
  if (!(rel_tol > 0.0)) throw ValidationError("uehling_potential: rel_tol must be positive");
  if (alpha_ph == 0.0) return 0.0;

  const double mass = integrate_adaptive(
                          [&](double s) { return 4.0 * kPi * s * s * std::abs(nu.density(s)); },
                          0.0, nu.extent, 1e-13)
                          .value;
  if (mass == 0.0) return 0.0;

  // t = cosh(s) removes the square-root endpoint; the integrand decays like
  // e^{-2s}, so s <= 20 loses nothing at double precision.
  const double inner_tol = 1e-14 * mass;
  auto outer = [&](double s) {
    const double t = std::cosh(s);
    const double sh = std::sinh(s);
    const double t2 = t * t;
    return sh * sh * (2.0 / t2 + 1.0 / (t2 * t2)) * shell_integral(nu, 2.0 * t, r, inner_tol);
  };
  double tol = 1e-9 * mass;
  double value = integrate_adaptive(outer, 0.0, 20.0, tol).value;
  if (std::abs(value) * rel_tol * 0.01 < tol) {
    tol = std::max(std::abs(value) * rel_tol * 0.01, 1e-13 * mass);
    value = integrate_adaptive(outer, 0.0, 20.0, tol).value;
  }
  return alpha_ph * alpha_ph / (3.0 * kPi) * value;
}

SampledFunction linear_response(const SampledFunction& nu_hat, double alpha, double cutoff) {
  if (!(alpha >= 0.0)) throw ValidationError("linear_response: alpha must be non-negative");
  require_cutoff(cutoff, "linear_response");
  const double b0 = B0(cutoff);
  std::vector<double> out;
  out.reserve(nu_hat.size());
  for (std::size_t i = 0; i < nu_hat.size(); ++i) {
    const double k = nu_hat.grid()[i];
    require_k(cutoff, k, "linear_response");
    const double b = k < kZeroK ? b0 : B_k(cutoff, k);
    out.push_back(alpha * b * nu_hat.values()[i] / (1.0 + alpha * b));
  }
  return SampledFunction(nu_hat.grid(), std::move(out));
}

SampledFunction physical_density_linear(const SampledFunction& nu_hat, double alpha_ph,
                                        double cutoff) {
  if (!(alpha_ph >= 0.0)) throw ValidationError("physical_density_linear: alpha_ph must be >= 0");
  require_cutoff(cutoff, "physical_density_linear");
  std::vector<double> out;
  out.reserve(nu_hat.size());
  for (std::size_t i = 0; i < nu_hat.size(); ++i) {
    const double k = nu_hat.grid()[i];
    if (k > 2.0 * cutoff) {
      out.push_back(0.0);
      continue;
    }
    const double denominator = 1.0 - alpha_ph * U_cutoff(cutoff, k);
    if (!(denominator > 0.0)) {
      throw DenominatorVanishes("physical_density_linear: 1 - alpha_ph U_cutoff vanishes at k = " +
                                std::to_string(k));
    }
    out.push_back(nu_hat.values()[i] / denominator);
  }
  return SampledFunction(nu_hat.grid(), std::move(out));
}

}  // namespace vacpol
