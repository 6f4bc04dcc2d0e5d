#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace vacpol {

/// (1/pi) int_0^{cutoff / sqrt(1 + cutoff^2)} (z^2 - z^4/3) / (1 - z^2) dz.
double B0(double cutoff);

/// Large-cutoff expansion (2/3pi) ln(cutoff) - 5/(9pi) + (2/3pi) ln 2.
double B0_asymptotic(double cutoff);

/// Upper integration limit (sqrt(1 + L^2) - sqrt(1 + (L - k)^2)) / k, with its k -> 0 limit.
double Z_cutoff(double cutoff, double k);

/// Momentum-dependent vacuum polarization multiplier B_L(k), 0 <= k <= 2 cutoff.
double B_k(double cutoff, double k);

/// Closed form of U(k); loses accuracy below k ~ 1e-3.
double uehling_U_closed(double k);
/// (k^2 / 4pi) int_0^1 (z^2 - z^4/3) / (1 + k^2 (1 - z^2) / 4) dz.
double uehling_U_integral(double k);
/// Integral form for k <= 1e-3, closed form above.
double uehling_U(double k);

/// B0(cutoff) - B_k(cutoff, k); exactly 0 at k = 0.
double U_cutoff(double cutoff, double k);

struct RenormPoint {
  double alpha_bare = 0.0;
  double alpha_ph = 0.0;
  double cutoff = 0.0;
  double z3 = 1.0;
};

RenormPoint renorm_point_from_bare(double alpha, double cutoff);

/// Inverts alpha_ph = alpha / (1 + alpha B0). Throws LandauPole when alpha_ph B0 >= 1.
RenormPoint bare_from_physical(double alpha_ph, double cutoff);

/// Cutoff solving alpha_ph B0(cutoff) = 1 - Z3, by bisection in log(cutoff).
double cutoff_from_Z3(double alpha_ph, double z3);

/// ln(cutoff) from the large-cutoff expansion; a cross-check for cutoff_from_Z3.
double log_cutoff_asymptotic(double alpha_ph, double z3);

/// Values of a radial Fourier-space function on a strictly increasing grid
/// of |k| >= 0. Lookups off the grid are errors, never interpolated.
class SampledFunction {
 public:
  SampledFunction() = default;
  SampledFunction(std::vector<double> grid, std::vector<double> values);

  static SampledFunction sample(std::vector<double> grid, const std::function<double(double)>& f);

  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return grid_.size(); }
  /// Throws DomainError unless k is a grid point.
  double at(double k) const;

 private:
  std::vector<double> grid_;
  std::vector<double> values_;
};

enum class MultiplierKind { B0Const, Bk, U, UCutoff, M };

std::string to_string(MultiplierKind kind);

struct MultiplierTable {
  MultiplierKind kind = MultiplierKind::U;
  std::vector<double> grid;
  std::vector<double> values;
  /// Sharp cutoff or PV averaged cutoff; empty for U.
  std::optional<double> cutoff;
};

/// Tabulates one of the renormalization multipliers (not M) on `grid`.
MultiplierTable multiplier_table(MultiplierKind kind, const std::vector<double>& grid,
                                 std::optional<double> cutoff);

/// nu_0 = nu, nu_1 = U nu, nu_2 = U nu_1. Orders above 2 throw Unsupported.
std::vector<SampledFunction> density_series(const SampledFunction& nu_hat, int order);

/// Spherically symmetric real-space density nu(r), negligible beyond `extent`.
struct RadialProfile {
  std::function<double(double)> density;
  double extent = 0.0;
};

/// Gaussian of total charge Z and standard deviation `width`.
RadialProfile gaussian_radial(double charge, double width);

/// alpha_ph^2 / (3pi) int_1^inf (t^2 - 1)^{1/2} (2/t^2 + 1/t^4)
///   int e^{-2 t |x - y|} nu(y) / |x - y| dy dt at |x| = r.
double uehling_potential(const RadialProfile& nu, double alpha_ph, double r,
                         double rel_tol = 1e-6);

/// alpha B nu / (1 + alpha B) with B = B_k(cutoff, k). Grid must lie in [0, 2 cutoff].
SampledFunction linear_response(const SampledFunction& nu_hat, double alpha, double cutoff);

/// nu 1_{k <= 2 cutoff} / (1 - alpha_ph U_cutoff(cutoff, k)).
SampledFunction physical_density_linear(const SampledFunction& nu_hat, double alpha_ph,
                                        double cutoff);

}  // namespace vacpol
