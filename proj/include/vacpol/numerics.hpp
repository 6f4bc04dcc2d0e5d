#pragma once

#include <complex>
#include <functional>

#include <Eigen/Core>

namespace vacpol {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RealFunction = std::function<double(double)>;

/// Largest matrix dimension accepted by the dense eigensolver.
inline constexpr Eigen::Index kMaxDimension = 8192;

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int evaluations = 0;
};

/// Globally adaptive Gauss-Kronrod (7/15) quadrature on [a, b].
///
/// Panels are bisected worst-first until the summed |K15 - G7| estimate is
/// below `tol` (or below the round-off floor of the integral). Panel order is
/// deterministic, so repeated calls return bit-identical results.
/// Throws NonConvergence when `max_panels` is exhausted first.
QuadratureResult integrate_adaptive(const RealFunction& f, double a, double b, double tol,
                                    int max_panels = 4000);

/// Integrand that receives both z and 1 - z, the latter computed without
/// cancellation near z = 1.
using EdgeIntegrand = std::function<double(double z, double one_minus_z)>;

/// Integrates g over [0, 1 - gap] for 0 < gap <= 1.
///
/// When the upper limit exceeds 0.999 the variable z = 1 - exp(-t) is used, so
/// integrands with a 1/(1 - z) factor stay bounded in t.
QuadratureResult integrate_toward_one(const EdgeIntegrand& g, double gap, double tol);

/// Root of a strictly monotone f on [lo, hi]. Returns x with |f(x)| <= tol or
/// a final bracket narrower than tol. Throws BadBracket without a sign change.
double find_root_monotone(const RealFunction& f, double lo, double hi, double tol);

/// Dense complex matrix known to be Hermitian (relative Frobenius tolerance 1e-12).
class HermitianMatrix {
 public:
  explicit HermitianMatrix(CMatrix entries);

  /// Averages m with its adjoint instead of validating it.
  static HermitianMatrix symmetrized(const CMatrix& m);

  const CMatrix& entries() const { return entries_; }
  Eigen::Index dimension() const { return entries_.rows(); }

 private:
  struct Trusted {};
  HermitianMatrix(CMatrix entries, Trusted) : entries_(std::move(entries)) {}
  CMatrix entries_;
};

struct EigenDecomposition {
  Eigen::VectorXd values;  // ascending
  CMatrix vectors;         // orthonormal columns
};

EigenDecomposition eigh(const HermitianMatrix& m);

/// Frobenius-norm distance from Hermiticity relative to the norm of m.
double hermiticity_defect(const CMatrix& m);

}  // namespace vacpol
