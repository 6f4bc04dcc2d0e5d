#pragma once

#include <array>

#include <Eigen/Core>

#include "vacpol/lattice.hpp"
#include "vacpol/numerics.hpp"

namespace vacpol {

/// Pauli matrices and Dirac matrices in the standard Dirac representation.
struct DiracMatrices {
  std::array<Eigen::Matrix2cd, 3> sigma;
  std::array<Eigen::Matrix4cd, 3> alpha;
  Eigen::Matrix4cd beta;
};

const DiracMatrices& pauli_and_dirac_matrices();

/// 1 + chi(|p|^2 / cutoff^2): identically 1 for Sharp, 1 + r^2 for Quadratic.
double cutoff_factor(double p_squared, double cutoff, CutoffShape shape);

struct DiracSymbol {
  Eigen::Vector3d momentum;
  double mass;
  Eigen::Matrix4cd matrix;
};

/// (alpha . p + m beta)(1 + chi(|p|^2 / cutoff^2)). Throws OutsideCutoff for |p| > cutoff.
DiracSymbol dirac_symbol(const Eigen::Vector3d& p, double mass, CutoffShape shape, double cutoff);

/// Hermitian one-body state 0 <= gamma <= I on the 4N-dimensional spinor
/// plane-wave space of a lattice.
class DensityMatrix {
 public:
  /// Validates Hermiticity and the spectral bounds [-1e-10, 1 + 1e-10].
  DensityMatrix(FourierLattice lattice, CMatrix matrix);

  /// (1 - t) a + t b. Convex combinations stay admissible, so no eigensolve is needed.
  static DensityMatrix mix(const DensityMatrix& a, const DensityMatrix& b, double t);

  /// V diag(occupations) V^*, occupations in [0, 1] and V with orthonormal columns.
  static DensityMatrix from_spectrum(FourierLattice lattice, const CMatrix& vectors,
                                     const Eigen::VectorXd& occupations);

  const FourierLattice& lattice() const { return lattice_; }
  const CMatrix& matrix() const { return matrix_; }
  Eigen::Index dimension() const { return matrix_.rows(); }
  /// ||gamma^2 - gamma||_F <= 1e-9.
  bool is_projector() const { return projector_; }

 private:
  friend DensityMatrix free_projector(const FourierLattice& lattice, double mass);
  struct Trusted {};
  DensityMatrix(FourierLattice lattice, CMatrix matrix, Trusted);
  FourierLattice lattice_;
  CMatrix matrix_;
  bool projector_;
};

/// Block-diagonal matrix of the Dirac symbols at every lattice mode.
CMatrix free_dirac_matrix(const FourierLattice& lattice, double mass);

/// Negative spectral projector of the free Dirac operator on the lattice.
DensityMatrix free_projector(const FourierLattice& lattice, double mass);

}  // namespace vacpol
