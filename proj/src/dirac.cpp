#include "vacpol/dirac.hpp"

#include <cmath>
#include <string>

#include "vacpol/errors.hpp"

namespace vacpol {

namespace {

DiracMatrices make_matrices() {
  using C = Complex;
  const C i(0.0, 1.0);
  DiracMatrices m;
  m.sigma[0] << 0, 1, 1, 0;
  m.sigma[1] << 0, -i, i, 0;
  m.sigma[2] << 1, 0, 0, -1;
  for (int a = 0; a < 3; ++a) {
    m.alpha[a].setZero();
    m.alpha[a].block<2, 2>(0, 2) = m.sigma[a];
    m.alpha[a].block<2, 2>(2, 0) = m.sigma[a];
  }
  m.beta.setZero();
  m.beta.diagonal() << 1, 1, -1, -1;
  return m;
}

}  // namespace

const DiracMatrices& pauli_and_dirac_matrices() {
  static const DiracMatrices matrices = make_matrices();
  return matrices;
}

double cutoff_factor(double p_squared, double cutoff, CutoffShape shape) {
  if (shape == CutoffShape::Sharp) return 1.0;
  const double r = p_squared / (cutoff * cutoff);
  return 1.0 + r * r;
}

DiracSymbol dirac_symbol(const Eigen::Vector3d& p, double mass, CutoffShape shape, double cutoff) {
  if (!(mass > 0.0)) throw ValidationError("dirac_symbol: mass must be positive");
  const double p2 = p.squaredNorm();
  if (p2 > cutoff * cutoff * (1.0 + 1e-12)) {
    throw OutsideCutoff("dirac_symbol: |p| = " + std::to_string(std::sqrt(p2)) +
                        " exceeds the cutoff " + std::to_string(cutoff));
  }
  const auto& g = pauli_and_dirac_matrices();
  Eigen::Matrix4cd d = mass * g.beta;
  for (int a = 0; a < 3; ++a) d += p[a] * g.alpha[a];
  d *= cutoff_factor(p2, cutoff, shape);
  return {p, mass, d};
}

DensityMatrix::DensityMatrix(FourierLattice lattice, CMatrix matrix)
    : lattice_(std::move(lattice)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != lattice_.dimension() || matrix_.cols() != lattice_.dimension()) {
    throw LatticeMismatch();
  }
  const HermitianMatrix h(matrix_);
  const auto spectrum = eigh(h);
  if (spectrum.values.size() > 0 &&
      (spectrum.values.minCoeff() < -1e-10 || spectrum.values.maxCoeff() > 1.0 + 1e-10)) {
    throw ValidationError("DensityMatrix: spectrum outside [0, 1]");
  }
  projector_ = (matrix_ * matrix_ - matrix_).norm() <= 1e-9;
}

DensityMatrix::DensityMatrix(FourierLattice lattice, CMatrix matrix, Trusted)
    : lattice_(std::move(lattice)), matrix_(std::move(matrix)) {
  projector_ = (matrix_ * matrix_ - matrix_).norm() <= 1e-9;
}

DensityMatrix DensityMatrix::mix(const DensityMatrix& a, const DensityMatrix& b, double t) {
  if (!(a.lattice_ == b.lattice_)) throw LatticeMismatch();
  if (!(t >= 0.0 && t <= 1.0)) throw ValidationError("DensityMatrix::mix: t must be in [0, 1]");
  if (t == 0.0) return a;
  if (t == 1.0) return b;
  CMatrix m = (1.0 - t) * a.matrix_ + t * b.matrix_;
  return DensityMatrix(a.lattice_, std::move(m), Trusted{});
}

DensityMatrix DensityMatrix::from_spectrum(FourierLattice lattice, const CMatrix& vectors,
                                           const Eigen::VectorXd& occupations) {
  if (vectors.rows() != lattice.dimension() || vectors.cols() != occupations.size()) {
    throw LatticeMismatch();
  }
  if (occupations.size() > 0 && (occupations.minCoeff() < 0.0 || occupations.maxCoeff() > 1.0)) {
    throw ValidationError("DensityMatrix::from_spectrum: occupations must lie in [0, 1]");
  }
  CMatrix m = vectors * occupations.asDiagonal() * vectors.adjoint();
  m = 0.5 * (m + m.adjoint()).eval();
  return DensityMatrix(std::move(lattice), std::move(m), Trusted{});
}

CMatrix free_dirac_matrix(const FourierLattice& lattice, double mass) {
  const Eigen::Index dim = lattice.dimension();
  CMatrix d = CMatrix::Zero(dim, dim);
  const auto modes = lattice.modes();
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const auto sym = dirac_symbol(lattice.wavevector(modes[i]), mass, lattice.shape(), lattice.cutoff());
    d.block<4, 4>(4 * i, 4 * i) = sym.matrix;
  }
  return d;
}

DensityMatrix free_projector(const FourierLattice& lattice, double mass) {
  const Eigen::Index dim = lattice.dimension();
  CMatrix p = CMatrix::Zero(dim, dim);
  const auto modes = lattice.modes();
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const Eigen::Vector3d k = lattice.wavevector(modes[i]);
    const auto sym = dirac_symbol(k, mass, lattice.shape(), lattice.cutoff());
    // The cutoff factor scales D(p) but not its sign.
    const double energy = std::sqrt(mass * mass + k.squaredNorm()) *
                          cutoff_factor(k.squaredNorm(), lattice.cutoff(), lattice.shape());
    p.block<4, 4>(4 * i, 4 * i) = 0.5 * (Eigen::Matrix4cd::Identity() - sym.matrix / energy);
  }
  return DensityMatrix(lattice, std::move(p), DensityMatrix::Trusted{});
}

}  // namespace vacpol
