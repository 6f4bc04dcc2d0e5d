#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "vacpol/numerics.hpp"

namespace vacpol {

enum class CutoffShape { Sharp, Quadratic };

/// Integer coordinates n of a wavevector k = (2 pi / L) n.
using IntVec3 = std::array<int, 3>;

class DensityMatrix;

/// Plane-wave momenta k in (2 pi / L) Z^3 with |k| <= cutoff, plus every
/// difference k - k' between them.
///
/// Both lists are in lexicographic order of the integer coordinates, and all
/// block matrices index spinor blocks in mode order. Copies share the same
/// immutable tables.
class FourierLattice {
 public:
  FourierLattice(double box_length, double cutoff, CutoffShape shape);

  double box_length() const { return data_->box_length; }
  double cutoff() const { return data_->cutoff; }
  CutoffShape shape() const { return data_->shape; }
  double spacing() const { return data_->spacing; }
  double volume() const { return data_->volume; }

  std::span<const IntVec3> modes() const { return data_->modes; }
  std::span<const IntVec3> diff_modes() const { return data_->diff_modes; }
  std::size_t mode_count() const { return data_->modes.size(); }
  std::size_t diff_count() const { return data_->diff_modes.size(); }
  /// Dimension of the spinor space, 4 * mode_count().
  Eigen::Index dimension() const { return 4 * static_cast<Eigen::Index>(mode_count()); }

  std::optional<std::size_t> mode_index(const IntVec3& n) const;
  std::optional<std::size_t> diff_index(const IntVec3& n) const;
  /// Index in diff_modes() of modes()[i] - modes()[j].
  std::size_t pair_diff(std::size_t i, std::size_t j) const {
    return data_->pair_diff[i * mode_count() + j];
  }
  std::size_t zero_diff() const { return data_->zero_diff; }

  Eigen::Vector3d wavevector(const IntVec3& n) const;
  double wavenumber(const IntVec3& n) const { return wavevector(n).norm(); }

  bool operator==(const FourierLattice& other) const;

 private:
  struct Data {
    double box_length;
    double cutoff;
    CutoffShape shape;
    double spacing;
    double volume;
    std::vector<IntVec3> modes;
    std::vector<IntVec3> diff_modes;
    int diff_radius;                    // max |n_i| over diff_modes
    std::vector<int> diff_lookup;       // dense cube, -1 where absent
    std::vector<std::size_t> pair_diff; // N x N
    std::size_t zero_diff;
  };
  std::shared_ptr<const Data> data_;
};

/// Throws TooLarge when 4 * |modes| exceeds kMaxDimension.
FourierLattice build_lattice(double box_length, double cutoff, CutoffShape shape);

/// Fourier coefficients of the periodic Coulomb kernel on the difference ball.
///
/// coefficient(d) = 4 pi / |d|^2 for d != 0. The real-space kernel carries a
/// constant shift K_L; its Fourier coefficient in the same normalization is
/// K_L * L^3, so that coulomb_inner reproduces the double integral over the box.
class CoulombKernel {
 public:
  CoulombKernel(FourierLattice lattice, std::vector<double> coefficients, double zero_mode_shift);

  const FourierLattice& lattice() const { return lattice_; }
  std::span<const double> coefficients() const { return coefficients_; }
  double coefficient(std::size_t diff_index) const { return coefficients_[diff_index]; }
  /// K_L, the real-space constant making the kernel non-negative.
  double zero_mode_shift() const { return zero_mode_shift_; }

 private:
  FourierLattice lattice_;
  std::vector<double> coefficients_;
  double zero_mode_shift_;
};

/// K_L = max(0, -min) of the truncated kernel series sampled on a 32^3 grid.
CoulombKernel coulomb_kernel(const FourierLattice& lattice);

/// Fourier coefficients rho(d) of a real periodic density, one per difference mode.
class ChargeDensity {
 public:
  explicit ChargeDensity(FourierLattice lattice);
  ChargeDensity(FourierLattice lattice, std::vector<Complex> coefficients);

  const FourierLattice& lattice() const { return lattice_; }
  std::span<const Complex> coefficients() const { return coefficients_; }
  std::span<Complex> coefficients() { return coefficients_; }
  Complex operator[](std::size_t diff_index) const { return coefficients_[diff_index]; }
  Complex& operator[](std::size_t diff_index) { return coefficients_[diff_index]; }

  /// rho(0) * L^3.
  double total_charge() const;
  /// max_d |rho(-d) - conj(rho(d))|.
  double hermitian_defect() const;

  ChargeDensity& operator+=(const ChargeDensity& other);
  ChargeDensity& operator-=(const ChargeDensity& other);
  ChargeDensity& operator*=(double s);

 private:
  FourierLattice lattice_;
  std::vector<Complex> coefficients_;
};

ChargeDensity operator+(ChargeDensity a, const ChargeDensity& b);
ChargeDensity operator-(ChargeDensity a, const ChargeDensity& b);
ChargeDensity operator*(double s, ChargeDensity a);

/// Continuum Fourier transform nu^(k) = (2 pi)^{-3/2} int nu(x) e^{-i k.x} dx.
using FourierProfile = std::function<Complex(const Eigen::Vector3d&)>;

/// Gaussian of total charge Z and standard deviation `width`.
FourierProfile gaussian_profile(double charge, double width);

/// nu_L coefficients (sqrt(2 pi)/L)^3 nu^(d) for |d| <= cutoff, zero beyond.
ChargeDensity periodize(const FourierProfile& nu_hat, const FourierLattice& lattice);

/// sum_d G(d) conj(a(d)) b(d) L^3: the box double integral of a(x) b(y) G_L(x - y).
double coulomb_inner(const ChargeDensity& a, const ChargeDensity& b, const CoulombKernel& kernel);

/// Density of gamma - 1/2 (see density_of_operator).
ChargeDensity density_of(const DensityMatrix& gamma);

/// rho(d) = L^{-3} sum_{j - k = d} tr_C4 [A - shift I](j, k) for a block matrix A.
ChargeDensity density_of_operator(const CMatrix& op, const FourierLattice& lattice,
                                  double diagonal_shift);

}  // namespace vacpol
