#include "vacpol/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "vacpol/dirac.hpp"
#include "vacpol/errors.hpp"

namespace vacpol {

namespace {

constexpr int kKernelGrid = 32;

int squared_norm(const IntVec3& n) { return n[0] * n[0] + n[1] * n[1] + n[2] * n[2]; }

}  // namespace

FourierLattice::FourierLattice(double box_length, double cutoff, CutoffShape shape) {
  if (!(box_length > 0.0 && std::isfinite(box_length))) {
    throw ValidationError("lattice: box length must be positive and finite");
  }
  if (!(cutoff > 0.0 && std::isfinite(cutoff))) {
    throw ValidationError("lattice: cutoff must be positive and finite");
  }
  auto data = std::make_shared<Data>();
  data->box_length = box_length;
  data->cutoff = cutoff;
  data->shape = shape;
  data->spacing = 2.0 * std::numbers::pi / box_length;
  data->volume = box_length * box_length * box_length;

  const double radius = cutoff / data->spacing;
  const int nmax = static_cast<int>(std::floor(radius * (1.0 + 1e-12)));
  // Count first so oversized requests fail before allocating anything large.
  const double bound = radius * radius * (1.0 + 1e-12);
  std::size_t count = 0;
  for (int a = -nmax; a <= nmax; ++a)
    for (int b = -nmax; b <= nmax; ++b)
      for (int c = -nmax; c <= nmax; ++c)
        if (squared_norm({a, b, c}) <= bound) ++count;
  if (4 * count > static_cast<std::size_t>(kMaxDimension)) {
    throw TooLarge("lattice: " + std::to_string(count) + " modes give dimension " +
                   std::to_string(4 * count) + " above the cap " + std::to_string(kMaxDimension));
  }
  data->modes.reserve(count);
  for (int a = -nmax; a <= nmax; ++a)
    for (int b = -nmax; b <= nmax; ++b)
      for (int c = -nmax; c <= nmax; ++c)
        if (squared_norm({a, b, c}) <= bound) data->modes.push_back({a, b, c});

  const int r = 2 * nmax;
  const int side = 2 * r + 1;
  data->diff_radius = r;
  std::vector<char> present(static_cast<std::size_t>(side) * side * side, 0);
  auto cube_index = [r, side](const IntVec3& n) {
    return (static_cast<std::size_t>(n[0] + r) * side + (n[1] + r)) * side + (n[2] + r);
  };
  for (const auto& p : data->modes)
    for (const auto& q : data->modes)
      present[cube_index({p[0] - q[0], p[1] - q[1], p[2] - q[2]})] = 1;

  data->diff_lookup.assign(present.size(), -1);
  for (int a = -r; a <= r; ++a)
    for (int b = -r; b <= r; ++b)
      for (int c = -r; c <= r; ++c) {
        const auto idx = cube_index({a, b, c});
        if (present[idx]) {
          data->diff_lookup[idx] = static_cast<int>(data->diff_modes.size());
          data->diff_modes.push_back({a, b, c});
        }
      }
  data->zero_diff = static_cast<std::size_t>(data->diff_lookup[cube_index({0, 0, 0})]);

  const std::size_t n = data->modes.size();
  data->pair_diff.resize(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const auto& p = data->modes[i];
      const auto& q = data->modes[j];
      data->pair_diff[i * n + j] =
          static_cast<std::size_t>(data->diff_lookup[cube_index({p[0] - q[0], p[1] - q[1], p[2] - q[2]})]);
    }
  data_ = std::move(data);
}

std::optional<std::size_t> FourierLattice::mode_index(const IntVec3& n) const {
  const auto& m = data_->modes;
  auto it = std::lower_bound(m.begin(), m.end(), n);
  if (it == m.end() || *it != n) return std::nullopt;
  return static_cast<std::size_t>(it - m.begin());
}

std::optional<std::size_t> FourierLattice::diff_index(const IntVec3& n) const {
  const int r = data_->diff_radius;
  for (int c : n)
    if (c < -r || c > r) return std::nullopt;
  const int side = 2 * r + 1;
  const auto idx = (static_cast<std::size_t>(n[0] + r) * side + (n[1] + r)) * side + (n[2] + r);
  const int v = data_->diff_lookup[idx];
  if (v < 0) return std::nullopt;
  return static_cast<std::size_t>(v);
}

Eigen::Vector3d FourierLattice::wavevector(const IntVec3& n) const {
  return data_->spacing * Eigen::Vector3d(n[0], n[1], n[2]);
}

bool FourierLattice::operator==(const FourierLattice& other) const {
  if (data_ == other.data_) return true;
  return data_->box_length == other.data_->box_length && data_->cutoff == other.data_->cutoff &&
         data_->shape == other.data_->shape;
}

FourierLattice build_lattice(double box_length, double cutoff, CutoffShape shape) {
  return FourierLattice(box_length, cutoff, shape);
}

CoulombKernel::CoulombKernel(FourierLattice lattice, std::vector<double> coefficients,
                             double zero_mode_shift)
    : lattice_(std::move(lattice)),
      coefficients_(std::move(coefficients)),
      zero_mode_shift_(zero_mode_shift) {
  if (coefficients_.size() != lattice_.diff_count()) {
    throw ValidationError("CoulombKernel: one coefficient per difference mode required");
  }
  if (zero_mode_shift_ < 0.0) throw ValidationError("CoulombKernel: K_L must be non-negative");
}

CoulombKernel coulomb_kernel(const FourierLattice& lattice) {
  const auto diffs = lattice.diff_modes();
  const double volume = lattice.volume();
  std::vector<double> coeff(diffs.size(), 0.0);
  for (std::size_t d = 0; d < diffs.size(); ++d) {
    if (d == lattice.zero_diff()) continue;
    coeff[d] = 4.0 * std::numbers::pi / lattice.wavevector(diffs[d]).squaredNorm();
  }

  // Sample (1/L^3) sum_{d != 0} G(d) cos(d . x) on the grid x = L i / 32.
  int r = 0;
  for (const auto& d : diffs) r = std::max({r, std::abs(d[0]), std::abs(d[1]), std::abs(d[2])});
  const int side = 2 * r + 1;
  std::vector<Complex> phase(static_cast<std::size_t>(kKernelGrid) * side);
  for (int i = 0; i < kKernelGrid; ++i)
    for (int n = -r; n <= r; ++n)
      phase[static_cast<std::size_t>(i) * side + (n + r)] =
          std::polar(1.0, 2.0 * std::numbers::pi * n * i / kKernelGrid);

  double minimum = 0.0;
  bool first = true;
  for (int i = 0; i < kKernelGrid; ++i) {
    for (int j = 0; j < kKernelGrid; ++j) {
      for (int k = 0; k < kKernelGrid; ++k) {
        double sum = 0.0;
        for (std::size_t d = 0; d < diffs.size(); ++d) {
          if (coeff[d] == 0.0) continue;
          const auto& n = diffs[d];
          const Complex e = phase[static_cast<std::size_t>(i) * side + (n[0] + r)] *
                            phase[static_cast<std::size_t>(j) * side + (n[1] + r)] *
                            phase[static_cast<std::size_t>(k) * side + (n[2] + r)];
          sum += coeff[d] * e.real();
        }
        sum /= volume;
        if (first || sum < minimum) {
          minimum = sum;
          first = false;
        }
      }
    }
  }
  const double shift = std::max(0.0, -minimum);
  coeff[lattice.zero_diff()] = shift * volume;
  return CoulombKernel(lattice, std::move(coeff), shift);
}

ChargeDensity::ChargeDensity(FourierLattice lattice)
    : lattice_(std::move(lattice)), coefficients_(lattice_.diff_count(), Complex(0.0, 0.0)) {}

ChargeDensity::ChargeDensity(FourierLattice lattice, std::vector<Complex> coefficients)
    : lattice_(std::move(lattice)), coefficients_(std::move(coefficients)) {
  if (coefficients_.size() != lattice_.diff_count()) {
    throw ValidationError("ChargeDensity: one coefficient per difference mode required");
  }
}

double ChargeDensity::total_charge() const {
  return coefficients_[lattice_.zero_diff()].real() * lattice_.volume();
}

double ChargeDensity::hermitian_defect() const {
  double worst = 0.0;
  const auto diffs = lattice_.diff_modes();
  for (std::size_t d = 0; d < diffs.size(); ++d) {
    const auto minus = lattice_.diff_index({-diffs[d][0], -diffs[d][1], -diffs[d][2]});
    worst = std::max(worst, std::abs(coefficients_[*minus] - std::conj(coefficients_[d])));
  }
  return worst;
}

ChargeDensity& ChargeDensity::operator+=(const ChargeDensity& other) {
  if (!(lattice_ == other.lattice_)) throw LatticeMismatch();
  for (std::size_t d = 0; d < coefficients_.size(); ++d) coefficients_[d] += other.coefficients_[d];
  return *this;
}

ChargeDensity& ChargeDensity::operator-=(const ChargeDensity& other) {
  if (!(lattice_ == other.lattice_)) throw LatticeMismatch();
  for (std::size_t d = 0; d < coefficients_.size(); ++d) coefficients_[d] -= other.coefficients_[d];
  return *this;
}

ChargeDensity& ChargeDensity::operator*=(double s) {
  for (auto& c : coefficients_) c *= s;
  return *this;
}

ChargeDensity operator+(ChargeDensity a, const ChargeDensity& b) { return a += b; }
ChargeDensity operator-(ChargeDensity a, const ChargeDensity& b) { return a -= b; }
ChargeDensity operator*(double s, ChargeDensity a) { return a *= s; }

FourierProfile gaussian_profile(double charge, double width) {
  if (!(width > 0.0)) throw ValidationError("gaussian_profile: width must be positive");
  const double norm = charge * std::pow(2.0 * std::numbers::pi, -1.5);
  return [norm, width](const Eigen::Vector3d& k) {
    return Complex(norm * std::exp(-0.5 * k.squaredNorm() * width * width), 0.0);
  };
}

ChargeDensity periodize(const FourierProfile& nu_hat, const FourierLattice& lattice) {
  ChargeDensity out(lattice);
  const double scale = std::pow(std::sqrt(2.0 * std::numbers::pi) / lattice.box_length(), 3);
  const double limit = lattice.cutoff() * lattice.cutoff() * (1.0 + 1e-12);
  const auto diffs = lattice.diff_modes();
  for (std::size_t d = 0; d < diffs.size(); ++d) {
    const Eigen::Vector3d k = lattice.wavevector(diffs[d]);
    if (k.squaredNorm() <= limit) out[d] = scale * nu_hat(k);
  }
  return out;
}

double coulomb_inner(const ChargeDensity& a, const ChargeDensity& b, const CoulombKernel& kernel) {
  if (!(a.lattice() == b.lattice()) || !(a.lattice() == kernel.lattice())) throw LatticeMismatch();
  double sum = 0.0;
  const auto ca = a.coefficients();
  const auto cb = b.coefficients();
  for (std::size_t d = 0; d < ca.size(); ++d) {
    sum += kernel.coefficient(d) * (std::conj(ca[d]) * cb[d]).real();
  }
  return sum * a.lattice().volume();
}

ChargeDensity density_of_operator(const CMatrix& op, const FourierLattice& lattice,
                                  double diagonal_shift) {
  if (op.rows() != lattice.dimension() || op.cols() != lattice.dimension()) throw LatticeMismatch();
  ChargeDensity out(lattice);
  auto coeff = out.coefficients();
  const std::size_t n = lattice.mode_count();
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      Complex trace = op.block<4, 4>(4 * i, 4 * j).trace();
      if (i == j) trace -= 4.0 * diagonal_shift;
      coeff[lattice.pair_diff(i, j)] += trace;
    }
  }
  const double inv_volume = 1.0 / lattice.volume();
  for (auto& c : coeff) c *= inv_volume;
  return out;
}

ChargeDensity density_of(const DensityMatrix& gamma) {
  return density_of_operator(gamma.matrix(), gamma.lattice(), 0.5);
}

}  // namespace vacpol
