#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "vacpol/numerics.hpp"
#include "vacpol/renorm.hpp"

namespace vacpol {

/// Masses m0 < m1 < m2 with c0 = 1 and c1, c2 fixed by the two sum rules.
struct PVScheme {
  std::array<double, 3> masses{};
  std::array<double, 3> coefficients{};
  /// Lambda with log Lambda^2 = -sum_j c_j log m_j^2.
  double averaged_cutoff = 0.0;
};

/// Throws DegenerateMasses unless 0 < m0 < m1 < m2.
PVScheme pv_scheme(double m0, double m1, double m2);

/// |sum c_j| and |sum c_j m_j^2| / sum |c_j| m_j^2.
std::array<double, 2> sum_rule_defects(const PVScheme& scheme);

/// -(2/pi) sum_j c_j int_0^1 u(1-u) log(m_j^2 + u(1-u) k^2) du.
double M_multiplier(const PVScheme& scheme, double k);

MultiplierTable M_table(const PVScheme& scheme, const std::vector<double>& grid);

/// 2 log(Lambda) / (3pi) - M(k) - U(k).
double uehling_limit_gap(const PVScheme& scheme, double k);

/// Fourier samples of an electromagnetic field F = (E, B) with quadrature weights.
struct FieldSample {
  std::vector<Eigen::Vector3d> k;
  std::vector<Eigen::Vector3cd> E;
  std::vector<Eigen::Vector3cd> B;
  std::vector<double> weights;

  /// Equal lengths, positive weights, and F(-k) = conj F(k) whenever -k is sampled.
  void validate() const;
};

struct F2Result {
  double value = 0.0;
  /// (1/8pi) sum w M |B|^2.
  double magnetic = 0.0;
  /// (1/8pi) sum w M |E|^2.
  double electric = 0.0;
};

/// (1/8pi) sum_k w(k) M(|k|) (|B(k)|^2 - |E(k)|^2).
F2Result F2_energy(const FieldSample& field, const PVScheme& scheme);

}  // namespace vacpol
