#include "vacpol/pauli_villars.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "vacpol/errors.hpp"

namespace vacpol {

namespace {

constexpr double kPi = std::numbers::pi;

// int_0^1 u(1-u) log1p(u(1-u) x) du, which vanishes at x = 0.
double log_moment(double x) {
  if (x == 0.0) return 0.0;
  return integrate_adaptive(
             [x](double u) {
               const double w = u * (1.0 - u);
               return w * std::log1p(w * x);
             },
             0.0, 1.0, 1e-15)
      .value;
}

}  // namespace

PVScheme pv_scheme(double m0, double m1, double m2) {
  if (!(std::isfinite(m0) && std::isfinite(m1) && std::isfinite(m2))) {
    throw DegenerateMasses("pv_scheme: masses must be finite");
  }
  if (!(m0 > 0.0 && m0 < m1 && m1 < m2)) {
    throw DegenerateMasses("pv_scheme: need 0 < m0 < m1 < m2, got (" + std::to_string(m0) + ", " +
                           std::to_string(m1) + ", " + std::to_string(m2) + ")");
  }
  const double a = m0 * m0, b = m1 * m1, c = m2 * m2;
  PVScheme s;
  s.masses = {m0, m1, m2};
  s.coefficients = {1.0, (a - c) / (c - b), (b - a) / (c - b)};
  double log_sq = 0.0;
  for (int j = 0; j < 3; ++j) log_sq -= s.coefficients[j] * std::log(s.masses[j] * s.masses[j]);
  s.averaged_cutoff = std::exp(0.5 * log_sq);
  return s;
}

std::array<double, 2> sum_rule_defects(const PVScheme& s) {
  double c_sum = 0.0, m_sum = 0.0, scale = 0.0;
  for (int j = 0; j < 3; ++j) {
    const double m2 = s.masses[j] * s.masses[j];
    c_sum += s.coefficients[j];
    m_sum += s.coefficients[j] * m2;
    scale += std::abs(s.coefficients[j]) * m2;
  }
  return {std::abs(c_sum), std::abs(m_sum) / scale};
}

double M_multiplier(const PVScheme& s, double k) {
  if (!(k >= 0.0 && std::isfinite(k))) throw DomainError("M_multiplier: k must be >= 0");
  // With sum c_j = 0 the log(m_j^2) pieces integrate to M(0) = (1/3pi) log Lambda^2,
  // leaving only the k-dependent log1p terms for quadrature.
  const double at_zero = 2.0 * std::log(s.averaged_cutoff) / (3.0 * kPi);
  if (k == 0.0) return at_zero;
  double correction = 0.0;
  for (int j = 0; j < 3; ++j) {
    const double ratio = k / s.masses[j];
    correction += s.coefficients[j] * log_moment(ratio * ratio);
  }
  return at_zero - 2.0 / kPi * correction;
}

MultiplierTable M_table(const PVScheme& scheme, const std::vector<double>& grid) {
  const SampledFunction checked(grid, std::vector<double>(grid.size(), 0.0));
  MultiplierTable t;
  t.kind = MultiplierKind::M;
  t.grid = grid;
  t.cutoff = scheme.averaged_cutoff;
  for (double k : grid) t.values.push_back(M_multiplier(scheme, k));
  return t;
}

double uehling_limit_gap(const PVScheme& s, double k) {
  if (!(k >= 0.0 && std::isfinite(k))) throw DomainError("uehling_limit_gap: k must be >= 0");
  if (k == 0.0) return 0.0;
  // Expanded as (2/pi) sum_j c_j int u(1-u) log1p(u(1-u) k^2 / m_j^2) - U(k),
  // so nothing of size log(Lambda) is subtracted.
  double sum = 0.0;
  for (int j = 0; j < 3; ++j) {
    const double ratio = k / s.masses[j];
    sum += s.coefficients[j] * log_moment(ratio * ratio);
  }
  return 2.0 / kPi * sum - uehling_U(k);
}

void FieldSample::validate() const {
  const std::size_t n = k.size();
  if (E.size() != n || B.size() != n || weights.size() != n) {
    throw ValidationError("FieldSample: k, E, B and weights must have equal lengths");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(weights[i] > 0.0)) throw ValidationError("FieldSample: weights must be positive");
    if (!k[i].allFinite()) throw ValidationError("FieldSample: wavevectors must be finite");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if ((k[i] + k[j]).norm() > 1e-12 * (1.0 + k[i].norm())) continue;
      const double defect =
          std::max((E[i] - E[j].conjugate()).norm(), (B[i] - B[j].conjugate()).norm());
      if (defect > 1e-12 * (1.0 + E[i].norm() + B[i].norm())) {
        throw ValidationError("FieldSample: fields at k and -k are not complex conjugates");
      }
    }
  }
}

F2Result F2_energy(const FieldSample& field, const PVScheme& scheme) {
  field.validate();
  F2Result r;
  for (std::size_t i = 0; i < field.k.size(); ++i) {
    const double m = M_multiplier(scheme, field.k[i].norm());
    r.magnetic += field.weights[i] * m * field.B[i].squaredNorm();
    r.electric += field.weights[i] * m * field.E[i].squaredNorm();
  }
  r.magnetic /= 8.0 * kPi;
  r.electric /= 8.0 * kPi;
  r.value = r.magnetic - r.electric;
  return r;
}

}  // namespace vacpol
