#include "vacpol/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "vacpol/errors.hpp"

namespace vacpol {

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
using Gauss = boost::math::quadrature::gauss<double, 7>;

struct Panel {
  double a;
  double b;
  double value;
  double error;
  double l1;
};

// Boost stores the non-negative half of each symmetric rule. The Kronrod
// abscissae at even positions are the Gauss points.
Panel evaluate_panel(const RealFunction& f, double a, double b, int& evaluations) {
  const auto& xk = Kronrod::abscissa();
  const auto& wk = Kronrod::weights();
  const auto& wg = Gauss::weights();
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  const double fc = f(center);
  double kronrod = wk[0] * fc;
  double gauss = wg[0] * fc;
  double l1 = wk[0] * std::abs(fc);
  evaluations += 1;
  for (std::size_t i = 1; i < xk.size(); ++i) {
    const double dx = half * xk[i];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    evaluations += 2;
    kronrod += wk[i] * (f1 + f2);
    l1 += wk[i] * (std::abs(f1) + std::abs(f2));
    if (i % 2 == 0) gauss += wg[i / 2] * (f1 + f2);
  }
  kronrod *= half;
  gauss *= half;
  l1 *= std::abs(half);
  if (!std::isfinite(kronrod)) {
    throw NonConvergence("integrand is not finite on [" + std::to_string(a) + ", " +
                         std::to_string(b) + "]");
  }
  return {a, b, kronrod, std::abs(kronrod - gauss), l1};
}

}  // namespace

QuadratureResult integrate_adaptive(const RealFunction& f, double a, double b, double tol,
                                    int max_panels) {
  if (!(std::isfinite(a) && std::isfinite(b) && a < b)) {
    throw ValidationError("integrate_adaptive: need finite a < b");
  }
  if (!(tol > 0.0)) throw ValidationError("integrate_adaptive: tol must be positive");

  int evaluations = 0;
  std::vector<Panel> panels;
  panels.reserve(64);
  panels.push_back(evaluate_panel(f, a, b, evaluations));

  auto totals = [&panels] {
    double value = 0.0, error = 0.0, l1 = 0.0;
    for (const auto& p : panels) {
      value += p.value;
      error += p.error;
      l1 += p.l1;
    }
    return std::array<double, 3>{value, error, l1};
  };

  constexpr double kRoundoff = 50.0 * std::numeric_limits<double>::epsilon();
  while (true) {
    const auto [value, error, l1] = totals();
    if (error <= std::max(tol, kRoundoff * l1)) return {value, error, evaluations};
    if (static_cast<int>(panels.size()) >= max_panels) {
      throw NonConvergence("integrate_adaptive: panel budget exhausted with error estimate " +
                           std::to_string(error) + " > " + std::to_string(tol));
    }
    // First panel with the largest error keeps the refinement order deterministic.
    auto worst = std::max_element(panels.begin(), panels.end(),
                                  [](const Panel& x, const Panel& y) { return x.error < y.error; });
    const double mid = 0.5 * (worst->a + worst->b);
    if (!(mid > worst->a && mid < worst->b)) {
      throw NonConvergence("integrate_adaptive: panel width reached machine resolution");
    }
    Panel right = evaluate_panel(f, mid, worst->b, evaluations);
    *worst = evaluate_panel(f, worst->a, mid, evaluations);
    panels.push_back(right);
  }
}

QuadratureResult integrate_toward_one(const EdgeIntegrand& g, double gap, double tol) {
  if (!(gap > 0.0 && gap <= 1.0)) throw ValidationError("integrate_toward_one: gap must be in (0, 1]");
  if (gap >= 1.0) return {0.0, 0.0, 1};
  const double upper = 1.0 - gap;
  if (upper <= 0.999) {
    return integrate_adaptive([&g](double z) { return g(z, 1.0 - z); }, 0.0, upper, tol);
  }
  const double t_max = -std::log(gap);
  return integrate_adaptive(
      [&g](double t) {
        const double omz = std::exp(-t);
        return g(-std::expm1(-t), omz) * omz;
      },
      0.0, t_max, tol);
}

double find_root_monotone(const RealFunction& f, double lo, double hi, double tol) {
  if (!(lo < hi)) throw ValidationError("find_root_monotone: need lo < hi");
  if (!(tol > 0.0)) throw ValidationError("find_root_monotone: tol must be positive");
  const double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw BadBracket("find_root_monotone: f has the same sign at both ends of [" +
                     std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  double best = lo;
  double best_abs = std::abs(flo);
  auto tracked = [&](double x) {
    const double fx = f(x);
    if (std::abs(fx) < best_abs) {
      best_abs = std::abs(fx);
      best = x;
    }
    return fx;
  };
  auto done = [&](double a, double b) { return std::abs(b - a) <= tol || best_abs <= tol; };
  std::uintmax_t max_iter = 400;
  const auto bracket =
      boost::math::tools::toms748_solve(tracked, lo, hi, flo, fhi, done, max_iter);
  if (best_abs <= tol) return best;
  return 0.5 * (bracket.first + bracket.second);
}

HermitianMatrix::HermitianMatrix(CMatrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) throw ValidationError("HermitianMatrix: not square");
  if (entries_.rows() > kMaxDimension) {
    throw TooLarge("HermitianMatrix: dimension " + std::to_string(entries_.rows()) +
                   " exceeds the dense cap " + std::to_string(kMaxDimension));
  }
  if (hermiticity_defect(entries_) > 1e-12) {
    throw ValidationError("HermitianMatrix: input is not Hermitian");
  }
}

HermitianMatrix HermitianMatrix::symmetrized(const CMatrix& m) {
  if (m.rows() != m.cols()) throw ValidationError("HermitianMatrix: not square");
  if (m.rows() > kMaxDimension) throw TooLarge("HermitianMatrix: dimension exceeds the dense cap");
  CMatrix h = 0.5 * (m + m.adjoint());
  return HermitianMatrix(std::move(h), Trusted{});
}

double hermiticity_defect(const CMatrix& m) {
  const double norm = m.norm();
  if (norm == 0.0) return 0.0;
  return (m - m.adjoint()).norm() / norm;
}

EigenDecomposition eigh(const HermitianMatrix& m) {
  if (m.dimension() == 0) return {};
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(m.entries(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw NonConvergence("eigh: eigensolver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

}  // namespace vacpol
