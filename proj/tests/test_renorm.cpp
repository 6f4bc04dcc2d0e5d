#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "vacpol/errors.hpp"
#include "vacpol/renorm.hpp"

using namespace vacpol;

TEST_CASE("B0 against its antiderivative") {
  for (double cutoff : {1e-3, 0.1, 1.0, 2.5, 50.0, 1e4, 1e6}) {
    CHECK(B0(cutoff) == doctest::Approx(oracle::b0_closed(cutoff)).epsilon(1e-11));
  }
  CHECK(B0(1e-6) < 1e-17);
  CHECK(B0(1e-6) > 0.0);
  CHECK(std::abs(B0(100.0) - B0_asymptotic(100.0)) <= 1e-3);
}

TEST_CASE("B0 asymptotic form") {
  const double pi = oracle::pi;
  CHECK(B0_asymptotic(1.0) == doctest::Approx(-5.0 / (9.0 * pi) + 2.0 / (3.0 * pi) * std::log(2.0)));
  CHECK(B0_asymptotic(2.0) == doctest::Approx(2.0 / (3.0 * pi) * std::log(4.0) - 5.0 / (9.0 * pi)));
  for (double cutoff : {10.0, 100.0, 1000.0}) {
    CHECK(std::abs(B0(cutoff) - B0_asymptotic(cutoff)) * cutoff * cutoff <= 1.0);
  }
}

TEST_CASE("B_k") {
  const double cutoff = 2.5;
  CHECK(std::abs(B_k(cutoff, 1e-9) - B0(cutoff)) <= 1e-8);
  // The leading correction is linear in k.
  const double slope = (B_k(cutoff, 2e-5) - B_k(cutoff, 1e-5)) / 1e-5;
  CHECK((B_k(cutoff, 1e-5) - B0(cutoff)) / 1e-5 == doctest::Approx(slope).epsilon(1e-3));
  CHECK(B_k(cutoff, 2.0 * cutoff) == 0.0);
  CHECK_THROWS_AS(B_k(cutoff, 5.1), DomainError);

  // Direct midpoint oracle of the defining integrals at k = 1.
  const double k = 1.0;
  const double s = std::sqrt(1.0 + cutoff * cutoff);
  const double z = (s - std::sqrt(1.0 + (cutoff - k) * (cutoff - k))) / k;
  const double first = oracle::simpson([k](double x) {
    return (x * x - x * x * x * x / 3.0) / ((1.0 - x * x) * (1.0 + k * k * (1.0 - x * x) / 4.0));
  }, 0.0, z, 200000) / oracle::pi;
  const double second = k / (2.0 * oracle::pi) * oracle::simpson([k, s](double x) {
    return (x - x * x * x / 3.0) / (s - k * x / 2.0);
  }, 0.0, z, 200000);
  CHECK(B_k(cutoff, k) == doctest::Approx(first + second).epsilon(1e-10));
  CHECK(Z_cutoff(cutoff, k) == doctest::Approx(z).epsilon(1e-14));

  double previous = B_k(cutoff, 0.0);
  for (int i = 1; i <= 50; ++i) {
    const double value = B_k(cutoff, cutoff * i / 50.0);
    CHECK(value < previous);
    previous = value;
  }
  CHECK(std::abs(B0(1e4) - B_k(1e4, 1.0) - uehling_U(1.0)) <= 1e-3);
}

TEST_CASE("Uehling multiplier") {
  CHECK(uehling_U(0.0) == 0.0);
  CHECK(uehling_U(1e-8) < 1e-16);
  CHECK(std::abs(uehling_U_closed(2.0) - uehling_U_integral(2.0)) <= 1e-10);
  CHECK(uehling_U(2.0) == doctest::Approx(oracle::uehling_simpson(2.0)).epsilon(1e-10));
  CHECK(uehling_U(2.0) == doctest::Approx(oracle::uehling_closed_plain(2.0)).epsilon(1e-12));
  const double ratio = uehling_U(1e-2) / 1e-4;
  CHECK(std::abs(ratio * 15.0 * oracle::pi - 1.0) <= 0.01);
  for (double k = 5e-4; k <= 2e-3; k += 1e-4) {
    CHECK(std::abs(uehling_U_closed(k) - uehling_U_integral(k)) <= 1e-9);
  }
}

TEST_CASE("cutoff Uehling multiplier") {
  CHECK(U_cutoff(10.0, 0.0) == 0.0);
  for (double k : {0.1, 1.0, 5.0, 19.0}) CHECK(U_cutoff(10.0, k) >= 0.0);
  CHECK(std::abs(U_cutoff(1e4, 1.0) - uehling_U(1.0)) <= 1e-3);
  // The error shrinks as the cutoff grows.
  for (double k : {0.5, 1.0, 2.0}) {
    const double e10 = std::abs(U_cutoff(10.0, k) - uehling_U(k));
    const double e100 = std::abs(U_cutoff(100.0, k) - uehling_U(k));
    const double e1e4 = std::abs(U_cutoff(1e4, k) - uehling_U(k));
    CHECK(e100 < e10);
    CHECK(e1e4 < e100);
  }
  CHECK_THROWS_AS(U_cutoff(1.0, 3.0), DomainError);
}

TEST_CASE("renormalization points") {
  auto p = renorm_point_from_bare(0.0, 5.0);
  CHECK(p.alpha_ph == 0.0);
  CHECK(p.z3 == 1.0);
  p = renorm_point_from_bare(1.0, 1.0);
  CHECK(p.alpha_ph == doctest::Approx(1.0 / (1.0 + oracle::b0_closed(1.0))).epsilon(1e-12));
  CHECK(std::abs(p.z3 - (1.0 - p.alpha_ph * B0(1.0))) <= 1e-10);
  CHECK(p.alpha_ph < p.alpha_bare);

  CHECK(bare_from_physical(0.0, 3.0).alpha_bare == 0.0);
  for (double alpha : {0.01, 0.5, 3.0}) {
    const auto q = renorm_point_from_bare(alpha, 40.0);
    CHECK(std::abs(bare_from_physical(q.alpha_ph, 40.0).alpha_bare - alpha) <= 1e-10 * alpha);
  }
  CHECK_THROWS_AS(bare_from_physical(1.0, 1e6), LandauPole);
}

TEST_CASE("cutoff from Z3") {
  const double cutoff = cutoff_from_Z3(0.1, 0.5);
  CHECK(std::abs(B0(cutoff) - 5.0) <= 1e-10);
  CHECK(std::log(cutoff) == doctest::Approx(log_cutoff_asymptotic(0.1, 0.5)).epsilon(1e-6));
  CHECK(renorm_point_from_bare(bare_from_physical(0.1, cutoff).alpha_bare, cutoff).z3 ==
        doctest::Approx(0.5).epsilon(1e-8));

  const double small = cutoff_from_Z3(1.0, 1.0 - 1e-4);
  CHECK(B0(small) == doctest::Approx(1e-4).epsilon(1e-8));
  CHECK_THROWS_AS(cutoff_from_Z3(0.1, 1.0), Degenerate);
  CHECK_THROWS_AS(cutoff_from_Z3(1e-4, 0.001), Degenerate);
}

TEST_CASE("sampled functions stay on their grid") {
  const SampledFunction f({0.0, 1.0, 2.0}, {3.0, 4.0, 5.0});
  CHECK(f.at(1.0) == 4.0);
  CHECK_THROWS_AS(f.at(1.5), DomainError);
  CHECK_THROWS_AS(SampledFunction({1.0, 1.0}, {0.0, 0.0}), ValidationError);
}

TEST_CASE("density series") {
  const SampledFunction zero({0.5, 2.0}, {0.0, 0.0});
  for (const auto& t : density_series(zero, 2))
    for (double v : t.values()) CHECK(v == 0.0);
  const SampledFunction one({2.0}, {1.0});
  const auto s = density_series(one, 2);
  REQUIRE(s.size() == 3);
  CHECK(s[1].at(2.0) == doctest::Approx(oracle::uehling_closed_plain(2.0)).epsilon(1e-12));
  CHECK(s[2].at(2.0) ==
        doctest::Approx(std::pow(oracle::uehling_closed_plain(2.0), 2)).epsilon(1e-12));
  CHECK_THROWS_AS(density_series(one, 3), Unsupported);
}

TEST_CASE("Uehling potential") {
  const RadialProfile none{[](double) { return 0.0; }, 5.0};
  CHECK(uehling_potential(none, 1.0, 1.0) == 0.0);
  const auto g = gaussian_radial(1.0, 1.0);
  const double v1 = uehling_potential(g, 1.0, 1.0);
  const double fourier = oracle::uehling_fourier_route(1.0, 1.0, 1.0, 1.0, uehling_U);
  CHECK(std::abs(v1 - fourier) <= 1e-4 * std::abs(fourier));
  CHECK(uehling_potential(g, 0.5, 1.0) == doctest::Approx(0.25 * v1).epsilon(1e-6));
  CHECK(uehling_potential(g, 1.0, 0.0) > v1);
}

TEST_CASE("linear response") {
  const SampledFunction nu({0.0, 0.5, 1.0, 3.0}, {0.2, 0.15, 0.1, 0.01});
  const auto none = linear_response(nu, 0.0, 10.0);
  for (double v : none.values()) CHECK(v == 0.0);
  const auto rho = linear_response(nu, 0.3, 50.0);
  CHECK((nu.at(0.0) - rho.at(0.0)) * (1.0 + 0.3 * B0(50.0)) ==
        doctest::Approx(nu.at(0.0)).epsilon(1e-12));
  CHECK_THROWS_AS(linear_response(nu, 0.3, 1.0), DomainError);

  auto distance = [&nu](double cutoff) {
    const auto r = linear_response(nu, 1.0, cutoff);
    double s = 0.0;
    for (std::size_t i = 1; i < nu.size(); ++i) {
      const double k = nu.grid()[i];
      s += std::pow(nu.values()[i] - r.values()[i], 2) / (k * k);
    }
    return s;
  };
  CHECK(distance(1e3) < distance(10.0));
  CHECK(distance(1e5) < distance(1e3));
}

TEST_CASE("physical density at linear order") {
  const SampledFunction nu({0.5, 1.0, 30.0}, {0.3, 0.2, 0.1});
  const auto same = physical_density_linear(nu, 0.0, 10.0);
  CHECK(same.at(0.5) == 0.3);
  CHECK(same.at(30.0) == 0.0);
  const auto rho = physical_density_linear(nu, 0.1, 10.0);
  CHECK(rho.at(1.0) == doctest::Approx(0.2 / (1.0 - 0.1 * U_cutoff(10.0, 1.0))).epsilon(1e-14));
  CHECK_THROWS_AS(physical_density_linear(nu, 1e3, 10.0), DenominatorVanishes);
}

TEST_CASE("multiplier tables") {
  const std::vector<double> grid{0.0, 0.5, 1.0};
  const auto u = multiplier_table(MultiplierKind::U, grid, std::nullopt);
  CHECK_FALSE(u.cutoff.has_value());
  CHECK(u.values[2] == uehling_U(1.0));
  const auto b = multiplier_table(MultiplierKind::Bk, grid, 2.0);
  CHECK(b.values[0] == B0(2.0));
  const auto ul = multiplier_table(MultiplierKind::UCutoff, grid, 2.0);
  CHECK(ul.values[0] == 0.0);
  CHECK(ul.values[1] == doctest::Approx(U_cutoff(2.0, 0.5)).epsilon(1e-14));
  CHECK(to_string(MultiplierKind::UCutoff) == "ULambda");
  CHECK_THROWS_AS(multiplier_table(MultiplierKind::Bk, grid, std::nullopt), ValidationError);
}
