#include "taperconv/analytic.hpp"
#include "taperconv/errors.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace taperconv;

TEST_SUITE("analytic") {

TEST_CASE("sinc is unnormalized and smooth at the origin") {
  CHECK(sinc(0.0) == 1.0);
  CHECK(std::abs(sinc(oracle::pi)) < 1e-15);
  for (double x : {1e-6, 9.99e-5, 1.01e-4, 0.3, 2.0})
    CHECK(sinc(x) == doctest::Approx(std::sin(x) / x).epsilon(1e-15));
}

TEST_CASE("uniform efficiency") {
  CHECK(eta_uniform(0.0, oracle::pi / 2000.0, 1000.0) == doctest::Approx(1.0).epsilon(1e-15));
  // sqrt(db^2/4 + g^2) L = pi
  const double g = 1e-3;
  const double L = 1000.0;
  const double db = 2.0 * std::sqrt(std::pow(oracle::pi / L, 2) - g * g);
  CHECK(eta_uniform(db, g, L) == doctest::Approx(0.0).scale(1e-15));
  CHECK(eta_uniform(0.0, 2.49e-4, 1000.0) == doctest::Approx(std::pow(std::sin(0.249), 2)).epsilon(1e-12));
  CHECK(eta_uniform(0.0, 2.49e-4, 1000.0) == doctest::Approx(0.0607).epsilon(1e-3));
  for (double gl : {0.01, 0.7, 2.2})
    for (double dl : {0.0, 3.0, 19.0})
      CHECK(eta_uniform(dl / L, gl / L, L) ==
            doctest::Approx(oracle::eta_uniform(dl / L, gl / L, L)).epsilon(1e-12).scale(1e-14));
  CHECK(eta_uniform(0.0, 0.7e-3, 1000.0) == std::pow(std::sin(0.7e-3 * 1000.0), 2));
}

TEST_CASE("Landau-Zener probability") {
  CHECK(eta_landau_zener(0.0, 4e-5) == 0.0);
  const double g = 1e-3;
  CHECK(eta_landau_zener(g, 2.0 * oracle::pi * g * g / std::log(2.0)) ==
        doctest::Approx(0.5).epsilon(1e-14));
  CHECK(eta_landau_zener(std::sqrt(6.19e-8), 4e-5) == doctest::Approx(0.00968).epsilon(2e-3));
  CHECK(eta_landau_zener(std::sqrt(6.19e-8), 4e-5) ==
        doctest::Approx(oracle::eta_lz(std::sqrt(6.19e-8), 4e-5)).epsilon(1e-12));
  CHECK_THROWS_AS(eta_landau_zener(g, 0.0), DomainError);
  for (double x : {1e-8, 1e-6, 1e-4, 9e-4}) {
    const double eta = eta_landau_zener(g, 2.0 * oracle::pi * g * g / x);
    CHECK(eta / x <= 1.0);
    CHECK(eta / x >= 1.0 - x);
  }
  CHECK(eta_landau_zener(1.0, 1e-9) == 1.0); // saturates, never overshoots
}

TEST_CASE("bandwidth estimate") {
  CHECK(bandwidth_estimate(0.0, 0.01, 3.486e-3) == 0.0);
  CHECK(bandwidth_estimate(4.0, 0.01, 3.486e-3) == doctest::Approx(11.47).epsilon(1e-3));
  CHECK(bandwidth_estimate(8.0, 0.01, 3.486e-3) == 2.0 * bandwidth_estimate(4.0, 0.01, 3.486e-3));
  CHECK_THROWS_AS(bandwidth_estimate(4.0, 0.01, 0.0), DomainError);
}

TEST_CASE("area estimate") {
  const double beta = oracle::dbeta_dlambda();
  CHECK(area_uniform(0.0, 1000.0, beta).value_nm == 0.0);
  const auto a = area_uniform(oracle::g_ref_default(), 1000.0, beta);
  CHECK(a.value_nm == doctest::Approx(0.1114).epsilon(1e-12));
  CHECK(a.weak_coupling);
  CHECK(area_uniform(2.0 * oracle::g_ref_default(), 1000.0, beta).value_nm ==
        doctest::Approx(4.0 * a.value_nm).epsilon(1e-15));
  CHECK_FALSE(area_uniform(2e-3, 1000.0, beta).weak_coupling);
  CHECK_THROWS_AS(area_uniform(1e-4, 1000.0, 0.0), DomainError);
}

TEST_CASE("LZ times bandwidth tends to the uniform area") {
  const double g = oracle::g_ref_default();
  const double L = 1000.0;
  const double kappa = 0.01;
  const double beta = oracle::dbeta_dlambda();
  const double target = area_uniform(g, L, beta).value_nm;
  double prev = 1.0;
  for (double dw : {4.0, 40.0, 400.0, 4000.0}) {
    const double x = 2.0 * oracle::pi * g * g * L / (kappa * dw);
    const double chain = eta_landau_zener(g, kappa * dw / L) * bandwidth_estimate(dw, kappa, beta);
    const double err = std::abs(chain / target - 1.0);
    CHECK(err <= x / 2.0 + 1e-12);
    CHECK(err < prev);
    prev = err;
  }
}

} // TEST_SUITE
