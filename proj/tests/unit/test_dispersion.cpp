#include "taperconv/diagnostics.hpp"
#include "taperconv/dispersion.hpp"
#include "taperconv/errors.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace taperconv;

namespace {

DispersionModel tabulated_from_default(double half_range = 0.05, std::size_t rows = 41) {
  const auto s = default_synthetic();
  return {TabulatedDispersion(
              synthetic_index_samples(s, s.w0_um - half_range, s.w0_um + half_range, rows), s.design),
          default_model().coupling()};
}

} // namespace

TEST_SUITE("dispersion") {

TEST_CASE("design wavelengths conserve energy") {
  const auto d = DesignWavelengths::from_signal_pump(1550.0, 980.0);
  CHECK(d.lambda3_center_nm == doctest::Approx(oracle::idler_center()).epsilon(1e-15));
  CHECK(d.lambda3_center_nm == doctest::Approx(600.4).epsilon(1e-4));
  CHECK_NOTHROW(d.validate());
  // The rounded 600.4 nm misses 1/l1 + 1/l2 by ~1e-8 nm^-1.
  CHECK_THROWS_AS((DesignWavelengths{1550.0, 980.0, 600.4}.validate()), InputError);
  CHECK_THROWS_AS((DesignWavelengths{-1.0, 980.0, 600.4}.validate()), InputError);
}

TEST_CASE("default calibration") {
  const auto s = default_synthetic();
  CHECK(s.w0_um == 0.773);
  CHECK(s.kappa_w == 0.01);
  CHECK(s.dbeta_dlambda == doctest::Approx(oracle::dbeta_dlambda()).epsilon(1e-14));
  CHECK(s.dbeta_dlambda == doctest::Approx(3.486e-3).epsilon(1e-3));
  const auto m = default_model();
  CHECK(m.coupling().g_ref == doctest::Approx(oracle::g_ref_default()).epsilon(1e-14));
  CHECK(m.coupling().g_ref == doctest::Approx(2.49e-4).epsilon(3e-3));
  CHECK(m.coupling().p_ref_w == 1.0);
  CHECK(m.coupling().g_slope_per_nm == 0.0);
}

TEST_CASE("dbeta_dlambda from index contrast") {
  CHECK(dbeta_dlambda_from_contrast(0.0, 600.4) == 0.0);
  CHECK(dbeta_dlambda_from_contrast(0.2, 600.4) ==
        doctest::Approx(2.0 * oracle::pi * 0.2 / (600.4 * 600.4) * 1000.0).epsilon(1e-15));
  CHECK(dbeta_dlambda_from_contrast(0.2, 600.4) == doctest::Approx(3.486e-3).epsilon(1e-3));
}

TEST_CASE("synthetic delta_beta") {
  const auto m = default_model();
  const double c = m.design().lambda3_center_nm;
  CHECK(delta_beta(m, 0.773, c) == 0.0);
  CHECK(delta_beta(m, 0.777, c) == doctest::Approx(-0.04).epsilon(1e-12));
  CHECK(delta_beta(m, 0.773, c + 1.0) == doctest::Approx(oracle::dbeta_dlambda()).epsilon(1e-12));
  CHECK_THROWS_AS(delta_beta(m, -0.1, c), RangeError);
  CHECK_THROWS_AS(delta_beta(m, 0.773, 0.0), DomainError);
}

TEST_CASE("synthetic model is exactly linear in width and wavelength") {
  const auto m = default_model();
  const auto& s = *m.synthetic();
  const double c = m.design().lambda3_center_nm;
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> w(0.70, 0.85);
  std::uniform_real_distribution<double> l(c - 30.0, c + 30.0);
  for (int k = 0; k < 50; ++k) {
    const double w0 = w(rng);
    const double l0 = l(rng);
    const double h = 1e-3;
    const double kappa = -(delta_beta(m, w0 + h, l0) - delta_beta(m, w0 - h, l0)) / (2 * h) / 1000.0;
    const double slope = (delta_beta(m, w0, l0 + 1.0) - delta_beta(m, w0, l0 - 1.0)) / 2.0;
    CHECK(kappa == doctest::Approx(s.kappa_w).epsilon(1e-9));
    CHECK(slope == doctest::Approx(s.dbeta_dlambda).epsilon(1e-9));
    CHECK(ddelta_beta_dw(m, w0, l0) == doctest::Approx(-s.kappa_w * 1000.0).epsilon(1e-15));
  }
}

TEST_CASE("coupling scales with the square root of pump power") {
  const auto m = default_model();
  const double g = m.coupling().g_ref;
  CHECK(coupling_g(m, 0.773, 0.0) == 0.0);
  CHECK(coupling_g(m, 0.773, 1.0) == g);
  CHECK(coupling_g(m, 0.773, 4.0) == 2.0 * g);
  for (double p : {0.1, 0.7, 3.0, 25.0})
    CHECK(coupling_g(m, 0.8, 4.0 * p) == 2.0 * coupling_g(m, 0.8, p));
  CHECK_THROWS_AS(coupling_g(m, 0.773, -1.0), DomainError);
}

TEST_CASE("coupling slope and clamp") {
  const DispersionModel m(default_synthetic(), CouplingSpec{1e-3, 1.0, 0.01});
  CHECK(coupling_g(m, 0.773, 1.0) == doctest::Approx(1e-3));
  CHECK(coupling_g(m, 0.783, 1.0) == doctest::Approx(1.1e-3)); // +10 nm, +10%
  std::vector<std::string> warnings;
  ScopedWarningHandler guard([&](std::string_view w) { warnings.emplace_back(w); });
  CHECK(coupling_g(m, 0.600, 1.0) == 0.0); // factor 1 - 1.73 < 0
  CHECK(coupling_g(m, 0.500, 1.0) == 0.0);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("clamped") != std::string::npos);
}

TEST_CASE("phase-matched width") {
  const auto m = default_model();
  const auto& s = *m.synthetic();
  const double c = m.design().lambda3_center_nm;
  CHECK(phase_matched_width(m, c) == 0.773);
  for (double d : {-20.0, -3.0, 2.5, 15.0}) {
    const double w = phase_matched_width(m, c + d);
    CHECK(w == doctest::Approx(0.773 + s.dbeta_dlambda * d / (s.kappa_w * 1000.0)).epsilon(1e-12));
    CHECK(std::abs(delta_beta(m, w, c + d)) < 1e-10);
  }
}

TEST_CASE("tabulated model reproduces the synthetic one") {
  const auto s = default_synthetic();
  const auto t = tabulated_from_default();
  const double c = s.design.lambda3_center_nm;
  const DispersionModel ref(s, CouplingSpec{});
  double worst = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double w = 0.723 + 0.1 * i / 200.0;
    for (double d : {-10.0, 0.0, 7.0})
      worst = std::max(worst, std::abs(delta_beta(t, w, c + d) - delta_beta(ref, w, c + d)));
    CHECK(dbeta_dlambda_from_indices(*t.tabulated(), w) ==
          doctest::Approx(s.dbeta_dlambda).epsilon(1e-9));
  }
  CHECK(worst < 1e-6);
  CHECK(t.reference_width_um() == doctest::Approx(0.773).epsilon(1e-9));
  const double w = phase_matched_width(t, c + 3.0);
  CHECK(std::abs(delta_beta(t, w, c + 3.0)) < 1e-10);
}

TEST_CASE("tabulated interpolation is exact on linear data and range-checked") {
  std::vector<IndexSample> rows;
  for (int i = 0; i < 6; ++i) {
    const double w = 0.70 + 0.02 * i;
    rows.push_back({w, 1.8 + 0.5 * w, 1.9 + 0.3 * w, 2.1 + 0.5 * w});
  }
  const TabulatedDispersion t(rows, DesignWavelengths::from_signal_pump(1550.0, 980.0));
  const auto n = t.indices(0.7333);
  CHECK(n.n1 == doctest::Approx(1.8 + 0.5 * 0.7333).epsilon(1e-14));
  CHECK(n.n2 == doctest::Approx(1.9 + 0.3 * 0.7333).epsilon(1e-14));
  CHECK(t.index_slopes(0.75).n3 == doctest::Approx(0.5).epsilon(1e-12));
  try {
    (void)t.indices(0.9);
    FAIL("expected RangeError");
  } catch (const RangeError& e) {
    CHECK(std::string(e.what()).find("[0.7, 0.8]") != std::string::npos);
  }
}

TEST_CASE("n3 equal to n1 gives zero wavelength slope") {
  std::vector<IndexSample> rows;
  for (int i = 0; i < 4; ++i) rows.push_back({0.7 + 0.1 * i, 2.0, 2.0, 2.0});
  const TabulatedDispersion t(rows, DesignWavelengths::from_signal_pump(1550.0, 980.0));
  CHECK(dbeta_dlambda_from_indices(t, 0.75) == 0.0);
}

TEST_CASE("table without a crossing fails the phase-matching solve") {
  std::vector<IndexSample> rows;
  for (int i = 0; i < 4; ++i) rows.push_back({0.7 + 0.1 * i, 2.0, 2.0, 1.5});
  const DispersionModel m(
      TabulatedDispersion(rows, DesignWavelengths::from_signal_pump(1550.0, 980.0)), CouplingSpec{});
  CHECK(std::isnan(m.reference_width_um()));
  CHECK_THROWS_AS(phase_matched_width(m, m.design().lambda3_center_nm), SolveError);
}

TEST_CASE("table parsing") {
  const auto design = DesignWavelengths::from_signal_pump(1550.0, 980.0);
  SUBCASE("four valid rows") {
    std::istringstream in("# comment\nw_um,n1,n2,n3\n0.70,1.9,1.9,2.1\n0.75,1.9,1.9,2.1\n\n"
                          "0.80,1.9,1.9,2.1\n0.85,1.9,1.9,2.1\n");
    const auto t = parse_tabulated(in, design);
    CHECK(t.w_min() == 0.70);
    CHECK(t.w_max() == 0.85);
  }
  SUBCASE("duplicate width names the value and line") {
    std::istringstream in("w_um,n1,n2,n3\n0.70,1,1,1\n0.75,1,1,1\n0.75,1,1,1\n0.8,1,1,1\n");
    try {
      (void)parse_tabulated(in, design);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 4);
      CHECK(std::string(e.what()).find("duplicate width 0.75") != std::string::npos);
    }
  }
  SUBCASE("non-monotone widths") {
    std::istringstream in("w_um,n1,n2,n3\n0.70,1,1,1\n0.80,1,1,1\n0.75,1,1,1\n0.9,1,1,1\n");
    CHECK_THROWS_AS(parse_tabulated(in, design), ParseError);
  }
  SUBCASE("too few rows") {
    std::istringstream in("w_um,n1,n2,n3\n0.70,1,1,1\n0.80,1,1,1\n0.85,1,1,1\n");
    CHECK_THROWS_AS(parse_tabulated(in, design), ParseError);
  }
  SUBCASE("malformed row") {
    std::istringstream in("w_um,n1,n2,n3\n0.70,1,1,1\n0.80,abc,1,1\n");
    try {
      (void)parse_tabulated(in, design);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
  }
  SUBCASE("missing header") {
    std::istringstream in("0.70,1,1,1\n0.75,1,1,1\n0.80,1,1,1\n0.85,1,1,1\n");
    CHECK_THROWS_AS(parse_tabulated(in, design), ParseError);
  }
}

TEST_CASE("synthetic export reloads to an equivalent model") {
  const auto s = default_synthetic();
  const auto samples = synthetic_index_samples(s, 0.72, 0.82, 21);
  std::stringstream io;
  write_tabulated(io, samples);
  const DispersionModel t(parse_tabulated(io, s.design), CouplingSpec{});
  const DispersionModel ref(s, CouplingSpec{});
  for (double w : {0.72, 0.7551, 0.80, 0.82})
    CHECK(delta_beta(t, w, 605.0) == doctest::Approx(delta_beta(ref, w, 605.0)).epsilon(1e-9).scale(1e-6));
}

} // TEST_SUITE
