#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "swifi/quadrature.hpp"
#include "swifi/units.hpp"

using namespace swifi;

TEST_CASE("adaptive integration of smooth functions") {
  CHECK(integrate_adaptive([](double x) { return x * x; }, 0.0, 1.0) ==
        Catch::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(integrate_adaptive([](double x) { return std::sin(x); }, 0.0, M_PI) ==
        Catch::Approx(2.0).epsilon(1e-12));
  CHECK(integrate_adaptive([](double x) { return std::exp(-x); }, 0.0, 50.0) ==
        Catch::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("adaptive integration resolves boundary layers") {
  // e^{-1000 x} concentrates all mass in the first 1/100th of the domain.
  const double got = integrate_adaptive([](double x) { return std::exp(-1000.0 * x); }, 0.0, 1.0);
  CHECK(got == Catch::Approx(-std::expm1(-1000.0) / 1000.0).epsilon(1e-10));

  // Shifted bump far from the left endpoint.
  const double bump =
      integrate_adaptive([](double x) { return std::exp(-(x - 900.0) * (x - 900.0)); }, 0.0,
                         1000.0, {1e-12, 1e-10, 4000, 32});
  CHECK(bump == Catch::Approx(std::sqrt(M_PI)).epsilon(1e-8));
}

TEST_CASE("adaptive integration reports unresolved integrals") {
  QuadratureOptions opt;
  opt.abs_tol = 1e-16;
  opt.rel_tol = 1e-16;
  opt.max_panels = 4;
  bool threw = false;
  try {
    integrate_adaptive([](double x) { return std::sin(100.0 * x) * std::exp(x); }, 0.0, 10.0, opt);
  } catch (const NumericalError& e) {
    threw = true;
    CHECK(e.achieved() > e.requested());
  }
  CHECK(threw);
}

TEST_CASE("gauss-legendre rules") {
  const auto& rule = gauss_legendre(64);
  REQUIRE(rule.nodes.size() == 64);

  double wsum = 0.0;
  for (double w : rule.weights) wsum += w;
  CHECK(wsum == Catch::Approx(2.0).epsilon(1e-14));

  for (std::size_t i = 0; i < 32; ++i) {
    CHECK(rule.nodes[i] == Catch::Approx(-rule.nodes[63 - i]).margin(1e-15));
  }

  // Exact for polynomials up to degree 2n-1.
  CHECK(integrate_gl([](double x) { return std::pow(x, 10); }, -1.0, 1.0, 6) ==
        Catch::Approx(2.0 / 11.0).epsilon(1e-13));
  CHECK(integrate_gl([](double x) { return 3.0 * x * x; }, 2.0, 5.0, 16) ==
        Catch::Approx(117.0).epsilon(1e-13));
}

TEST_CASE("scalar helpers") {
  CHECK(one_minus_exp_over(0.0) == 1.0);
  CHECK(one_minus_exp_over(1e-12) == Catch::Approx(1.0).epsilon(1e-10));
  CHECK(one_minus_exp_over(std::log(2.0)) == Catch::Approx(0.5 / std::log(2.0)).epsilon(1e-14));
  CHECK(one_minus_exp_over(1000.0) == Catch::Approx(1.0 / 1000.0).epsilon(1e-12));
  // continuity across the series/expm1 switch
  CHECK(one_minus_exp_over(1.0001e-8) == Catch::Approx(one_minus_exp_over(0.9999e-8)).epsilon(1e-10));
}

TEST_CASE("dbm conversions") {
  CHECK(dbm_to_watts(-82.0) == Catch::Approx(6.309573444801932e-12).epsilon(1e-12));
  CHECK(dbm_to_watts(30.0) == Catch::Approx(1.0).epsilon(1e-12));
  CHECK(watts_to_dbm(dbm_to_watts(-106.19)) == Catch::Approx(-106.19).epsilon(1e-12));
  CHECK(db_to_linear(10.0) == Catch::Approx(10.0).epsilon(1e-12));
  CHECK(linear_to_db(db_to_linear(-7.3)) == Catch::Approx(-7.3).epsilon(1e-12));
}
