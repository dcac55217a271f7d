#include <cmath>
#include <limits>

#include "doctest.h"
#include "fkdv/error.hpp"
#include "fkdv/quadrature.hpp"

using namespace fkdv;

TEST_CASE("polynomials and smooth integrands") {
  CHECK(integrate([](double s) { return 2 * s; }, 0, 1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::fabs(integrate([](double s) { return std::exp(s); }, 0, 3) - std::expm1(3.0)) < 1e-12);
  CHECK(std::fabs(integrate([](double s) { return 1 / s; }, 1, 2) - std::log(2.0)) < 1e-12);
  CHECK(std::fabs(integrate([](double s) { return std::sin(s) * std::sin(s); }, 0, M_PI) - M_PI / 2) < 1e-12);
}

TEST_CASE("reversed and empty intervals") {
  CHECK(integrate([](double) { return 1.0; }, 2, 2) == 0.0);
  CHECK(integrate([](double s) { return s; }, 1, 0) == doctest::Approx(-0.5));
}

TEST_CASE("adaptivity on a sharp peak") {
  // int_{-1}^{1} 1/(1e-4 + s^2) = 2 * atan(1/0.01) / 0.01
  const double exact = 2 * std::atan(100.0) / 0.01;
  const double got = integrate([](double s) { return 1 / (1e-4 + s * s); }, -1, 1, 1e-9);
  CHECK(std::fabs(got - exact) < 1e-8);
}

TEST_CASE("singular integrands and depth exhaustion") {
  CHECK_THROWS_AS(integrate([](double s) { return 1 / s; }, -1, 1), DomainError);
  CHECK_THROWS_AS(integrate([](double) { return std::numeric_limits<double>::quiet_NaN(); }, 0, 1), DomainError);
  // Discontinuous jump: forcing a tiny tolerance with almost no depth fails.
  CHECK_THROWS_AS(integrate([](double s) { return s < 0.3 ? 0.0 : 1.0; }, 0, 1, 1e-15, 3), ConvergenceError);
}
