#include <doctest.h>

#include <cmath>

#include "hotv/errors.hpp"
#include "hotv/numerics.hpp"

using namespace hotv;

TEST_CASE("adaptive Simpson reproduces closed-form integrals") {
  // Simpson is exact on cubics; the adaptive wrapper should hit machine
  // precision immediately.
  const double cubic = adaptive_simpson([](double x) { return x * x * x; }, 0.0, 2.0, 1e-12);
  CHECK(std::abs(cubic - 4.0) < 1e-12);

  const double sine = adaptive_simpson([](double x) { return std::sin(x); }, 0.0,
                                       3.14159265358979323846, 1e-12);
  CHECK(std::abs(sine - 2.0) < 1e-10);
}

TEST_CASE("adaptive Simpson handles an integrable log singularity by depth") {
  // integral_0^1 -log(4 x (1 - x)) dx = 2 - log 4; clipping the endpoints at
  // 1e-15 changes the value by O(1e-13).
  const double kEdge = 1e-15;
  const double val = adaptive_simpson(
      [](double x) { return -std::log(4.0 * x * (1.0 - x)); }, kEdge, 1.0 - kEdge, 1e-13);
  CHECK(std::abs(val - (2.0 - std::log(4.0))) < 1e-9);
}

TEST_CASE("adaptive Simpson rejects non-finite integrands") {
  CHECK_THROWS_AS(adaptive_simpson([](double x) { return 1.0 / x; }, 0.0, 1.0, 1e-10),
                  NumericalError);
  CHECK_THROWS_AS(adaptive_simpson([](double) { return 1.0; }, 0.0, 1.0, -1.0),
                  ValidationError);
}

TEST_CASE("bisection finds a bracketed root to the requested width") {
  const auto res = bisect([](double x) { return std::cos(x); }, 0.0, 2.0, 1e-12);
  CHECK(std::abs(res.root - 1.5707963267948966) < 1e-11);
  CHECK(res.bracket_width <= 1e-12);
}

TEST_CASE("bisection requires a sign change") {
  CHECK_THROWS_AS(bisect([](double x) { return x * x + 1.0; }, -1.0, 1.0, 1e-10),
                  NumericalError);
  CHECK_THROWS_AS(bisect([](double x) { return x; }, 1.0, 0.0, 1e-10), ValidationError);
}

TEST_CASE("smoothed absolute value: anchoring and accuracy") {
  const double eps = 1e-3;
  CHECK(smoothed_abs(0.0, eps) == 0.0);
  for (double t : {-5.0, -1.0, -1e-4, 1e-4, 0.5, 10.0}) {
    CHECK(std::abs(smoothed_abs(t, eps) - std::abs(t)) <= eps);
    // derivative against central differences
    const double d = 1e-7;
    const double fd = (smoothed_abs(t + d, eps) - smoothed_abs(t - d, eps)) / (2 * d);
    CHECK(std::abs(smoothed_abs_deriv(t, eps) - fd) < 1e-6);
  }
}

TEST_CASE("median of odd and even sample counts") {
  CHECK(median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(median({4.0, 1.0, 3.0, 2.0}) == 2.5);
  CHECK_THROWS_AS(median({}), ValidationError);
}
