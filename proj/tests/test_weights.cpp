#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "hotv/errors.hpp"
#include "hotv/ext_real.hpp"
#include "hotv/weights.hpp"

using namespace hotv;

TEST_CASE("built-in weight closed forms at alpha=2, p=1") {
  const WeightFunction w = make_builtin_weight(2.0, 1.0);
  // q = alpha - p = 1, r = p/q = 1: M = 2 + 2r = 4, Psi(t) = t + 2 inside.
  CHECK(w.total_mass == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(psi_transform(w, ExtReal(0.0)) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(psi_transform(w, ExtReal(1.0)) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(psi_transform(w, ExtReal(-1.0)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(psi_transform(w, ExtReal(2.0)) == doctest::Approx(3.5).epsilon(1e-14));
  CHECK(psi_transform(w, ExtReal(-2.0)) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(psi_transform(w, ExtReal::neg_inf()) == 0.0);
  CHECK(psi_transform(w, ExtReal::pos_inf()) == doctest::Approx(4.0).epsilon(1e-14));

  CHECK(w.eval(0.5) == 1.0);
  CHECK(w.eval(2.0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(w.eval(-2.0) == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("built-in weight derivative takes the left-limit branch at the kinks") {
  const double alpha = 2.0;
  const WeightFunction w = make_builtin_weight(alpha, 1.0);
  CHECK(w.eval_deriv(0.3) == 0.0);
  CHECK(w.eval_deriv(1.0) == 0.0);     // from the flat interior
  CHECK(w.eval_deriv(-1.0) == alpha);  // from the rising tail
  CHECK(w.eval_deriv(2.0) == doctest::Approx(-alpha * std::pow(2.0, -alpha - 1.0)));
  CHECK(w.eval_deriv(-2.0) == doctest::Approx(alpha * std::pow(2.0, -alpha - 1.0)));
}

TEST_CASE("built-in weight at p=2 is continuous across the kink") {
  const WeightFunction w = make_builtin_weight(3.0, 2.0);
  // q = 1, r = 2: M = 6, Psi(1) = r + 2 = 4 = M - r.
  CHECK(w.total_mass == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(psi_transform(w, ExtReal(1.0)) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(psi_transform(w, ExtReal(1.0 + 1e-12)) == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(psi_transform(w, ExtReal(-1.0)) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("inadmissible parameters are rejected with the reason") {
  CHECK_THROWS_AS(make_builtin_weight(1.0, 1.0), ValidationError);  // alpha must exceed p
  CHECK_THROWS_AS(make_builtin_weight(0.5, 1.0), ValidationError);
  CHECK_THROWS_AS(make_builtin_weight(2.0, 0.5), ValidationError);  // p >= 1
}

TEST_CASE("transform/inverse round trip on [-50, 50]") {
  for (const auto& [alpha, p] : std::vector<std::pair<double, double>>{{2.0, 1.0}, {3.0, 2.0}}) {
    const WeightFunction w = make_builtin_weight(alpha, p);
    for (int i = 0; i <= 200; ++i) {
      const double t = -50.0 + 0.5 * i;
      const ExtReal back = psi_inverse(w, psi_transform(w, ExtReal(t)));
      REQUIRE(back.is_finite());
      CHECK(std::abs(back.value() - t) <= 1e-9 * std::max(1.0, std::abs(t)));
    }
    CHECK(psi_inverse(w, 0.0).is_neg_inf());
    CHECK(psi_inverse(w, w.total_mass).is_pos_inf());
    CHECK_THROWS_AS(psi_inverse(w, -1e-9), ValidationError);
    CHECK_THROWS_AS(psi_inverse(w, w.total_mass + 1e-9), ValidationError);
  }
}

TEST_CASE("jump penalty closed forms and symmetry") {
  const WeightFunction w = make_builtin_weight(2.0, 1.0);
  // Phi(+1, t1, t2) = (M - Psi(t1)) + (M - Psi(t2)).
  CHECK(jump_penalty(w, 1, ExtReal(0.0), ExtReal(0.0)) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(jump_penalty(w, -1, ExtReal(0.0), ExtReal(0.0)) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(jump_penalty(w, 1, ExtReal(-0.5), ExtReal(2.0)) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(jump_penalty(w, 1, ExtReal(2.0), ExtReal(-0.5)) == doctest::Approx(3.0).epsilon(1e-14));
  // Slopes already at the jump's infinity cost nothing.
  CHECK(jump_penalty(w, 1, ExtReal::pos_inf(), ExtReal::pos_inf()) == 0.0);
  CHECK(jump_penalty(w, -1, ExtReal::neg_inf(), ExtReal::neg_inf()) == 0.0);

  CHECK_THROWS_AS(jump_penalty(w, 0, ExtReal(0.0), ExtReal(0.0)), ValidationError);
  const WeightFunction wp2 = make_builtin_weight(3.0, 2.0);
  CHECK_THROWS_AS(jump_penalty(wp2, 1, ExtReal(0.0), ExtReal(0.0)), ValidationError);
}

TEST_CASE("penalty decomposition Phi = |Delta Psi| + Phi_hat at random slope pairs") {
  const WeightFunction w = make_builtin_weight(2.0, 1.0);
  std::mt19937 rng(20240811);
  std::uniform_real_distribution<double> dist(-8.0, 8.0);
  for (int trial = 0; trial < 100; ++trial) {
    const ExtReal t1(dist(rng));
    const ExtReal t2(dist(rng));
    for (int nu : {1, -1}) {
      const double phi = jump_penalty(w, nu, t1, t2);
      const double gap = std::abs(psi_transform(w, t1) - psi_transform(w, t2));
      const double hat = jump_penalty_hat(w, nu, t1, t2);
      CHECK(std::abs(phi - (gap + hat)) <= 1e-12);
      CHECK(hat >= -1e-15);
    }
  }
  // Example values: Phi(+1, -0.5, 2.0) = 3 splits as |Psi(2)-Psi(-0.5)| = 2
  // plus Phi_hat = 2*(M - Psi(2)) = 1.
  CHECK(jump_penalty_hat(w, 1, ExtReal(-0.5), ExtReal(2.0)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(jump_penalty_hat(w, 1, ExtReal(0.0), ExtReal(0.0)) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("uphill penalty is nonincreasing in each slope") {
  const WeightFunction w = make_builtin_weight(2.0, 1.0);
  double prev = jump_penalty(w, 1, ExtReal(-30.0), ExtReal(0.0));
  for (double t = -25.0; t <= 30.0; t += 5.0) {
    const double cur = jump_penalty(w, 1, ExtReal(t), ExtReal(0.0));
    CHECK(cur <= prev + 1e-14);
    prev = cur;
  }
}

TEST_CASE("custom weight from quadrature matches the built-in closed forms") {
  const double T = 60.0;
  const WeightFunction w = make_custom_weight(
      [](double t) { return builtin_psi(2.0, t); }, 1.0, T,
      [](double t) { return builtin_psi_deriv(2.0, t); });
  // Truncation to [-T, T] drops exactly 1/T of mass in each tail.
  CHECK(std::abs(w.total_mass - (4.0 - 2.0 / T)) < 1e-10);
  const WeightFunction ref = make_builtin_weight(2.0, 1.0);
  for (double t : {-5.0, -1.0, 0.0, 0.7, 1.0, 3.2}) {
    const double shifted = psi_transform(ref, ExtReal(t)) - 1.0 / T;
    CHECK(std::abs(psi_transform(w, ExtReal(t)) - shifted) < 1e-10);
  }
  // Bisection-based inverse round-trips through the quadrature transform.
  for (double t : {-3.0, 0.25, 2.5}) {
    const ExtReal back = psi_inverse(w, psi_transform(w, ExtReal(t)));
    REQUIRE(back.is_finite());
    CHECK(std::abs(back.value() - t) < 1e-9);
  }
}

TEST_CASE("custom weights must be positive") {
  CHECK_THROWS_AS(make_custom_weight([](double t) { return t; }, 1.0, 10.0), ValidationError);
  CHECK_THROWS_AS(make_custom_weight([](double) { return 0.0; }, 1.0, 10.0), ValidationError);
}
