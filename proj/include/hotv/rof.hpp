#pragma once

// Total-variation restoration with quadratic fidelity,
//
//     min_u  |Du|([a,b]) + lambda * integral (u - g)^2,
//
// in two forms. For nondecreasing data g normalized to run from 0 to 1 the
// minimizer is known in closed form up to two scalars: u = clamp(g, c1, c2),
// where the plateau levels c1 < c2 balance the fidelity mass each plateau
// swallows against the unit of variation it saves:
//
//     2*lambda * integral_{a}^{ginv(c1)} (c1 - g) dx = 1
//     2*lambda * integral_{ginv(c2)}^{b} (g - c2) dx = 1        (*)
//
// with ginv the generalized inverse ginv(c) = inf{x : g(x) >= c}. For
// arbitrary discrete data the same functional (composite midpoint / node sum)
// is minimized exactly by a taut string through the tube of radius
// 1/(2*lambda*h) around the running sums of g.

#include <utility>
#include <vector>

#include "hotv/signals.hpp"

namespace hotv {

// Nondecreasing datum g : [0,1] -> [0,1] with closed-form inverse and
// integrals. Two built-in families: the identity ramp g(x) = x and the
// n-step staircase g_n(x) = (floor(n x) + 1)/n (right-continuous
// representative; g_n(1) = 1), whose generalized inverse is
// ginv(c) = (ceil(c n) - 1)/n for c in (0, 1].
struct MonotoneDatum {
  enum class Kind { IdentityRamp, Staircase };

  Kind kind = Kind::IdentityRamp;
  double a = 0.0;
  double b = 1.0;
  int steps = 0;  // staircase step count n; unused for the ramp

  double eval(double x) const;
  double generalized_inverse(double c) const;

  // integral_0^c ginv(y) dy; equals lower_balance(c) for data on [0,1]
  // starting at 0 (used as an independent cross-check in tests).
  double integral_of_inverse(double c) const;

  // Left-hand sides of (*) without the 2*lambda factor:
  //   lower_balance(c) = integral_a^{ginv(c)} (c - g) dx
  //   upper_balance(c) = integral_{ginv(c)}^b (g - c) dx
  double lower_balance(double c) const;
  double upper_balance(double c) const;
};

MonotoneDatum make_ramp_datum();
MonotoneDatum make_staircase_datum(int n);

// Solve the two scalar equations (*) by bisection on [0, 1] (interval
// tolerance 1e-12, at most 200 halvings each; both left-hand sides are
// monotone in c). Throws NumericalError when lambda is too small for a
// solution with 0 < c1 < c2 < 1 to exist: either a balance equation cannot
// reach 1, or the two plateau levels collide (separation below 1e-10, e.g.
// the ramp at lambda = 4 where both roots sit at 1/2).
std::pair<double, double> solve_c1_c2(const MonotoneDatum& g, double lambda);

// Closed-form minimizer u = clamp(g, c1, c2) for monotone data: equal to c1
// up to x_low = ginv(c1), to g in between, and to c2 from x_high = ginv(c2).
struct RofSolution {
  MonotoneDatum datum;
  double lambda = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double x_low = 0.0;
  double x_high = 0.0;

  double evaluate(double x) const;
  DiscreteSignal sample(const Grid& grid) const;
};

RofSolution rof_monotone_minimizer(const MonotoneDatum& g, double lambda);

// Exact minimizer of  sum |u_{i+1} - u_i| + lambda * h * sum (u_i - g_i)^2
// over all real node vectors, by the taut-string construction (tube radius
// 1/(2*lambda*h) around the running sums, pinned at both ends). The result
// satisfies the maximum principle exactly and is monotone whenever g is.
DiscreteSignal rof_discrete_minimizer(const DiscreteSignal& g, double lambda);

// Staircase reconstruction report: with lambda > 4 the minimizer for the
// n-step staircase reproduces the data exactly on the middle window
// [a_n, b_n] = [ginv(c1), ginv(c2)] (both multiples of 1/n, each within 1/n
// of the corresponding ramp plateau edge 1/sqrt(lambda) resp.
// 1 - 1/sqrt(lambda)) and is constant at level c1 / c2 outside. Deviations
// are measured at staircase-cell midpoints, where the step representative is
// unambiguous.
struct StaircaseReport {
  int n = 0;
  double lambda = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double a_n = 0.0;
  double b_n = 0.0;
  double err_a = 0.0;    // |a_n - 1/sqrt(lambda)|
  double err_b = 0.0;    // |b_n - (1 - 1/sqrt(lambda))|
  double max_dev = 0.0;  // max |u - g_n| over staircase-cell midpoints in [a_n, b_n]
  double outer_dev = 0.0;  // max |u - plateau| over midpoints outside [a_n, b_n]
  double plateau_low = 0.0;   // = c1
  double plateau_high = 0.0;  // = c2
};

StaircaseReport staircase_experiment(int n, double lambda);

}  // namespace hotv
