#pragma once

// Cantor-type fixtures: a set of middle intervals removed recursively from
// [0, 1] (each surviving interval keeps its two delta-fraction ends), the
// associated Cantor function at finite depth, and a weight that is finite
// exactly on the removed intervals,
//
//     w(x) = 2^{s n} + phi((x - left)/len)   on a level-n removed interval,
//     w(x) = +inf                            on the remaining set,
//
// where phi(xi) = c0 * (-log(4 xi (1 - xi))) is the convex unit-mass bump on
// (0, 1) vanishing at 1/2 and diverging at the endpoints (c0 fixed by
// quadrature at construction). The fixture exercises variation accounting of
// the slope transform against a closed-form geometric bound.

#include <vector>

#include "hotv/ext_real.hpp"
#include "hotv/weights.hpp"

namespace hotv {

struct RemovedInterval {
  int level = 0;   // 1-based removal generation
  long index = 0;  // left-to-right position within the level
  double left = 0.0;
  double right = 0.0;

  double length() const { return right - left; }
  double midpoint() const { return 0.5 * (left + right); }
};

struct CantorFixture {
  double delta = 0.0;  // surviving fraction at each end, 0 < delta < 1/2
  int depth = 0;       // number of removal generations
  double s = 2.0;      // growth exponent of the plateau heights 2^{s n}
  double c0 = 0.0;     // bump normalization, 1 / integral_0^1 (-log(4 xi (1 - xi)))

  std::vector<RemovedInterval> removed;  // sorted by left endpoint
  std::vector<double> removed_prefix;    // cumulative removed length (size removed.size() + 1)

  double remaining_measure() const;  // (2 delta)^depth
};

// Build the removal tree: level n removes 2^{n-1} open middle intervals of
// length delta^{n-1} (1 - 2 delta). Any delta in (0, 1/2) is admissible here
// (delta = 1/3 reproduces the classical middle-thirds set); the w_delta
// weight additionally requires delta < 2^{-(s+1)}, checked where the weight
// is used.
CantorFixture build_cantor_intervals(double delta, int depth, double s = 2.0);

// Depth-m Cantor function: the measure of (remaining set) intersect [0, x],
// scaled by (2 delta)^{-m}. Nondecreasing from 0 to 1, constant on each
// removed interval; successive depths differ by at most 2^{-m} in sup norm
// for delta <= 1/3.
double cantor_function(const CantorFixture& fix, double x);

// Normalized bump phi on the open unit interval.
double phi_bump(const CantorFixture& fix, double xi);

// The weight: finite (plateau + bump) inside removed intervals, +inf marker
// on the remaining set and interval boundaries. Requires
// delta < 2^{-(s+1)}.
ExtReal w_delta(const CantorFixture& fix, double x);

// Integral of w over the union of removed intervals: each level-n interval
// carries mass len * (2^{s n} + 1) because phi has unit mass, giving
// sum_{n<=depth} 2^{n-1} (2^{s n} + 1) delta^{n-1} (1 - 2 delta).
double integral_w(const CantorFixture& fix);

struct LevelVariation {
  int level = 0;
  int count = 0;               // 2^{level-1}
  double interval_length = 0.0;
  double var_per_interval = 0.0;   // 2 * (M - Psi_1(w at interval midpoint)), evaluated through the fixture
  double var_closed_form = 0.0;    // 2 * (M - Psi_1(2^{s level})) from the closed-form transform
};

struct VariationReport {
  std::vector<LevelVariation> levels;
  double total_variation = 0.0;  // sum over levels of count * var_per_interval
  double series_bound = 0.0;     // (c/(alpha-1)) * rho/(1-rho), rho = 2^{-(s(alpha-1)-1)}, c = 1
  bool within_bound = false;
};

// Per-interval variation of the slope transform v = Psi_1(w_delta): on each
// removed interval v falls from M at the left edge to Psi_1(plateau + 0) at
// the midpoint (phi vanishes there exactly) and climbs back to M, so the
// variation is 2 * (M - Psi_1(peak)) by unimodality. Requires a built-in
// weight with p = 1, tail exponent alpha > (s+1)/s (otherwise the geometric
// bound diverges), and delta < 2^{-(s+1)}.
VariationReport variation_bound_check(const CantorFixture& fix, const WeightFunction& w);

}  // namespace hotv
