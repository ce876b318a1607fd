#include "hotv/rof.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hotv/errors.hpp"
#include "hotv/numerics.hpp"

namespace hotv {

namespace {

constexpr double kBisectTol = 1e-12;   // interval tolerance for the balance equations
constexpr int kBisectMaxIter = 200;
constexpr double kLevelSeparation = 1e-10;  // minimal admissible c2 - c1

void require_unit_range(double c) {
  if (!(c >= 0.0 && c <= 1.0)) {
    std::ostringstream msg;
    msg << "MonotoneDatum: level " << c << " outside the data range [0, 1]";
    throw ValidationError(msg.str());
  }
}

// Staircase cell index j such that c lies in ((j-1)/n, j/n], clamped to
// j = 1 at c = 0. All staircase integrals below are polynomial in j and c.
int cell_index(double c, int n) {
  if (c <= 0.0) return 1;
  int j = static_cast<int>(std::ceil(c * n));
  return std::clamp(j, 1, n);
}

}  // namespace

double MonotoneDatum::eval(double x) const {
  const double tol = 1e-12 * (b - a);
  if (!(x >= a - tol && x <= b + tol)) {
    std::ostringstream msg;
    msg << "MonotoneDatum: point " << x << " outside the domain [" << a << ", " << b << "]";
    throw ValidationError(msg.str());
  }
  x = std::clamp(x, a, b);
  if (kind == Kind::IdentityRamp) return x;
  if (x >= b) return 1.0;
  // floor(steps * x) can land one band off when the product rounds across an
  // integer; fma(steps, x, -k) has the exact sign of steps*x - k, which pins
  // the true band.
  double k = std::floor(steps * x);
  if (std::fma(steps, x, -k) < 0.0)
    k -= 1.0;
  else if (std::fma(steps, x, -(k + 1.0)) >= 0.0)
    k += 1.0;
  return (k + 1.0) / steps;
}

double MonotoneDatum::generalized_inverse(double c) const {
  require_unit_range(c);
  if (kind == Kind::IdentityRamp) return c;
  if (c <= 0.0) return a;
  return (std::ceil(c * steps) - 1.0) / steps;
}

double MonotoneDatum::integral_of_inverse(double c) const {
  require_unit_range(c);
  if (kind == Kind::IdentityRamp) return 0.5 * c * c;
  const int n = steps;
  const int j = cell_index(c, n);
  const double nn = static_cast<double>(n) * n;
  return (j - 1.0) * (j - 2.0) / (2.0 * nn) + (c - (j - 1.0) / n) * (j - 1.0) / n;
}

double MonotoneDatum::lower_balance(double c) const {
  require_unit_range(c);
  if (kind == Kind::IdentityRamp) return 0.5 * c * c;
  const int n = steps;
  const int j = cell_index(c, n);
  const double nn = static_cast<double>(n) * n;
  return c * (j - 1.0) / n - static_cast<double>(j) * (j - 1.0) / (2.0 * nn);
}

double MonotoneDatum::upper_balance(double c) const {
  require_unit_range(c);
  if (kind == Kind::IdentityRamp) return 0.5 * (1.0 - c) * (1.0 - c);
  const int n = steps;
  const int j = cell_index(c, n);
  const double nn = static_cast<double>(n) * n;
  return (static_cast<double>(n) * (n + 1.0) - static_cast<double>(j) * (j - 1.0)) / (2.0 * nn) -
         c * (n - j + 1.0) / n;
}

MonotoneDatum make_ramp_datum() {
  MonotoneDatum g;
  g.kind = MonotoneDatum::Kind::IdentityRamp;
  return g;
}

MonotoneDatum make_staircase_datum(int n) {
  if (n < 2) throw ValidationError("make_staircase_datum: needs at least 2 steps");
  MonotoneDatum g;
  g.kind = MonotoneDatum::Kind::Staircase;
  g.steps = n;
  return g;
}

std::pair<double, double> solve_c1_c2(const MonotoneDatum& g, double lambda) {
  if (!(lambda > 0.0)) throw ValidationError("solve_c1_c2: lambda must be positive");

  auto low_eq = [&](double c) { return 2.0 * lambda * g.lower_balance(c) - 1.0; };
  auto high_eq = [&](double c) { return 2.0 * lambda * g.upper_balance(c) - 1.0; };

  if (low_eq(1.0) < 0.0 || high_eq(0.0) < 0.0) {
    std::ostringstream msg;
    msg << "solve_c1_c2: plateau balance equations unsatisfiable at lambda = " << lambda
        << " (lambda too small for this datum)";
    throw NumericalError(msg.str());
  }
  const double c1 = bisect(low_eq, 0.0, 1.0, kBisectTol, kBisectMaxIter).root;
  const double c2 = bisect(high_eq, 0.0, 1.0, kBisectTol, kBisectMaxIter).root;
  if (!(c1 > 0.0 && c2 < 1.0 && c2 - c1 > kLevelSeparation)) {
    std::ostringstream msg;
    msg << "solve_c1_c2: plateau levels collide (c1 = " << c1 << ", c2 = " << c2
        << ") at lambda = " << lambda << "; lambda too small for an interior solution";
    throw NumericalError(msg.str());
  }
  return {c1, c2};
}

double RofSolution::evaluate(double x) const {
  return std::clamp(datum.eval(x), c1, c2);
}

DiscreteSignal RofSolution::sample(const Grid& grid) const {
  Eigen::VectorXd v(grid.n_nodes());
  for (int i = 0; i < grid.n_nodes(); ++i) v[i] = evaluate(grid.node(i));
  return DiscreteSignal(grid, std::move(v));
}

RofSolution rof_monotone_minimizer(const MonotoneDatum& g, double lambda) {
  const auto [c1, c2] = solve_c1_c2(g, lambda);
  RofSolution sol;
  sol.datum = g;
  sol.lambda = lambda;
  sol.c1 = c1;
  sol.c2 = c2;
  sol.x_low = g.generalized_inverse(c1);
  sol.x_high = g.generalized_inverse(c2);
  return sol;
}

DiscreteSignal rof_discrete_minimizer(const DiscreteSignal& g, double lambda) {
  if (!(lambda > 0.0)) throw ValidationError("rof_discrete_minimizer: lambda must be positive");
  const Eigen::Index m = g.values.size();  // string segments; one slope per node value
  const double h = g.grid.h();
  const double gamma = 1.0 / (2.0 * lambda * h);

  // Running sums R_0..R_m; the string U must satisfy U_0 = 0, U_m = R_m and
  // |U_k - R_k| <= gamma at interior k. Node values are string increments.
  Eigen::VectorXd R(m + 1);
  R[0] = 0.0;
  for (Eigen::Index k = 0; k < m; ++k) R[k + 1] = R[k] + g.values[k];

  // side: -1 lower tube wall, +1 upper wall, 0 pinned endpoint. Segment
  // slopes are evaluated as (R_k1 - R_k0 + gamma*(side1 - side0)) / len so
  // that wall-to-same-wall stretches reduce to exact block means of g.
  auto bound = [&](Eigen::Index k, int side) {
    return (k == 0 || k == m) ? R[k] : R[k] + gamma * side;
  };

  Eigen::VectorXd u(m);
  Eigen::Index anchor = 0;
  int anchor_side = 0;

  auto fill = [&](Eigen::Index from, Eigen::Index to, int to_side) {
    const double slope =
        (R[to] - R[from] + gamma * (to_side - anchor_side)) / static_cast<double>(to - from);
    for (Eigen::Index i = from; i < to; ++i) u[i] = slope;
  };

  while (anchor < m) {
    const double ay = bound(anchor, anchor_side);
    double s_hi = std::numeric_limits<double>::infinity();
    double s_lo = -std::numeric_limits<double>::infinity();
    Eigen::Index arg_hi = anchor, arg_lo = anchor;
    bool bent = false;
    for (Eigen::Index k = anchor + 1; k <= m; ++k) {
      const double len = static_cast<double>(k - anchor);
      const double up = (k == m) ? R[m] : R[k] + gamma;
      const double lo = (k == m) ? R[m] : R[k] - gamma;
      const double shi = (up - ay) / len;
      const double slo = (lo - ay) / len;
      if (slo > s_hi) {  // corridor pinched from below: bend on the upper wall
        fill(anchor, arg_hi, +1);
        anchor = arg_hi;
        anchor_side = +1;
        bent = true;
        break;
      }
      if (shi < s_lo) {  // corridor pinched from above: bend on the lower wall
        fill(anchor, arg_lo, -1);
        anchor = arg_lo;
        anchor_side = -1;
        bent = true;
        break;
      }
      if (shi < s_hi) {
        s_hi = shi;
        arg_hi = k;
      }
      if (slo > s_lo) {
        s_lo = slo;
        arg_lo = k;
      }
    }
    if (!bent) {
      // The straight run to the pinned right endpoint stays inside the tube.
      fill(anchor, m, 0);
      break;
    }
  }

  // The exact minimizer obeys the maximum principle; clamping removes the
  // last-ulp violations of floating arithmetic without increasing either the
  // variation or the fidelity term.
  const double g_min = g.values.minCoeff();
  const double g_max = g.values.maxCoeff();
  u = u.cwiseMax(g_min).cwiseMin(g_max);

  // Likewise, monotone data has a monotone exact minimizer. A graze against a
  // tube wall can split one mathematical plateau into two segments whose
  // slopes disagree in the last ulp; the running extremum restores the exact
  // ordering without leaving [g_min, g_max].
  bool nondec = true, noninc = true;
  for (Eigen::Index i = 0; i + 1 < m; ++i) {
    nondec = nondec && g.values[i] <= g.values[i + 1];
    noninc = noninc && g.values[i] >= g.values[i + 1];
  }
  if (nondec)
    for (Eigen::Index i = 1; i < m; ++i) u[i] = std::max(u[i], u[i - 1]);
  else if (noninc)
    for (Eigen::Index i = 1; i < m; ++i) u[i] = std::min(u[i], u[i - 1]);

  return DiscreteSignal(g.grid, std::move(u));
}

StaircaseReport staircase_experiment(int n, double lambda) {
  // lambda itself is admissible input for TV restoration whenever positive;
  // it is the plateau equations that lose their interior solution at
  // lambda <= 4 (the two levels collide at 1/2 for the limiting ramp), so
  // this is classed with the unsatisfiable-balance failures, not input
  // validation.
  if (!(lambda > 4.0))
    throw NumericalError(
        "staircase_experiment: reconstruction window exists only for lambda > "
        "4 (plateau equations unsatisfiable otherwise)");
  const MonotoneDatum g = make_staircase_datum(n);
  const RofSolution sol = rof_monotone_minimizer(g, lambda);

  StaircaseReport rep;
  rep.n = n;
  rep.lambda = lambda;
  rep.c1 = sol.c1;
  rep.c2 = sol.c2;
  rep.a_n = sol.x_low;
  rep.b_n = sol.x_high;
  const double root = 1.0 / std::sqrt(lambda);
  rep.err_a = std::abs(rep.a_n - root);
  rep.err_b = std::abs(rep.b_n - (1.0 - root));
  rep.plateau_low = sol.c1;
  rep.plateau_high = sol.c2;

  const double tol = 1e-12;
  for (int i = 1; i <= n; ++i) {
    const double left = (i - 1.0) / n;
    const double right = static_cast<double>(i) / n;
    const double mid = (i - 0.5) / n;
    const double u_mid = sol.evaluate(mid);
    if (left >= rep.a_n - tol && right <= rep.b_n + tol) {
      rep.max_dev = std::max(rep.max_dev, std::abs(u_mid - g.eval(mid)));
    } else if (right <= rep.a_n + tol) {
      rep.outer_dev = std::max(rep.outer_dev, std::abs(u_mid - sol.c1));
    } else if (left >= rep.b_n - tol) {
      rep.outer_dev = std::max(rep.outer_dev, std::abs(u_mid - sol.c2));
    }
  }
  return rep;
}

}  // namespace hotv
