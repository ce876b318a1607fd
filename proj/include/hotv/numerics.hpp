#pragma once

// Scalar numerics shared across the library: adaptive Simpson quadrature with
// an absolute-error budget, bisection for monotone root problems, the C^1
// smoothing of |.| used by the descent solver, and a median helper.

#include <cmath>
#include <functional>
#include <vector>

namespace hotv {

// Adaptive Simpson rule on [a, b] with absolute tolerance abs_tol.
//
// The interval is split recursively until the classical Richardson estimate
// |S(left) + S(right) - S(whole)| <= 15 * local_tol holds, with the tolerance
// budget halved at each split. A subinterval narrower than 1e-14 of the full
// domain is accepted regardless: jump discontinuities and steep integrable
// singularities (log, small powers) keep the Richardson estimate and the
// halving tolerance in lockstep, so refinement alone would never terminate
// there; the slivers each contribute O(scale * 1e-14 * width) of error. Only
// the chains containing bad points keep subdividing, so the work stays
// linear in the recursion depth. Exceeding max_depth throws NumericalError.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, int max_depth = 60);

struct BisectionResult {
  double root = 0.0;          // midpoint of the final bracket
  int iterations = 0;         // bisection steps performed
  double bracket_width = 0.0; // width of the final bracket
};

// Bisection on [lo, hi]; requires f(lo) and f(hi) of opposite (or zero) sign.
// Stops when the bracket is narrower than xtol or after max_iter halvings,
// whichever comes first. Throws NumericalError when the root is not bracketed.
BisectionResult bisect(const std::function<double(double)>& f, double lo, double hi,
                       double xtol, int max_iter = 200);

// sqrt(t^2 + eps^2) - eps: smooth, even, nonnegative approximation of |t|
// with value 0 at t = 0 and |smoothed_abs(t, eps) - |t|| <= eps.
inline double smoothed_abs(double t, double eps) {
  return std::sqrt(t * t + eps * eps) - eps;
}

// d/dt smoothed_abs = t / sqrt(t^2 + eps^2).
inline double smoothed_abs_deriv(double t, double eps) {
  return t / std::sqrt(t * t + eps * eps);
}

// d^2/dt^2 smoothed_abs = eps^2 / (t^2 + eps^2)^{3/2}; peaks at 1/eps.
inline double smoothed_abs_second(double t, double eps) {
  const double r2 = t * t + eps * eps;
  return eps * eps / (r2 * std::sqrt(r2));
}

// Median of the entries of v (average of the two central order statistics for
// even sizes). v is taken by value; an empty input throws ValidationError.
double median(std::vector<double> v);

}  // namespace hotv
