#pragma once

// Slope-dependent weights psi for the curvature penalty and their integrated
// transforms.
//
// A weight psi > 0 is admissible for exponent p >= 1 when psi^{1/p} is
// integrable over R. Its transform
//
//     Psi_p(t) = integral_{-inf}^{t} psi(s)^{1/p} ds
//
// is a strictly increasing bijection from the extended real line onto
// [0, M], M = total mass of psi^{1/p}. Uphill (+1) and downhill (-1) jumps of
// a function with one-sided slopes t1, t2 at the jump point are charged
//
//     Phi(+1, t1, t2) = U(t1) + U(t2),   U(t) = M - Psi_1(t)   (upper tail)
//     Phi(-1, t1, t2) = L(t1) + L(t2),   L(t) = Psi_1(t)       (lower tail)
//
// (p = 1 only). Phi decomposes exactly as Phi = |Psi_1(t1) - Psi_1(t2)| +
// Phi_hat, where Phi_hat is twice the tail beyond the extremal slope; see
// jump_penalty_hat.
//
// The built-in family is psi(t) = 1 for |t| <= 1 and |t|^{-alpha} for
// |t| > 1 (alpha > p), for which every quantity above has a closed form.
// Custom weights evaluate tails by adaptive quadrature truncated to a
// documented radius.

#include <functional>
#include <optional>

#include "hotv/ext_real.hpp"

namespace hotv {

// Built-in weight and its derivative, exposed inline so hot-path code can
// evaluate them without std::function indirection. The derivative at the
// kinks |t| = 1 takes the branch approached from the left: 0 at t = +1,
// alpha at t = -1.
inline double builtin_psi(double alpha, double t) {
  const double at = t < 0 ? -t : t;
  return at <= 1.0 ? 1.0 : std::pow(at, -alpha);
}

inline double builtin_psi_deriv(double alpha, double t) {
  if (t == -1.0) return alpha;               // left-limit branch at the kink
  if (t > -1.0 && t <= 1.0) return 0.0;      // interior slope, left limit at +1
  const double at = t < 0 ? -t : t;
  const double mag = alpha * std::pow(at, -alpha - 1.0);
  return t > 0 ? -mag : mag;
}

struct WeightFunction {
  enum class Kind { Builtin, Custom };

  Kind kind = Kind::Builtin;
  std::function<double(double)> eval;        // psi(t)
  std::function<double(double)> eval_deriv;  // psi'(t); empty for derivative-free custom weights
  double p = 1.0;
  std::optional<double> alpha;               // built-in tail exponent, if any
  double total_mass = 0.0;                   // M = integral of psi^{1/p} (truncated for custom)
  double truncation_radius = 0.0;            // custom weights: tails clipped to [-T, T]

  // integral_{-inf}^{t} psi^{1/p} and integral_{t}^{+inf} psi^{1/p} for
  // finite t; the ExtReal overloads extend by 0 and M at the endpoints.
  std::function<double(double)> tail_lower_fn;
  std::function<double(double)> tail_upper_fn;

  double tail_integral_lower(const ExtReal& t) const;
  double tail_integral_upper(const ExtReal& t) const;
};

// Built-in weight with tail exponent alpha for penalty exponent p.
// Closed forms, with q = alpha - p and r = p/q:
//   M       = 2 + 2r
//   Psi_p(t)= r*(-t)^{-q/p}              for t <= -1
//           = r + t + 1                  for -1 <= t <= 1
//           = M - r*t^{-q/p}             for t >= 1
// Rejects alpha <= p (the tail |t|^{-alpha/p} of psi^{1/p} is then not
// integrable) and p < 1.
WeightFunction make_builtin_weight(double alpha, double p);

// Custom weight from a user-supplied positive evaluator. Tail integrals are
// adaptive-Simpson quadratures truncated to [-T, T] (T = truncation_radius):
// mass beyond T is dropped, so total_mass underestimates the true mass by
// the two omitted tails. deriv may be empty; it is only needed by the
// smoothed-descent solver.
WeightFunction make_custom_weight(std::function<double(double)> eval, double p,
                                  double truncation_radius,
                                  std::function<double(double)> deriv = {});

// Psi_p(t): lower tail integral of psi^{1/p}; maps -inf -> 0, +inf -> M,
// strictly increasing and Lipschitz with constant sup psi^{1/p}.
double psi_transform(const WeightFunction& w, const ExtReal& t);

// Inverse of Psi_p on [0, M]; 0 and M map to the corresponding infinities.
// Values outside [0, M] are rejected.
ExtReal psi_inverse(const WeightFunction& w, double y);

// Jump penalty Phi(nu, t1, t2) for nu = +1 (uphill) or -1 (downhill);
// requires p = 1. Symmetric in (t1, t2); nonincreasing in each slope for
// nu = +1 and nondecreasing for nu = -1.
double jump_penalty(const WeightFunction& w, int nu, const ExtReal& t1, const ExtReal& t2);

// Complement of the one-sided transform gap in the jump penalty:
//   Phi_hat(+1, t1, t2) = 2 * (M - Psi_1(max(t1, t2)))
//   Phi_hat(-1, t1, t2) = 2 * Psi_1(min(t1, t2))
// chosen so that Phi = |Psi_1(t1) - Psi_1(t2)| + Phi_hat holds exactly
// (write U = M - Psi_1; for t1 <= t2, Phi(+1) = U(t1) + U(t2) and
// |Delta Psi_1| = U(t1) - U(t2), leaving 2*U(t2)). Vanishes as the extremal
// slope escapes to the infinity matching the jump direction.
double jump_penalty_hat(const WeightFunction& w, int nu, const ExtReal& t1, const ExtReal& t2);

}  // namespace hotv
