#include "hotv/weights.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "hotv/errors.hpp"
#include "hotv/numerics.hpp"

namespace hotv {

namespace {

constexpr double kQuadTol = 1e-12;  // absolute tolerance for all tail quadratures

void require_nu(int nu) {
  if (nu != 1 && nu != -1) throw ValidationError("jump penalty: nu must be +1 or -1");
}

void require_p1(const WeightFunction& w, const char* op) {
  if (w.p != 1.0) {
    std::ostringstream msg;
    msg << op << ": jump penalties are defined for p = 1 only (got p = " << w.p << ")";
    throw ValidationError(msg.str());
  }
}

}  // namespace

double WeightFunction::tail_integral_lower(const ExtReal& t) const {
  if (t.is_neg_inf()) return 0.0;
  if (t.is_pos_inf()) return total_mass;
  return tail_lower_fn(t.value());
}

double WeightFunction::tail_integral_upper(const ExtReal& t) const {
  if (t.is_neg_inf()) return total_mass;
  if (t.is_pos_inf()) return 0.0;
  return tail_upper_fn(t.value());
}

WeightFunction make_builtin_weight(double alpha, double p) {
  if (!(p >= 1.0)) throw ValidationError("make_builtin_weight: p must be >= 1");
  if (!(alpha > p)) {
    std::ostringstream msg;
    msg << "make_builtin_weight: psi^(1/p) has tail |t|^(-alpha/p), which is integrable "
           "over R only for alpha > p (got alpha = "
        << alpha << ", p = " << p << ")";
    throw ValidationError(msg.str());
  }
  const double q = alpha - p;
  const double r = p / q;
  const double mass = 2.0 + 2.0 * r;

  WeightFunction w;
  w.kind = WeightFunction::Kind::Builtin;
  w.p = p;
  w.alpha = alpha;
  w.total_mass = mass;
  w.eval = [alpha](double t) { return builtin_psi(alpha, t); };
  w.eval_deriv = [alpha](double t) { return builtin_psi_deriv(alpha, t); };
  // Lower tail of psi^{1/p}; the exponent of the outer branches is
  // alpha/p = q/p + 1, so each tail integrates to r*|t|^{-q/p}.
  w.tail_lower_fn = [q, p, r, mass](double t) {
    if (t <= -1.0) return r * std::pow(-t, -q / p);
    if (t >= 1.0) return mass - r * std::pow(t, -q / p);
    return r + t + 1.0;
  };
  // By evenness of psi, the upper tail is the reflected lower tail; using the
  // reflection avoids cancellation in M - tail_lower for large t.
  w.tail_upper_fn = [lower = w.tail_lower_fn](double t) { return lower(-t); };
  return w;
}

WeightFunction make_custom_weight(std::function<double(double)> eval, double p,
                                  double truncation_radius,
                                  std::function<double(double)> deriv) {
  if (!eval) throw ValidationError("make_custom_weight: evaluator must be callable");
  if (!(p >= 1.0)) throw ValidationError("make_custom_weight: p must be >= 1");
  if (!(truncation_radius > 0.0))
    throw ValidationError("make_custom_weight: truncation radius must be positive");
  for (double probe : {-truncation_radius, -1.0, 0.0, 1.0, truncation_radius}) {
    const double v = eval(probe);
    if (!(v > 0.0) || !std::isfinite(v)) {
      std::ostringstream msg;
      msg << "make_custom_weight: psi must be finite and positive (psi(" << probe
          << ") = " << v << ")";
      throw ValidationError(msg.str());
    }
  }

  const double T = truncation_radius;
  auto root = [eval, p](double t) { return std::pow(eval(t), 1.0 / p); };

  WeightFunction w;
  w.kind = WeightFunction::Kind::Custom;
  w.p = p;
  w.truncation_radius = T;
  w.eval = eval;
  w.eval_deriv = std::move(deriv);
  w.total_mass = adaptive_simpson(root, -T, T, kQuadTol);
  w.tail_lower_fn = [root, T, mass = w.total_mass](double t) {
    if (t <= -T) return 0.0;
    if (t >= T) return mass;
    return adaptive_simpson(root, -T, t, kQuadTol);
  };
  w.tail_upper_fn = [root, T, mass = w.total_mass](double t) {
    if (t <= -T) return mass;
    if (t >= T) return 0.0;
    return adaptive_simpson(root, t, T, kQuadTol);
  };
  return w;
}

double psi_transform(const WeightFunction& w, const ExtReal& t) {
  return w.tail_integral_lower(t);
}

ExtReal psi_inverse(const WeightFunction& w, double y) {
  const double mass = w.total_mass;
  if (!(y >= 0.0) || !(y <= mass)) {
    std::ostringstream msg;
    msg << "psi_inverse: value " << y << " outside the transform range [0, " << mass << "]";
    throw ValidationError(msg.str());
  }
  if (y == 0.0) return ExtReal::neg_inf();
  if (y == mass) return ExtReal::pos_inf();

  if (w.kind == WeightFunction::Kind::Builtin) {
    const double q = *w.alpha - w.p;
    const double r = w.p / q;
    if (y < r) return ExtReal(-std::pow(y / r, -w.p / q));
    if (y > mass - r) return ExtReal(std::pow((mass - y) / r, -w.p / q));
    return ExtReal(y - r - 1.0);
  }

  // Custom weights: the truncated transform is continuous and strictly
  // increasing on [-T, T] with range exactly [0, mass], so the root is
  // bracketed by construction.
  const double T = w.truncation_radius;
  auto g = [&w, y](double t) { return w.tail_lower_fn(t) - y; };
  return ExtReal(bisect(g, -T, T, 1e-13).root);
}

double jump_penalty(const WeightFunction& w, int nu, const ExtReal& t1, const ExtReal& t2) {
  require_p1(w, "jump_penalty");
  require_nu(nu);
  if (nu == 1) return w.tail_integral_upper(t1) + w.tail_integral_upper(t2);
  return w.tail_integral_lower(t1) + w.tail_integral_lower(t2);
}

double jump_penalty_hat(const WeightFunction& w, int nu, const ExtReal& t1, const ExtReal& t2) {
  require_p1(w, "jump_penalty_hat");
  require_nu(nu);
  if (nu == 1) return 2.0 * w.tail_integral_upper(max(t1, t2));
  return 2.0 * w.tail_integral_lower(min(t1, t2));
}

}  // namespace hotv
