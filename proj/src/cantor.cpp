#include "hotv/cantor.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "hotv/errors.hpp"
#include "hotv/numerics.hpp"

namespace hotv {

namespace {

// The bump integrand -log(4 xi (1 - xi)) is integrable with value 2 - log 4;
// we fix c0 by quadrature rather than by the closed form so the construction
// is self-contained (the closed form is a test oracle). The integrand is
// clipped away from the endpoints; the omitted mass is O(eps log(1/eps)).
double compute_c0() {
  const double kEdge = 1e-15;
  const double mass = adaptive_simpson(
      [](double xi) { return -std::log(4.0 * xi * (1.0 - xi)); }, kEdge,
      1.0 - kEdge, 1e-13, 60);
  return 1.0 / mass;
}

// Index of the removed interval with left < x, or -1.
long interval_below(const CantorFixture& fix, double x) {
  auto it = std::upper_bound(
      fix.removed.begin(), fix.removed.end(), x,
      [](double value, const RemovedInterval& iv) { return value < iv.left; });
  return static_cast<long>(it - fix.removed.begin()) - 1;
}

void require_unit_interval(double x) {
  if (!std::isfinite(x) || x < 0.0 || x > 1.0) {
    throw ValidationError("cantor fixture: point must lie in [0, 1]");
  }
}

}  // namespace

double CantorFixture::remaining_measure() const {
  return std::pow(2.0 * delta, depth);
}

CantorFixture build_cantor_intervals(double delta, int depth, double s) {
  if (!std::isfinite(delta) || delta <= 0.0 || delta >= 0.5) {
    throw ValidationError(
        "build_cantor_intervals: delta must lie strictly between 0 and 1/2");
  }
  if (depth < 1) {
    throw ValidationError("build_cantor_intervals: depth must be >= 1");
  }
  if (depth > 24) {
    throw ValidationError(
        "build_cantor_intervals: depth > 24 would enumerate more than 2^24 "
        "intervals");
  }
  if (!std::isfinite(s) || s <= 0.0) {
    throw ValidationError("build_cantor_intervals: growth exponent s must be positive");
  }

  CantorFixture fix;
  fix.delta = delta;
  fix.depth = depth;
  fix.s = s;
  fix.c0 = compute_c0();

  std::vector<std::pair<double, double>> keep = {{0.0, 1.0}};
  for (int level = 1; level <= depth; ++level) {
    std::vector<std::pair<double, double>> next;
    next.reserve(2 * keep.size());
    long index = 0;
    for (const auto& [l, r] : keep) {
      const double len = r - l;
      const double a = l + delta * len;
      const double b = r - delta * len;
      fix.removed.push_back({level, index++, a, b});
      next.emplace_back(l, a);
      next.emplace_back(b, r);
    }
    keep = std::move(next);
  }

  std::sort(fix.removed.begin(), fix.removed.end(),
            [](const RemovedInterval& u, const RemovedInterval& v) {
              return u.left < v.left;
            });
  fix.removed_prefix.assign(fix.removed.size() + 1, 0.0);
  for (std::size_t i = 0; i < fix.removed.size(); ++i) {
    fix.removed_prefix[i + 1] = fix.removed_prefix[i] + fix.removed[i].length();
  }
  return fix;
}

double cantor_function(const CantorFixture& fix, double x) {
  require_unit_interval(x);
  const long idx = interval_below(fix, x);
  double covered = 0.0;
  if (idx >= 0) {
    covered = fix.removed_prefix[idx + 1];
    const RemovedInterval& iv = fix.removed[static_cast<std::size_t>(idx)];
    if (x < iv.right) {
      covered -= iv.right - x;  // only the part of iv below x is removed mass
    }
  }
  const double value = (x - covered) / fix.remaining_measure();
  return std::clamp(value, 0.0, 1.0);
}

double phi_bump(const CantorFixture& fix, double xi) {
  if (!std::isfinite(xi) || xi <= 0.0 || xi >= 1.0) {
    throw ValidationError("phi_bump: argument must lie strictly inside (0, 1)");
  }
  return fix.c0 * (-std::log(4.0 * xi * (1.0 - xi)));
}

ExtReal w_delta(const CantorFixture& fix, double x) {
  // The pairing of plateau height 2^{s n} with interval length
  // ~ delta^{n-1} only separates scales when 2^{s+1} delta < 1.
  if (fix.delta >= std::pow(2.0, -(fix.s + 1.0))) {
    throw ValidationError(
        "w_delta: requires delta < 2^{-(s+1)} so plateau growth outpaces "
        "interval shrinkage");
  }
  require_unit_interval(x);
  const long idx = interval_below(fix, x);
  if (idx >= 0) {
    const RemovedInterval& iv = fix.removed[static_cast<std::size_t>(idx)];
    if (x > iv.left && x < iv.right) {  // strictly interior: endpoints stay in the remaining set
      const double xi = (x - iv.left) / iv.length();
      return ExtReal(std::pow(2.0, fix.s * iv.level) + phi_bump(fix, xi));
    }
  }
  return ExtReal::pos_inf();  // remaining set and interval boundaries
}

double integral_w(const CantorFixture& fix) {
  double total = 0.0;
  for (int n = 1; n <= fix.depth; ++n) {
    const double count = std::pow(2.0, n - 1);
    const double len = std::pow(fix.delta, n - 1) * (1.0 - 2.0 * fix.delta);
    total += count * len * (std::pow(2.0, fix.s * n) + 1.0);
  }
  return total;
}

VariationReport variation_bound_check(const CantorFixture& fix,
                                      const WeightFunction& w) {
  if (w.p != 1.0) {
    throw ValidationError(
        "variation_bound_check: accounting applies to the p = 1 slope "
        "transform only");
  }
  if (w.kind != WeightFunction::Kind::Builtin || !w.alpha.has_value()) {
    throw ValidationError(
        "variation_bound_check: requires the built-in power-tail weight "
        "(known tail exponent alpha)");
  }
  const double alpha = *w.alpha;
  if (alpha <= (fix.s + 1.0) / fix.s) {
    throw ValidationError(
        "variation_bound_check: requires alpha > (s+1)/s, otherwise the "
        "level series diverges");
  }
  if (fix.delta >= std::pow(2.0, -(fix.s + 1.0))) {
    throw ValidationError(
        "variation_bound_check: requires delta < 2^{-(s+1)} (same pairing "
        "condition as the weight itself)");
  }

  VariationReport report;
  report.levels.reserve(static_cast<std::size_t>(fix.depth));
  double total = 0.0;
  for (int n = 1; n <= fix.depth; ++n) {
    LevelVariation lv;
    lv.level = n;
    lv.count = 1 << (n - 1);
    lv.interval_length = std::pow(fix.delta, n - 1) * (1.0 - 2.0 * fix.delta);

    // Route 1: through the fixture. Find a level-n interval, evaluate the
    // weight at its midpoint (where the bump vanishes), and integrate the
    // transform's tail beyond that peak on both sides.
    const auto it = std::find_if(
        fix.removed.begin(), fix.removed.end(),
        [n](const RemovedInterval& iv) { return iv.level == n; });
    const ExtReal peak_fixture = w_delta(fix, it->midpoint());
    lv.var_per_interval = 2.0 * w.tail_integral_upper(peak_fixture);

    // Route 2: closed form, peak = 2^{s n} directly.
    lv.var_closed_form =
        2.0 * w.tail_integral_upper(ExtReal(std::pow(2.0, fix.s * n)));

    total += static_cast<double>(lv.count) * lv.var_per_interval;
    report.levels.push_back(lv);
  }
  report.total_variation = total;

  // psi(t) <= t^{-alpha} for t > 1, so each tail integral is bounded by
  // peak^{1-alpha}/(alpha-1) and level n contributes at most
  // 2^{n-1} * 2/(alpha-1) * 2^{-s n (alpha-1)}; summing the geometric series
  // over all n >= 1 (not just the truncation depth) gives the bound below.
  const double rho = std::pow(2.0, -(fix.s * (alpha - 1.0) - 1.0));
  report.series_bound = (1.0 / (alpha - 1.0)) * rho / (1.0 - rho);
  report.within_bound = total <= report.series_bound + 1e-12;
  return report;
}

}  // namespace hotv
