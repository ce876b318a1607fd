#include "hotv/numerics.hpp"

#include <algorithm>
#include <cmath>

#include "hotv/errors.hpp"

namespace hotv {

namespace {

double simpson(double fa, double fm, double fb, double width) {
  return width / 6.0 * (fa + 4.0 * fm + fb);
}

// Recursive half: [a, b] with f(a), f(m), f(b) already evaluated and `whole`
// the Simpson estimate of the interval. `min_width` ends refinement once a
// subinterval is negligibly narrow relative to the original domain: around a
// jump discontinuity or a steep integrable singularity the Richardson
// estimate shrinks at the same rate as the halving tolerance, so the
// tolerance test alone would recurse forever; accepting a 1e-14-relative
// sliver instead contributes at most ~(f scale) * 1e-14 * (domain width) of
// error per bad point.
double simpson_recurse(const std::function<double(double)>& f, double a, double b,
                       double fa, double fm, double fb, double whole, double tol,
                       double min_width, int depth, int max_depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(fa, flm, fm, m - a);
  const double right = simpson(fm, frm, fb, b - m);
  const double err = left + right - whole;
  if (std::abs(err) <= 15.0 * tol || b - a <= min_width) return left + right + err / 15.0;
  if (depth >= max_depth)
    throw NumericalError("adaptive_simpson: max refinement depth reached without meeting tolerance");
  return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, min_width, depth + 1, max_depth) +
         simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, min_width, depth + 1, max_depth);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, int max_depth) {
  if (!(abs_tol > 0.0)) throw ValidationError("adaptive_simpson: tolerance must be positive");
  if (a == b) return 0.0;
  const double sign = a < b ? 1.0 : -1.0;
  if (a > b) std::swap(a, b);
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  if (!std::isfinite(fa) || !std::isfinite(fm) || !std::isfinite(fb))
    throw NumericalError("adaptive_simpson: integrand is not finite at an evaluation point");
  const double whole = simpson(fa, fm, fb, b - a);
  const double min_width = 1e-14 * (b - a);
  return sign * simpson_recurse(f, a, b, fa, fm, fb, whole, abs_tol, min_width, 0, max_depth);
}

BisectionResult bisect(const std::function<double(double)>& f, double lo, double hi,
                       double xtol, int max_iter) {
  if (!(lo < hi)) throw ValidationError("bisect: requires lo < hi");
  if (!(xtol > 0.0)) throw ValidationError("bisect: xtol must be positive");
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return {lo, 0, 0.0};
  if (fhi == 0.0) return {hi, 0, 0.0};
  if ((flo > 0.0) == (fhi > 0.0))
    throw NumericalError("bisect: root not bracketed (same sign at both endpoints)");
  BisectionResult res;
  for (res.iterations = 0; res.iterations < max_iter && hi - lo > xtol; ++res.iterations) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if (fmid == 0.0) {
      lo = hi = mid;
      break;
    }
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  res.root = 0.5 * (lo + hi);
  res.bracket_width = hi - lo;
  return res;
}

double median(std::vector<double> v) {
  if (v.empty()) throw ValidationError("median: empty input");
  const std::size_t n = v.size();
  const std::size_t mid = n / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double hi = v[mid];
  if (n % 2 == 1) return hi;
  double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

}  // namespace hotv
