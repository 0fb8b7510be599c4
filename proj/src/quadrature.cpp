#include "hessgeo/quadrature.hpp"

#include <cmath>

namespace hessgeo {

namespace {

struct Simpson {
  const std::function<double(double)>& f;
  QuadratureResult& result;

  double eval(double x) {
    ++result.evaluations;
    return f(x);
  }

  double recurse(double a, double b, double fa, double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = eval(lm);
    const double frm = eval(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth <= 0) {
      result.converged = false;
      return left + right + delta / 15.0;
    }
    return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
  }
};

}  // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b, double abs_tol,
                                  int max_depth) {
  QuadratureResult result;
  if (a == b) return result;
  Simpson s{f, result};
  const double fa = s.eval(a);
  const double fb = s.eval(b);
  const double m = 0.5 * (a + b);
  const double fm = s.eval(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  result.value = s.recurse(a, b, fa, fm, fb, whole, abs_tol, max_depth);
  if (!std::isfinite(result.value)) result.converged = false;
  return result;
}

}  // namespace hessgeo
