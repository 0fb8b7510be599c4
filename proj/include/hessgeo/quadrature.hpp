#pragma once

#include <functional>

namespace hessgeo {

struct QuadratureResult {
  double value = 0.0;
  bool converged = true;
  long evaluations = 0;
};

/// Adaptive Simpson rule on [a, b]. `converged` is false when some
/// subinterval hit max_depth before meeting its share of abs_tol.
QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  double abs_tol = 1e-10, int max_depth = 40);

}  // namespace hessgeo
