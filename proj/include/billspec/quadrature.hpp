#pragma once

#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace billspec {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
};

/// Adaptive 31-point Gauss-Kronrod quadrature on [a, b]; `rel_tol` is the
/// relative error target. Infinite limits are allowed.
template <class F>
QuadratureResult integrate(F&& f, double a, double b, double rel_tol = 1e-10, unsigned max_depth = 15) {
  QuadratureResult r;
  if (a == b) return r;
  r.value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, max_depth, rel_tol,
                                                                          &r.error);
  return r;
}

}  // namespace billspec
