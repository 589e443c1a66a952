#pragma once

#include <cstddef>
#include <functional>

namespace sublevel_ph::quadrature {

struct Result {
  double value;
  double error;  // Kronrod-minus-Gauss estimate summed over the final partition
  std::size_t intervals;
};

struct Options {
  double abs_tol = 1e-9;
  double rel_tol = 0.0;
  std::size_t max_intervals = 4000;
};

/// Globally adaptive 7/15-point Gauss-Kronrod on a finite interval [a, b].
/// The integrand is never evaluated at the endpoints.
Result integrate(const std::function<double(double)>& f, double a, double b, const Options& options = {});

/// Iterated integral of f(x, y) over x in [a, b], y in [lower(x), upper(x)].
/// The inner tolerance is tightened relative to the outer one.
Result integrate_2d(const std::function<double(double, double)>& f, double a, double b,
                    const std::function<double(double)>& lower,
                    const std::function<double(double)>& upper, const Options& options = {});

}  // namespace sublevel_ph::quadrature
