#pragma once

// Literal evaluations of the run-indicator representation of persistent
// Betti numbers. These are test oracles: they never look at a diagram, and
// they favour transparency over speed.
//
// Positions are 1-based as in the padded series: X_0 = X_{n+1} = +inf.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

#include "sublevel_ph/series.hpp"

namespace sublevel_ph::oracle {

/// Cap value meaning "no cap" for y_term; realized as n - j + 1.
inline constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();

namespace detail {
[[noreturn]] void throw_run_out_of_range(std::size_t i, std::size_t j, std::size_t n);
[[noreturn]] void throw_position_out_of_range(std::size_t j, std::size_t n);
[[noreturn]] void throw_bad_thresholds();

inline void check_thresholds(double s, double t) {
  if (std::isnan(s) || std::isnan(t) || s > t) [[unlikely]] throw_bad_thresholds();
}
}  // namespace detail

/// C_{i,j}(s,t): the run X_j..X_{j+i-1} is <= t, its minimum is <= s, and both
/// flanking values exceed t. Requires 1 <= j and j + i - 1 <= n; throws
/// IndexOutOfRange or InvalidThresholds.
inline int c_term(const TimeSeries& series, std::size_t i, std::size_t j, double s, double t) {
  const std::size_t n = series.size();
  if (i < 1 || j < 1 || j + i - 1 > n) [[unlikely]] detail::throw_run_out_of_range(i, j, n);
  detail::check_thresholds(s, t);
  if (!(std::min(series.padded(j - 1), series.padded(j + i)) > t)) return 0;
  const auto run = series.values().subspan(j - 1, i);
  const auto [lo, hi] = std::minmax_element(run.begin(), run.end());
  return (*hi <= t && *lo <= s) ? 1 : 0;
}

/// Y^m_{j}(s,t) = sum_{i=1}^{m} C_{i,j}(s,t), which is 0 or 1. Caps beyond the
/// series end are clipped to n - j + 1.
inline int y_term(const TimeSeries& series, std::size_t j, std::size_t m, double s, double t) {
  const std::size_t n = series.size();
  if (j < 1 || j > n) [[unlikely]] detail::throw_position_out_of_range(j, n);
  detail::check_thresholds(s, t);
  // Every C_{i,j} needs X_{j-1} > t.
  if (!(series.padded(j - 1) > t)) return 0;
  const std::size_t cap = std::min(m, n - j + 1);
  int sum = 0;
  for (std::size_t i = 1; i <= cap; ++i) {
    sum += c_term(series, i, j, s, t);
    // Every longer run contains X_{j+i-1}; once it exceeds t the remaining terms vanish.
    if (series.padded(j + i - 1) > t) break;
  }
  return sum;
}

/// Persistent Betti number from the double run sum; for t = +inf returns
/// 1{min <= s}. Throws InvalidThresholds when s > t.
std::size_t betti_bruteforce(const TimeSeries& series, double s, double t);

/// sum_{i=1}^{n} (n - i + 1) a^i through its closed form. Throws DomainError
/// unless 0 < a <= 1.
double geometric_weighted_sum(double a, std::size_t n);

}  // namespace sublevel_ph::oracle
