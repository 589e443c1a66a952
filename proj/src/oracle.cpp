#include "sublevel_ph/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sublevel_ph::oracle {

namespace detail {

void throw_run_out_of_range(std::size_t i, std::size_t j, std::size_t n) {
  throw Error(ErrorCode::IndexOutOfRange, "run (i=" + std::to_string(i) + ", j=" + std::to_string(j) +
                                              ") outside 1.." + std::to_string(n));
}

void throw_position_out_of_range(std::size_t j, std::size_t n) {
  throw Error(ErrorCode::IndexOutOfRange, "j=" + std::to_string(j) + " outside 1.." + std::to_string(n));
}

void throw_bad_thresholds() { throw Error(ErrorCode::InvalidThresholds, "need s <= t"); }

}  // namespace detail

std::size_t betti_bruteforce(const TimeSeries& series, double s, double t) {
  detail::check_thresholds(s, t);
  const std::size_t n = series.size();
  if (t == std::numeric_limits<double>::infinity()) {
    const auto v = series.values();
    return *std::min_element(v.begin(), v.end()) <= s ? 1 : 0;
  }
  std::size_t total = 0;
  for (std::size_t j = 1; j <= n; ++j) {
    if (!(series.padded(j - 1) > t)) continue;  // left flank fails for every i
    double run_max = -std::numeric_limits<double>::infinity();
    double run_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i <= n - j + 1; ++i) {
      const double x = series.padded(j + i - 1);
      run_max = std::max(run_max, x);
      run_min = std::min(run_min, x);
      if (run_max > t) break;
      if (run_min <= s && series.padded(j + i) > t) ++total;
    }
  }
  return total;
}

double geometric_weighted_sum(double a, std::size_t n) {
  if (!(a > 0.0 && a <= 1.0)) throw Error(ErrorCode::DomainError, "need 0 < a <= 1");
  const long double nn = static_cast<long double>(n);
  if (a == 1.0) return static_cast<double>(nn * (nn + 1.0L) / 2.0L);
  const long double al = a;
  const long double b = 1.0L / al;
  const long double num = nn * b - (nn + 1.0L) + std::pow(al, nn);
  return static_cast<double>(num / ((b - 1.0L) * (b - 1.0L)));
}

}  // namespace sublevel_ph::oracle
