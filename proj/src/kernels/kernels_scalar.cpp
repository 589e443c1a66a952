#include <limits>

#include "sublevel_ph/kernels.hpp"

namespace sublevel_ph::kernels::scalar {

std::size_t count_local_minima(std::span<const double> x) {
  const std::size_t n = x.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i == 0 ? inf : x[i - 1];
    const double right = i + 1 == n ? inf : x[i + 1];
    count += (x[i] < left && x[i] <= right) ? 1 : 0;
  }
  return count;
}

std::size_t count_in_rectangle(std::span<const double> births, std::span<const double> deaths,
                               double s1, double s2, double t1, double t2) {
  std::size_t count = 0;
  for (std::size_t k = 0; k < births.size(); ++k) {
    const double b = births[k];
    const double d = deaths[k];
    count += (s1 < b && b <= s2 && t1 < d && d <= t2) ? 1 : 0;
  }
  return count;
}

void lifetimes(std::span<const double> births, std::span<const double> deaths,
               std::span<double> out) {
  for (std::size_t k = 0; k < births.size(); ++k) out[k] = deaths[k] - births[k];
}

std::size_t count_greater(std::span<const double> x, double threshold) {
  std::size_t count = 0;
  for (double v : x) count += v > threshold ? 1 : 0;
  return count;
}

void moving_average(std::span<const double> z, std::span<const double> weights,
                    std::span<double> out) {
  const std::size_t window = weights.size();
  for (std::size_t i = 0; i < out.size(); ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < window; ++k) acc += weights[k] * z[i + k];
    out[i] = acc;
  }
}

}  // namespace sublevel_ph::kernels::scalar
