#pragma once

// Hand-rolled random inputs for property tests. Everything is driven by
// RandomStream so failures reproduce from (seed, stream).

#include <algorithm>
#include <cmath>
#include <vector>

#include "sublevel_ph/random.hpp"
#include "sublevel_ph/series.hpp"

namespace testgen {

using sublevel_ph::RandomStream;

inline std::size_t uniform_size(RandomStream& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng.uniform() * static_cast<double>(hi - lo + 1)) % (hi - lo + 1);
}

inline std::vector<double> uniform_values(RandomStream& rng, std::size_t n) {
  std::vector<double> x(n);
  for (auto& v : x) v = rng.uniform();
  return x;
}

// Equal-weight moving average of m + 1 standard normals.
inline std::vector<double> mdep_values(RandomStream& rng, std::size_t n, std::size_t m) {
  std::vector<double> z(n + m);
  for (auto& v : z) v = rng.normal();
  std::vector<double> x(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k <= m; ++k) x[i] += z[i + k];
  }
  return x;
}

// Values rounded to a few integer levels, so consecutive ties are common.
inline std::vector<double> integer_values(RandomStream& rng, std::size_t n, int levels) {
  std::vector<double> x(n);
  for (auto& v : x) v = std::floor(rng.uniform() * levels);
  return x;
}

// Adds uniform noise of the given width, which separates ties almost surely.
inline std::vector<double> jitter(RandomStream& rng, std::vector<double> x, double scale) {
  for (auto& v : x) v += scale * (rng.uniform() - 0.5);
  return x;
}

inline bool has_consecutive_tie(const std::vector<double>& x) {
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (x[i] == x[i - 1]) return true;
  }
  return false;
}

// Distinct values, midpoints of consecutive order statistics, and one level
// below the minimum and above the maximum.
inline std::vector<double> threshold_grid(const std::vector<double>& x) {
  std::vector<double> v(x);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  std::vector<double> grid(v);
  for (std::size_t k = 1; k < v.size(); ++k) grid.push_back(0.5 * (v[k - 1] + v[k]));
  grid.push_back(v.front() - 1.0);
  grid.push_back(v.back() + 1.0);
  std::sort(grid.begin(), grid.end());
  return grid;
}

}  // namespace testgen
