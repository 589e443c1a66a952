#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "sublevel_ph/error.hpp"

namespace sublevel_ph {

enum class TiePolicy {
  Error,           // reject equal consecutive values
  PerturbByIndex,  // among equal values the earlier index compares smaller
};

/// A finite real sequence X_1..X_n. Positions 0 and n+1 are implicitly +inf.
class TimeSeries {
 public:
  /// Throws EmptySeries, NonFiniteInput, or (under TiePolicy::Error) ConsecutiveTie.
  explicit TimeSeries(std::vector<double> values, TiePolicy policy = TiePolicy::Error);

  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  TiePolicy tie_policy() const noexcept { return policy_; }

  /// Padded accessor using 1-based positions: 0 and n+1 (and beyond) are +inf.
  double padded(std::size_t pos) const noexcept {
    if (pos == 0 || pos > values_.size()) return std::numeric_limits<double>::infinity();
    return values_[pos - 1];
  }

  /// Strict total order on 0-based indices: by value, then by index.
  bool precedes(std::size_t i, std::size_t j) const noexcept {
    return values_[i] < values_[j] || (values_[i] == values_[j] && i < j);
  }

 private:
  std::vector<double> values_;
  TiePolicy policy_;
};

}  // namespace sublevel_ph
