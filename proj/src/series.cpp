#include "sublevel_ph/series.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace sublevel_ph {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptySeries: return "EmptySeries";
    case ErrorCode::ConsecutiveTie: return "ConsecutiveTie";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::InvalidRectangle: return "InvalidRectangle";
    case ErrorCode::InvalidThresholds: return "InvalidThresholds";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::InfiniteLifetime: return "InfiniteLifetime";
    case ErrorCode::NoFinitePoints: return "NoFinitePoints";
    case ErrorCode::EmptyDiagram: return "EmptyDiagram";
    case ErrorCode::OutsideDomain: return "OutsideDomain";
    case ErrorCode::NegativeLifetime: return "NegativeLifetime";
    case ErrorCode::QuantileUnavailable: return "QuantileUnavailable";
    case ErrorCode::UnknownKernelStationaryLaw: return "UnknownKernelStationaryLaw";
    case ErrorCode::CornerConditionViolated: return "CornerConditionViolated";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

TimeSeries::TimeSeries(std::vector<double> values, TiePolicy policy)
    : values_(std::move(values)), policy_(policy) {
  if (values_.empty()) throw Error(ErrorCode::EmptySeries, "series has no values");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw Error(ErrorCode::NonFiniteInput, "value at position " + std::to_string(i + 1));
    }
  }
  if (policy_ == TiePolicy::Error) {
    for (std::size_t i = 1; i < values_.size(); ++i) {
      if (values_[i] == values_[i - 1]) {
        throw Error(ErrorCode::ConsecutiveTie,
                    "positions " + std::to_string(i) + " and " + std::to_string(i + 1));
      }
    }
  }
}

}  // namespace sublevel_ph
