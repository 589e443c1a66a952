#include "sublevel_ph/marginal.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/erf.hpp>

#include "sublevel_ph/error.hpp"

namespace sublevel_ph {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

MarginalModel MarginalModel::uniform01() { return {Kind::Uniform01, "uniform01", 0.0}; }

MarginalModel MarginalModel::std_normal() { return {Kind::Normal, "std_normal", 1.0}; }

MarginalModel MarginalModel::normal(double sd) {
  if (!(sd > 0.0) || !std::isfinite(sd)) throw Error(ErrorCode::DomainError, "normal needs sd > 0");
  return {Kind::Normal, sd == 1.0 ? "std_normal" : "normal", sd};
}

MarginalModel MarginalModel::exponential(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw Error(ErrorCode::DomainError, "exponential needs rate > 0");
  }
  return {Kind::Exponential, "exponential", rate};
}

MarginalModel MarginalModel::tabulated(std::vector<double> x, std::vector<double> F,
                                       std::vector<double> f, std::string name) {
  if (x.size() < 2 || F.size() != x.size() || f.size() != x.size()) {
    throw Error(ErrorCode::DomainError, "tabulated marginal needs >= 2 rows of (x, F, f)");
  }
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!std::isfinite(x[k]) || !std::isfinite(F[k]) || !std::isfinite(f[k]) || f[k] < 0.0 ||
        F[k] < 0.0 || F[k] > 1.0) {
      throw Error(ErrorCode::DomainError, "bad tabulated row " + std::to_string(k + 1));
    }
    if (k > 0 && (x[k] <= x[k - 1] || F[k] < F[k - 1])) {
      throw Error(ErrorCode::DomainError, "x must increase strictly and F must not decrease");
    }
  }
  if (std::abs(F.front()) > 1e-12 || std::abs(F.back() - 1.0) > 1e-12) {
    throw Error(ErrorCode::DomainError, "tabulated F must run from 0 to 1");
  }
  MarginalModel m(Kind::Tabulated, std::move(name), 0.0);
  m.xs_ = std::move(x);
  m.cdf_values_ = std::move(F);
  m.pdf_values_ = std::move(f);
  return m;
}

double MarginalModel::cdf(double x) const {
  switch (kind_) {
    case Kind::Uniform01: return std::clamp(x, 0.0, 1.0);
    case Kind::Normal: return 0.5 * std::erfc(-x / (param_ * std::numbers::sqrt2));
    case Kind::Exponential: return x <= 0.0 ? 0.0 : -std::expm1(-param_ * x);
    case Kind::Tabulated: {
      if (x <= xs_.front()) return 0.0;
      if (x >= xs_.back()) return 1.0;
      const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
      const std::size_t k = static_cast<std::size_t>(it - xs_.begin()) - 1;
      const double w = (x - xs_[k]) / (xs_[k + 1] - xs_[k]);
      return cdf_values_[k] + w * (cdf_values_[k + 1] - cdf_values_[k]);
    }
  }
  return 0.0;
}

double MarginalModel::survival(double x) const {
  switch (kind_) {
    case Kind::Normal: return 0.5 * std::erfc(x / (param_ * std::numbers::sqrt2));
    case Kind::Exponential: return x <= 0.0 ? 1.0 : std::exp(-param_ * x);
    default: return 1.0 - cdf(x);
  }
}

double MarginalModel::pdf(double x) const {
  switch (kind_) {
    case Kind::Uniform01: return (x >= 0.0 && x <= 1.0) ? 1.0 : 0.0;
    case Kind::Normal: {
      const double z = x / param_;
      return std::exp(-0.5 * z * z) / (param_ * std::sqrt(2.0 * std::numbers::pi));
    }
    case Kind::Exponential: return x < 0.0 ? 0.0 : param_ * std::exp(-param_ * x);
    case Kind::Tabulated: {
      if (x < xs_.front() || x >= xs_.back()) return 0.0;
      const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
      return pdf_values_[static_cast<std::size_t>(it - xs_.begin()) - 1];
    }
  }
  return 0.0;
}

double MarginalModel::quantile(double u) const {
  if (std::isnan(u) || u < 0.0 || u > 1.0) throw Error(ErrorCode::DomainError, "quantile needs u in [0,1]");
  switch (kind_) {
    case Kind::Uniform01: return u;
    case Kind::Normal:
      if (u == 0.0) return -kInf;
      if (u == 1.0) return kInf;
      return -param_ * std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u);
    case Kind::Exponential:
      if (u == 1.0) return kInf;
      return -std::log1p(-u) / param_;
    case Kind::Tabulated: {
      if (u <= 0.0) return xs_.front();
      if (u >= 1.0) return xs_.back();
      const auto it = std::lower_bound(cdf_values_.begin(), cdf_values_.end(), u);
      const std::size_t k = static_cast<std::size_t>(it - cdf_values_.begin());
      // cdf_values_[k-1] < u <= cdf_values_[k]
      const double lo = cdf_values_[k - 1];
      const double hi = cdf_values_[k];
      const double w = (u - lo) / (hi - lo);
      return xs_[k - 1] + w * (xs_[k] - xs_[k - 1]);
    }
  }
  return 0.0;
}

double MarginalModel::upper_quantile(double p) const {
  if (std::isnan(p) || p < 0.0 || p > 1.0) throw Error(ErrorCode::DomainError, "need p in [0,1]");
  switch (kind_) {
    case Kind::Normal:
      if (p == 0.0) return kInf;
      if (p == 1.0) return -kInf;
      return param_ * std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
    case Kind::Exponential:
      if (p == 0.0) return kInf;
      return -std::log(p) / param_;
    default: return quantile(1.0 - p);
  }
}

MarginalModel read_tabulated_marginal(std::istream& in, std::string name) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, "empty marginal table");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "x,F,f") throw Error(ErrorCode::ParseError, "missing 'x,F,f' header");
  std::vector<double> cols[3];
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t start = 0;
    for (int c = 0; c < 3; ++c) {
      const std::size_t end = c < 2 ? line.find(',', start) : line.size();
      if (end == std::string::npos) {
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": need 3 fields");
      }
      double v = 0.0;
      const auto res = std::from_chars(line.data() + start, line.data() + end, v);
      if (res.ec != std::errc{} || res.ptr != line.data() + end) {
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": bad number");
      }
      cols[c].push_back(v);
      start = end + 1;
    }
  }
  return MarginalModel::tabulated(std::move(cols[0]), std::move(cols[1]), std::move(cols[2]),
                                  std::move(name));
}

}  // namespace sublevel_ph
