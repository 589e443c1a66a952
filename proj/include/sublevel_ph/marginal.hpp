#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sublevel_ph {

/// A one-dimensional marginal law F with density f and quantile F^{-1}.
class MarginalModel {
 public:
  enum class Kind { Uniform01, Normal, Exponential, Tabulated };

  static MarginalModel uniform01();
  static MarginalModel std_normal();
  /// Centered normal with the given standard deviation.
  static MarginalModel normal(double sd);
  static MarginalModel exponential(double rate);
  /// Rows (x, F, f): x strictly increasing, F nondecreasing from 0 to 1,
  /// f >= 0. F is interpolated linearly and f is piecewise constant on
  /// [x_k, x_{k+1}). Throws DomainError on a malformed table.
  static MarginalModel tabulated(std::vector<double> x, std::vector<double> F, std::vector<double> f,
                                 std::string name = "tabulated");

  Kind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }
  double parameter() const noexcept { return param_; }

  double cdf(double x) const;
  /// 1 - F(x), computed without cancellation for the built-in laws.
  double survival(double x) const;
  double pdf(double x) const;
  /// Defined on [0, 1]; endpoints map to the support boundary (possibly +-inf).
  double quantile(double u) const;
  /// Q(1 - p), accurate for small p.
  double upper_quantile(double p) const;
  bool has_quantile() const noexcept { return true; }

  // Table rows; empty unless kind() == Tabulated.
  const std::vector<double>& table_x() const noexcept { return xs_; }
  const std::vector<double>& table_cdf() const noexcept { return cdf_values_; }
  const std::vector<double>& table_pdf() const noexcept { return pdf_values_; }

 private:
  MarginalModel(Kind kind, std::string name, double param)
      : kind_(kind), name_(std::move(name)), param_(param) {}

  Kind kind_;
  std::string name_;
  double param_;
  std::vector<double> xs_, cdf_values_, pdf_values_;
};

/// CSV with header "x,F,f". Throws ParseError or DomainError.
MarginalModel read_tabulated_marginal(std::istream& in, std::string name = "tabulated");

}  // namespace sublevel_ph
