#pragma once

#include <functional>
#include <span>

namespace sublevel_ph {

/// One-sample two-sided Kolmogorov-Smirnov statistic sup |F_n - F|.
double ks_statistic(std::span<const double> sample, const std::function<double(double)>& cdf);

/// Asymptotic p-value P(D_n > d) with Stephens' finite-n adjustment.
double ks_pvalue(double d, std::size_t n);

/// Limiting Kolmogorov survival function Q(lambda) = P(K > lambda).
double kolmogorov_survival(double lambda);

}  // namespace sublevel_ph
