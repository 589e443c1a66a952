#include "sublevel_ph/null_limits.hpp"

#include <algorithm>
#include <cmath>

#include "sublevel_ph/accumulate.hpp"
#include "sublevel_ph/quadrature.hpp"

namespace sublevel_ph {

namespace {

void check_thresholds(double s, double t) {
  if (std::isnan(s) || std::isnan(t) || s > t) throw Error(ErrorCode::InvalidThresholds, "need s <= t");
}

// 3 S(t) F(s) / (S(t) + F(s)) with S = 1 - F.
double corner(double Fs, double St) {
  const double denom = St + Fs;
  return denom > 0.0 ? 3.0 * St * Fs / denom : 0.0;
}

}  // namespace

double limiting_betti_ratio_from_probs(double Fs, double Ft) {
  if (!(Fs > 0.0 && Fs < 1.0)) return 0.0;
  return (1.0 - Ft) * Fs / (1.0 - Ft + Fs);
}

double limiting_betti_ratio(const MarginalModel& marginal, double s, double t) {
  check_thresholds(s, t);
  const double Fs = marginal.cdf(s);
  if (!(Fs > 0.0 && Fs < 1.0)) return 0.0;
  const double St = marginal.survival(t);
  return St * Fs / (St + Fs);
}

double null_corner_mass(const MarginalModel& marginal, double s, double t) {
  check_thresholds(s, t);
  return corner(marginal.cdf(s), marginal.survival(t));
}

double null_rectangle_mass(const MarginalModel& marginal, const Rectangle& r) {
  if (r.empty()) return 0.0;
  const double F1 = marginal.cdf(r.s1());
  const double F2 = marginal.cdf(r.s2());
  const double S1 = marginal.survival(r.t1());
  const double S2 = marginal.survival(r.t2());
  const double mass = corner(F2, S1) - corner(F2, S2) - corner(F1, S1) + corner(F1, S2);
  return std::clamp(mass, 0.0, 1.0);
}

double null_density(const MarginalModel& marginal, double x, double y) {
  if (!(x < y)) throw Error(ErrorCode::OutsideDomain, "density is supported on x < y");
  const double Fx = marginal.cdf(x);
  const double Sy = marginal.survival(y);
  const double denom = Sy + Fx;
  if (denom <= 0.0) return 0.0;
  return 6.0 * marginal.pdf(x) * marginal.pdf(y) * Sy * Fx / (denom * denom * denom);
}

double null_lifetime_tail(const MarginalModel& marginal, double ell) {
  if (std::isnan(ell) || ell < 0.0) throw Error(ErrorCode::NegativeLifetime, "lifetime must be >= 0");
  if (ell == 0.0) return 1.0;
  if (ell == kInf) return 0.0;
  // 3 E[(S(X+l) / (S(X+l) + F(X)))^2] with X = Q(u), u ~ U(0,1).
  const auto integrand = [&](double u) {
    const double x = marginal.quantile(u);
    const double S = marginal.survival(x + ell);
    const double denom = S + u;
    if (denom <= 0.0) return 0.0;
    const double ratio = S / denom;
    return 3.0 * ratio * ratio;
  };
  quadrature::Options options;
  options.abs_tol = 1e-11;
  const double value = quadrature::integrate(integrand, 0.0, 1.0, options).value;
  return std::clamp(value, 0.0, 1.0);
}

NullPoint sample_null_diagram_point(const MarginalModel& marginal, RandomStream& rng) {
  if (!marginal.has_quantile()) throw Error(ErrorCode::QuantileUnavailable, marginal.name());
  // Birth level: density 3(1-u)^2, so 1 - (1-u)^3 is uniform.
  const double u = -std::expm1(std::log1p(-rng.uniform()) / 3.0);
  // Death level: (1-v)/(1-v+u) = (1-u) sqrt(U) solves the conditional tail.
  const double w = (1.0 - u) * std::sqrt(rng.uniform());
  const double death_survival = w * u / (1.0 - w);
  return {marginal.quantile(u), marginal.upper_quantile(death_survival)};
}

double p_i_run_probability_from_probs(std::size_t i, double Fs, double Ft) {
  const double k = static_cast<double>(i);
  return std::pow(Ft, k) - std::pow(Ft - Fs, k);
}

double p_i_run_probability(const MarginalModel& marginal, std::size_t i, double s, double t) {
  check_thresholds(s, t);
  if (i == 0) throw Error(ErrorCode::DomainError, "run length must be positive");
  return p_i_run_probability_from_probs(i, marginal.cdf(s), marginal.cdf(t));
}

double expected_betti_finite_n_from_probs(std::size_t n, double Fs, double Ft) {
  if (n == 0) throw Error(ErrorCode::DomainError, "n must be positive");
  if (!(Fs >= 0.0 && Fs <= Ft && Ft <= 1.0)) {
    throw Error(ErrorCode::InvalidThresholds, "need 0 <= F(s) <= F(t) <= 1");
  }
  const double above = 1.0 - Ft;
  CompensatedSum total;
  for (std::size_t i = 1; i <= n; ++i) {
    const double p = p_i_run_probability_from_probs(i, Fs, Ft);
    const std::size_t starts = n - i + 1;
    if (starts == 1) {
      total += p;  // both flanks are the +inf padding
    } else {
      total += 2.0 * p * above;
      total += static_cast<double>(starts - 2) * p * above * above;
    }
  }
  return total.value();
}

double expected_betti_finite_n(const MarginalModel& marginal, std::size_t n, double s, double t) {
  check_thresholds(s, t);
  return expected_betti_finite_n_from_probs(n, marginal.cdf(s), marginal.cdf(t));
}

}  // namespace sublevel_ph
