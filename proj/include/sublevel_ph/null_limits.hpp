#pragma once

// Closed-form limits for i.i.d. sequences with a continuous marginal F:
// the limiting Betti ratio, the limiting diagram distribution (corner
// masses, density, lifetime tail), finite-n expected Betti numbers, and an
// exact sampler from the limiting diagram distribution.

#include <cstddef>

#include "sublevel_ph/diagram.hpp"
#include "sublevel_ph/marginal.hpp"
#include "sublevel_ph/random.hpp"

namespace sublevel_ph {

/// lim E[beta^{s,t}] / n = (1-F(t)) F(s) / (1-F(t)+F(s)) when 0 < F(s) < 1, else 0.
double limiting_betti_ratio(const MarginalModel& marginal, double s, double t);
double limiting_betti_ratio_from_probs(double Fs, double Ft);

/// Limiting probability of the corner set (-inf, s] x (t, +inf]:
/// 3 (1-F(t)) F(s) / (1-F(t)+F(s)); three times the Betti ratio since a
/// point is a local minimum with probability 1/3.
double null_corner_mass(const MarginalModel& marginal, double s, double t);

/// Limiting probability of a rectangle by inclusion-exclusion of corner masses.
double null_rectangle_mass(const MarginalModel& marginal, const Rectangle& r);

/// 6 f(x) f(y) (1-F(y)) F(x) / (1-F(y)+F(x))^3 for x < y; throws OutsideDomain.
double null_density(const MarginalModel& marginal, double x, double y);

/// Limiting lifetime tail xi0(lifetime > ell), evaluated by adaptive quadrature in
/// quantile coordinates. Throws NegativeLifetime.
double null_lifetime_tail(const MarginalModel& marginal, double ell);

struct NullPoint {
  double birth;
  double death;
};

/// One draw from the limiting diagram distribution. In quantile coordinates the
/// birth level u has density 3(1-u)^2 and, given u, the death level v has tail
/// (1-v)^2 / ((1-v+u)^2 (1-u)^2); both are inverted in closed form.
NullPoint sample_null_diagram_point(const MarginalModel& marginal, RandomStream& rng);

/// P(some X_k <= s and all X_1..X_i <= t) = F(t)^i - (F(t)-F(s))^i.
double p_i_run_probability(const MarginalModel& marginal, std::size_t i, double s, double t);
double p_i_run_probability_from_probs(std::size_t i, double Fs, double Ft);

/// Exact E[beta^{s,t}_n] for i.i.d. F, summing run probabilities over every
/// (run length, start) pair. t = +inf gives P(min <= s).
double expected_betti_finite_n(const MarginalModel& marginal, std::size_t n, double s, double t);
double expected_betti_finite_n_from_probs(std::size_t n, double Fs, double Ft);

}  // namespace sublevel_ph
