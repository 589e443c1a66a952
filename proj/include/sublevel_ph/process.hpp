#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "sublevel_ph/marginal.hpp"
#include "sublevel_ph/series.hpp"

namespace sublevel_ph {

/// A stationary test process. Every built-in kind is started from its
/// stationary law, so any window of a generated path has the nominal marginal.
struct ProcessSpec {
  enum class Kind { IID, MDepGaussianMA, MinorizedMarkov, GaussianAR1 };

  Kind kind = Kind::IID;
  MarginalModel marginal = MarginalModel::uniform01();  // IID only
  std::size_t m = 0;                                    // MA lag
  std::vector<double> weights;                          // MA weights, m + 1 of them
  double phi = 0.0;                                     // AR1 coefficient, Markov base kernel
  double refresh = 0.0;                                 // Markov refresh probability
  std::string kernel;                                   // Markov kernel name
  std::uint64_t seed = 0;

  static ProcessSpec iid(MarginalModel marginal, std::uint64_t seed);
  /// Empty weights mean equal weights over the window of m + 1.
  static ProcessSpec mdep_gaussian_ma(std::size_t m, std::vector<double> weights, std::uint64_t seed);
  /// Kernel "ar1_refresh": with probability `refresh` draw afresh from N(0,1),
  /// otherwise move by the Gaussian AR(1) step phi*x + sqrt(1-phi^2) Z.
  /// Both parts preserve N(0,1), and sup_{x<=t} P(x, (-inf,t]) = 1 - refresh (1 - F(t)).
  static ProcessSpec minorized_markov(std::string kernel, double phi, double refresh, std::uint64_t seed);
  /// X_{k+1} = phi X_k + Z_k, X_1 ~ N(0, 1/(1-phi^2)).
  static ProcessSpec gaussian_ar1(double phi, std::uint64_t seed);

  /// Throws DomainError or UnknownKernelStationaryLaw.
  void validate() const;

  /// Nominal marginal distribution of each X_i.
  MarginalModel marginal_law() const;

  /// Minorization gap eta_t for MinorizedMarkov; 0 for other kinds.
  double markov_eta(double t) const;

  /// Analytically known dependence class, recorded as metadata.
  std::string mixing_class() const;

  std::string kind_name() const;
};

/// Deterministic in (spec.seed, stream).
TimeSeries generate(const ProcessSpec& spec, std::size_t n, std::uint64_t stream);

/// Raw values, for callers that do not need a TimeSeries.
std::vector<double> generate_values(const ProcessSpec& spec, std::size_t n, std::uint64_t stream);

struct Estimate {
  double value;
  double std_error;
};

/// Monte Carlo estimate of P(X_1 <= t, ..., X_i <= t) with binomial standard error.
Estimate max_run_probability_estimate(const ProcessSpec& spec, double t, std::size_t i, std::size_t reps);

/// Estimates for every i = 1..i_max from the same paths.
std::vector<Estimate> max_run_profile(const ProcessSpec& spec, double t, std::size_t i_max,
                                      std::size_t reps);

struct SummabilityReport {
  double t = 0.0;
  double F_t = 0.0;
  std::vector<Estimate> probabilities;  // index i-1
  std::vector<double> partial_sums;     // sum_{k<=i} k sqrt(p_k)
  double loglog_slope = 0.0;            // fit of log p_i on log i
  double geometric_rate = 0.0;          // exp of the fit of log p_i on i
  bool analytic_bound = false;
  std::string analytic_reason;
  double bound_rate = 0.0;              // r in the geometric bound C r^i
  double tail_estimate = 0.0;           // bound on sum_{i > i_max} i sqrt(p_i)
  std::size_t tail_cutoff = 0;          // first i0 with bound on sum_{i > i0} below tolerance; 0 if none
  bool pass = false;
};

SummabilityReport max_root_summability_diagnostic(const ProcessSpec& spec, double t,
                                                  std::size_t i_max, std::size_t reps,
                                                  double tail_tolerance = 1e-3);

nlohmann::json to_json(const ProcessSpec& spec);
/// Throws InvalidConfig on unknown fields values.
ProcessSpec process_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SummabilityReport& report);

nlohmann::json marginal_to_json(const MarginalModel& marginal);
MarginalModel marginal_from_json(const nlohmann::json& j);

}  // namespace sublevel_ph
