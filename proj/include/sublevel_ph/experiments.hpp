#pragma once

// Monte Carlo harness for the limit theorems: strong laws on rectangles and
// lifetime functionals, the lifetime Glivenko-Cantelli property, the CLT for
// step-function integrals, and the limiting covariance of Betti numbers.
//
// Replication r draws one path of length max(n_grid) from stream
// stream_id(r, tag) and evaluates every n in n_grid on its prefix. Results
// are written per replication and reduced in replication order, so reports
// are byte-identical for a fixed config regardless of thread count.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sublevel_ph/diagram.hpp"
#include "sublevel_ph/process.hpp"
#include "sublevel_ph/stats.hpp"

namespace sublevel_ph {

struct ThresholdPair {
  double s1, t1, s2, t2;
};

struct ExperimentConfig {
  std::string experiment;  // slln_rectangles | glivenko | unbounded_functional | clt | covariance
  ProcessSpec process;
  std::vector<std::size_t> n_grid;
  std::size_t reps = 0;

  std::vector<Rectangle> rectangles;
  std::vector<StepFunction> step_functions;
  std::vector<std::string> functionals;  // "power:<p>" or "xlogx"
  double alps_L = 0.2;
  std::vector<ThresholdPair> pairs;
  std::size_t K = 10;
  std::size_t paths = 0;
  std::size_t path_length = 0;
  std::size_t path_margin = 200;
  std::size_t mega_run_n = 0;  // 0 means 10 * max(n_grid)

  std::map<std::string, double> tolerances;
  std::optional<std::string> raw_csv;

  /// Throws InvalidConfig.
  void validate() const;
  double tolerance(const std::string& name) const;
  std::size_t max_n() const { return n_grid.back(); }
};

/// Parses and validates; coordinates given with "threshold_scale": "quantile"
/// are mapped through the process marginal. Throws InvalidConfig.
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);

struct Verdict {
  std::string name;
  bool pass;
  double value;
  double tolerance;
  std::string detail;
};

struct ExperimentReport {
  std::string experiment;
  nlohmann::json body;
  std::vector<Verdict> verdicts;

  bool pass() const;
  const Verdict* find(const std::string& name) const;
  nlohmann::json to_json() const;
};

ExperimentReport run_slln_rectangles(const ExperimentConfig& config);
ExperimentReport run_glivenko(const ExperimentConfig& config);
ExperimentReport run_unbounded_functional_slln(const ExperimentConfig& config);
ExperimentReport run_clt(const ExperimentConfig& config);
ExperimentReport estimate_covariance_series(const ExperimentConfig& config);

/// Dispatches on config.experiment.
ExperimentReport run_experiment(const ExperimentConfig& config);

/// Limiting lifetime tail for an i.i.d. marginal, tabulated by quadrature on
/// a grid and interpolated linearly; uniform01 uses 1 - l exactly.
class NullTailTable {
 public:
  explicit NullTailTable(const MarginalModel& marginal, std::size_t points = 2001);
  double operator()(double ell) const;

 private:
  bool uniform_;
  double step_ = 0.0;
  std::vector<double> values_;
};

/// Sample mean, standard deviation, skewness and excess kurtosis.
struct Moments {
  double mean = 0.0;
  double sd = 0.0;
  double se = 0.0;
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
};
Moments sample_moments(const std::vector<double>& xs);

}  // namespace sublevel_ph
