#include <cmath>

#include "sublevel_ph/experiments.hpp"

namespace sublevel_ph {

namespace {

const std::map<std::string, std::map<std::string, double>>& default_tolerances() {
  static const std::map<std::string, std::map<std::string, double>> defaults = {
      {"slln_rectangles", {{"rect_abs", 0.01}, {"z", 3.0}}},
      {"glivenko", {{"sup_distance", 0.02}}},
      {"unbounded_functional", {{"cauchy", 0.01}, {"mega_abs", 0.01}}},
      {"clt", {{"ks_alpha", 0.01}, {"variance_rel_change", 0.10}, {"z", 3.0}}},
      {"covariance", {{"z", 3.0}, {"K_stability_rel", 0.05}, {"K_stable_from", 5.0}}},
  };
  return defaults;
}

double coordinate(const nlohmann::json& v) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
    throw Error(ErrorCode::InvalidConfig, "bad coordinate '" + s + "'");
  }
  return v.get<double>();
}

}  // namespace

void ExperimentConfig::validate() const {
  if (!default_tolerances().contains(experiment)) {
    throw Error(ErrorCode::InvalidConfig, "unknown experiment '" + experiment + "'");
  }
  if (reps < 2) throw Error(ErrorCode::InvalidConfig, "reps must be >= 2");
  if (n_grid.empty()) throw Error(ErrorCode::InvalidConfig, "n_grid must not be empty");
  for (std::size_t k = 0; k < n_grid.size(); ++k) {
    if (n_grid[k] == 0 || (k > 0 && n_grid[k] <= n_grid[k - 1])) {
      throw Error(ErrorCode::InvalidConfig, "n_grid must be positive and strictly increasing");
    }
  }
  try {
    process.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::InvalidConfig, e.what());
  }
  if (experiment == "slln_rectangles" && rectangles.empty()) {
    throw Error(ErrorCode::InvalidConfig, "slln_rectangles needs rectangles");
  }
  if (experiment == "clt" && step_functions.empty()) {
    throw Error(ErrorCode::InvalidConfig, "clt needs step_functions");
  }
  if (experiment == "unbounded_functional" && !(alps_L > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "alps_L must be positive");
  }
  if (experiment == "covariance") {
    if (pairs.empty()) throw Error(ErrorCode::InvalidConfig, "covariance needs threshold pairs");
    if (paths < 2 || path_length <= 2 * path_margin + K + 2) {
      throw Error(ErrorCode::InvalidConfig, "covariance needs paths >= 2 and path_length > 2*margin + K + 2");
    }
    for (const auto& p : pairs) {
      if (!(p.s1 <= p.t1 && p.s2 <= p.t2)) throw Error(ErrorCode::InvalidConfig, "pair needs s <= t");
    }
  }
  for (const auto& name : functionals) {
    if (name != "xlogx" && name.rfind("power:", 0) != 0) {
      throw Error(ErrorCode::InvalidConfig, "unknown functional '" + name + "'");
    }
  }
}

double ExperimentConfig::tolerance(const std::string& name) const {
  if (auto it = tolerances.find(name); it != tolerances.end()) return it->second;
  const auto& defaults = default_tolerances().at(experiment);
  if (auto it = defaults.find(name); it != defaults.end()) return it->second;
  throw Error(ErrorCode::InvalidConfig, "no tolerance named '" + name + "'");
}

ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
  ExperimentConfig config;
  try {
    config.experiment = j.at("experiment").get<std::string>();
    nlohmann::json process = j.at("process");
    if (j.contains("seed")) process["seed"] = j.at("seed").get<std::uint64_t>();
    config.process = process_spec_from_json(process);
    config.n_grid = j.at("n_grid").get<std::vector<std::size_t>>();
    config.reps = j.at("reps").get<std::size_t>();
    config.mega_run_n = j.value("mega_run_n", std::size_t{0});
    if (j.contains("raw_csv")) config.raw_csv = j.at("raw_csv").get<std::string>();

    if (auto it = default_tolerances().find(config.experiment); it != default_tolerances().end()) {
      config.tolerances = it->second;
    }
    if (j.contains("tolerances")) {
      for (const auto& [name, value] : j.at("tolerances").items()) {
        config.tolerances[name] = value.get<double>();
      }
    }

    const nlohmann::json targets = j.value("targets", nlohmann::json::object());
    const bool quantile_scale = targets.value("threshold_scale", std::string("value")) == "quantile";
    const MarginalModel law = config.process.marginal_law();
    const auto coord = [&](const nlohmann::json& v) {
      const double c = coordinate(v);
      if (!quantile_scale || std::isinf(c)) return c;
      if (!(c > 0.0 && c < 1.0)) throw Error(ErrorCode::InvalidConfig, "quantile level must lie in (0,1)");
      return law.quantile(c);
    };
    const auto rect = [&](const nlohmann::json& r) {
      try {
        return Rectangle(coord(r.at("s1")), coord(r.at("s2")), coord(r.at("t1")), coord(r.at("t2")));
      } catch (const Error& e) {
        throw Error(ErrorCode::InvalidConfig, e.what());
      }
    };

    for (const auto& r : targets.value("rectangles", nlohmann::json::array())) {
      config.rectangles.push_back(rect(r));
    }
    for (const auto& f : targets.value("step_functions", nlohmann::json::array())) {
      StepFunction step;
      for (const auto& term : f.at("terms")) step.add(term.at("weight").get<double>(), rect(term.at("rect")));
      config.step_functions.push_back(std::move(step));
    }
    config.functionals = targets.value("functionals", std::vector<std::string>{});
    config.alps_L = targets.value("alps_L", 0.2);
    for (const auto& p : targets.value("pairs", nlohmann::json::array())) {
      config.pairs.push_back({coord(p.at("s1")), coord(p.at("t1")), coord(p.at("s2")), coord(p.at("t2"))});
    }
    config.K = targets.value("K", std::size_t{10});
    config.paths = targets.value("paths", std::size_t{0});
    config.path_length = targets.value("path_length", std::size_t{0});
    config.path_margin = targets.value("path_margin", std::size_t{200});
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidConfig) throw;
    throw Error(ErrorCode::InvalidConfig, e.what());
  }
  config.validate();
  return config;
}

}  // namespace sublevel_ph
