#include "sublevel_ph/process.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include "sublevel_ph/kernels.hpp"
#include "sublevel_ph/random.hpp"

namespace sublevel_ph {

ProcessSpec ProcessSpec::iid(MarginalModel marginal, std::uint64_t seed) {
  ProcessSpec spec;
  spec.kind = Kind::IID;
  spec.marginal = std::move(marginal);
  spec.seed = seed;
  return spec;
}

ProcessSpec ProcessSpec::mdep_gaussian_ma(std::size_t m, std::vector<double> weights,
                                          std::uint64_t seed) {
  ProcessSpec spec;
  spec.kind = Kind::MDepGaussianMA;
  spec.m = m;
  spec.weights = weights.empty() ? std::vector<double>(m + 1, 1.0) : std::move(weights);
  spec.seed = seed;
  spec.validate();
  return spec;
}

ProcessSpec ProcessSpec::minorized_markov(std::string kernel, double phi, double refresh,
                                          std::uint64_t seed) {
  ProcessSpec spec;
  spec.kind = Kind::MinorizedMarkov;
  spec.kernel = std::move(kernel);
  spec.phi = phi;
  spec.refresh = refresh;
  spec.seed = seed;
  spec.validate();
  return spec;
}

ProcessSpec ProcessSpec::gaussian_ar1(double phi, std::uint64_t seed) {
  ProcessSpec spec;
  spec.kind = Kind::GaussianAR1;
  spec.phi = phi;
  spec.seed = seed;
  spec.validate();
  return spec;
}

void ProcessSpec::validate() const {
  switch (kind) {
    case Kind::IID: return;
    case Kind::MDepGaussianMA: {
      if (weights.size() != m + 1) throw Error(ErrorCode::DomainError, "MA needs m + 1 weights");
      double norm = 0.0;
      for (double w : weights) {
        if (!std::isfinite(w)) throw Error(ErrorCode::DomainError, "MA weights must be finite");
        norm += w * w;
      }
      if (norm == 0.0) throw Error(ErrorCode::DomainError, "MA weights must not all vanish");
      return;
    }
    case Kind::MinorizedMarkov:
      if (kernel != "ar1_refresh") {
        throw Error(ErrorCode::UnknownKernelStationaryLaw, "kernel '" + kernel + "'");
      }
      if (!(std::abs(phi) < 1.0)) throw Error(ErrorCode::DomainError, "Markov base kernel needs |phi| < 1");
      if (!(refresh > 0.0 && refresh <= 1.0)) {
        throw Error(ErrorCode::DomainError, "Markov refresh probability must lie in (0, 1]");
      }
      return;
    case Kind::GaussianAR1:
      if (!(std::abs(phi) < 1.0)) throw Error(ErrorCode::DomainError, "AR1 needs |phi| < 1");
      return;
  }
}

MarginalModel ProcessSpec::marginal_law() const {
  switch (kind) {
    case Kind::IID: return marginal;
    case Kind::MDepGaussianMA:
    case Kind::MinorizedMarkov: return MarginalModel::std_normal();
    case Kind::GaussianAR1: return MarginalModel::normal(1.0 / std::sqrt(1.0 - phi * phi));
  }
  return marginal;
}

double ProcessSpec::markov_eta(double t) const {
  if (kind != Kind::MinorizedMarkov) return 0.0;
  return refresh * MarginalModel::std_normal().survival(t);
}

std::string ProcessSpec::mixing_class() const {
  switch (kind) {
    case Kind::IID: return "independent";
    case Kind::MDepGaussianMA: return "m-dependent (m=" + std::to_string(m) + "); rho(k)=0 for k>m";
    case Kind::MinorizedMarkov: return "Doeblin-minorized Markov chain; geometric rho-mixing";
    case Kind::GaussianAR1: return "Gaussian AR(1); geometric rho-mixing, rho(k)=|phi|^k";
  }
  return "unknown";
}

std::string ProcessSpec::kind_name() const {
  switch (kind) {
    case Kind::IID: return "iid";
    case Kind::MDepGaussianMA: return "mdep_gaussian_ma";
    case Kind::MinorizedMarkov: return "minorized_markov";
    case Kind::GaussianAR1: return "gaussian_ar1";
  }
  return "unknown";
}

std::vector<double> generate_values(const ProcessSpec& spec, std::size_t n, std::uint64_t stream) {
  spec.validate();
  if (n == 0) throw Error(ErrorCode::EmptySeries, "n must be positive");
  RandomStream rng(spec.seed, stream);
  std::vector<double> x(n);
  switch (spec.kind) {
    case ProcessSpec::Kind::IID:
      for (auto& v : x) v = spec.marginal.quantile(rng.uniform());
      break;
    case ProcessSpec::Kind::MDepGaussianMA: {
      std::vector<double> z(n + spec.m);
      for (auto& v : z) v = rng.normal();
      const double norm = std::sqrt(std::inner_product(spec.weights.begin(), spec.weights.end(),
                                                       spec.weights.begin(), 0.0));
      std::vector<double> w(spec.weights);
      for (auto& v : w) v /= norm;
      kernels::moving_average(z, w, x);
      break;
    }
    case ProcessSpec::Kind::MinorizedMarkov: {
      const double innovation = std::sqrt(1.0 - spec.phi * spec.phi);
      x[0] = rng.normal();
      for (std::size_t k = 1; k < n; ++k) {
        const bool fresh = rng.uniform() < spec.refresh;
        const double z = rng.normal();
        x[k] = fresh ? z : spec.phi * x[k - 1] + innovation * z;
      }
      break;
    }
    case ProcessSpec::Kind::GaussianAR1: {
      x[0] = rng.normal() / std::sqrt(1.0 - spec.phi * spec.phi);
      for (std::size_t k = 1; k < n; ++k) x[k] = spec.phi * x[k - 1] + rng.normal();
      break;
    }
  }
  return x;
}

TimeSeries generate(const ProcessSpec& spec, std::size_t n, std::uint64_t stream) {
  return TimeSeries(generate_values(spec, n, stream), TiePolicy::PerturbByIndex);
}

std::vector<Estimate> max_run_profile(const ProcessSpec& spec, double t, std::size_t i_max,
                                      std::size_t reps) {
  if (reps == 0 || i_max == 0) throw Error(ErrorCode::DomainError, "reps and i_max must be positive");
  // hits[i] = number of paths whose first i+1 values are all <= t.
  std::vector<std::size_t> hits(i_max, 0);
  for (std::size_t r = 0; r < reps; ++r) {
    const auto path = generate_values(spec, i_max, stream_id(r, 0x5u));
    for (std::size_t k = 0; k < i_max && path[k] <= t; ++k) ++hits[k];
  }
  std::vector<Estimate> out(i_max);
  const double total = static_cast<double>(reps);
  for (std::size_t k = 0; k < i_max; ++k) {
    const double p = static_cast<double>(hits[k]) / total;
    out[k] = {p, std::sqrt(p * (1.0 - p) / total)};
  }
  return out;
}

Estimate max_run_probability_estimate(const ProcessSpec& spec, double t, std::size_t i,
                                      std::size_t reps) {
  return max_run_profile(spec, t, i, reps).back();
}

namespace {

double ls_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  if (xs.size() < 2) return 0.0;
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxy += (xs[k] - mx) * (ys[k] - my);
    sxx += (xs[k] - mx) * (xs[k] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

// sum_{i > K} i q^i for 0 <= q < 1.
double weighted_geometric_tail(double q, std::size_t K) {
  if (q <= 0.0) return 0.0;
  const double k = static_cast<double>(K);
  return std::pow(q, k + 1.0) * ((k + 1.0) - k * q) / ((1.0 - q) * (1.0 - q));
}

}  // namespace

SummabilityReport max_root_summability_diagnostic(const ProcessSpec& spec, double t,
                                                  std::size_t i_max, std::size_t reps,
                                                  double tail_tolerance) {
  if (i_max < 2) throw Error(ErrorCode::DomainError, "i_max must be >= 2");
  SummabilityReport report;
  report.t = t;
  const MarginalModel law = spec.marginal_law();
  report.F_t = law.cdf(t);
  report.probabilities = max_run_profile(spec, t, i_max, reps);

  double running = 0.0;
  std::vector<double> log_i, log_p, lin_i;
  for (std::size_t k = 0; k < i_max; ++k) {
    const double i = static_cast<double>(k + 1);
    const double p = report.probabilities[k].value;
    running += i * std::sqrt(p);
    report.partial_sums.push_back(running);
    if (p > 0.0) {
      log_i.push_back(std::log(i));
      lin_i.push_back(i);
      log_p.push_back(std::log(p));
    }
  }
  report.loglog_slope = ls_slope(log_i, log_p);
  report.geometric_rate = std::exp(ls_slope(lin_i, log_p));

  // Geometric bounds C r^i that hold analytically for the built-in kinds.
  double bound_c = 0.0;
  const double F = report.F_t;
  if (F >= 1.0) {
    report.analytic_reason = "F(t) = 1: condition only concerns levels with F(t) < 1";
    report.pass = true;
    return report;
  }
  switch (spec.kind) {
    case ProcessSpec::Kind::IID:
      report.analytic_bound = true;
      report.analytic_reason = "independence: P = F(t)^i";
      report.bound_rate = F;
      bound_c = 1.0;
      break;
    case ProcessSpec::Kind::MDepGaussianMA:
      report.analytic_bound = true;
      report.analytic_reason = "m-dependence: P <= F(t)^(floor((i-1)/(m+1))+1)";
      report.bound_rate = std::pow(F, 1.0 / static_cast<double>(spec.m + 1));
      bound_c = 1.0;  // floor((i-1)/(m+1)) + 1 >= i/(m+1)
      break;
    case ProcessSpec::Kind::MinorizedMarkov: {
      const double eta = spec.markov_eta(t);
      report.analytic_bound = true;
      report.analytic_reason = "minorized Markov: P <= F(t) (1 - eta_t)^(i-1)";
      report.bound_rate = 1.0 - eta;
      bound_c = F / report.bound_rate;
      break;
    }
    case ProcessSpec::Kind::GaussianAR1:
      report.analytic_bound = false;
      report.analytic_reason = "no closed-form bound; using the fitted geometric rate";
      report.bound_rate = std::min(report.geometric_rate, 1.0);
      bound_c = report.probabilities.front().value / std::max(report.bound_rate, 1e-300);
      break;
  }
  const double q = std::sqrt(report.bound_rate);
  report.tail_estimate = q < 1.0 ? std::sqrt(bound_c) * weighted_geometric_tail(q, i_max)
                                   : std::numeric_limits<double>::infinity();
  if (q < 1.0) {
    constexpr std::size_t kCutoffLimit = 1'000'000;
    for (std::size_t i0 = 1; i0 <= kCutoffLimit; i0 = i0 < 64 ? i0 + 1 : i0 + i0 / 8) {
      if (std::sqrt(bound_c) * weighted_geometric_tail(q, i0) < tail_tolerance) {
        report.tail_cutoff = i0;
        break;
      }
    }
  }
  // A fitted geometric rate below one beats every polynomial; the cutoff
  // makes the extrapolation explicit.
  report.pass = report.analytic_bound ? report.bound_rate < 1.0
                                      : report.loglog_slope < -4.0 || report.tail_cutoff > 0;
  return report;
}

nlohmann::json marginal_to_json(const MarginalModel& marginal) {
  nlohmann::json j;
  switch (marginal.kind()) {
    case MarginalModel::Kind::Uniform01: j["name"] = "uniform01"; break;
    case MarginalModel::Kind::Normal:
      if (marginal.parameter() == 1.0) {
        j["name"] = "std_normal";
      } else {
        j["name"] = "normal";
        j["sd"] = marginal.parameter();
      }
      break;
    case MarginalModel::Kind::Exponential:
      j["name"] = "exponential";
      j["rate"] = marginal.parameter();
      break;
    case MarginalModel::Kind::Tabulated:
      j["name"] = "tabulated";
      j["x"] = marginal.table_x();
      j["F"] = marginal.table_cdf();
      j["f"] = marginal.table_pdf();
      break;
  }
  return j;
}

MarginalModel marginal_from_json(const nlohmann::json& j) {
  try {
    const std::string name = j.at("name").get<std::string>();
    if (name == "uniform01") return MarginalModel::uniform01();
    if (name == "std_normal") return MarginalModel::std_normal();
    if (name == "normal") return MarginalModel::normal(j.at("sd").get<double>());
    if (name == "exponential") return MarginalModel::exponential(j.value("rate", 1.0));
    if (name == "tabulated") {
      if (j.contains("path")) {
        std::ifstream in(j.at("path").get<std::string>());
        if (!in) throw Error(ErrorCode::InvalidConfig, "cannot open marginal table");
        return read_tabulated_marginal(in);
      }
      return MarginalModel::tabulated(j.at("x").get<std::vector<double>>(),
                                      j.at("F").get<std::vector<double>>(),
                                      j.at("f").get<std::vector<double>>());
    }
    throw Error(ErrorCode::InvalidConfig, "unknown marginal '" + name + "'");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, e.what());
  }
}

nlohmann::json to_json(const ProcessSpec& spec) {
  nlohmann::json j;
  j["kind"] = spec.kind_name();
  j["seed"] = spec.seed;
  switch (spec.kind) {
    case ProcessSpec::Kind::IID: j["marginal"] = marginal_to_json(spec.marginal); break;
    case ProcessSpec::Kind::MDepGaussianMA:
      j["m"] = spec.m;
      j["weights"] = spec.weights;
      break;
    case ProcessSpec::Kind::MinorizedMarkov:
      j["kernel"] = spec.kernel;
      j["phi"] = spec.phi;
      j["refresh"] = spec.refresh;
      break;
    case ProcessSpec::Kind::GaussianAR1: j["phi"] = spec.phi; break;
  }
  return j;
}

ProcessSpec process_spec_from_json(const nlohmann::json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    const std::uint64_t seed = j.value("seed", std::uint64_t{0});
    if (kind == "iid") return ProcessSpec::iid(marginal_from_json(j.at("marginal")), seed);
    if (kind == "mdep_gaussian_ma") {
      return ProcessSpec::mdep_gaussian_ma(j.at("m").get<std::size_t>(),
                                           j.value("weights", std::vector<double>{}), seed);
    }
    if (kind == "minorized_markov") {
      return ProcessSpec::minorized_markov(j.value("kernel", std::string("ar1_refresh")),
                                           j.value("phi", 0.0), j.at("refresh").get<double>(), seed);
    }
    if (kind == "gaussian_ar1") return ProcessSpec::gaussian_ar1(j.at("phi").get<double>(), seed);
    throw Error(ErrorCode::InvalidConfig, "unknown process kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, e.what());
  }
}

nlohmann::json to_json(const SummabilityReport& report) {
  nlohmann::json j;
  j["t"] = report.t;
  j["F_t"] = report.F_t;
  nlohmann::json probs = nlohmann::json::array();
  for (const auto& e : report.probabilities) probs.push_back({{"p", e.value}, {"se", e.std_error}});
  j["probabilities"] = probs;
  j["partial_sums"] = report.partial_sums;
  j["loglog_slope"] = report.loglog_slope;
  j["geometric_rate"] = report.geometric_rate;
  j["analytic_bound"] = report.analytic_bound;
  j["analytic_reason"] = report.analytic_reason;
  j["bound_rate"] = report.bound_rate;
  j["tail_estimate"] = report.tail_estimate;
  j["tail_cutoff"] = report.tail_cutoff;
  j["verdict"] = report.pass ? "PASS" : "FAIL";
  return j;
}

}  // namespace sublevel_ph
