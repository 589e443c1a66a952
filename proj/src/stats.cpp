#include "sublevel_ph/stats.hpp"

#include <algorithm>
#include <cmath>

#include "sublevel_ph/accumulate.hpp"
#include "sublevel_ph/kernels.hpp"

namespace sublevel_ph {

LifetimeFunctional LifetimeFunctional::power(double p) {
  if (!(p > 0.0)) throw Error(ErrorCode::DomainError, "PowerP needs p > 0");
  return {Kind::PowerP, p};
}

LifetimeFunctional LifetimeFunctional::xlogx() { return {Kind::XLogX, 0.0}; }

LifetimeFunctional LifetimeFunctional::indicator(double ell) {
  if (!(ell >= 0.0)) throw Error(ErrorCode::DomainError, "Indicator needs l >= 0");
  return {Kind::Indicator, ell};
}

LifetimeFunctional LifetimeFunctional::custom(std::function<double(double)> g) {
  if (!g) throw Error(ErrorCode::DomainError, "Custom functional needs a callable");
  return {Kind::Custom, 0.0, std::move(g)};
}

double LifetimeFunctional::operator()(double lifetime) const {
  switch (kind_) {
    case Kind::PowerP: return std::pow(lifetime, param_);
    case Kind::XLogX: return lifetime == 0.0 ? 0.0 : lifetime * std::log(lifetime);
    case Kind::Indicator: return lifetime > param_ ? 1.0 : 0.0;
    case Kind::Custom: return g_(lifetime);
  }
  return 0.0;
}

double integrate_step(const PersistenceDiagram& diagram, const StepFunction& f) {
  CompensatedSum acc;
  for (const auto& term : f.terms) {
    acc += term.weight * static_cast<double>(rectangle_count(diagram, term.rect));
  }
  return acc.value();
}

namespace {

std::vector<double> finite_lifetimes(const PersistenceDiagram& diagram) {
  std::vector<double> all(diagram.size());
  kernels::lifetimes(diagram.births(), diagram.deaths(), all);
  std::erase(all, kInf);
  return all;
}

}  // namespace

double lifetime_integral(const PersistenceDiagram& diagram, const LifetimeFunctional& g,
                         bool restricted) {
  CompensatedSum acc;
  for (double ell : finite_lifetimes(diagram)) acc += g(ell);
  if (!restricted && !diagram.empty()) {
    const double at_inf = g(kInf);
    if (!std::isfinite(at_inf)) {
      throw Error(ErrorCode::InfiniteLifetime, "functional is unbounded on the essential point");
    }
    acc += at_inf;
  }
  return acc.value();
}

double lifetime_mean(const PersistenceDiagram& diagram, const LifetimeFunctional& g,
                     bool restricted) {
  const std::size_t count = restricted ? diagram.finite_size() : diagram.size();
  if (count == 0) {
    throw Error(restricted ? ErrorCode::NoFinitePoints : ErrorCode::EmptyDiagram,
                "mean over an empty point set");
  }
  return lifetime_integral(diagram, g, restricted) / static_cast<double>(count);
}

double persistent_entropy(const PersistenceDiagram& diagram) {
  const auto lifetimes = finite_lifetimes(diagram);
  if (lifetimes.empty()) throw Error(ErrorCode::NoFinitePoints, "entropy needs a finite point");
  const double total = compensated_sum(lifetimes);
  if (total == 0.0) return 0.0;
  CompensatedSum acc;
  for (double ell : lifetimes) {
    if (ell > 0.0) {
      const double q = ell / total;
      acc += -q * std::log(q);
    }
  }
  return acc.value();
}

double alps(const PersistenceDiagram& diagram, double L) {
  if (diagram.empty()) throw Error(ErrorCode::EmptyDiagram, "alps of an empty diagram");
  if (!(L > 0.0)) throw Error(ErrorCode::DomainError, "alps truncation must be positive");
  auto lifetimes = finite_lifetimes(diagram);
  std::sort(lifetimes.begin(), lifetimes.end());

  // On [prev, next) the count of points with lifetime > l is constant.
  CompensatedSum acc;
  std::size_t alive = diagram.size();
  double prev = 0.0;
  for (double ell : lifetimes) {
    if (prev >= L) break;
    const double end = std::min(ell, L);
    if (end > prev) {
      acc += (end - prev) * std::log(static_cast<double>(alive));
      prev = end;
    }
    --alive;
  }
  // Past the largest finite lifetime only the essential point is left: log 1 = 0.
  return acc.value();
}

double lifetime_ecdf_sup_distance(const PersistenceDiagram& diagram,
                                  const std::function<double(double)>& tail) {
  if (diagram.empty()) throw Error(ErrorCode::EmptyDiagram, "sup distance of an empty diagram");
  auto lifetimes = finite_lifetimes(diagram);
  std::sort(lifetimes.begin(), lifetimes.end());
  const double total = static_cast<double>(diagram.size());
  const std::size_t k = lifetimes.size();

  std::size_t idx = 0;
  while (idx < k && lifetimes[idx] <= 0.0) ++idx;
  double level = static_cast<double>(diagram.size() - idx) / total;
  double left = 0.0;
  double sup = 0.0;
  while (idx < k) {
    const double right = lifetimes[idx];
    // Empirical tail is constant on [left, right); the theoretical tail is
    // monotone, so the extremes sit at the two ends.
    sup = std::max(sup, std::abs(level - tail(left)));
    sup = std::max(sup, std::abs(level - tail(std::nextafter(right, 0.0))));
    while (idx < k && lifetimes[idx] == right) ++idx;
    level = static_cast<double>(diagram.size() - idx) / total;
    left = right;
  }
  sup = std::max(sup, std::abs(level - tail(left)));
  sup = std::max(sup, std::abs(level - tail(kInf)));
  return sup;
}

StatsReport compute_stats(const PersistenceDiagram& diagram, const StatsOptions& options) {
  StatsReport report;
  if (options.entropy) report.entropy = persistent_entropy(diagram);
  report.alps_L = options.alps_L;
  report.alps = alps(diagram, options.alps_L);
  report.total_p = options.total_p;
  report.total_persistence =
      lifetime_integral(diagram, LifetimeFunctional::power(options.total_p), true);
  report.n_points = diagram.size();
  report.n_finite_points = diagram.finite_size();
  return report;
}

nlohmann::json to_json(const StatsReport& report) {
  nlohmann::json j;
  j["entropy"] = report.entropy ? nlohmann::json(*report.entropy) : nlohmann::json(nullptr);
  j["alps"] = report.alps;
  j["alps_truncation_L"] =
      std::isfinite(report.alps_L) ? nlohmann::json(report.alps_L) : nlohmann::json("inf");
  j["total_persistence_p"] = report.total_persistence;
  j["p"] = report.total_p;
  j["n_points"] = report.n_points;
  j["n_finite_points"] = report.n_finite_points;
  return j;
}

}  // namespace sublevel_ph
