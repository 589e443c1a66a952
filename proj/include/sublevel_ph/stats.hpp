#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "json.hpp"

#include "sublevel_ph/diagram.hpp"

namespace sublevel_ph {

/// f = sum_l a_l 1_{R_l}.
struct StepFunction {
  struct Term {
    double weight;
    Rectangle rect;
  };
  std::vector<Term> terms;

  StepFunction& add(double weight, const Rectangle& rect) {
    terms.push_back({weight, rect});
    return *this;
  }
};

/// f(b, d) = g(d - b).
class LifetimeFunctional {
 public:
  enum class Kind { PowerP, XLogX, Indicator, Custom };

  static LifetimeFunctional power(double p);
  static LifetimeFunctional xlogx();
  static LifetimeFunctional indicator(double ell);
  /// g is evaluated as given, including at +inf for the essential point.
  static LifetimeFunctional custom(std::function<double(double)> g);

  Kind kind() const noexcept { return kind_; }
  double parameter() const noexcept { return param_; }
  double operator()(double lifetime) const;

 private:
  LifetimeFunctional(Kind kind, double param, std::function<double(double)> g = {})
      : kind_(kind), param_(param), g_(std::move(g)) {}

  Kind kind_;
  double param_;
  std::function<double(double)> g_;
};

double integrate_step(const PersistenceDiagram& diagram, const StepFunction& f);

/// Sum of g(d - b) over finite points (restricted) or over all points. The
/// unrestricted form throws InfiniteLifetime when g(+inf) is not finite.
double lifetime_integral(const PersistenceDiagram& diagram, const LifetimeFunctional& g,
                         bool restricted);

/// lifetime_integral divided by the matching point count; throws
/// NoFinitePoints for a restricted mean over a diagram without finite points.
double lifetime_mean(const PersistenceDiagram& diagram, const LifetimeFunctional& g,
                     bool restricted);

/// Shannon entropy (natural log) of the normalized finite lifetimes. The
/// essential point is excluded. Throws NoFinitePoints.
double persistent_entropy(const PersistenceDiagram& diagram);

/// int_0^L log #{points with lifetime > l} dl, counting the essential point
/// at every l. L may be +inf. Throws EmptyDiagram, or DomainError for L <= 0.
double alps(const PersistenceDiagram& diagram, double L = kInf);

/// sup over l >= 0 of |#{lifetime > l}/#points - tail(l)|. tail must be
/// nonincreasing and accept +inf (returning its limit). Throws EmptyDiagram.
double lifetime_ecdf_sup_distance(const PersistenceDiagram& diagram,
                                  const std::function<double(double)>& tail);

struct StatsOptions {
  bool entropy = true;
  double alps_L = kInf;
  double total_p = 1.0;
};

struct StatsReport {
  std::optional<double> entropy;
  double alps = 0.0;
  double alps_L = kInf;
  double total_persistence = 0.0;
  double total_p = 1.0;
  std::size_t n_points = 0;
  std::size_t n_finite_points = 0;
};

/// Throws NoFinitePoints when entropy is requested and there are no finite points.
StatsReport compute_stats(const PersistenceDiagram& diagram, const StatsOptions& options = {});

/// {entropy, alps, alps_truncation_L, total_persistence_p, n_points, n_finite_points}
nlohmann::json to_json(const StatsReport& report);

}  // namespace sublevel_ph
