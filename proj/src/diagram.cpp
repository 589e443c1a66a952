#include "sublevel_ph/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sublevel_ph/kernels.hpp"

namespace sublevel_ph {

Rectangle::Rectangle(double s1, double s2, double t1, double t2)
    : s1_(s1), s2_(s2), t1_(t1), t2_(t2) {
  const bool nan = std::isnan(s1) || std::isnan(s2) || std::isnan(t1) || std::isnan(t2);
  if (nan || s2 == -kInf || !(s1 <= s2 && s2 <= t1 && t1 <= t2)) {
    throw Error(ErrorCode::InvalidRectangle, "need s1 <= s2 <= t1 <= t2 with s2 > -inf");
  }
}

PersistenceDiagram PersistenceDiagram::from_points(std::vector<DiagramPoint> points,
                                                   std::size_t source_length) {
  std::size_t essential = 0;
  for (const auto& p : points) {
    if (std::isnan(p.birth) || std::isnan(p.death) || !std::isfinite(p.birth) || p.death < p.birth) {
      throw Error(ErrorCode::DomainError, "diagram point must have finite birth <= death");
    }
    if (!p.is_finite()) ++essential;
  }
  if (essential != 1) throw Error(ErrorCode::DomainError, "diagram needs exactly one infinite point");

  std::sort(points.begin(), points.end(), [](const DiagramPoint& a, const DiagramPoint& b) {
    return a.birth < b.birth || (a.birth == b.birth && a.death < b.death);
  });
  PersistenceDiagram d;
  d.births_.reserve(points.size());
  d.deaths_.reserve(points.size());
  for (const auto& p : points) {
    d.births_.push_back(p.birth);
    d.deaths_.push_back(p.death);
    if (!p.is_finite()) d.essential_birth_ = p.birth;
  }
  d.source_length_ = source_length;
  return d;
}

std::vector<DiagramPoint> PersistenceDiagram::points() const {
  std::vector<DiagramPoint> out(size());
  for (std::size_t k = 0; k < size(); ++k) out[k] = point(k);
  return out;
}

std::vector<DiagramPoint> PersistenceDiagram::finite_points() const {
  std::vector<DiagramPoint> out;
  out.reserve(finite_size());
  for (std::size_t k = 0; k < size(); ++k) {
    if (deaths_[k] != kInf) out.push_back(point(k));
  }
  return out;
}

namespace {

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t v) {
  while (parent[v] != v) {
    parent[v] = parent[parent[v]];
    v = parent[v];
  }
  return v;
}

}  // namespace

PersistenceDiagram compute_diagram(const TimeSeries& series) {
  const std::size_t n = series.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return series.precedes(a, b); });

  // Union-find over vertices; each root remembers the index of its oldest vertex.
  std::vector<std::size_t> parent(n);
  std::vector<std::size_t> oldest(n);
  std::vector<char> added(n, 0);
  std::vector<DiagramPoint> points;
  points.reserve(n / 2 + 1);

  for (std::size_t v : order) {
    const bool left = v > 0 && added[v - 1];
    const bool right = v + 1 < n && added[v + 1];
    parent[v] = v;
    oldest[v] = v;
    added[v] = 1;
    if (left && right) {
      const std::size_t a = find_root(parent, v - 1);
      const std::size_t b = find_root(parent, v + 1);
      const bool a_elder = series.precedes(oldest[a], oldest[b]);
      const std::size_t elder = a_elder ? a : b;
      const std::size_t younger = a_elder ? b : a;
      // Elder rule: the component with the later birth dies at the merge value.
      points.push_back({series[oldest[younger]], series[v]});
      parent[younger] = elder;
      parent[v] = elder;
    } else if (left) {
      parent[v] = find_root(parent, v - 1);
    } else if (right) {
      parent[v] = find_root(parent, v + 1);
    }
  }
  points.push_back({series[order.front()], kInf});
  return PersistenceDiagram::from_points(std::move(points), n);
}

std::size_t count_local_minima(const TimeSeries& series) {
  return kernels::count_local_minima(series.values());
}

std::size_t rectangle_count(const PersistenceDiagram& diagram, const Rectangle& r) {
  if (r.empty()) return 0;
  return kernels::count_in_rectangle(diagram.births(), diagram.deaths(), r.s1(), r.s2(), r.t1(),
                                     r.t2());
}

std::size_t betti(const PersistenceDiagram& diagram, double s, double t) {
  if (std::isnan(s) || std::isnan(t) || s > t) {
    throw Error(ErrorCode::InvalidThresholds, "betti requires s <= t");
  }
  // At t = +inf only the essential class survives.
  if (t == kInf) return !diagram.empty() && diagram.essential_birth() <= s ? 1 : 0;
  return kernels::count_in_rectangle(diagram.births(), diagram.deaths(), -kInf, s, t, kInf);
}

}  // namespace sublevel_ph
