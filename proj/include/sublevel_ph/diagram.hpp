#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "sublevel_ph/series.hpp"

namespace sublevel_ph {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct DiagramPoint {
  double birth;
  double death;  // +inf for the essential class

  bool is_finite() const noexcept { return death != kInf; }
  double lifetime() const noexcept { return death - birth; }
  friend bool operator==(const DiagramPoint&, const DiagramPoint&) = default;
};

/// Half-open rectangle (s1, s2] x (t1, t2] with s1 <= s2 <= t1 <= t2.
/// s1 may be -inf and t1, t2 may be +inf; (-inf, s] x (t, +inf] is the
/// persistent-Betti corner set.
class Rectangle {
 public:
  /// Throws InvalidRectangle when the ordering fails or a coordinate is NaN.
  Rectangle(double s1, double s2, double t1, double t2);

  /// (-inf, s] x (t, +inf].
  static Rectangle corner(double s, double t) { return Rectangle(-kInf, s, t, kInf); }

  double s1() const noexcept { return s1_; }
  double s2() const noexcept { return s2_; }
  double t1() const noexcept { return t1_; }
  double t2() const noexcept { return t2_; }

  bool empty() const noexcept { return s1_ == s2_ || t1_ == t2_; }
  bool contains(const DiagramPoint& p) const noexcept {
    return s1_ < p.birth && p.birth <= s2_ && t1_ < p.death && p.death <= t2_;
  }

  friend bool operator==(const Rectangle&, const Rectangle&) = default;

 private:
  double s1_, s2_, t1_, t2_;
};

/// 0-dimensional sublevel-set persistence diagram of a series, viewed as a
/// counting measure. Points are kept in (birth, death) order as parallel
/// arrays; the essential point carries death = +inf. Multiplicities are
/// kept as-is.
class PersistenceDiagram {
 public:
  PersistenceDiagram() = default;

  /// Builds from explicit points. Requires exactly one point with infinite
  /// death, birth <= death for the rest, and no NaN; throws DomainError.
  static PersistenceDiagram from_points(std::vector<DiagramPoint> points, std::size_t source_length);

  std::size_t size() const noexcept { return births_.size(); }
  std::size_t finite_size() const noexcept { return births_.empty() ? 0 : births_.size() - 1; }
  bool empty() const noexcept { return births_.empty(); }
  std::size_t source_length() const noexcept { return source_length_; }

  std::span<const double> births() const noexcept { return births_; }
  std::span<const double> deaths() const noexcept { return deaths_; }

  DiagramPoint point(std::size_t k) const noexcept { return {births_[k], deaths_[k]}; }
  std::vector<DiagramPoint> points() const;
  std::vector<DiagramPoint> finite_points() const;
  double essential_birth() const noexcept { return essential_birth_; }

  friend bool operator==(const PersistenceDiagram&, const PersistenceDiagram&) = default;

 private:
  std::vector<double> births_;
  std::vector<double> deaths_;
  double essential_birth_ = kInf;
  std::size_t source_length_ = 0;
};

/// Elder-rule diagram of the sublevel filtration of the path graph on the
/// series. O(n log n).
PersistenceDiagram compute_diagram(const TimeSeries& series);

/// Number of strict local minima of the +inf padded series (index tie-break).
std::size_t count_local_minima(const TimeSeries& series);

/// Number of diagram points in r.
std::size_t rectangle_count(const PersistenceDiagram& diagram, const Rectangle& r);

/// Persistent Betti number: points with birth <= s and death > t. Requires s <= t.
std::size_t betti(const PersistenceDiagram& diagram, double s, double t);

// CSV: header "birth,death", one row per point in (birth, death) order,
// infinite death written as "inf". Numbers use shortest round-trip form.
std::string format_number(double x);
void write_diagram_csv(std::ostream& out, const PersistenceDiagram& diagram);
std::string diagram_to_csv(const PersistenceDiagram& diagram);
/// Throws ParseError on malformed input.
PersistenceDiagram read_diagram_csv(std::istream& in, std::size_t source_length = 0);

}  // namespace sublevel_ph
