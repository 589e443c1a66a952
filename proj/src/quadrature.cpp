#include "sublevel_ph/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

#include "sublevel_ph/accumulate.hpp"

namespace sublevel_ph::quadrature {

namespace {

// QUADPACK qk15 abscissae and weights.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gauss_kronrod(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kWgk[j] * sum;
    if (j % 2 == 1) gauss += kWg[j / 2] * sum;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace

Result integrate(const std::function<double(double)>& f, double a, double b, const Options& options) {
  if (a == b) return {0.0, 0.0, 0};
  if (a > b) {
    auto r = integrate(f, b, a, options);
    r.value = -r.value;
    return r;
  }
  std::priority_queue<Segment> heap;
  Segment first = gauss_kronrod(f, a, b);
  double total = first.value;
  double error = first.error;
  heap.push(first);
  while (heap.size() < options.max_intervals &&
         error > std::max(options.abs_tol, options.rel_tol * std::abs(total))) {
    const Segment worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;  // interval cannot be split further
    heap.pop();
    const Segment left = gauss_kronrod(f, worst.a, mid);
    const Segment right = gauss_kronrod(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum the final partition to shed drift from the running updates.
  CompensatedSum value;
  CompensatedSum err;
  const std::size_t count = heap.size();
  while (!heap.empty()) {
    value += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  return {value.value(), err.value(), count};
}

Result integrate_2d(const std::function<double(double, double)>& f, double a, double b,
                    const std::function<double(double)>& lower,
                    const std::function<double(double)>& upper, const Options& options) {
  Options inner = options;
  inner.abs_tol = options.abs_tol / std::max(1.0, 10.0 * (b - a));
  inner.rel_tol = options.rel_tol / 10.0;
  double inner_error = 0.0;
  const auto outer = [&](double x) {
    const auto r = integrate([&](double y) { return f(x, y); }, lower(x), upper(x), inner);
    inner_error = std::max(inner_error, r.error);
    return r.value;
  };
  auto result = integrate(outer, a, b, options);
  result.error += inner_error * (b - a);
  return result;
}

}  // namespace sublevel_ph::quadrature
