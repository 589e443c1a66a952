// Randomized invariants of diagrams and statistics.

#include <cmath>

#include "doctest.h"
#include "generators.hpp"
#include "sublevel_ph/diagram.hpp"
#include "sublevel_ph/stats.hpp"

using namespace sublevel_ph;

TEST_SUITE("properties") {

TEST_CASE("cardinality equals number of local minima") {
  RandomStream rng(21, 0);
  for (int rep = 0; rep < 2000; ++rep) {
    const std::size_t n = testgen::uniform_size(rng, 1, 300);
    const bool ties = rep % 2 == 1;
    const auto values = ties ? testgen::integer_values(rng, n, 4) : testgen::mdep_values(rng, n, rep % 4);
    const TimeSeries x(values, ties ? TiePolicy::PerturbByIndex : TiePolicy::Error);
    REQUIRE(compute_diagram(x).size() == count_local_minima(x));
  }
}

TEST_CASE("diagram structure") {
  RandomStream rng(22, 0);
  for (int rep = 0; rep < 300; ++rep) {
    const auto values = testgen::uniform_values(rng, testgen::uniform_size(rng, 1, 200));
    const TimeSeries x(values);
    const auto d = compute_diagram(x);
    REQUIRE(d.essential_birth() == *std::min_element(values.begin(), values.end()));
    std::size_t infinite = 0;
    for (const auto& p : d.points()) {
      if (!p.is_finite()) {
        ++infinite;
        continue;
      }
      REQUIRE(p.birth < p.death);
      // Births are strict local minima and deaths strict interior maxima.
      const auto bi = std::find(values.begin(), values.end(), p.birth) - values.begin();
      const auto di = std::find(values.begin(), values.end(), p.death) - values.begin();
      REQUIRE(x.padded(bi) > p.birth);
      REQUIRE(x.padded(bi + 2) > p.birth);
      REQUIRE(di > 0);
      REQUIRE(di + 1 < static_cast<std::ptrdiff_t>(values.size()));
      REQUIRE(values[di - 1] < p.death);
      REQUIRE(values[di + 1] < p.death);
    }
    REQUIRE(infinite == 1);
  }
}

TEST_CASE("rectangle counts are additive") {
  RandomStream rng(23, 0);
  for (int rep = 0; rep < 200; ++rep) {
    const auto d = compute_diagram(TimeSeries(testgen::uniform_values(rng, 150)));
    double c[5];
    for (auto& v : c) v = rng.uniform();
    std::sort(c, c + 5);
    const double s1 = c[0] * 0.5, s_mid = c[1] * 0.5, s2 = c[2] * 0.5;
    const double t1 = 0.5 + c[3] * 0.25, t_mid = 0.5 + c[4] * 0.25, t2 = rep % 2 ? kInf : 1.0;
    const auto whole = rectangle_count(d, Rectangle(s1, s2, t1, t2));
    REQUIRE(whole == rectangle_count(d, Rectangle(s1, s_mid, t1, t2)) +
                         rectangle_count(d, Rectangle(s_mid, s2, t1, t2)));
    REQUIRE(whole == rectangle_count(d, Rectangle(s1, s2, t1, t_mid)) +
                         rectangle_count(d, Rectangle(s1, s2, t_mid, t2)));
  }
}

TEST_CASE("rectangle counts match Betti inclusion-exclusion") {
  RandomStream rng(24, 0);
  for (int rep = 0; rep < 200; ++rep) {
    const auto d = compute_diagram(TimeSeries(testgen::uniform_values(rng, 120)));
    const double s1 = 0.4 * rng.uniform(), s2 = s1 + 0.1 * rng.uniform();
    const double t1 = 0.5 + 0.2 * rng.uniform(), t2 = t1 + 0.3 * rng.uniform();
    const auto b = [&](double s, double t) { return static_cast<long long>(betti(d, s, t)); };
    const long long four = b(s2, t1) - b(s1, t1) - b(s2, t2) + b(s1, t2);
    REQUIRE(static_cast<long long>(rectangle_count(d, Rectangle(s1, s2, t1, t2))) == four);
    const long long two = b(s2, t1) - b(s1, t1);
    REQUIRE(static_cast<long long>(rectangle_count(d, Rectangle(s1, s2, t1, kInf))) == two);
  }
}

TEST_CASE("scale equivariance of statistics") {
  RandomStream rng(25, 0);
  for (int rep = 0; rep < 100; ++rep) {
    auto values = testgen::uniform_values(rng, 200);
    const double c = 0.25 + 4.0 * rng.uniform();
    auto scaled = values;
    for (auto& v : scaled) v *= c;
    const auto d = compute_diagram(TimeSeries(values));
    const auto ds = compute_diagram(TimeSeries(scaled));
    REQUIRE(d.size() == ds.size());
    CHECK(persistent_entropy(ds) == doctest::Approx(persistent_entropy(d)).epsilon(1e-12));
    CHECK(alps(ds) == doctest::Approx(c * alps(d)).epsilon(1e-12));
    CHECK(lifetime_integral(ds, LifetimeFunctional::power(1), true) ==
          doctest::Approx(c * lifetime_integral(d, LifetimeFunctional::power(1), true)).epsilon(1e-12));
  }
}

TEST_CASE("entropy bounds and ALPS monotonicity") {
  RandomStream rng(26, 0);
  for (int rep = 0; rep < 200; ++rep) {
    const auto d = compute_diagram(TimeSeries(testgen::uniform_values(rng, testgen::uniform_size(rng, 3, 200))));
    if (d.finite_size() == 0) continue;
    const double e = persistent_entropy(d);
    REQUIRE(e >= 0.0);
    REQUIRE(e <= std::log(static_cast<double>(d.finite_size())) + 1e-12);
    double previous = 0.0;
    for (double L : {0.01, 0.05, 0.1, 0.3, 0.7, 1.0, 2.0}) {
      const double a = alps(d, L);
      REQUIRE(a >= previous);
      previous = a;
    }
    REQUIRE(std::isfinite(alps(d)));
    REQUIRE(alps(d) >= previous - 1e-12);
  }
}

TEST_CASE("integrate_step is linear") {
  RandomStream rng(27, 0);
  for (int rep = 0; rep < 100; ++rep) {
    const auto d = compute_diagram(TimeSeries(testgen::uniform_values(rng, 100)));
    const Rectangle r1(0.0, 0.3, 0.5, kInf), r2(0.1, 0.4, 0.6, 0.9);
    const double a = rng.uniform() * 4 - 2, b = rng.uniform() * 4 - 2;
    StepFunction f;
    f.add(a, r1).add(b, r2);
    const double expected = a * static_cast<double>(rectangle_count(d, r1)) +
                            b * static_cast<double>(rectangle_count(d, r2));
    CHECK(integrate_step(d, f) == doctest::Approx(expected).epsilon(1e-14));
  }
}

}  // TEST_SUITE
