#include <cmath>
#include <numbers>

#include "doctest.h"
#include "sublevel_ph/error.hpp"
#include "sublevel_ph/ks.hpp"
#include "sublevel_ph/process.hpp"

using namespace sublevel_ph;

namespace {

double ks_p(const std::vector<double>& x, const MarginalModel& law) {
  return ks_pvalue(ks_statistic(x, [&](double v) { return law.cdf(v); }), x.size());
}

double correlation(const std::vector<double>& a, const std::vector<double>& b) {
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= a.size();
  mb /= b.size();
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

std::vector<ProcessSpec> all_kinds() {
  return {ProcessSpec::iid(MarginalModel::uniform01(), 5), ProcessSpec::iid(MarginalModel::exponential(1.5), 5),
          ProcessSpec::mdep_gaussian_ma(8, {}, 5), ProcessSpec::mdep_gaussian_ma(2, {1, 2, 3}, 5),
          ProcessSpec::minorized_markov("ar1_refresh", 0.7, 0.2, 5), ProcessSpec::gaussian_ar1(0.6, 5)};
}

}  // namespace

TEST_SUITE("process") {

TEST_CASE("reproducible and stream-addressed") {
  for (const auto& spec : all_kinds()) {
    const auto a = generate_values(spec, 500, 3);
    CHECK(a == generate_values(spec, 500, 3));
    CHECK(a != generate_values(spec, 500, 4));
    auto other = spec;
    other.seed = 6;
    CHECK(a != generate_values(other, 500, 3));
  }
  const auto x = generate(ProcessSpec::iid(MarginalModel::uniform01(), 1), 5, 0);
  CHECK(x.size() == 5);
  for (double v : x.values()) CHECK((v > 0.0 && v < 1.0));
}

TEST_CASE("marginals pass KS at 0.01") {
  for (const auto& spec : all_kinds()) {
    // Thin dependent paths so the KS null is closer to i.i.d.
    const std::size_t thin = spec.kind == ProcessSpec::Kind::IID ? 1 : 25;
    std::vector<double> sample;
    for (std::uint64_t stream = 0; sample.size() < 10000; ++stream) {
      const auto path = generate_values(spec, 400 * thin, stream);
      for (std::size_t i = 0; i < path.size() && sample.size() < 10000; i += thin) sample.push_back(path[i]);
    }
    INFO(spec.kind_name());
    CHECK(ks_p(sample, spec.marginal_law()) > 0.01);
  }
}

TEST_CASE("degenerate windows are i.i.d. normal") {
  const auto law = MarginalModel::std_normal();
  CHECK(ks_p(generate_values(ProcessSpec::mdep_gaussian_ma(0, {1}, 9), 10000, 0), law) > 0.01);
  CHECK(ks_p(generate_values(ProcessSpec::gaussian_ar1(0.0, 9), 10000, 0), law) > 0.01);
  const auto x = generate_values(ProcessSpec::gaussian_ar1(0.0, 9), 10000, 1);
  std::vector<double> a(x.begin(), x.end() - 1), b(x.begin() + 1, x.end());
  CHECK(std::abs(correlation(a, b)) < 4.0 / std::sqrt(10000.0));
}

TEST_CASE("streams are uncorrelated") {
  for (const auto& spec : all_kinds()) {
    const auto a = generate_values(spec, 5000, 10);
    const auto b = generate_values(spec, 5000, 11);
    CHECK(std::abs(correlation(a, b)) < 4.0 / std::sqrt(5000.0));
  }
}

TEST_CASE("m-dependence and AR(1) correlation") {
  const auto x = generate_values(ProcessSpec::mdep_gaussian_ma(2, {}, 4), 200000, 0);
  const auto lag = [&](std::size_t k) {
    std::vector<double> a(x.begin(), x.end() - k), b(x.begin() + k, x.end());
    return correlation(a, b);
  };
  CHECK(lag(1) == doctest::Approx(2.0 / 3.0).epsilon(0.02));
  CHECK(lag(2) == doctest::Approx(1.0 / 3.0).epsilon(0.03));
  CHECK(std::abs(lag(3)) < 0.01);
  const auto y = generate_values(ProcessSpec::gaussian_ar1(0.6, 4), 200000, 0);
  std::vector<double> a(y.begin(), y.end() - 1), b(y.begin() + 1, y.end());
  CHECK(correlation(a, b) == doctest::Approx(0.6).epsilon(0.02));
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(ProcessSpec::gaussian_ar1(1.0, 0), Error);
  CHECK_THROWS_AS(ProcessSpec::mdep_gaussian_ma(2, {1, 2}, 0), Error);
  try {
    ProcessSpec::minorized_markov("mystery", 0.5, 0.2, 0);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownKernelStationaryLaw);
  }
}

TEST_CASE("JSON round trip") {
  for (const auto& spec : all_kinds()) {
    const auto back = process_spec_from_json(to_json(spec));
    CHECK(to_json(back) == to_json(spec));
    CHECK(generate_values(back, 50, 2) == generate_values(spec, 50, 2));
  }
  CHECK_THROWS_AS(process_spec_from_json({{"kind", "garch"}}), Error);
  CHECK_THROWS_AS(process_spec_from_json({{"kind", "iid"}}), Error);
}

TEST_CASE("max-run probabilities") {
  const auto iid = ProcessSpec::iid(MarginalModel::uniform01(), 3);
  for (std::size_t i : {1, 3, 6}) {
    const auto e = max_run_probability_estimate(iid, 0.7, i, 20000);
    CHECK(std::abs(e.value - std::pow(0.7, static_cast<double>(i))) <= 3 * e.std_error + 1e-12);
  }
  const auto profile = max_run_profile(iid, 0.7, 6, 20000);
  REQUIRE(profile.size() == 6);
  for (std::size_t i = 1; i < profile.size(); ++i) CHECK(profile[i].value <= profile[i - 1].value);
}

TEST_CASE("summability diagnostic") {
  const auto report = max_root_summability_diagnostic(ProcessSpec::iid(MarginalModel::uniform01(), 3), 0.9, 30, 5000);
  CHECK(report.analytic_bound);
  CHECK(report.pass);
  for (std::size_t i = 1; i < report.partial_sums.size(); ++i) CHECK(report.partial_sums[i] >= report.partial_sums[i - 1]);
  const auto markov = ProcessSpec::minorized_markov("ar1_refresh", 0.5, 0.1 / (1.0 - 0.8413447460685429), 3);
  const auto t = 1.0;
  CHECK(markov.markov_eta(t) == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(max_root_summability_diagnostic(markov, t, 40, 5000).pass);
  CHECK(max_root_summability_diagnostic(ProcessSpec::gaussian_ar1(0.5, 3), 0.5, 40, 5000).pass);
  CHECK(max_root_summability_diagnostic(ProcessSpec::mdep_gaussian_ma(3, {}, 3), 0.5, 40, 5000).pass);
  CHECK(to_json(report).contains("partial_sums"));
}

}  // TEST_SUITE
