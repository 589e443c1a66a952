#pragma once

// Data-parallel inner loops shared by the diagram, statistics and process
// modules. Every kernel has a scalar reference build and an AVX2 build; the
// AVX2 build is chosen at runtime when the CPU supports it. Both builds
// return bit-identical results (integer counts, element-wise differences,
// and per-output dot products accumulated in the same order).

#include <cstddef>
#include <span>

namespace sublevel_ph::kernels {

enum class Isa { Scalar, Avx2 };

const char* to_string(Isa isa);

/// True when the build contains the variant and the CPU can run it.
bool isa_available(Isa isa);

/// Best available ISA, unless the environment variable SUBLEVEL_PH_SIMD is
/// set to "scalar".
Isa active_isa();

/// Number of i with x[i] < x[i-1] and x[i] <= x[i+1], where x[-1] and x[n]
/// are +inf. Under the index tie-break this counts strict local minima.
std::size_t count_local_minima(std::span<const double> x, Isa isa = active_isa());

/// Number of k with s1 < births[k] <= s2 and t1 < deaths[k] <= t2.
std::size_t count_in_rectangle(std::span<const double> births, std::span<const double> deaths,
                               double s1, double s2, double t1, double t2,
                               Isa isa = active_isa());

/// out[k] = deaths[k] - births[k].
void lifetimes(std::span<const double> births, std::span<const double> deaths,
               std::span<double> out, Isa isa = active_isa());

/// Number of k with x[k] > threshold.
std::size_t count_greater(std::span<const double> x, double threshold, Isa isa = active_isa());

/// out[i] = sum_{k=0}^{m} weights[k] * z[i+k], accumulated in increasing k.
/// Requires out.size() + weights.size() - 1 == z.size().
void moving_average(std::span<const double> z, std::span<const double> weights,
                    std::span<double> out, Isa isa = active_isa());

namespace scalar {
std::size_t count_local_minima(std::span<const double> x);
std::size_t count_in_rectangle(std::span<const double> births, std::span<const double> deaths,
                               double s1, double s2, double t1, double t2);
void lifetimes(std::span<const double> births, std::span<const double> deaths,
               std::span<double> out);
std::size_t count_greater(std::span<const double> x, double threshold);
void moving_average(std::span<const double> z, std::span<const double> weights,
                    std::span<double> out);
}  // namespace scalar

namespace avx2 {
std::size_t count_local_minima(std::span<const double> x);
std::size_t count_in_rectangle(std::span<const double> births, std::span<const double> deaths,
                               double s1, double s2, double t1, double t2);
void lifetimes(std::span<const double> births, std::span<const double> deaths,
               std::span<double> out);
std::size_t count_greater(std::span<const double> x, double threshold);
void moving_average(std::span<const double> z, std::span<const double> weights,
                    std::span<double> out);
}  // namespace avx2

}  // namespace sublevel_ph::kernels
