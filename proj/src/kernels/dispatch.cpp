#include <cstdlib>
#include <string_view>

#include "sublevel_ph/kernels.hpp"

namespace sublevel_ph::kernels {

const char* to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(SUBLEVEL_PH_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() {
  static const Isa isa = [] {
    if (const char* env = std::getenv("SUBLEVEL_PH_SIMD"); env && std::string_view(env) == "scalar") {
      return Isa::Scalar;
    }
    return isa_available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
  }();
  return isa;
}

std::size_t count_local_minima(std::span<const double> x, Isa isa) {
  return isa == Isa::Avx2 ? avx2::count_local_minima(x) : scalar::count_local_minima(x);
}

std::size_t count_in_rectangle(std::span<const double> births, std::span<const double> deaths,
                               double s1, double s2, double t1, double t2, Isa isa) {
  return isa == Isa::Avx2 ? avx2::count_in_rectangle(births, deaths, s1, s2, t1, t2)
                          : scalar::count_in_rectangle(births, deaths, s1, s2, t1, t2);
}

void lifetimes(std::span<const double> births, std::span<const double> deaths,
               std::span<double> out, Isa isa) {
  if (isa == Isa::Avx2) {
    avx2::lifetimes(births, deaths, out);
  } else {
    scalar::lifetimes(births, deaths, out);
  }
}

std::size_t count_greater(std::span<const double> x, double threshold, Isa isa) {
  return isa == Isa::Avx2 ? avx2::count_greater(x, threshold) : scalar::count_greater(x, threshold);
}

void moving_average(std::span<const double> z, std::span<const double> weights,
                    std::span<double> out, Isa isa) {
  if (isa == Isa::Avx2) {
    avx2::moving_average(z, weights, out);
  } else {
    scalar::moving_average(z, weights, out);
  }
}

}  // namespace sublevel_ph::kernels
