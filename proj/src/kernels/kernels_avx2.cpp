#include "sublevel_ph/kernels.hpp"

#if defined(SUBLEVEL_PH_HAVE_AVX2)

#include <immintrin.h>

#include <bit>

namespace sublevel_ph::kernels::avx2 {

namespace {

inline std::size_t popcount_mask(__m256d mask) {
  return static_cast<std::size_t>(std::popcount(static_cast<unsigned>(_mm256_movemask_pd(mask))));
}

}  // namespace

std::size_t count_local_minima(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 6) return scalar::count_local_minima(x);

  // Endpoints see +inf on one side.
  std::size_t count = 0;
  count += x[0] <= x[1] ? 1 : 0;
  count += x[n - 1] < x[n - 2] ? 1 : 0;

  const double* p = x.data();
  std::size_t i = 1;
  for (; i + 4 <= n - 1; i += 4) {
    const __m256d left = _mm256_loadu_pd(p + i - 1);
    const __m256d mid = _mm256_loadu_pd(p + i);
    const __m256d right = _mm256_loadu_pd(p + i + 1);
    const __m256d is_min = _mm256_and_pd(_mm256_cmp_pd(mid, left, _CMP_LT_OQ),
                                         _mm256_cmp_pd(mid, right, _CMP_LE_OQ));
    count += popcount_mask(is_min);
  }
  for (; i < n - 1; ++i) count += (x[i] < x[i - 1] && x[i] <= x[i + 1]) ? 1 : 0;
  return count;
}

std::size_t count_in_rectangle(std::span<const double> births, std::span<const double> deaths,
                               double s1, double s2, double t1, double t2) {
  const std::size_t n = births.size();
  const __m256d vs1 = _mm256_set1_pd(s1);
  const __m256d vs2 = _mm256_set1_pd(s2);
  const __m256d vt1 = _mm256_set1_pd(t1);
  const __m256d vt2 = _mm256_set1_pd(t2);
  std::size_t count = 0;
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d b = _mm256_loadu_pd(births.data() + k);
    const __m256d d = _mm256_loadu_pd(deaths.data() + k);
    __m256d in = _mm256_and_pd(_mm256_cmp_pd(vs1, b, _CMP_LT_OQ), _mm256_cmp_pd(b, vs2, _CMP_LE_OQ));
    in = _mm256_and_pd(in, _mm256_cmp_pd(vt1, d, _CMP_LT_OQ));
    in = _mm256_and_pd(in, _mm256_cmp_pd(d, vt2, _CMP_LE_OQ));
    count += popcount_mask(in);
  }
  return count + scalar::count_in_rectangle(births.subspan(k), deaths.subspan(k), s1, s2, t1, t2);
}

void lifetimes(std::span<const double> births, std::span<const double> deaths,
               std::span<double> out) {
  const std::size_t n = births.size();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d b = _mm256_loadu_pd(births.data() + k);
    const __m256d d = _mm256_loadu_pd(deaths.data() + k);
    _mm256_storeu_pd(out.data() + k, _mm256_sub_pd(d, b));
  }
  for (; k < n; ++k) out[k] = deaths[k] - births[k];
}

std::size_t count_greater(std::span<const double> x, double threshold) {
  const __m256d thr = _mm256_set1_pd(threshold);
  std::size_t count = 0;
  std::size_t k = 0;
  for (; k + 4 <= x.size(); k += 4) {
    count += popcount_mask(_mm256_cmp_pd(_mm256_loadu_pd(x.data() + k), thr, _CMP_GT_OQ));
  }
  return count + scalar::count_greater(x.subspan(k), threshold);
}

void moving_average(std::span<const double> z, std::span<const double> weights,
                    std::span<double> out) {
  const std::size_t window = weights.size();
  const std::size_t n = out.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t k = 0; k < window; ++k) {
      const __m256d w = _mm256_set1_pd(weights[k]);
      acc = _mm256_add_pd(acc, _mm256_mul_pd(w, _mm256_loadu_pd(z.data() + i + k)));
    }
    _mm256_storeu_pd(out.data() + i, acc);
  }
  if (i < n) scalar::moving_average(z.subspan(i), weights, out.subspan(i));
}

}  // namespace sublevel_ph::kernels::avx2

#else

// Non-x86 builds: the AVX2 entry points forward to the scalar reference so
// the symbols exist; isa_available(Isa::Avx2) reports false.
namespace sublevel_ph::kernels::avx2 {

std::size_t count_local_minima(std::span<const double> x) { return scalar::count_local_minima(x); }
std::size_t count_in_rectangle(std::span<const double> births, std::span<const double> deaths,
                               double s1, double s2, double t1, double t2) {
  return scalar::count_in_rectangle(births, deaths, s1, s2, t1, t2);
}
void lifetimes(std::span<const double> births, std::span<const double> deaths,
               std::span<double> out) {
  scalar::lifetimes(births, deaths, out);
}
std::size_t count_greater(std::span<const double> x, double threshold) {
  return scalar::count_greater(x, threshold);
}
void moving_average(std::span<const double> z, std::span<const double> weights,
                    std::span<double> out) {
  scalar::moving_average(z, weights, out);
}

}  // namespace sublevel_ph::kernels::avx2

#endif
