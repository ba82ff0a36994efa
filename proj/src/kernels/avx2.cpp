#include <immintrin.h>

#include "kernels_impl.hpp"

namespace cbal::kernels::avx2 {

namespace {

inline double horizontal_sum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

}  // namespace

RawMoments moments(const double* values, std::size_t n) {
  __m256d sum = _mm256_setzero_pd();
  __m256d sum_squares = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(values + i);
    sum = _mm256_add_pd(sum, v);
    sum_squares = _mm256_add_pd(sum_squares, _mm256_mul_pd(v, v));
  }
  double s = horizontal_sum(sum);
  double q = horizontal_sum(sum_squares);
  for (; i < n; ++i) {
    s += values[i];
    q += values[i] * values[i];
  }
  return {s, q};
}

// Four endowments per register; each lane replays the scalar loop exactly.
void even_topk_hhi(const double* budgets, std::size_t n, std::size_t k,
                   const double* endowments, std::size_t count, double* out) {
  const __m256d kd = _mm256_set1_pd(static_cast<double>(k));
  std::size_t j = 0;
  for (; j + 4 <= count; j += 4) {
    const __m256d bonus = _mm256_div_pd(_mm256_loadu_pd(endowments + j), kd);
    __m256d sum = _mm256_setzero_pd();
    __m256d sum_squares = _mm256_setzero_pd();
    for (std::size_t i = 0; i < k; ++i) {
      const __m256d v = _mm256_add_pd(_mm256_set1_pd(budgets[i]), bonus);
      sum = _mm256_add_pd(sum, v);
      sum_squares = _mm256_add_pd(sum_squares, _mm256_mul_pd(v, v));
    }
    for (std::size_t i = k; i < n; ++i) {
      const __m256d v = _mm256_set1_pd(budgets[i]);
      sum = _mm256_add_pd(sum, v);
      sum_squares = _mm256_add_pd(sum_squares, _mm256_mul_pd(v, v));
    }
    _mm256_storeu_pd(out + j,
                     _mm256_div_pd(sum_squares, _mm256_mul_pd(sum, sum)));
  }
  if (j < count) {
    scalar::even_topk_hhi(budgets, n, k, endowments + j, count - j, out + j);
  }
}

}  // namespace cbal::kernels::avx2
