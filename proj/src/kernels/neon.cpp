#include <arm_neon.h>

#include "kernels_impl.hpp"

namespace cbal::kernels::neon {

RawMoments moments(const double* values, std::size_t n) {
  float64x2_t sum = vdupq_n_f64(0.0);
  float64x2_t sum_squares = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t v = vld1q_f64(values + i);
    sum = vaddq_f64(sum, v);
    sum_squares = vaddq_f64(sum_squares, vmulq_f64(v, v));
  }
  double s = vaddvq_f64(sum);
  double q = vaddvq_f64(sum_squares);
  for (; i < n; ++i) {
    s += values[i];
    q += values[i] * values[i];
  }
  return {s, q};
}

// Separate mul and add (no vfmaq) to stay bit-identical with the scalar loop.
void even_topk_hhi(const double* budgets, std::size_t n, std::size_t k,
                   const double* endowments, std::size_t count, double* out) {
  const float64x2_t kd = vdupq_n_f64(static_cast<double>(k));
  std::size_t j = 0;
  for (; j + 2 <= count; j += 2) {
    const float64x2_t bonus = vdivq_f64(vld1q_f64(endowments + j), kd);
    float64x2_t sum = vdupq_n_f64(0.0);
    float64x2_t sum_squares = vdupq_n_f64(0.0);
    for (std::size_t i = 0; i < k; ++i) {
      const float64x2_t v = vaddq_f64(vdupq_n_f64(budgets[i]), bonus);
      sum = vaddq_f64(sum, v);
      sum_squares = vaddq_f64(sum_squares, vmulq_f64(v, v));
    }
    for (std::size_t i = k; i < n; ++i) {
      const float64x2_t v = vdupq_n_f64(budgets[i]);
      sum = vaddq_f64(sum, v);
      sum_squares = vaddq_f64(sum_squares, vmulq_f64(v, v));
    }
    vst1q_f64(out + j, vdivq_f64(sum_squares, vmulq_f64(sum, sum)));
  }
  if (j < count) {
    scalar::even_topk_hhi(budgets, n, k, endowments + j, count - j, out + j);
  }
}

}  // namespace cbal::kernels::neon
