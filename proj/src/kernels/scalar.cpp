#include "kernels_impl.hpp"

namespace cbal::kernels::scalar {

RawMoments moments(const double* values, std::size_t n) {
  double sum = 0.0;
  double sum_squares = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sum += values[i];
    sum_squares += values[i] * values[i];
  }
  return {sum, sum_squares};
}

void even_topk_hhi(const double* budgets, std::size_t n, std::size_t k,
                   const double* endowments, std::size_t count, double* out) {
  const double kd = static_cast<double>(k);
  for (std::size_t j = 0; j < count; ++j) {
    const double bonus = endowments[j] / kd;
    double sum = 0.0;
    double sum_squares = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const double v = budgets[i] + bonus;
      sum += v;
      sum_squares += v * v;
    }
    for (std::size_t i = k; i < n; ++i) {
      const double v = budgets[i];
      sum += v;
      sum_squares += v * v;
    }
    out[j] = sum_squares / (sum * sum);
  }
}

}  // namespace cbal::kernels::scalar
