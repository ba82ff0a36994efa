#pragma once

// Raw-pointer kernel entry points, one namespace per instruction set.
// The vector translation units are built with extra ISA flags, so they
// must not include standard headers that instantiate shared inline code.

#include <cstddef>

namespace cbal::kernels {

struct RawMoments {
  double sum;
  double sum_squares;
};

namespace scalar {
RawMoments moments(const double* values, std::size_t n);
void even_topk_hhi(const double* budgets, std::size_t n, std::size_t k,
                   const double* endowments, std::size_t count, double* out);
}  // namespace scalar

#if defined(CBAL_HAVE_AVX2_KERNELS)
namespace avx2 {
RawMoments moments(const double* values, std::size_t n);
void even_topk_hhi(const double* budgets, std::size_t n, std::size_t k,
                   const double* endowments, std::size_t count, double* out);
}  // namespace avx2
#endif

#if defined(CBAL_HAVE_NEON_KERNELS)
namespace neon {
RawMoments moments(const double* values, std::size_t n);
void even_topk_hhi(const double* budgets, std::size_t n, std::size_t k,
                   const double* endowments, std::size_t count, double* out);
}  // namespace neon
#endif

}  // namespace cbal::kernels
