#pragma once

// Arithmetic inner loops with a scalar reference implementation and
// vectorized variants. The active variant is picked once at startup from
// the CPU features, or forced with CBAL_SIMD=scalar|avx2|neon.

#include <cstddef>
#include <span>
#include <string_view>

namespace cbal::kernels {

enum class Backend { Scalar, Avx2, Neon };

std::string_view to_string(Backend backend);

/// True if the variant was compiled in and the running CPU supports it.
bool available(Backend backend);

/// Variant used by the dispatching entry points below.
Backend active_backend();

struct Moments {
  double sum = 0.0;
  double sum_squares = 0.0;
};

/// Sum and sum of squares of `values`. Vector variants reassociate the
/// additions, so results agree with the scalar path to rounding only.
Moments moments(std::span<const double> values);
Moments moments(Backend backend, std::span<const double> values);

/// For each endowment E in `endowments`, the HHI of `budgets` after adding
/// E/k to each of the first k entries: sum of squares over squared total.
/// Vectorized across endowments with the per-lane operation order of the
/// scalar loop, so every variant is bit-identical to the reference.
/// Requires 1 <= k <= budgets.size() and out.size() == endowments.size().
void even_topk_hhi(std::span<const double> budgets, std::size_t k,
                   std::span<const double> endowments, std::span<double> out);
void even_topk_hhi(Backend backend, std::span<const double> budgets,
                   std::size_t k, std::span<const double> endowments,
                   std::span<double> out);

}  // namespace cbal::kernels
