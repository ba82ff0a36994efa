#include <cstdlib>
#include <string>

#include "cbal/error.hpp"
#include "cbal/kernels.hpp"
#include "kernels_impl.hpp"

namespace cbal::kernels {

namespace {

bool cpu_supports(Backend backend) {
  switch (backend) {
    case Backend::Scalar:
      return true;
    case Backend::Avx2:
#if defined(CBAL_HAVE_AVX2_KERNELS)
      return __builtin_cpu_supports("avx2") != 0;
#else
      return false;
#endif
    case Backend::Neon:
#if defined(CBAL_HAVE_NEON_KERNELS)
      return true;  // mandatory on AArch64
#else
      return false;
#endif
  }
  return false;
}

Backend detect() {
  if (const char* forced = std::getenv("CBAL_SIMD")) {
    const std::string name(forced);
    for (Backend b : {Backend::Scalar, Backend::Avx2, Backend::Neon}) {
      if (name == to_string(b) && cpu_supports(b)) return b;
    }
    // Unknown or unsupported request falls through to autodetection.
  }
  if (cpu_supports(Backend::Avx2)) return Backend::Avx2;
  if (cpu_supports(Backend::Neon)) return Backend::Neon;
  return Backend::Scalar;
}

void require(Backend backend) {
  if (!cpu_supports(backend)) {
    throw Error(ErrorKind::InvalidArgument,
                "kernel variant '" + std::string(to_string(backend)) +
                    "' is not available on this build or CPU");
  }
}

}  // namespace

std::string_view to_string(Backend backend) {
  switch (backend) {
    case Backend::Scalar:
      return "scalar";
    case Backend::Avx2:
      return "avx2";
    case Backend::Neon:
      return "neon";
  }
  return "unknown";
}

bool available(Backend backend) { return cpu_supports(backend); }

Backend active_backend() {
  static const Backend selected = detect();
  return selected;
}

Moments moments(std::span<const double> values) {
  return moments(active_backend(), values);
}

Moments moments(Backend backend, std::span<const double> values) {
  require(backend);
  RawMoments m{};
  switch (backend) {
    case Backend::Scalar:
      m = scalar::moments(values.data(), values.size());
      break;
    case Backend::Avx2:
#if defined(CBAL_HAVE_AVX2_KERNELS)
      m = avx2::moments(values.data(), values.size());
#endif
      break;
    case Backend::Neon:
#if defined(CBAL_HAVE_NEON_KERNELS)
      m = neon::moments(values.data(), values.size());
#endif
      break;
  }
  return {m.sum, m.sum_squares};
}

void even_topk_hhi(std::span<const double> budgets, std::size_t k,
                   std::span<const double> endowments, std::span<double> out) {
  even_topk_hhi(active_backend(), budgets, k, endowments, out);
}

void even_topk_hhi(Backend backend, std::span<const double> budgets,
                   std::size_t k, std::span<const double> endowments,
                   std::span<double> out) {
  require(backend);
  if (k < 1 || k > budgets.size()) {
    throw Error(ErrorKind::KOutOfRange, "k must lie in [1, n]");
  }
  if (out.size() != endowments.size()) {
    throw Error(ErrorKind::InvalidArgument,
                "output span must match the endowment grid");
  }
  switch (backend) {
    case Backend::Scalar:
      scalar::even_topk_hhi(budgets.data(), budgets.size(), k,
                            endowments.data(), endowments.size(), out.data());
      break;
    case Backend::Avx2:
#if defined(CBAL_HAVE_AVX2_KERNELS)
      avx2::even_topk_hhi(budgets.data(), budgets.size(), k,
                          endowments.data(), endowments.size(), out.data());
#endif
      break;
    case Backend::Neon:
#if defined(CBAL_HAVE_NEON_KERNELS)
      neon::even_topk_hhi(budgets.data(), budgets.size(), k,
                          endowments.data(), endowments.size(), out.data());
#endif
      break;
  }
}

}  // namespace cbal::kernels
