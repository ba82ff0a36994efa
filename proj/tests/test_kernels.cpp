#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <vector>

#include "cbal/error.hpp"
#include "cbal/kernels.hpp"
#include "support/generators.hpp"

using namespace cbal;
using kernels::Backend;

namespace {

std::vector<Backend> vector_backends() {
  std::vector<Backend> out;
  for (Backend b : {Backend::Avx2, Backend::Neon}) {
    if (kernels::available(b)) out.push_back(b);
  }
  return out;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("scalar kernels are always available and the active one is usable") {
  CHECK(kernels::available(Backend::Scalar));
  CHECK(kernels::available(kernels::active_backend()));
  MESSAGE("active kernels: " << kernels::to_string(kernels::active_backend()));
}

TEST_CASE("moments on small inputs") {
  const std::vector<double> v{5, 4, 3, 2, 1};
  const auto m = kernels::moments(Backend::Scalar, v);
  CHECK(m.sum == 15.0);
  CHECK(m.sum_squares == 55.0);

  const auto empty = kernels::moments(Backend::Scalar, std::span<const double>());
  CHECK(empty.sum == 0.0);
  CHECK(empty.sum_squares == 0.0);
}

TEST_CASE("vector moments match scalar for every length and tail") {
  test::LeagueGen gen(7);
  for (Backend backend : vector_backends()) {
    CAPTURE(kernels::to_string(backend));
    for (std::size_t n = 0; n <= 67; ++n) {
      const auto v = gen.budgets(n, 1e-3, 1e6);
      const auto ref = kernels::moments(Backend::Scalar, v);
      const auto got = kernels::moments(backend, v);
      CAPTURE(n);
      CHECK(got.sum == doctest::Approx(ref.sum).epsilon(1e-14));
      CHECK(got.sum_squares == doctest::Approx(ref.sum_squares).epsilon(1e-14));
    }
    // Integers are exact in any association order.
    std::vector<double> ints;
    for (int i = 1; i <= 41; ++i) ints.push_back(i);
    const auto m = kernels::moments(backend, ints);
    CHECK(m.sum == 861.0);
    CHECK(m.sum_squares == 23821.0);
  }
}

TEST_CASE("even top-k grid kernel is bit-identical across variants") {
  test::LeagueGen gen(11);
  for (Backend backend : vector_backends()) {
    CAPTURE(kernels::to_string(backend));
    for (int trial = 0; trial < 200; ++trial) {
      auto budgets = gen.budgets(gen.size(2, 40));
      std::sort(budgets.begin(), budgets.end(), std::greater<>());
      const std::size_t k = gen.size(1, budgets.size());
      std::vector<double> grid(gen.size(0, 23));
      for (double& e : grid) e = gen.endowment(1e-3, 1e6);
      std::vector<double> ref(grid.size()), got(grid.size());
      kernels::even_topk_hhi(Backend::Scalar, budgets, k, grid, ref);
      kernels::even_topk_hhi(backend, budgets, k, grid, got);
      for (std::size_t j = 0; j < grid.size(); ++j) {
        CAPTURE(j);
        CHECK(same_bits(ref[j], got[j]));
      }
    }
  }
}

TEST_CASE("even top-k grid kernel values") {
  const std::vector<double> b{5, 4, 3, 2, 1};
  const std::vector<double> grid{0, 10, 20, 60};
  std::vector<double> out(grid.size());
  kernels::even_topk_hhi(b, 4, grid, out);
  CHECK(out[0] == doctest::Approx(55.0 / 225.0).epsilon(1e-15));
  CHECK(out[1] == doctest::Approx(150.0 / 625.0).epsilon(1e-15));
  CHECK(out[2] == doctest::Approx(295.0 / 1225.0).epsilon(1e-15));
  CHECK(out[3] == doctest::Approx(1375.0 / 5625.0).epsilon(1e-15));
}

TEST_CASE("grid kernel rejects bad arguments") {
  const std::vector<double> b{3, 1};
  const std::vector<double> grid{0, 1};
  std::vector<double> out(2), short_out(1);
  CHECK_THROWS_AS(kernels::even_topk_hhi(b, 0, grid, out), Error);
  CHECK_THROWS_AS(kernels::even_topk_hhi(b, 3, grid, out), Error);
  CHECK_THROWS_AS(kernels::even_topk_hhi(b, 1, grid, short_out), Error);
}
