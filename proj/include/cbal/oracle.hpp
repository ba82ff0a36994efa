#pragma once

// Brute-force counterparts of the closed forms in analysis.hpp. Nothing here
// reuses the analysis arithmetic: k* comes from explicit awards and HHI
// recomputation, peaks from plain uniform grids.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cbal/model.hpp"

namespace cbal::oracle {

/// Parameters for seeded random leagues. Budgets and endowments are drawn
/// log-uniformly from their ranges.
struct RandomInstanceSpec {
  std::size_t n_min = 2;
  std::size_t n_max = 30;
  double budget_min = 1.0;
  double budget_max = 1000.0;
  double endowment_min = 1.0;
  double endowment_max = 10000.0;
  std::uint64_t seed = 20240101;

  /// Throws InvalidArgument on empty or nonsensical ranges.
  void validate() const;
};

struct Instance {
  std::size_t index = 0;
  BudgetDistribution league;
  double endowment = 0.0;
  std::uint64_t aux_seed = 0;  // for per-instance choices such as k or weights
};

/// Instance `index` of the stream for `spec`. Depends only on (spec, index),
/// so any instance can be regenerated on its own.
Instance generate_instance(const RandomInstanceSpec& spec, std::size_t index);

std::string describe(const Instance& instance);

/// Smallest k whose even k-top award does not raise the HHI (within the
/// neutral band), found by applying every k and recomputing. Throws
/// SingleCrossingViolation if the improving ks are not a suffix of 1..n.
std::size_t brute_k_star(const BudgetDistribution& league, double endowment);

/// Post-award HHI of the even k-top rule on E_j = j * E_max / steps.
struct GridScan {
  double step = 0.0;
  std::vector<double> values;
  std::size_t argmin = 0;
  /// Largest amount by which the values break "nonincreasing up to the
  /// argmin, nondecreasing after it". Zero for a unimodal grid.
  double unimodality_violation = 0.0;

  double argmin_endowment() const { return step * static_cast<double>(argmin); }
};

/// Requires 1 <= k < n, E_max > 0 and steps >= 1000.
GridScan scan_grid(const BudgetDistribution& league, std::size_t k,
                   double e_max, std::size_t steps);

/// Grid minimizer of H(X^{k,E}) over [0, E_max].
double grid_peak(const BudgetDistribution& league, std::size_t k,
                 double e_max, std::size_t steps);

/// Sorted normalized exponentials: positive, nonincreasing, summing to one,
/// and never uniform. Requires k >= 2.
std::vector<std::vector<double>> random_weight_vectors(std::size_t k,
                                                       std::size_t count,
                                                       std::uint64_t seed);

struct VerifyOptions {
  RandomInstanceSpec spec;
  std::size_t instances = 10000;
  std::size_t first_instance = 0;
  std::size_t weight_vectors = 10;
  std::size_t peak_steps = 10000;
  std::size_t endowment_grid_points = 16;
  unsigned threads = 0;  // 0 = hardware concurrency
  std::size_t max_failures_kept = 10;
};

struct PropertyOutcome {
  std::string name;
  std::size_t checks = 0;
  std::size_t failures = 0;
  double max_deviation = 0.0;
};

struct FailureRecord {
  std::string property;
  std::size_t instance = 0;
  std::string detail;
};

struct VerificationReport {
  std::size_t instances = 0;
  std::vector<PropertyOutcome> properties;
  std::vector<FailureRecord> failures;  // lowest instance indices first

  std::size_t failure_count() const;
  bool passed() const { return failure_count() == 0; }
};

/// Cross-checks the closed forms against the brute-force routines on a
/// seeded stream of random leagues. Result does not depend on `threads`.
VerificationReport verify(const VerifyOptions& options);

}  // namespace cbal::oracle
