#pragma once

// Closed-form results for even k-top awards: when a rule improves balance,
// the smallest improving k, and where post-award HHI turns around in E.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "cbal/index.hpp"
#include "cbal/model.hpp"

namespace cbal {

/// Relative slack applied to both sides of every threshold inequality.
inline constexpr double kThresholdTolerance = 1e-9;

/// True iff the k-top rule weakly lowers the HHI at endowment E:
///   x^2 (E + 2 S_k) <= k (E + 2x) Q
/// with x the total, S_k the top-k sum and Q the sum of squares.
/// Throws KOutOfRange.
bool improves(const BudgetDistribution& dist, std::size_t k,
              const Endowment& endowment);

struct KClassification {
  enum class Kind { AlwaysImproves, NeverImproves, Threshold };

  std::size_t k = 0;
  Kind kind = Kind::NeverImproves;
  double e_hat = 0.0;  // meaningful only for Threshold
};

std::string_view to_string(KClassification::Kind kind);

/// AlwaysImproves when kQ >= x^2, NeverImproves when kQ <= x S_k,
/// otherwise improvement holds exactly for E <= e_hat.
KClassification classify_k(const BudgetDistribution& dist, std::size_t k);

/// Smallest k whose even k-top rule improves balance at E. Every larger k
/// improves too; a scan that breaks this throws InternalConsistency.
std::size_t k_star(const BudgetDistribution& dist, const Endowment& endowment);

/// Endowment at which H(X^{k,E}) stops falling and starts rising.
struct PeakLocation {
  enum class Kind { Finite, AlwaysDecreasing };

  Kind kind = Kind::Finite;
  double endowment = 0.0;

  bool always_decreasing() const { return kind == Kind::AlwaysDecreasing; }
};

/// max(0, (kQ - x S_k) / (x - S_k)) for k < n. At k = n the denominator
/// vanishes and the HHI never turns upward, reported as AlwaysDecreasing.
PeakLocation e_star(const BudgetDistribution& dist, std::size_t k);

/// Crossing endowment for a Threshold k; PremiseViolated otherwise.
double e_hat(const BudgetDistribution& dist, std::size_t k);

struct SweepRow {
  double endowment = 0.0;
  double hhi = 0.0;
  double hhi_points = 0.0;
  Band band = Band::Unconcentrated;
  double delta = 0.0;  // vs. no award; zeroed inside the neutral band
};

struct SweepResult {
  std::size_t k = 0;
  double baseline_hhi = 0.0;
  std::vector<SweepRow> rows;
};

/// Post-award HHI of the even k-top rule along a nonnegative, strictly
/// increasing grid of endowments. Throws BadGrid or KOutOfRange.
SweepResult sweep_e(const BudgetDistribution& dist, std::size_t k,
                    std::span<const double> grid);

struct ThresholdReport {
  double endowment = 0.0;
  std::size_t k_star = 0;
  std::vector<KClassification> classifications;  // k = 1..n
  std::vector<PeakLocation> peaks;               // k = 1..n
};

ThresholdReport threshold_report(const BudgetDistribution& dist,
                                 const Endowment& endowment);

}  // namespace cbal
