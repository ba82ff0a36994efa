#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "cbal/model.hpp"

namespace cbal {

inline constexpr double kPointsScale = 10000.0;

/// US merger-guideline concentration bands on the points scale.
/// Both 1000 and 1800 count as Moderate.
enum class Band { Unconcentrated, Moderate, High };

std::string_view to_string(Band band);

/// Herfindahl-Hirschman index on the raw scale, sum of squared shares.
/// Lies in [1/n, 1]; larger means a less balanced league.
double hhi(const BudgetDistribution& dist);

inline double to_points(double hhi_raw) { return hhi_raw * kPointsScale; }

/// Throws OutOfRange outside [0, 10000].
Band band(double hhi_points);

/// Combined share of the m largest clubs. Throws MOutOfRange unless
/// 1 <= m <= n.
double concentration_ratio(const BudgetDistribution& dist, std::size_t m);

struct ConcentrationRatio {
  std::size_t m = 0;
  double value = 0.0;
};

struct ConcentrationReport {
  double hhi_raw = 0.0;
  double hhi_points = 0.0;
  Band band = Band::Unconcentrated;
  std::optional<ConcentrationRatio> cr;
};

ConcentrationReport concentration_report(
    const BudgetDistribution& dist, std::optional<std::size_t> cr_m = {});

}  // namespace cbal
