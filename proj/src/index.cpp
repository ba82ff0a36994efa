#include "cbal/index.hpp"

#include <cmath>
#include <string>

#include "cbal/error.hpp"
#include "cbal/kernels.hpp"

namespace cbal {

std::string_view to_string(Band band) {
  switch (band) {
    case Band::Unconcentrated: return "Unconcentrated";
    case Band::Moderate: return "Moderate";
    case Band::High: return "High";
  }
  return "Unknown";
}

double hhi(const BudgetDistribution& dist) {
  const kernels::Moments m = kernels::moments(dist.budgets());
  return m.sum_squares / (m.sum * m.sum);
}

Band band(double hhi_points) {
  if (!(hhi_points >= 0.0 && hhi_points <= kPointsScale)) {
    throw Error(ErrorKind::OutOfRange,
                "HHI points must lie in [0, 10000], got " +
                    std::to_string(hhi_points));
  }
  if (hhi_points < 1000.0) return Band::Unconcentrated;
  if (hhi_points <= 1800.0) return Band::Moderate;
  return Band::High;
}

double concentration_ratio(const BudgetDistribution& dist, std::size_t m) {
  if (m < 1 || m > dist.size()) {
    throw Error(ErrorKind::MOutOfRange,
                "m = " + std::to_string(m) + " outside [1, " +
                    std::to_string(dist.size()) + "]");
  }
  if (m == dist.size()) return 1.0;
  const double top = kernels::moments(dist.budgets().first(m)).sum;
  return top / dist.total();
}

ConcentrationReport concentration_report(const BudgetDistribution& dist,
                                         std::optional<std::size_t> cr_m) {
  ConcentrationReport report;
  report.hhi_raw = hhi(dist);
  report.hhi_points = to_points(report.hhi_raw);
  // Rounding can push a one-dominant league a hair past 10000.
  report.band = band(std::fmin(report.hhi_points, kPointsScale));
  if (cr_m) report.cr = ConcentrationRatio{*cr_m, concentration_ratio(dist, *cr_m)};
  return report;
}

}  // namespace cbal
