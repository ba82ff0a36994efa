#include "cbal/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cbal/error.hpp"
#include "cbal/kernels.hpp"
#include "cbal/rules.hpp"

namespace cbal {

namespace {

// x, Q = sum of squares, and running top/bottom sums in canonical order.
struct LeagueSums {
  double total = 0.0;
  double sum_squares = 0.0;
  std::vector<double> top;     // top[k] = x_1 + ... + x_k, top[0] = 0
  std::vector<double> bottom;  // bottom[k] = x_{k+1} + ... + x_n

  explicit LeagueSums(const BudgetDistribution& dist) {
    const auto b = dist.budgets();
    const kernels::Moments m = kernels::moments(b);
    total = m.sum;
    sum_squares = m.sum_squares;
    const std::size_t n = b.size();
    top.assign(n + 1, 0.0);
    bottom.assign(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) top[i + 1] = top[i] + b[i];
    for (std::size_t i = n; i-- > 0;) bottom[i] = bottom[i + 1] + b[i];
  }
};

bool leq(double lhs, double rhs) {
  return lhs <= rhs + kThresholdTolerance * std::max(std::abs(lhs), std::abs(rhs));
}

void check_k(const BudgetDistribution& dist, std::size_t k) {
  if (k < 1 || k > dist.size()) {
    throw Error(ErrorKind::KOutOfRange,
                "k = " + std::to_string(k) + " outside [1, " +
                    std::to_string(dist.size()) + "]");
  }
}

bool improves_impl(const LeagueSums& s, std::size_t k, double e) {
  const double x = s.total;
  const double lhs = x * x * (e + 2.0 * s.top[k]);
  const double rhs = static_cast<double>(k) * (e + 2.0 * x) * s.sum_squares;
  return leq(lhs, rhs);
}

KClassification classify_impl(const LeagueSums& s, std::size_t k) {
  const double x = s.total;
  const double kq = static_cast<double>(k) * s.sum_squares;
  const double x2 = x * x;
  const double xs = x * s.top[k];
  if (leq(x2, kq)) return {k, KClassification::Kind::AlwaysImproves, 0.0};
  if (leq(kq, xs)) return {k, KClassification::Kind::NeverImproves, 0.0};
  return {k, KClassification::Kind::Threshold, 2.0 * x * (kq - xs) / (x2 - kq)};
}

PeakLocation e_star_impl(const LeagueSums& s, std::size_t k, std::size_t n) {
  if (k == n) return {PeakLocation::Kind::AlwaysDecreasing, 0.0};
  const double numerator =
      static_cast<double>(k) * s.sum_squares - s.total * s.top[k];
  return {PeakLocation::Kind::Finite, std::max(0.0, numerator / s.bottom[k])};
}

std::size_t k_star_impl(const LeagueSums& s, std::size_t n, double e) {
  std::size_t first = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    const bool ok = improves_impl(s, k, e);
    if (ok && first == 0) first = k;
    if (!ok && first != 0) {
      throw Error(ErrorKind::InternalConsistency,
                  "single crossing broken: k = " + std::to_string(first) +
                      " improves but k = " + std::to_string(k) + " does not");
    }
  }
  if (first == 0) {
    throw Error(ErrorKind::InternalConsistency,
                "even sharing over all clubs failed to improve balance");
  }
  return first;
}

}  // namespace

std::string_view to_string(KClassification::Kind kind) {
  switch (kind) {
    case KClassification::Kind::AlwaysImproves: return "always-improves";
    case KClassification::Kind::NeverImproves: return "never-improves";
    case KClassification::Kind::Threshold: return "threshold";
  }
  return "unknown";
}

bool improves(const BudgetDistribution& dist, std::size_t k,
              const Endowment& endowment) {
  check_k(dist, k);
  return improves_impl(LeagueSums(dist), k, endowment.value());
}

KClassification classify_k(const BudgetDistribution& dist, std::size_t k) {
  check_k(dist, k);
  return classify_impl(LeagueSums(dist), k);
}

std::size_t k_star(const BudgetDistribution& dist, const Endowment& endowment) {
  return k_star_impl(LeagueSums(dist), dist.size(), endowment.value());
}

PeakLocation e_star(const BudgetDistribution& dist, std::size_t k) {
  check_k(dist, k);
  return e_star_impl(LeagueSums(dist), k, dist.size());
}

double e_hat(const BudgetDistribution& dist, std::size_t k) {
  const KClassification c = classify_k(dist, k);
  if (c.kind != KClassification::Kind::Threshold) {
    throw Error(ErrorKind::PremiseViolated,
                "k = " + std::to_string(k) + " is " +
                    std::string(to_string(c.kind)) +
                    "; the crossing endowment is undefined");
  }
  return c.e_hat;
}

SweepResult sweep_e(const BudgetDistribution& dist, std::size_t k,
                    std::span<const double> grid) {
  check_k(dist, k);
  if (grid.empty()) throw Error(ErrorKind::BadGrid, "endowment grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || grid[i] < 0.0) {
      throw Error(ErrorKind::BadGrid,
                  "grid value " + std::to_string(i + 1) +
                      " must be finite and nonnegative");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw Error(ErrorKind::BadGrid, "grid must be strictly increasing");
    }
  }

  SweepResult result;
  result.k = k;
  const double zero = 0.0;
  kernels::even_topk_hhi(dist.budgets(), k, std::span(&zero, 1),
                         std::span(&result.baseline_hhi, 1));

  std::vector<double> values(grid.size());
  kernels::even_topk_hhi(dist.budgets(), k, grid, values);

  result.rows.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    SweepRow row;
    row.endowment = grid[i];
    row.hhi = values[i];
    row.hhi_points = to_points(values[i]);
    row.band = band(std::min(row.hhi_points, kPointsScale));
    row.delta = values[i] - result.baseline_hhi;
    if (classify_effect(row.delta, result.baseline_hhi) == Effect::Neutral) {
      row.delta = 0.0;
    }
    result.rows.push_back(row);
  }
  return result;
}

ThresholdReport threshold_report(const BudgetDistribution& dist,
                                 const Endowment& endowment) {
  const LeagueSums sums(dist);
  const std::size_t n = dist.size();
  ThresholdReport report;
  report.endowment = endowment.value();
  report.k_star = k_star_impl(sums, n, endowment.value());
  for (std::size_t k = 1; k <= n; ++k) {
    report.classifications.push_back(classify_impl(sums, k));
    report.peaks.push_back(e_star_impl(sums, k, n));
  }
  return report;
}

}  // namespace cbal
