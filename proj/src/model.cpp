#include "cbal/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cbal/error.hpp"
#include "cbal/kernels.hpp"

namespace cbal {

namespace {

constexpr double kWeightSumTolerance = 1e-9;
constexpr double kWeightOrderTolerance = 1e-12;
constexpr double kAmountSumTolerance = 1e-9;

std::string describe(std::size_t index, const Club& club) {
  return "entry " + std::to_string(index + 1) +
         (club.label.empty() ? std::string() : " ('" + club.label + "')");
}

}  // namespace

BudgetDistribution BudgetDistribution::canonicalize(std::vector<Club> raw) {
  if (raw.size() < 2) {
    throw Error(ErrorKind::EmptyOrSingleton,
                "a league needs at least 2 clubs, got " +
                    std::to_string(raw.size()));
  }
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!std::isfinite(raw[i].budget)) {
      throw Error(ErrorKind::NonfiniteBudget,
                  describe(i, raw[i]) + ": budget is not finite");
    }
    if (raw[i].budget <= 0.0) {
      throw Error(ErrorKind::NonpositiveBudget,
                  describe(i, raw[i]) + ": budget must be positive");
    }
  }
  std::stable_sort(raw.begin(), raw.end(), [](const Club& a, const Club& b) {
    return a.budget > b.budget;
  });

  BudgetDistribution dist;
  dist.budgets_.reserve(raw.size());
  for (const Club& c : raw) dist.budgets_.push_back(c.budget);
  dist.clubs_ = std::move(raw);
  return dist;
}

BudgetDistribution BudgetDistribution::from_budgets(
    std::span<const double> budgets) {
  std::vector<Club> raw;
  raw.reserve(budgets.size());
  for (std::size_t i = 0; i < budgets.size(); ++i) {
    raw.push_back({"club" + std::to_string(i + 1), budgets[i]});
  }
  return canonicalize(std::move(raw));
}

double BudgetDistribution::total() const {
  return kernels::moments(budgets_).sum;
}

Endowment::Endowment(double value) : value_(value) {
  if (!std::isfinite(value) || value < 0.0) {
    throw Error(ErrorKind::InvalidEndowment,
                "endowment must be finite and nonnegative");
  }
}

bool WeightedTopK::strictly_uneven() const {
  if (weights.empty()) return false;
  return weights.front() > 1.0 / static_cast<double>(weights.size()) +
                               kWeightOrderTolerance;
}

std::vector<double> shares(const BudgetDistribution& dist) {
  const double total = dist.total();
  std::vector<double> out;
  out.reserve(dist.size());
  for (double b : dist.budgets()) out.push_back(b / total);
  return out;
}

namespace {

SharingRule check(const EvenTopK& rule, const BudgetDistribution& dist,
                  const Endowment&) {
  if (rule.k < 1 || rule.k > dist.size()) {
    throw Error(ErrorKind::KOutOfRange,
                "k = " + std::to_string(rule.k) + " outside [1, " +
                    std::to_string(dist.size()) + "]");
  }
  return rule;
}

SharingRule check(const WeightedTopK& rule, const BudgetDistribution& dist,
                  const Endowment&) {
  const std::size_t k = rule.k();
  if (k < 1 || k > dist.size()) {
    throw Error(ErrorKind::KOutOfRange,
                "weight vector length " + std::to_string(k) +
                    " outside [1, " + std::to_string(dist.size()) + "]");
  }
  for (std::size_t i = 0; i < k; ++i) {
    const double a = rule.weights[i];
    if (!std::isfinite(a) || a <= 0.0) {
      throw Error(ErrorKind::WeightsNotMonotone,
                  "weights must be positive (a_" + std::to_string(i + 1) +
                      " is not)");
    }
    if (i > 0 && a > rule.weights[i - 1] + kWeightOrderTolerance) {
      throw Error(ErrorKind::WeightsNotMonotone,
                  "weights must be nonincreasing (a_" + std::to_string(i + 1) +
                      " > a_" + std::to_string(i) + ")");
    }
  }
  const double sum = std::accumulate(rule.weights.begin(), rule.weights.end(), 0.0);
  if (std::abs(sum - 1.0) > kWeightSumTolerance) {
    throw Error(ErrorKind::WeightsNotNormalized,
                "weights sum to " + std::to_string(sum) + ", expected 1");
  }
  const double even = 1.0 / static_cast<double>(k);
  const bool uniform =
      std::all_of(rule.weights.begin(), rule.weights.end(), [&](double a) {
        return std::abs(a - even) <= kWeightOrderTolerance;
      });
  if (uniform) return EvenTopK{k};
  return rule;
}

SharingRule check(const GeneralRule& rule, const BudgetDistribution& dist,
                  const Endowment& endowment) {
  if (rule.amounts.size() != dist.size()) {
    throw Error(ErrorKind::AmountsMismatch,
                "expected " + std::to_string(dist.size()) + " amounts, got " +
                    std::to_string(rule.amounts.size()));
  }
  double sum = 0.0;
  for (double a : rule.amounts) {
    if (!std::isfinite(a) || a < 0.0) {
      throw Error(ErrorKind::AmountsMismatch,
                  "amounts must be finite and nonnegative");
    }
    sum += a;
  }
  const double e = endowment.value();
  if (std::abs(sum - e) > kAmountSumTolerance * std::max(1.0, e)) {
    throw Error(ErrorKind::AmountsMismatch,
                "amounts sum to " + std::to_string(sum) +
                    " but the endowment is " + std::to_string(e));
  }
  return rule;
}

}  // namespace

SharingRule validate_rule(const SharingRule& rule,
                          const BudgetDistribution& dist,
                          const Endowment& endowment) {
  return std::visit(
      [&](const auto& r) { return check(r, dist, endowment); }, rule);
}

}  // namespace cbal
