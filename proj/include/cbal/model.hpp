#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace cbal {

struct Club {
  std::string label;
  double budget = 0.0;
};

/// A league's budget vector in canonical order: nonincreasing by budget,
/// ties kept in input order. At least two clubs, every budget finite and
/// strictly positive.
class BudgetDistribution {
 public:
  /// Validates and stable-sorts raw entries. Throws Error with
  /// EmptyOrSingleton, NonfiniteBudget or NonpositiveBudget.
  static BudgetDistribution canonicalize(std::vector<Club> raw);

  /// Convenience for unlabeled data; clubs are named "club1", "club2", ...
  /// in input order.
  static BudgetDistribution from_budgets(std::span<const double> budgets);

  std::size_t size() const noexcept { return clubs_.size(); }
  const std::vector<Club>& clubs() const noexcept { return clubs_; }
  std::span<const double> budgets() const noexcept { return budgets_; }
  double budget(std::size_t i) const { return budgets_.at(i); }

  /// Sum of all budgets (x).
  double total() const;

 private:
  BudgetDistribution() = default;

  std::vector<Club> clubs_;
  std::vector<double> budgets_;  // mirrors clubs_[i].budget
};

/// Prize money flowing into the league. Finite and nonnegative.
class Endowment {
 public:
  explicit Endowment(double value);

  double value() const noexcept { return value_; }

 private:
  double value_;
};

/// Splits E evenly over the k largest clubs.
struct EvenTopK {
  std::size_t k = 1;
};

/// Gives weights[i] * E to the i-th largest club. k is weights.size().
struct WeightedTopK {
  std::vector<double> weights;

  std::size_t k() const noexcept { return weights.size(); }
  /// a1 > 1/k, i.e. the weights are not all equal.
  bool strictly_uneven() const;
};

/// Explicit per-club amounts in canonical order; they must sum to E.
struct GeneralRule {
  std::vector<double> amounts;
};

using SharingRule = std::variant<EvenTopK, WeightedTopK, GeneralRule>;

/// Budget shares x_i / x in canonical order.
std::vector<double> shares(const BudgetDistribution& dist);

/// Checks the rule against the league size and endowment. A uniform weight
/// vector comes back as the equivalent EvenTopK.
SharingRule validate_rule(const SharingRule& rule,
                          const BudgetDistribution& dist,
                          const Endowment& endowment);

}  // namespace cbal
