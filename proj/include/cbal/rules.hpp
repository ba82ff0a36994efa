#pragma once

#include "cbal/model.hpp"

namespace cbal {

struct PostAwardDistribution {
  BudgetDistribution base;
  SharingRule rule;  // as validated
  Endowment endowment;
  std::vector<double> awards;  // R_j(E), indexed like base
  BudgetDistribution awarded;  // x_j + R_j(E), re-canonicalized
};

/// Pays out E under `rule` (validated first; validation errors propagate).
PostAwardDistribution apply(const BudgetDistribution& dist,
                            const SharingRule& rule,
                            const Endowment& endowment);

/// HHI of the awarded distribution.
double post_hhi(const BudgetDistribution& dist, const SharingRule& rule,
                const Endowment& endowment);

/// post_hhi - hhi(dist). Positive means the award concentrates the league.
double delta_hhi(const BudgetDistribution& dist, const SharingRule& rule,
                 const Endowment& endowment);

enum class Effect { Hurts, Improves, Neutral };

std::string_view to_string(Effect effect);

/// Width of the neutral band around zero: 1e-12 * max(1, baseline HHI).
double neutral_tolerance(double baseline_hhi);

Effect classify_effect(double delta, double baseline_hhi);

}  // namespace cbal
