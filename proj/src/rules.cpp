#include "cbal/rules.hpp"

#include <algorithm>
#include <cmath>

#include "cbal/index.hpp"

namespace cbal {

namespace {

std::vector<double> awards_for(const SharingRule& rule, std::size_t n,
                               double e) {
  std::vector<double> award(n, 0.0);
  if (const auto* even = std::get_if<EvenTopK>(&rule)) {
    const double each = e / static_cast<double>(even->k);
    std::fill_n(award.begin(), even->k, each);
  } else if (const auto* weighted = std::get_if<WeightedTopK>(&rule)) {
    for (std::size_t i = 0; i < weighted->k(); ++i) {
      award[i] = weighted->weights[i] * e;
    }
  } else {
    award = std::get<GeneralRule>(rule).amounts;
  }
  return award;
}

}  // namespace

PostAwardDistribution apply(const BudgetDistribution& dist,
                            const SharingRule& rule,
                            const Endowment& endowment) {
  SharingRule validated = validate_rule(rule, dist, endowment);
  std::vector<double> award =
      awards_for(validated, dist.size(), endowment.value());

  std::vector<Club> clubs = dist.clubs();
  for (std::size_t i = 0; i < clubs.size(); ++i) clubs[i].budget += award[i];

  return PostAwardDistribution{dist, std::move(validated), endowment,
                               std::move(award),
                               BudgetDistribution::canonicalize(std::move(clubs))};
}

double post_hhi(const BudgetDistribution& dist, const SharingRule& rule,
                const Endowment& endowment) {
  return hhi(apply(dist, rule, endowment).awarded);
}

double delta_hhi(const BudgetDistribution& dist, const SharingRule& rule,
                 const Endowment& endowment) {
  return post_hhi(dist, rule, endowment) - hhi(dist);
}

std::string_view to_string(Effect effect) {
  switch (effect) {
    case Effect::Hurts: return "hurts";
    case Effect::Improves: return "improves";
    case Effect::Neutral: return "neutral";
  }
  return "unknown";
}

double neutral_tolerance(double baseline_hhi) {
  return 1e-12 * std::max(1.0, baseline_hhi);
}

Effect classify_effect(double delta, double baseline_hhi) {
  if (std::abs(delta) <= neutral_tolerance(baseline_hhi)) return Effect::Neutral;
  return delta > 0.0 ? Effect::Hurts : Effect::Improves;
}

}  // namespace cbal
