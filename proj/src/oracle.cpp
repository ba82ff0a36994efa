#include "cbal/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <random>
#include <thread>

#include "cbal/analysis.hpp"
#include "cbal/error.hpp"
#include "cbal/index.hpp"
#include "cbal/rules.hpp"

namespace cbal::oracle {

namespace {

constexpr double kDirectionTolerance = 1e-12;
constexpr double kUnimodalityTolerance = 1e-13;
constexpr double kCrossingTolerance = 1e-10;

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t index,
                         std::uint64_t tag) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32),
                    static_cast<std::uint32_t>(tag)};
  return std::mt19937_64(seq);
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::clamp(std::exp(u(rng)), lo, hi);
}

// H(X^{k,E}) straight from the definition on a plain vector.
double direct_topk_hhi(std::span<const double> budgets, std::size_t k,
                       double e) {
  double total = 0.0;
  double squares = 0.0;
  for (std::size_t i = 0; i < budgets.size(); ++i) {
    const double v = i < k ? budgets[i] + e / static_cast<double>(k) : budgets[i];
    total += v;
    squares += v * v;
  }
  return squares / (total * total);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void RandomInstanceSpec::validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorKind::InvalidArgument, "random instance spec: " + what);
  };
  if (n_min < 2) fail("n range must start at 2 or more");
  if (n_max < n_min) fail("n range is empty");
  if (!(budget_min > 0.0) || !std::isfinite(budget_max) || budget_max < budget_min) {
    fail("budget range must be positive and nonempty");
  }
  if (!(endowment_min > 0.0) || !std::isfinite(endowment_max) ||
      endowment_max < endowment_min) {
    fail("endowment range must be positive and nonempty");
  }
}

Instance generate_instance(const RandomInstanceSpec& spec, std::size_t index) {
  spec.validate();
  auto rng = make_rng(spec.seed, index, 0);
  std::uniform_int_distribution<std::size_t> pick_n(spec.n_min, spec.n_max);
  const std::size_t n = pick_n(rng);
  std::vector<double> budgets(n);
  for (double& b : budgets) b = log_uniform(rng, spec.budget_min, spec.budget_max);
  const double e = log_uniform(rng, spec.endowment_min, spec.endowment_max);
  const std::uint64_t aux = rng();
  return Instance{index, BudgetDistribution::from_budgets(budgets), e, aux};
}

std::string describe(const Instance& instance) {
  std::string out = "instance " + std::to_string(instance.index) +
                    ": n=" + std::to_string(instance.league.size()) +
                    " E=" + format_double(instance.endowment) + " budgets=[";
  const auto b = instance.league.budgets();
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (i) out += ",";
    out += format_double(b[i]);
  }
  return out + "]";
}

std::size_t brute_k_star(const BudgetDistribution& league, double endowment) {
  if (!(endowment > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "brute_k_star needs E > 0");
  }
  const Endowment e(endowment);
  const double baseline = hhi(league);
  const double tol = neutral_tolerance(baseline);
  std::size_t first = 0;
  for (std::size_t k = 1; k <= league.size(); ++k) {
    const double delta = post_hhi(league, EvenTopK{k}, e) - baseline;
    const bool improving = delta <= tol;
    if (improving && first == 0) first = k;
    if (!improving && first != 0) {
      throw Error(ErrorKind::SingleCrossingViolation,
                  "k = " + std::to_string(first) + " improves but k = " +
                      std::to_string(k) + " raises the HHI by " +
                      format_double(delta));
    }
  }
  if (first == 0) {
    throw Error(ErrorKind::SingleCrossingViolation,
                "no k-top rule improves balance, not even k = n");
  }
  return first;
}

GridScan scan_grid(const BudgetDistribution& league, std::size_t k,
                   double e_max, std::size_t steps) {
  if (k < 1 || k >= league.size()) {
    throw Error(ErrorKind::KOutOfRange, "grid scan needs 1 <= k < n");
  }
  if (!(e_max > 0.0) || !std::isfinite(e_max) || steps < 1000) {
    throw Error(ErrorKind::InvalidArgument,
                "grid scan needs E_max > 0 and at least 1000 steps");
  }
  GridScan scan;
  scan.step = e_max / static_cast<double>(steps);
  scan.values.resize(steps + 1);
  for (std::size_t j = 0; j <= steps; ++j) {
    scan.values[j] =
        direct_topk_hhi(league.budgets(), k, scan.step * static_cast<double>(j));
  }
  scan.argmin = static_cast<std::size_t>(
      std::min_element(scan.values.begin(), scan.values.end()) -
      scan.values.begin());
  double violation = 0.0;
  for (std::size_t j = 0; j + 1 <= scan.argmin && j + 1 < scan.values.size(); ++j) {
    violation = std::max(violation, scan.values[j + 1] - scan.values[j]);
  }
  for (std::size_t j = scan.argmin; j + 1 < scan.values.size(); ++j) {
    violation = std::max(violation, scan.values[j] - scan.values[j + 1]);
  }
  scan.unimodality_violation = violation;
  return scan;
}

double grid_peak(const BudgetDistribution& league, std::size_t k, double e_max,
                 std::size_t steps) {
  return scan_grid(league, k, e_max, steps).argmin_endowment();
}

std::vector<std::vector<double>> random_weight_vectors(std::size_t k,
                                                       std::size_t count,
                                                       std::uint64_t seed) {
  if (k < 2) {
    throw Error(ErrorKind::KOutOfRange, "uneven weights need k >= 2");
  }
  auto rng = make_rng(seed, k, 1);
  std::exponential_distribution<double> draw(1.0);
  const double even = 1.0 / static_cast<double>(k);
  std::vector<std::vector<double>> out;
  out.reserve(count);
  while (out.size() < count) {
    std::vector<double> a(k);
    for (double& v : a) v = draw(rng);
    std::sort(a.begin(), a.end(), std::greater<>());
    double sum = 0.0;
    for (double v : a) sum += v;
    for (double& v : a) v /= sum;
    if (a.back() > 0.0 && a.front() > even + 1e-12) out.push_back(std::move(a));
  }
  return out;
}

std::size_t VerificationReport::failure_count() const {
  std::size_t total = 0;
  for (const auto& p : properties) total += p.failures;
  return total;
}

namespace {

enum Property : std::size_t {
  kDirections,
  kSingleCrossing,
  kEvenBeatsUneven,
  kPeakLocation,
  kThresholdMonotonicity,
  kWeakLeague,
  kPropertyCount,
};

constexpr const char* kPropertyNames[kPropertyCount] = {
    "directions (1-top hurts, n-top improves)",
    "monotone in k, single crossing, k* = brute k*",
    "even k-top beats uneven k-top",
    "peak E* matches grid minimum",
    "E-hat increasing in k, k* nondecreasing in E",
    "one-spot leagues suffer most",
};

struct Tally {
  std::vector<PropertyOutcome> properties;
  std::vector<FailureRecord> failures;
  std::size_t keep = 0;

  explicit Tally(std::size_t keep_failures) : keep(keep_failures) {
    for (const char* name : kPropertyNames) properties.push_back({name});
  }

  void record(Property p, double deviation, bool ok, const Instance& inst,
              const std::string& detail) {
    PropertyOutcome& out = properties[p];
    ++out.checks;
    if (std::isfinite(deviation)) out.max_deviation = std::max(out.max_deviation, deviation);
    if (!ok) {
      ++out.failures;
      if (failures.size() < keep) {
        failures.push_back({out.name, inst.index, detail + "; " + describe(inst)});
      }
    }
  }
};

std::vector<double> endowment_grid(const RandomInstanceSpec& spec,
                                   std::size_t points) {
  std::vector<double> grid;
  if (points < 2 || spec.endowment_min == spec.endowment_max) {
    grid.push_back(spec.endowment_min);
    return grid;
  }
  const double lo = std::log(spec.endowment_min);
  const double hi = std::log(spec.endowment_max);
  for (std::size_t j = 0; j < points; ++j) {
    grid.push_back(std::exp(lo + (hi - lo) * static_cast<double>(j) /
                                     static_cast<double>(points - 1)));
  }
  return grid;
}

void check_instance(const Instance& inst, const VerifyOptions& opt,
                    const std::vector<double>& e_grid, Tally& tally) {
  const BudgetDistribution& x = inst.league;
  const std::size_t n = x.size();
  const Endowment e(inst.endowment);
  const double baseline = hhi(x);
  auto aux = make_rng(inst.aux_seed, inst.index, 2);

  std::vector<double> post(n + 1, 0.0);
  for (std::size_t k = 1; k <= n; ++k) post[k] = post_hhi(x, EvenTopK{k}, e);

  {
    const double d1 = post[1] - baseline;
    const double dn = post[n] - baseline;
    const double dev = std::max({0.0, -d1, dn});
    tally.record(kDirections, dev, dev <= kDirectionTolerance, inst,
                 "delta(k=1)=" + format_double(d1) + " delta(k=n)=" + format_double(dn));
  }

  {
    double dev = 0.0;
    std::string detail;
    bool ok = true;
    for (std::size_t k = 2; k <= n; ++k) {
      const double rise = post[k] - post[k - 1];
      dev = std::max(dev, rise);
      if (rise > kDirectionTolerance) {
        ok = false;
        detail = "H rises from k=" + std::to_string(k - 1) + " to k=" + std::to_string(k);
      }
    }
    const double tol = neutral_tolerance(baseline);
    for (std::size_t k = 1; k <= n && ok; ++k) {
      const bool closed = improves(x, k, e);
      const double delta = post[k] - baseline;
      const auto c = classify_k(x, k);
      const bool by_class =
          c.kind == KClassification::Kind::AlwaysImproves ||
          (c.kind == KClassification::Kind::Threshold && inst.endowment <= c.e_hat);
      if ((closed && delta > tol) || (!closed && delta < -tol) || closed != by_class) {
        ok = false;
        detail = "improves() disagrees with delta/classification at k=" + std::to_string(k);
      }
    }
    if (ok) {
      try {
        const std::size_t brute = brute_k_star(x, inst.endowment);
        const std::size_t closed = k_star(x, e);
        if (brute != closed) {
          ok = false;
          detail = "k*=" + std::to_string(closed) + " brute=" + std::to_string(brute);
        }
      } catch (const Error& err) {
        ok = false;
        detail = err.what();
      }
    }
    tally.record(kSingleCrossing, dev, ok, inst, detail);
  }

  if (opt.weight_vectors > 0) {
    std::uniform_int_distribution<std::size_t> pick_k(2, n);
    const std::size_t k = pick_k(aux);
    double dev = 0.0;
    for (const auto& a : random_weight_vectors(k, opt.weight_vectors, aux())) {
      const double gap = post[k] - post_hhi(x, WeightedTopK{a}, e);
      dev = std::max(dev, gap);
    }
    tally.record(kEvenBeatsUneven, dev, dev <= kDirectionTolerance, inst,
                 "even k-top exceeds a weighted rule at k=" + std::to_string(k) +
                     " by " + format_double(dev));
  }

  if (opt.peak_steps > 0) {
    std::uniform_int_distribution<std::size_t> pick_k(1, n - 1);
    const std::size_t k = pick_k(aux);
    const PeakLocation peak = e_star(x, k);
    const double e_max = 2.0 * peak.endowment + x.total();
    const GridScan scan = scan_grid(x, k, e_max, opt.peak_steps);
    const double distance = std::abs(scan.argmin_endowment() - peak.endowment);
    const double steps_off = distance / scan.step;
    bool ok = !peak.always_decreasing() && steps_off <= 1.0 + 1e-9 &&
              scan.unimodality_violation <= kUnimodalityTolerance;
    if (peak.endowment == 0.0 && scan.argmin != 0) ok = false;
    tally.record(kPeakLocation, steps_off, ok, inst,
                 "k=" + std::to_string(k) + " E*=" + format_double(peak.endowment) +
                     " grid argmin=" + format_double(scan.argmin_endowment()) +
                     " unimodality violation=" +
                     format_double(scan.unimodality_violation));
  }

  {
    bool ok = true;
    double dev = 0.0;
    std::string detail;
    double previous = -1.0;
    std::size_t previous_k = 0;
    for (std::size_t k = 1; k <= n; ++k) {
      const auto c = classify_k(x, k);
      if (c.kind != KClassification::Kind::Threshold) continue;
      if (previous_k != 0 && !(c.e_hat > previous)) {
        ok = false;
        detail = "E-hat(" + std::to_string(k) + ") <= E-hat(" +
                 std::to_string(previous_k) + ")";
      }
      const double at_crossing = post_hhi(x, EvenTopK{k}, Endowment(c.e_hat)) - baseline;
      dev = std::max(dev, std::abs(at_crossing));
      if (std::abs(at_crossing) > kCrossingTolerance) {
        ok = false;
        detail = "delta at E-hat(" + std::to_string(k) + ") is " + format_double(at_crossing);
      }
      previous = c.e_hat;
      previous_k = k;
    }
    std::size_t last = 0;
    for (double grid_e : e_grid) {
      try {
        const std::size_t ks = k_star(x, Endowment(grid_e));
        if (ks < last) {
          ok = false;
          detail = "k* drops to " + std::to_string(ks) + " at E=" + format_double(grid_e);
        }
        last = ks;
      } catch (const Error& err) {
        ok = false;
        detail = err.what();
      }
    }
    tally.record(kThresholdMonotonicity, dev, ok, inst, detail);
  }

  {
    const double d1 = post[1] - baseline;
    double dev = 0.0;
    for (std::size_t k = 2; k <= n; ++k) dev = std::max(dev, (post[k] - baseline) - d1);
    tally.record(kWeakLeague, dev, dev <= kDirectionTolerance, inst,
                 "a wider rule raised the HHI more than the 1-top rule by " +
                     format_double(dev));
  }
}

}  // namespace

VerificationReport verify(const VerifyOptions& options) {
  options.spec.validate();
  const std::vector<double> e_grid =
      endowment_grid(options.spec, options.endowment_grid_points);

  unsigned threads = options.threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(
      std::min<std::size_t>(threads, std::max<std::size_t>(1, options.instances)));

  std::vector<Tally> tallies(threads, Tally(options.max_failures_kept));
  std::vector<std::exception_ptr> errors(threads);
  auto work = [&](unsigned t) {
    // Strided partition; each instance is self-seeded so order is irrelevant.
    try {
      for (std::size_t i = t; i < options.instances; i += threads) {
        const Instance inst =
            generate_instance(options.spec, options.first_instance + i);
        check_instance(inst, options, e_grid, tallies[t]);
      }
    } catch (...) {
      errors[t] = std::current_exception();
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  VerificationReport report;
  report.instances = options.instances;
  report.properties = Tally(0).properties;
  for (const Tally& t : tallies) {
    for (std::size_t p = 0; p < kPropertyCount; ++p) {
      report.properties[p].checks += t.properties[p].checks;
      report.properties[p].failures += t.properties[p].failures;
      report.properties[p].max_deviation =
          std::max(report.properties[p].max_deviation, t.properties[p].max_deviation);
    }
    report.failures.insert(report.failures.end(), t.failures.begin(), t.failures.end());
  }
  std::stable_sort(report.failures.begin(), report.failures.end(),
                   [](const FailureRecord& a, const FailureRecord& b) {
                     return a.instance < b.instance;
                   });
  if (report.failures.size() > options.max_failures_kept) {
    report.failures.resize(options.max_failures_kept);
  }
  return report;
}

}  // namespace cbal::oracle
