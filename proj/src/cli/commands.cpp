#include "cbal/cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "cbal/analysis.hpp"
#include "cbal/error.hpp"
#include "cbal/index.hpp"
#include "cbal/io.hpp"
#include "cbal/kernels.hpp"
#include "cbal/oracle.hpp"
#include "cbal/rules.hpp"

namespace cbal::cli {

namespace {

using nlohmann::json;

struct Options {
  std::string input;
  std::string format;
  std::optional<std::size_t> k;
  std::string weights;
  std::string amounts;
  std::optional<double> endowment;
  std::string grid;
  std::string out_path;
  bool points = false;
  std::optional<std::size_t> cr;

  std::uint64_t seed = oracle::RandomInstanceSpec{}.seed;
  std::size_t instances = 10000;
  std::size_t first_instance = 0;
  std::string n_range;
  std::string budget_range;
  std::string endowment_range;
  std::size_t peak_steps = 10000;
  unsigned threads = 0;
};

enum class Format { Table, Csv, Json };

Format output_format(const Options& opt, Format fallback) {
  if (opt.format.empty()) return fallback;
  if (opt.format == "table") return Format::Table;
  if (opt.format == "csv") return Format::Csv;
  if (opt.format == "json") return Format::Json;
  throw Error(ErrorKind::InvalidArgument, "unknown --format '" + opt.format + "'");
}

BudgetDistribution load_league(const Options& opt) {
  if (opt.input.empty()) throw Error(ErrorKind::InvalidArgument, "--input is required");
  return BudgetDistribution::canonicalize(io::read_budget_file(opt.input));
}

Endowment require_endowment(const Options& opt) {
  if (!opt.endowment) throw Error(ErrorKind::InvalidArgument, "--endowment is required");
  return Endowment(*opt.endowment);
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string lpad(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

std::string money(double v) { return io::format_fixed(v, 2); }

int cmd_index(const Options& opt, std::ostream& out) {
  const BudgetDistribution league = load_league(opt);
  const ConcentrationReport r = concentration_report(league, opt.cr);
  switch (output_format(opt, Format::Table)) {
    case Format::Table:
      out << "HHI " << io::format_fixed(r.hhi_points, 1) << ", " << to_string(r.band) << '\n';
      if (r.cr) out << "CR" << r.cr->m << ' ' << io::format_fixed(r.cr->value, 4) << '\n';
      break;
    case Format::Csv:
      out << "hhi_raw,hhi_points,band" << (r.cr ? ",cr_m,cr" : "") << '\n';
      out << io::format_exact(r.hhi_raw) << ',' << io::format_exact(r.hhi_points) << ','
          << to_string(r.band);
      if (r.cr) out << ',' << r.cr->m << ',' << io::format_exact(r.cr->value);
      out << '\n';
      break;
    case Format::Json: {
      json j{{"clubs", league.size()},
             {"hhi_raw", r.hhi_raw},
             {"hhi_points", r.hhi_points},
             {"band", to_string(r.band)}};
      if (r.cr) j["cr"] = {{"m", r.cr->m}, {"value", r.cr->value}};
      out << j.dump(2) << '\n';
      break;
    }
  }
  return kExitOk;
}

SharingRule rule_from(const Options& opt, const BudgetDistribution& league) {
  const int chosen = (opt.k ? 1 : 0) + (opt.weights.empty() ? 0 : 1) +
                     (opt.amounts.empty() ? 0 : 1);
  if (chosen != 1) {
    throw Error(ErrorKind::InvalidArgument,
                "give exactly one of --k, --weights or --amounts");
  }
  if (opt.k) return EvenTopK{*opt.k};
  if (!opt.weights.empty()) return WeightedTopK{io::parse_number_list(opt.weights)};

  const auto entries = io::read_amounts_file(opt.amounts);
  std::vector<double> amounts(league.size(), 0.0);
  std::vector<bool> used(league.size(), false);
  for (const auto& entry : entries) {
    // Duplicate labels are matched in canonical order.
    bool placed = false;
    for (std::size_t i = 0; i < league.size() && !placed; ++i) {
      if (!used[i] && league.clubs()[i].label == entry.club) {
        amounts[i] = entry.amount;
        used[i] = true;
        placed = true;
      }
    }
    if (!placed) {
      throw Error(ErrorKind::AmountsMismatch,
                  opt.amounts + ": club '" + entry.club + "' is not in the league");
    }
  }
  return GeneralRule{amounts};
}

int cmd_apply(const Options& opt, std::ostream& out) {
  const BudgetDistribution league = load_league(opt);
  const Endowment e = require_endowment(opt);
  const PostAwardDistribution post = apply(league, rule_from(opt, league), e);
  const double before = hhi(league);
  const double after = hhi(post.awarded);
  const double delta = after - before;
  const Effect effect = classify_effect(delta, before);
  const double shown_delta = opt.points ? to_points(delta) : delta;

  switch (output_format(opt, Format::Table)) {
    case Format::Table: {
      std::size_t width = 4;
      for (const auto& c : league.clubs()) width = std::max(width, c.label.size());
      out << pad("club", width + 2) << lpad("budget", 12) << lpad("award", 12)
          << lpad("awarded", 12) << '\n';
      for (std::size_t i = 0; i < league.size(); ++i) {
        const double b = league.budget(i);
        out << pad(league.clubs()[i].label, width + 2) << lpad(money(b), 12)
            << lpad(money(post.awards[i]), 12) << lpad(money(b + post.awards[i]), 12) << '\n';
      }
      out << "HHI before " << io::format_fixed(to_points(before), 1) << ", after "
          << io::format_fixed(to_points(after), 1) << " (" << to_string(band(std::min(to_points(after), kPointsScale)))
          << "), delta " << io::format_exact(shown_delta) << " (" << to_string(effect) << ")\n";
      break;
    }
    case Format::Csv:
      out << "club,budget,award,awarded\n";
      for (std::size_t i = 0; i < league.size(); ++i) {
        const double b = league.budget(i);
        out << league.clubs()[i].label << ',' << io::format_exact(b) << ','
            << io::format_exact(post.awards[i]) << ',' << io::format_exact(b + post.awards[i])
            << '\n';
      }
      break;
    case Format::Json: {
      json clubs = json::array();
      for (std::size_t i = 0; i < league.size(); ++i) {
        clubs.push_back({{"club", league.clubs()[i].label},
                         {"budget", league.budget(i)},
                         {"award", post.awards[i]}});
      }
      out << json{{"endowment", e.value()},
                  {"clubs", clubs},
                  {"hhi_before", opt.points ? to_points(before) : before},
                  {"hhi_after", opt.points ? to_points(after) : after},
                  {"delta", shown_delta},
                  {"effect", to_string(effect)}}
                 .dump(2)
          << '\n';
      break;
    }
  }
  return kExitOk;
}

int cmd_thresholds(const Options& opt, std::ostream& out) {
  const BudgetDistribution league = load_league(opt);
  const Endowment e = require_endowment(opt);
  const ThresholdReport report = threshold_report(league, e);
  const std::size_t n = league.size();

  auto e_hat_text = [](const KClassification& c) {
    return c.kind == KClassification::Kind::Threshold ? money(c.e_hat) : std::string("-");
  };
  auto e_star_text = [](const PeakLocation& p) {
    return p.always_decreasing() ? std::string("always-decreasing") : money(p.endowment);
  };

  switch (output_format(opt, Format::Table)) {
    case Format::Table:
      out << "k* = " << report.k_star << " at E = " << io::format_exact(e.value()) << '\n';
      out << lpad("k", 4) << "  " << pad("classification", 18) << lpad("E_hat", 14)
          << lpad("E_star", 20) << '\n';
      for (std::size_t i = 0; i < n; ++i) {
        const auto& c = report.classifications[i];
        out << lpad(std::to_string(c.k), 4) << "  " << pad(std::string(to_string(c.kind)), 18)
            << lpad(e_hat_text(c), 14) << lpad(e_star_text(report.peaks[i]), 20) << '\n';
      }
      break;
    case Format::Csv:
      out << "k,classification,e_hat,e_star,improves\n";
      for (std::size_t i = 0; i < n; ++i) {
        const auto& c = report.classifications[i];
        const auto& p = report.peaks[i];
        out << c.k << ',' << to_string(c.kind) << ','
            << (c.kind == KClassification::Kind::Threshold ? io::format_exact(c.e_hat) : "")
            << ',' << (p.always_decreasing() ? "always-decreasing" : io::format_exact(p.endowment))
            << ',' << (c.k >= report.k_star ? "true" : "false") << '\n';
      }
      break;
    case Format::Json: {
      json rows = json::array();
      for (std::size_t i = 0; i < n; ++i) {
        const auto& c = report.classifications[i];
        const auto& p = report.peaks[i];
        json row{{"k", c.k}, {"classification", to_string(c.kind)}};
        row["e_hat"] = c.kind == KClassification::Kind::Threshold ? json(c.e_hat) : json(nullptr);
        row["e_star"] = p.always_decreasing() ? json("always-decreasing") : json(p.endowment);
        rows.push_back(row);
      }
      out << json{{"endowment", e.value()}, {"k_star", report.k_star}, {"rows", rows}}.dump(2)
          << '\n';
      break;
    }
  }
  return kExitOk;
}

int cmd_sweep(const Options& opt, std::ostream& out) {
  const BudgetDistribution league = load_league(opt);
  if (!opt.k) throw Error(ErrorKind::InvalidArgument, "--k is required");
  if (opt.grid.empty()) throw Error(ErrorKind::InvalidArgument, "--grid is required");
  const std::vector<double> grid = io::parse_grid(opt.grid);
  const SweepResult sweep = sweep_e(league, *opt.k, grid);

  if (!opt.out_path.empty()) {
    std::ofstream file(opt.out_path);
    if (!file) throw Error(ErrorKind::Parse, opt.out_path + ": cannot open for writing");
    io::write_sweep_csv(file, sweep, opt.points);
    file.close();
    if (!file) throw Error(ErrorKind::Parse, opt.out_path + ": write failed");
    out << "wrote " << sweep.rows.size() << " rows to " << opt.out_path << '\n';
    return kExitOk;
  }

  switch (output_format(opt, Format::Csv)) {
    case Format::Csv:
      io::write_sweep_csv(out, sweep, opt.points);
      break;
    case Format::Table:
      out << "k = " << sweep.k << ", baseline HHI " << io::format_fixed(to_points(sweep.baseline_hhi), 1)
          << '\n';
      out << lpad("E", 14) << lpad("HHI", 10) << "  " << pad("band", 16) << lpad("delta", 14) << '\n';
      for (const SweepRow& row : sweep.rows) {
        const double d = opt.points ? to_points(row.delta) : row.delta;
        out << lpad(money(row.endowment), 14) << lpad(io::format_fixed(row.hhi_points, 1), 10)
            << "  " << pad(std::string(to_string(row.band)), 16)
            << lpad(io::format_fixed(d, opt.points ? 1 : 6), 14) << '\n';
      }
      break;
    case Format::Json: {
      json rows = json::array();
      for (const SweepRow& row : sweep.rows) {
        rows.push_back({{"E", row.endowment},
                        {"hhi_points", row.hhi_points},
                        {"band", to_string(row.band)},
                        {"delta", opt.points ? to_points(row.delta) : row.delta}});
      }
      out << json{{"k", sweep.k}, {"baseline_hhi", sweep.baseline_hhi}, {"rows", rows}}.dump(2)
          << '\n';
      break;
    }
  }
  return kExitOk;
}

int cmd_verify(const Options& opt, std::ostream& out) {
  oracle::VerifyOptions v;
  v.spec.seed = opt.seed;
  if (!opt.n_range.empty()) {
    const auto [lo, hi] = io::parse_range(opt.n_range);
    if (lo < 0 || hi < 0 || lo != std::floor(lo) || hi != std::floor(hi)) {
      throw Error(ErrorKind::InvalidArgument, "--n-range needs integers");
    }
    v.spec.n_min = static_cast<std::size_t>(lo);
    v.spec.n_max = static_cast<std::size_t>(hi);
  }
  if (!opt.budget_range.empty()) {
    std::tie(v.spec.budget_min, v.spec.budget_max) = io::parse_range(opt.budget_range);
  }
  if (!opt.endowment_range.empty()) {
    std::tie(v.spec.endowment_min, v.spec.endowment_max) = io::parse_range(opt.endowment_range);
  }
  v.instances = opt.instances;
  v.first_instance = opt.first_instance;
  v.peak_steps = opt.peak_steps;
  v.threads = opt.threads;

  const oracle::VerificationReport report = oracle::verify(v);
  const std::size_t failures = report.failure_count();

  if (output_format(opt, Format::Table) == Format::Json) {
    json props = json::array();
    for (const auto& p : report.properties) {
      props.push_back({{"name", p.name},
                       {"checks", p.checks},
                       {"failures", p.failures},
                       {"max_deviation", p.max_deviation}});
    }
    json fails = json::array();
    for (const auto& f : report.failures) {
      fails.push_back({{"property", f.property}, {"instance", f.instance}, {"detail", f.detail}});
    }
    out << json{{"seed", opt.seed},
                {"instances", report.instances},
                {"properties", props},
                {"failures", fails},
                {"passed", report.passed()}}
               .dump(2)
        << '\n';
  } else {
    out << "seed " << opt.seed << ", kernels " << kernels::to_string(kernels::active_backend())
        << '\n';
    for (const auto& p : report.properties) {
      std::ostringstream dev;
      dev << std::setprecision(3) << p.max_deviation;
      out << (p.failures == 0 ? "ok    " : "FAIL  ") << pad(p.name, 48) << lpad(std::to_string(p.checks), 8)
          << " checks" << lpad(std::to_string(p.failures), 6) << " failures  max deviation "
          << dev.str() << '\n';
    }
    for (const auto& f : report.failures) {
      out << "failure [" << f.property << "] " << f.detail << '\n';
    }
    out << report.properties.size() << " properties, " << report.instances << " instances, "
        << failures << " failures\n";
  }
  return report.passed() ? kExitOk : kExitVerificationFailed;
}

void add_input_options(CLI::App* cmd, Options& opt) {
  cmd->add_option("--input", opt.input, "Budget file (CSV club,budget or JSON)")->required();
  cmd->add_option("--format", opt.format, "Output format")
      ->check(CLI::IsMember({"table", "csv", "json"}));
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Competitive balance of budget distributions under prize-sharing rules"};
  app.require_subcommand(1);
  Options opt;

  auto* index = app.add_subcommand("index", "HHI, concentration band and concentration ratio");
  add_input_options(index, opt);
  index->add_option("--cr", opt.cr, "Also report the m-club concentration ratio");

  auto* apply_cmd = app.add_subcommand("apply", "Pay out an endowment and compare HHI");
  add_input_options(apply_cmd, opt);
  apply_cmd->add_option("--endowment", opt.endowment, "Prize endowment E")->required();
  apply_cmd->add_option("--k", opt.k, "Even split over the k largest clubs");
  apply_cmd->add_option("--weights", opt.weights, "Uneven top-k weights, e.g. 0.5,0.3,0.2");
  apply_cmd->add_option("--amounts", opt.amounts, "CSV club,amount with explicit awards");
  apply_cmd->add_flag("--points", opt.points, "Report HHI values on the 0-10000 scale");

  auto* thresholds = app.add_subcommand("thresholds", "k*, E-hat and E* for every k");
  add_input_options(thresholds, opt);
  thresholds->add_option("--endowment", opt.endowment, "Prize endowment E")->required();

  auto* sweep = app.add_subcommand("sweep", "Post-award HHI over a grid of endowments");
  add_input_options(sweep, opt);
  sweep->add_option("--k", opt.k, "Number of top clubs sharing evenly")->required();
  sweep->add_option("--grid", opt.grid, "min:max:steps or a comma-separated list")->required();
  sweep->add_option("--out", opt.out_path, "Write the CSV here instead of stdout");
  sweep->add_flag("--points", opt.points, "Report delta on the 0-10000 scale");

  auto* verify = app.add_subcommand("verify", "Check the closed forms against brute force");
  verify->add_option("--seed", opt.seed, "Random seed");
  verify->add_option("--instances", opt.instances, "Number of random leagues");
  verify->add_option("--first", opt.first_instance, "Index of the first instance (for replay)");
  verify->add_option("--n-range", opt.n_range, "League size range lo:hi");
  verify->add_option("--budget-range", opt.budget_range, "Budget range lo:hi (log-uniform)");
  verify->add_option("--endowment-range", opt.endowment_range, "Endowment range lo:hi (log-uniform)");
  verify->add_option("--peak-steps", opt.peak_steps, "Grid steps for the peak oracle (>= 1000)");
  verify->add_option("--threads", opt.threads, "Worker threads, 0 = all cores");
  verify->add_option("--format", opt.format, "Output format")
      ->check(CLI::IsMember({"table", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*index) return cmd_index(opt, out);
    if (*apply_cmd) return cmd_apply(opt, out);
    if (*thresholds) return cmd_thresholds(opt, out);
    if (*sweep) return cmd_sweep(opt, out);
    if (*verify) return cmd_verify(opt, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace cbal::cli
