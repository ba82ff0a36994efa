#pragma once

// File formats used by the command-line tool.
//
//   budgets, CSV:   header `club,budget`, one club per line
//   budgets, JSON:  [{"club": "...", "budget": 123.4}, ...]
//   amounts, CSV:   header `club,amount` (explicit award per club)
//   sweep output:   header `E,hhi_points,band,delta`
//
// Parse failures throw Error(ErrorKind::Parse) with a "source:line:" prefix.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "cbal/analysis.hpp"
#include "cbal/model.hpp"

namespace cbal::io {

std::vector<Club> parse_budget_csv(std::string_view text, const std::string& source);
std::vector<Club> parse_budget_json(std::string_view text, const std::string& source);

/// Picks CSV or JSON from the extension, falling back to the first
/// non-blank character.
std::vector<Club> read_budget_file(const std::string& path);

struct AmountEntry {
  std::string club;
  double amount = 0.0;
};

std::vector<AmountEntry> parse_amounts_csv(std::string_view text, const std::string& source);
std::vector<AmountEntry> read_amounts_file(const std::string& path);

/// "min:max:steps" (steps intervals, steps + 1 points) or "e1,e2,...".
std::vector<double> parse_grid(std::string_view spec);

/// Comma-separated numbers, e.g. "0.5,0.3,0.2".
std::vector<double> parse_number_list(std::string_view text);

/// "lo:hi" pair, as used by the range flags.
std::pair<double, double> parse_range(std::string_view text);

/// Shortest text that reads back to the same double.
std::string format_exact(double value);
std::string format_fixed(double value, int decimals);

void write_sweep_csv(std::ostream& out, const SweepResult& sweep, bool delta_in_points);

struct SweepCsvRow {
  double endowment = 0.0;
  double hhi_points = 0.0;
  std::string band;
  double delta = 0.0;
};

std::vector<SweepCsvRow> parse_sweep_csv(std::string_view text, const std::string& source);

}  // namespace cbal::io
