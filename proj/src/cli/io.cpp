#include "cbal/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "cbal/error.hpp"

namespace cbal::io {

namespace {

[[noreturn]] void parse_error(const std::string& source, std::size_t line,
                             const std::string& what) {
  throw Error(ErrorKind::Parse,
              source + ":" + std::to_string(line) + ": " + what);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool parse_double(std::string_view text, double& out) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

// One CSV record; double quotes delimit fields and "" escapes a quote.
std::vector<std::string> split_record(std::string_view line, const std::string& source,
                                      std::size_t line_no) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::string(trim(field)));
      field.clear();
    } else {
      field += c;
    }
  }
  if (quoted) parse_error(source, line_no, "unterminated quoted field");
  fields.push_back(std::string(trim(field)));
  return fields;
}

struct CsvRow {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<CsvRow> rows;

  std::size_t column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    return header.size();
  }
};

// Blank lines and lines starting with '#' are skipped.
CsvTable read_csv(std::string_view text, const std::string& source) {
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  CsvTable table;
  std::size_t line_no = 0;
  bool have_header = false;
  while (!text.empty()) {
    const std::size_t end = text.find('\n');
    std::string_view line = text.substr(0, end);
    text = end == std::string_view::npos ? std::string_view() : text.substr(end + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const std::string_view content = trim(line);
    if (content.empty() || content.front() == '#') continue;
    auto fields = split_record(line, source, line_no);
    if (!have_header) {
      for (auto& f : fields) f = lower(f);
      table.header = std::move(fields);
      have_header = true;
    } else {
      table.rows.push_back({line_no, std::move(fields)});
    }
  }
  if (!have_header) parse_error(source, 1, "empty file, expected a header line");
  return table;
}

std::size_t require_column(const CsvTable& table, std::string_view name,
                           const std::string& source) {
  const std::size_t col = table.column(name);
  if (col == table.header.size()) {
    parse_error(source, 1, "header is missing the '" + std::string(name) + "' column");
  }
  return col;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Parse, path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         lower(s.substr(s.size() - suffix.size())) == suffix;
}

}  // namespace

std::vector<Club> parse_budget_csv(std::string_view text, const std::string& source) {
  const CsvTable table = read_csv(text, source);
  const std::size_t club_col = require_column(table, "club", source);
  const std::size_t budget_col = require_column(table, "budget", source);
  std::vector<Club> clubs;
  for (const CsvRow& row : table.rows) {
    if (row.fields.size() != table.header.size()) {
      parse_error(source, row.line,
                  "expected " + std::to_string(table.header.size()) + " fields, found " +
                      std::to_string(row.fields.size()));
    }
    double budget = 0.0;
    const std::string& raw = row.fields[budget_col];
    if (!parse_double(raw, budget)) {
      parse_error(source, row.line, "budget '" + raw + "' is not a number");
    }
    if (!std::isfinite(budget) || budget <= 0.0) {
      parse_error(source, row.line, "budget must be a positive finite number, got '" + raw + "'");
    }
    clubs.push_back({row.fields[club_col], budget});
  }
  if (clubs.size() < 2) {
    parse_error(source, 1, "need at least 2 clubs, found " + std::to_string(clubs.size()));
  }
  return clubs;
}

std::vector<Club> parse_budget_json(std::string_view text, const std::string& source) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::Parse, source + ": " + e.what());
  }
  if (!doc.is_array()) {
    throw Error(ErrorKind::Parse, source + ": expected a JSON array of clubs");
  }
  std::vector<Club> clubs;
  std::size_t entry = 0;
  for (const auto& item : doc) {
    ++entry;
    const std::string where = source + ": entry " + std::to_string(entry);
    if (!item.is_object() || !item.contains("club") || !item.contains("budget")) {
      throw Error(ErrorKind::Parse, where + ": expected an object with 'club' and 'budget'");
    }
    if (!item["club"].is_string()) {
      throw Error(ErrorKind::Parse, where + ": 'club' must be a string");
    }
    if (!item["budget"].is_number()) {
      throw Error(ErrorKind::Parse, where + ": 'budget' must be a number");
    }
    const double budget = item["budget"].get<double>();
    if (!std::isfinite(budget) || budget <= 0.0) {
      throw Error(ErrorKind::Parse, where + ": budget must be a positive finite number");
    }
    clubs.push_back({item["club"].get<std::string>(), budget});
  }
  if (clubs.size() < 2) {
    throw Error(ErrorKind::Parse,
                source + ": need at least 2 clubs, found " + std::to_string(clubs.size()));
  }
  return clubs;
}

std::vector<Club> read_budget_file(const std::string& path) {
  const std::string text = slurp(path);
  if (ends_with(path, ".json")) return parse_budget_json(text, path);
  if (ends_with(path, ".csv")) return parse_budget_csv(text, path);
  const std::string_view body = trim(text);
  if (!body.empty() && body.front() == '[') return parse_budget_json(text, path);
  return parse_budget_csv(text, path);
}

std::vector<AmountEntry> parse_amounts_csv(std::string_view text, const std::string& source) {
  const CsvTable table = read_csv(text, source);
  const std::size_t club_col = require_column(table, "club", source);
  const std::size_t amount_col = require_column(table, "amount", source);
  std::vector<AmountEntry> entries;
  for (const CsvRow& row : table.rows) {
    if (row.fields.size() != table.header.size()) {
      parse_error(source, row.line, "wrong number of fields");
    }
    double amount = 0.0;
    const std::string& raw = row.fields[amount_col];
    if (!parse_double(raw, amount) || !std::isfinite(amount) || amount < 0.0) {
      parse_error(source, row.line, "amount '" + raw + "' is not a nonnegative number");
    }
    entries.push_back({row.fields[club_col], amount});
  }
  return entries;
}

std::vector<AmountEntry> read_amounts_file(const std::string& path) {
  return parse_amounts_csv(slurp(path), path);
}

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> values;
  while (true) {
    const std::size_t comma = text.find(',');
    const std::string_view item = text.substr(0, comma);
    double v = 0.0;
    if (!parse_double(item, v)) {
      throw Error(ErrorKind::Parse, "'" + std::string(trim(item)) + "' is not a number");
    }
    values.push_back(v);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return values;
}

std::pair<double, double> parse_range(std::string_view text) {
  const std::size_t colon = text.find(':');
  double lo = 0.0;
  double hi = 0.0;
  if (colon == std::string_view::npos || !parse_double(text.substr(0, colon), lo) ||
      !parse_double(text.substr(colon + 1), hi)) {
    throw Error(ErrorKind::Parse, "range '" + std::string(text) + "' is not of the form lo:hi");
  }
  return {lo, hi};
}

std::vector<double> parse_grid(std::string_view spec) {
  spec = trim(spec);
  if (spec.find(':') == std::string_view::npos) return parse_number_list(spec);

  const std::size_t first = spec.find(':');
  const std::size_t second = spec.find(':', first + 1);
  double lo = 0.0;
  double hi = 0.0;
  double steps_raw = 0.0;
  if (second == std::string_view::npos || !parse_double(spec.substr(0, first), lo) ||
      !parse_double(spec.substr(first + 1, second - first - 1), hi) ||
      !parse_double(spec.substr(second + 1), steps_raw)) {
    throw Error(ErrorKind::Parse, "grid '" + std::string(spec) + "' is not min:max:steps");
  }
  if (!(steps_raw >= 1.0) || steps_raw != std::floor(steps_raw) || steps_raw > 1e8) {
    throw Error(ErrorKind::Parse, "grid steps must be a positive integer");
  }
  if (!(hi > lo)) throw Error(ErrorKind::Parse, "grid max must exceed grid min");
  const auto steps = static_cast<std::size_t>(steps_raw);
  std::vector<double> grid(steps + 1);
  for (std::size_t j = 0; j <= steps; ++j) {
    grid[j] = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(steps);
  }
  grid.back() = hi;
  return grid;
}

std::string format_exact(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string format_fixed(double value, int decimals) {
  char buf[64];
  const auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, decimals);
  return std::string(buf, ptr);
}

void write_sweep_csv(std::ostream& out, const SweepResult& sweep, bool delta_in_points) {
  out << "E,hhi_points,band,delta\n";
  for (const SweepRow& row : sweep.rows) {
    const double delta = delta_in_points ? to_points(row.delta) : row.delta;
    out << format_exact(row.endowment) << ',' << format_exact(row.hhi_points) << ','
        << to_string(row.band) << ',' << format_exact(delta) << '\n';
  }
}

std::vector<SweepCsvRow> parse_sweep_csv(std::string_view text, const std::string& source) {
  const CsvTable table = read_csv(text, source);
  const std::size_t e_col = require_column(table, "e", source);
  const std::size_t h_col = require_column(table, "hhi_points", source);
  const std::size_t b_col = require_column(table, "band", source);
  const std::size_t d_col = require_column(table, "delta", source);
  std::vector<SweepCsvRow> rows;
  for (const CsvRow& row : table.rows) {
    if (row.fields.size() != table.header.size()) {
      parse_error(source, row.line, "wrong number of fields");
    }
    SweepCsvRow parsed;
    parsed.band = row.fields[b_col];
    if (!parse_double(row.fields[e_col], parsed.endowment) ||
        !parse_double(row.fields[h_col], parsed.hhi_points) ||
        !parse_double(row.fields[d_col], parsed.delta)) {
      parse_error(source, row.line, "malformed number");
    }
    rows.push_back(std::move(parsed));
  }
  return rows;
}

}  // namespace cbal::io
