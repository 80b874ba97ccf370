#include "nsgev/ingest.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>

#include "nsgev/csv.hpp"
#include "nsgev/error.hpp"

namespace nsgev {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Howard Hinnant's civil-date algorithms.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const auto doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  m = static_cast<int>(mp < 10 ? mp + 3 : mp - 9);
  y = static_cast<int>(static_cast<std::int64_t>(yoe) + era * 400 + (m <= 2));
}

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

int digits(const std::string& s, std::size_t pos, std::size_t count, bool& ok) {
  if (pos + count > s.size()) {
    ok = false;
    return 0;
  }
  int v = 0;
  for (std::size_t i = pos; i < pos + count; ++i) {
    if (s[i] < '0' || s[i] > '9') {
      ok = false;
      return 0;
    }
    v = v * 10 + (s[i] - '0');
  }
  return v;
}

std::size_t column_index(const std::vector<std::string>& header, const std::string& name) {
  const auto it = std::find(header.begin(), header.end(), name);
  return it == header.end() ? std::string::npos : static_cast<std::size_t>(it - header.begin());
}

}  // namespace

std::string to_string(BlockKind kind) { return kind == BlockKind::monthly ? "monthly" : "annual"; }

BlockKind block_kind_from_string(const std::string& name) {
  if (name == "monthly") return BlockKind::monthly;
  if (name == "annual") return BlockKind::annual;
  throw DomainError("unknown block kind '" + name + "'");
}

std::int64_t to_epoch_seconds(const CivilTime& t) {
  return days_from_civil(t.year, static_cast<unsigned>(t.month), static_cast<unsigned>(t.day)) * 86400 +
         t.hour * 3600 + t.minute * 60 + t.second;
}

CivilTime from_epoch_seconds(std::int64_t seconds) {
  const std::int64_t days = floor_div(seconds, 86400);
  const auto rem = static_cast<int>(seconds - days * 86400);
  CivilTime t{};
  civil_from_days(days, t.year, t.month, t.day);
  t.hour = rem / 3600;
  t.minute = (rem % 3600) / 60;
  t.second = rem % 60;
  return t;
}

int days_in_month(int year, int month) {
  static constexpr int kDays[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (month < 1 || month > 12) throw DomainError("month must lie in 1..12");
  return month == 2 && is_leap(year) ? 29 : kDays[month - 1];
}

std::optional<std::int64_t> parse_iso8601(const std::string& raw) {
  const std::string text(csv::trim(raw));
  bool ok = true;
  CivilTime t{};
  t.year = digits(text, 0, 4, ok);
  if (!ok || text.size() < 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  t.month = digits(text, 5, 2, ok);
  t.day = digits(text, 8, 2, ok);
  if (!ok || t.month < 1 || t.month > 12 || t.day < 1 || t.day > days_in_month(t.year, t.month)) {
    return std::nullopt;
  }
  std::size_t pos = 10;
  if (pos < text.size() && (text[pos] == 'T' || text[pos] == ' ')) {
    t.hour = digits(text, pos + 1, 2, ok);
    if (!ok || pos + 3 >= text.size() || text[pos + 3] != ':') return std::nullopt;
    t.minute = digits(text, pos + 4, 2, ok);
    pos += 6;
    if (pos < text.size() && text[pos] == ':') {
      t.second = digits(text, pos + 1, 2, ok);
      pos += 3;
    }
    if (!ok || t.hour > 23 || t.minute > 59 || t.second > 59) return std::nullopt;
  }
  if (pos < text.size() && text[pos] == 'Z') ++pos;
  if (pos != text.size()) return std::nullopt;
  return to_epoch_seconds(t);
}

std::string format_iso8601(std::int64_t seconds) {
  const CivilTime t = from_epoch_seconds(seconds);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ", t.year, t.month, t.day, t.hour, t.minute,
                t.second);
  return buf;
}

RawSeries parse_series(std::istream& in, const ColumnMap& columns) {
  RawSeries series;
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = csv::trim(line);
    if (t.empty() || t.front() == '#') continue;
    header = csv::split(t);
    break;
  }
  if (header.empty()) throw ParseError("missing header row", line_no);
  const std::size_t time_col = column_index(header, columns.time);
  const std::size_t value_col = column_index(header, columns.value);
  const std::size_t scenario_col = column_index(header, columns.scenario);
  if (time_col == std::string::npos) throw ParseError("missing column '" + columns.time + "'", line_no);
  if (value_col == std::string::npos) throw ParseError("missing column '" + columns.value + "'", line_no);

  bool have_scenario = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = csv::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto fields = csv::split(t);
    if (fields.size() != header.size()) {
      throw ParseError("expected " + std::to_string(header.size()) + " fields, found " +
                           std::to_string(fields.size()),
                       line_no);
    }
    const auto when = parse_iso8601(fields[time_col]);
    if (!when) throw ParseError("unparseable timestamp '" + fields[time_col] + "'", line_no);
    double value = kNaN;
    if (!csv::is_missing_token(fields[value_col])) {
      const auto v = csv::parse_double(fields[value_col]);
      if (!v || !std::isfinite(*v)) throw ParseError("unparseable value '" + fields[value_col] + "'", line_no);
      value = *v;
    }
    if (!series.times.empty() && *when <= series.times.back()) {
      throw OrderingError(*when == series.times.back() ? "duplicate timestamp" : "timestamps not increasing",
                          line_no);
    }
    if (scenario_col != std::string::npos) {
      const std::string& s = fields[scenario_col];
      if (!have_scenario) {
        series.scenario = s;
        have_scenario = true;
      } else if (s != series.scenario) {
        throw ParseError("mixed scenarios in one series ('" + series.scenario + "' and '" + s + "')", line_no);
      }
    }
    series.times.push_back(*when);
    series.values.push_back(value);
  }

  if (columns.step_seconds) {
    if (*columns.step_seconds <= 0) throw DomainError("sampling step must be positive");
    series.step_seconds = *columns.step_seconds;
  } else if (series.times.size() >= 2) {
    std::map<std::int64_t, std::size_t> counts;
    for (std::size_t i = 1; i < series.times.size(); ++i) ++counts[series.times[i] - series.times[i - 1]];
    series.step_seconds =
        std::max_element(counts.begin(), counts.end(), [](const auto& a, const auto& b) { return a.second < b.second; })
            ->first;
  }
  return series;
}

RawSeries parse_series(const std::string& path, const ColumnMap& columns) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open '" + path + "'");
  return parse_series(in, columns);
}

void write_series(std::ostream& out, const RawSeries& series) {
  const bool with_scenario = !series.scenario.empty();
  out << (with_scenario ? "time,hs,scenario\n" : "time,hs\n");
  for (std::size_t i = 0; i < series.size(); ++i) {
    out << format_iso8601(series.times[i]) << ',' << csv::format(series.values[i]);
    if (with_scenario) out << ',' << series.scenario;
    out << '\n';
  }
}

BlockMaximaSeries extract_block_maxima(const RawSeries& series, BlockKind kind, double min_coverage) {
  if (series.size() == 0) throw DomainError("cannot extract maxima from an empty series");
  if (!(min_coverage >= 0.0 && min_coverage <= 1.0)) throw DomainError("min_coverage must lie in [0, 1]");
  if (series.step_seconds <= 0) throw DomainError("sampling step must be positive");

  auto block_of = [kind](std::int64_t t) {
    const CivilTime c = from_epoch_seconds(t);
    return std::pair<int, int>{c.year, kind == BlockKind::monthly ? c.month : 0};
  };
  struct Acc {
    double maximum = kNaN;
    std::size_t observed = 0;
  };
  std::map<std::pair<int, int>, Acc> blocks;
  for (std::size_t i = 0; i < series.size(); ++i) {
    Acc& acc = blocks[block_of(series.times[i])];
    const double v = series.values[i];
    if (std::isnan(v)) continue;
    acc.maximum = acc.observed == 0 ? v : std::max(acc.maximum, v);
    ++acc.observed;
  }

  BlockMaximaSeries out;
  out.kind = kind;
  out.scenario = series.scenario;
  auto first = block_of(series.times.front());
  const auto last = block_of(series.times.back());
  for (auto key = first; key <= last;) {
    const auto it = blocks.find(key);
    const Acc acc = it == blocks.end() ? Acc{} : it->second;
    const int days = kind == BlockKind::monthly ? days_in_month(key.first, key.second) : (is_leap(key.first) ? 366 : 365);
    const double expected = static_cast<double>(days) * 86400.0 / static_cast<double>(series.step_seconds);
    BlockRecord rec;
    rec.year = key.first;
    rec.month = key.second;
    rec.maximum = acc.maximum;
    rec.coverage = std::min(1.0, static_cast<double>(acc.observed) / expected);
    rec.excluded = acc.observed == 0 || rec.coverage < min_coverage;
    out.records.push_back(rec);
    if (kind == BlockKind::monthly) {
      key = key.second == 12 ? std::pair{key.first + 1, 1} : std::pair{key.first, key.second + 1};
    } else {
      key = {key.first + 1, 0};
    }
  }
  return out;
}

BlockMaximaSeries annual_from_monthly(const BlockMaximaSeries& monthly) {
  if (monthly.kind != BlockKind::monthly) throw DomainError("annual aggregation expects monthly blocks");
  struct Acc {
    double maximum = kNaN;
    double coverage = 0.0;
    int included = 0;
  };
  std::map<int, Acc> years;
  for (const auto& r : monthly.records) {
    Acc& acc = years[r.year];
    acc.coverage += r.coverage / 12.0;
    if (!std::isnan(r.maximum)) acc.maximum = std::isnan(acc.maximum) ? r.maximum : std::max(acc.maximum, r.maximum);
    if (!r.excluded) ++acc.included;
  }
  BlockMaximaSeries out;
  out.kind = BlockKind::annual;
  out.scenario = monthly.scenario;
  for (const auto& [year, acc] : years) {
    out.records.push_back({year, 0, acc.maximum, acc.coverage, acc.included != 12 || std::isnan(acc.maximum)});
  }
  return out;
}

std::vector<BlockRecord> BlockMaximaSeries::included() const {
  std::vector<BlockRecord> out;
  for (const auto& r : records) {
    if (!r.excluded && std::isfinite(r.maximum)) out.push_back(r);
  }
  std::stable_sort(out.begin(), out.end(), [](const BlockRecord& a, const BlockRecord& b) {
    return std::pair{a.year, a.month} < std::pair{b.year, b.month};
  });
  return out;
}

std::vector<double> BlockMaximaSeries::included_maxima() const {
  std::vector<double> out;
  for (const auto& r : included()) out.push_back(r.maximum);
  return out;
}

std::vector<DesignPoint> BlockMaximaSeries::included_points() const {
  std::vector<DesignPoint> out;
  for (const auto& r : included()) out.push_back({r.year, r.month});
  return out;
}

void write_block_maxima(std::ostream& out, const BlockMaximaSeries& series) {
  out << "# block_kind: " << to_string(series.kind) << '\n';
  if (!series.scenario.empty()) out << "# scenario: " << series.scenario << '\n';
  out << "year,month,maximum,coverage,excluded\n";
  for (const auto& r : series.records) {
    out << r.year << ',';
    if (r.month != 0) out << r.month;
    out << ',' << csv::format(r.maximum) << ',' << csv::format(r.coverage) << ',' << (r.excluded ? 1 : 0) << '\n';
  }
}

BlockMaximaSeries read_block_maxima(std::istream& in) {
  BlockMaximaSeries series;
  std::optional<BlockKind> kind;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  bool any_month = false;
  bool any_annual = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = csv::trim(line);
    if (t.empty()) continue;
    if (t.front() == '#') {
      const std::string body(csv::trim(t.substr(1)));
      if (body.rfind("block_kind:", 0) == 0) kind = block_kind_from_string(std::string(csv::trim(body.substr(11))));
      if (body.rfind("scenario:", 0) == 0) series.scenario = std::string(csv::trim(body.substr(9)));
      continue;
    }
    const auto fields = csv::split(t);
    if (!header_seen) {
      if (fields.size() < 3 || fields[0] != "year" || fields[1] != "month" || fields[2] != "maximum") {
        throw ParseError("expected header 'year,month,maximum[,coverage,excluded]'", line_no);
      }
      header_seen = true;
      continue;
    }
    if (fields.size() < 3) throw ParseError("too few fields", line_no);
    BlockRecord r;
    const auto year = csv::parse_int(fields[0]);
    if (!year) throw ParseError("bad year '" + fields[0] + "'", line_no);
    r.year = static_cast<int>(*year);
    if (!fields[1].empty()) {
      const auto month = csv::parse_int(fields[1]);
      if (!month || *month < 1 || *month > 12) throw ParseError("bad month '" + fields[1] + "'", line_no);
      r.month = static_cast<int>(*month);
      any_month = true;
    } else {
      any_annual = true;
    }
    if (csv::is_missing_token(fields[2])) {
      r.maximum = kNaN;
    } else {
      const auto v = csv::parse_double(fields[2]);
      if (!v) throw ParseError("bad maximum '" + fields[2] + "'", line_no);
      r.maximum = *v;
    }
    r.coverage = 1.0;
    if (fields.size() > 3 && !fields[3].empty()) {
      const auto c = csv::parse_double(fields[3]);
      if (!c || *c < 0.0 || *c > 1.0) throw ParseError("bad coverage '" + fields[3] + "'", line_no);
      r.coverage = *c;
    }
    if (fields.size() > 4 && !fields[4].empty()) r.excluded = fields[4] == "1" || fields[4] == "true";
    if (std::isnan(r.maximum)) r.excluded = true;
    series.records.push_back(r);
  }
  if (!header_seen) throw ParseError("missing header row", line_no);
  if (any_month && any_annual) throw ParseError("mixture of monthly and annual records", line_no);
  series.kind = kind.value_or(any_month ? BlockKind::monthly : BlockKind::annual);
  if ((series.kind == BlockKind::monthly) != (any_month || series.records.empty())) {
    throw ParseError("block_kind header disagrees with the month column", line_no);
  }
  std::vector<std::pair<int, int>> keys;
  for (const auto& r : series.records) keys.emplace_back(r.year, r.month);
  std::sort(keys.begin(), keys.end());
  if (std::adjacent_find(keys.begin(), keys.end()) != keys.end()) {
    throw ParseError("more than one record for the same block", line_no);
  }
  return series;
}

BlockMaximaSeries read_block_maxima(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open '" + path + "'");
  return read_block_maxima(in);
}

std::uint64_t fingerprint(const BlockMaximaSeries& series) {
  std::uint64_t h = csv::fnv1a(to_string(series.kind));
  for (const auto& r : series.included()) {
    const auto bits = std::bit_cast<std::uint64_t>(r.maximum);
    const std::int64_t key[3] = {r.year, r.month, static_cast<std::int64_t>(bits)};
    h = csv::fnv1a(std::string_view(reinterpret_cast<const char*>(key), sizeof key), h);
  }
  return h;
}

}  // namespace nsgev
