#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nsgev/spline.hpp"

namespace nsgev {

// Point series of significant wave height. Times are UTC seconds since the
// Unix epoch; missing values are NaN and are kept in place.
struct RawSeries {
  std::vector<std::int64_t> times;
  std::vector<double> values;
  std::int64_t step_seconds = 3 * 3600;
  std::string scenario;

  [[nodiscard]] std::size_t size() const { return times.size(); }
};

struct ColumnMap {
  std::string time = "time";
  std::string value = "hs";
  std::string scenario = "scenario";
  // Nominal sampling interval; inferred as the most common spacing when unset.
  std::optional<std::int64_t> step_seconds;
};

enum class BlockKind { monthly, annual };

[[nodiscard]] std::string to_string(BlockKind kind);
[[nodiscard]] BlockKind block_kind_from_string(const std::string& name);

struct BlockRecord {
  int year = 0;
  int month = 0;  // 1..12, or 0 for an annual block
  double maximum = 0.0;  // NaN when the block holds no observation
  double coverage = 0.0;
  bool excluded = false;
};

struct BlockMaximaSeries {
  std::vector<BlockRecord> records;
  BlockKind kind = BlockKind::monthly;
  std::string scenario;

  // Records that enter likelihoods, sorted by (year, month).
  [[nodiscard]] std::vector<BlockRecord> included() const;
  [[nodiscard]] std::vector<double> included_maxima() const;
  [[nodiscard]] std::vector<DesignPoint> included_points() const;
};

inline constexpr double kDefaultMinCoverage = 0.8;

// Civil calendar helpers on UTC epoch seconds.
struct CivilTime {
  int year;
  int month;
  int day;
  int hour;
  int minute;
  int second;
};
[[nodiscard]] std::int64_t to_epoch_seconds(const CivilTime& t);
[[nodiscard]] CivilTime from_epoch_seconds(std::int64_t seconds);
[[nodiscard]] int days_in_month(int year, int month);
// Accepts YYYY-MM-DD, optionally followed by [T ]HH:MM[:SS] and a trailing Z.
[[nodiscard]] std::optional<std::int64_t> parse_iso8601(const std::string& text);
[[nodiscard]] std::string format_iso8601(std::int64_t seconds);

RawSeries parse_series(std::istream& in, const ColumnMap& columns = {});
RawSeries parse_series(const std::string& path, const ColumnMap& columns = {});
void write_series(std::ostream& out, const RawSeries& series);

BlockMaximaSeries extract_block_maxima(const RawSeries& series, BlockKind kind,
                                       double min_coverage = kDefaultMinCoverage);

// Annual blocks from monthly ones; a year is excluded unless all twelve
// months are present and included.
BlockMaximaSeries annual_from_monthly(const BlockMaximaSeries& monthly);

// CSV: year,month,maximum,coverage,excluded (month empty for annual blocks).
void write_block_maxima(std::ostream& out, const BlockMaximaSeries& series);
BlockMaximaSeries read_block_maxima(std::istream& in);
BlockMaximaSeries read_block_maxima(const std::string& path);

// Order-independent FNV-1a digest of the included records.
[[nodiscard]] std::uint64_t fingerprint(const BlockMaximaSeries& series);

}  // namespace nsgev
