#pragma once

#include "bts/time_series.hpp"

#include <string>
#include <utility>
#include <vector>

namespace bts {

struct CsvOptions {
  bool has_header = false;
  bool log_returns = false;  // row t becomes ln(v_t) - ln(v_{t-1})
};

/// Parse a rectangular numeric CSV (RFC-4180 subset, '.' decimal separator).
/// Errors carry 1-based line numbers.
TimeSeriesMatrix ingest_csv(const std::string& path, const CsvOptions& options = {});
TimeSeriesMatrix parse_csv_text(const std::string& text, const CsvOptions& options = {});

/// Emit with 17 significant digits so ingest(emit(m)) is value-exact.
std::string format_csv(const TimeSeriesMatrix& series);
void emit_csv(const TimeSeriesMatrix& series, const std::string& path);

/// Block boundaries [start, start+len) of consecutive periods; the final
/// remainder (< period_len rows) is appended to the last block.
std::vector<std::pair<int, int>> period_boundaries(int n_rows, int period_len);

/// Consecutive non-overlapping blocks of period_len rows. k_max, when given,
/// enforces period_len >= k_max + 2 so every block can be fitted.
std::vector<TimeSeriesMatrix> split_periods(const TimeSeriesMatrix& series, int period_len,
                                            int k_max = 0);

}  // namespace bts
