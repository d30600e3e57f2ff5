#include "bts/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bts {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(field);
      field.clear();
    } else if (ch != '\r') {
      field.push_back(ch);
    }
  }
  fields.push_back(field);
  return fields;
}

double parse_number(const std::string& field, int line_no, int col_no) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = first + field.size();
  while (first != last && (*first == ' ' || *first == '\t')) ++first;
  while (last != first && (last[-1] == ' ' || last[-1] == '\t')) --last;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) {
    throw std::runtime_error("line " + std::to_string(line_no) + ", column " +
                             std::to_string(col_no) + ": cannot parse '" + field +
                             "' as a number");
  }
  return value;
}

}  // namespace

TimeSeriesMatrix parse_csv_text(const std::string& text, const CsvOptions& options) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;

  TimeSeriesMatrix out;
  std::vector<std::vector<double>> rows;
  std::size_t n_cols = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
    auto fields = split_fields(line);
    if (line_no == 1 && options.has_header) {
      out.labels.assign(fields.begin(), fields.end());
      n_cols = fields.size();
      continue;
    }
    if (n_cols == 0) n_cols = fields.size();
    if (fields.size() != n_cols) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": has " +
                               std::to_string(fields.size()) + " fields, expected " +
                               std::to_string(n_cols));
    }
    std::vector<double> row(n_cols);
    for (std::size_t c = 0; c < n_cols; ++c) {
      row[c] = parse_number(fields[c], line_no, static_cast<int>(c + 1));
      if (options.log_returns && row[c] <= 0.0) {
        throw std::runtime_error("line " + std::to_string(line_no) + ", column " +
                                 std::to_string(c + 1) +
                                 ": non-positive value under log_returns");
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("empty input");

  const int N = static_cast<int>(rows.size());
  const int n = static_cast<int>(n_cols);
  if (options.log_returns) {
    if (N < 2) throw std::runtime_error("log_returns needs at least 2 rows");
    out.values.resize(N - 1, n);
    for (int t = 1; t < N; ++t) {
      for (int c = 0; c < n; ++c) {
        out.values(t - 1, c) = std::log(rows[t][c]) - std::log(rows[t - 1][c]);
      }
    }
  } else {
    out.values.resize(N, n);
    for (int t = 0; t < N; ++t) {
      for (int c = 0; c < n; ++c) out.values(t, c) = rows[t][c];
    }
  }
  return out;
}

TimeSeriesMatrix ingest_csv(const std::string& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_csv_text(buffer.str(), options);
}

std::string format_csv(const TimeSeriesMatrix& series) {
  std::string out;
  const int n = series.cols();
  if (!series.labels.empty()) {
    for (int c = 0; c < n; ++c) {
      if (c > 0) out += ',';
      out += series.labels[c];
    }
    out += '\n';
  }
  char buf[40];
  for (int t = 0; t < series.rows(); ++t) {
    for (int c = 0; c < n; ++c) {
      if (c > 0) out += ',';
      std::snprintf(buf, sizeof(buf), "%.17g", series.values(t, c));
      out += buf;
    }
    out += '\n';
  }
  return out;
}

void emit_csv(const TimeSeriesMatrix& series, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << format_csv(series);
}

std::vector<std::pair<int, int>> period_boundaries(int n_rows, int period_len) {
  if (period_len < 1) throw std::invalid_argument("period length must be >= 1");
  if (n_rows < 2 * period_len) {
    throw std::invalid_argument("need at least two periods of data");
  }
  const int blocks = n_rows / period_len;
  std::vector<std::pair<int, int>> out;
  out.reserve(blocks);
  for (int b = 0; b < blocks; ++b) {
    const int start = b * period_len;
    const int len = (b == blocks - 1) ? n_rows - start : period_len;
    out.emplace_back(start, len);
  }
  return out;
}

std::vector<TimeSeriesMatrix> split_periods(const TimeSeriesMatrix& series, int period_len,
                                            int k_max) {
  if (k_max > 0 && period_len < k_max + 2) {
    throw std::invalid_argument("period length must be >= k_max + 2");
  }
  std::vector<TimeSeriesMatrix> out;
  for (const auto& [start, len] : period_boundaries(series.rows(), period_len)) {
    TimeSeriesMatrix block;
    block.values = series.values.middleRows(start, len);
    block.labels = series.labels;
    out.push_back(std::move(block));
  }
  return out;
}

}  // namespace bts
