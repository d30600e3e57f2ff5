#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace bts {

/// Multivariate series: N rows (time, oldest first) x n columns (variables).
struct TimeSeriesMatrix {
  Eigen::MatrixXd values;
  std::vector<std::string> labels;  // optional column names, size n when present

  int rows() const { return static_cast<int>(values.rows()); }
  int cols() const { return static_cast<int>(values.cols()); }
};

struct CentralizeResult {
  TimeSeriesMatrix series;
  Eigen::VectorXd means;
};

/// Subtract each column mean. The means are returned so predictions can be
/// mapped back to the original level.
CentralizeResult centralize(const TimeSeriesMatrix& series);

}  // namespace bts
