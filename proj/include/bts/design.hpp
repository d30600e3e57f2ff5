#pragma once

#include "bts/time_series.hpp"

#include <string>
#include <vector>

namespace bts {

/// Per-variable lag counts (k_1,...,k_n). Variable i contributes the lagged
/// values y_{i,t},...,y_{i,t-k_i+1} to the regression; k_i = 0 contributes
/// nothing.
struct OrderVector {
  std::vector<int> orders;
  int k_max = 0;

  int size() const { return static_cast<int>(orders.size()); }
  int total() const;      // K = sum of k_i
  int max_order() const;  // max k_i

  bool operator==(const OrderVector& other) const { return orders == other.orders; }
  std::string to_string() const;  // "(1,1,0,2)"
};

OrderVector zero_orders(int n, int k_max);
OrderVector uniform_orders(int n, int k, int k_max);

/// Lag matrix X (N' x K) with the one-step-ahead response y of the target
/// variable. Row r corresponds to time t = first_t + r and predicts
/// y_{target,t+1}; its columns are variable-major, lag-ascending.
struct DesignPair {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  OrderVector orders;
  int target = 0;   // 0-based column index of the response variable
  int first_t = 0;  // 0-based time of the first design row

  int n_rows() const { return static_cast<int>(X.rows()); }
  int n_cols() const { return static_cast<int>(X.cols()); }
};

/// Canonical design: rows start at the smallest feasible t, max(k_i)-1.
DesignPair build_design(const TimeSeriesMatrix& series, const OrderVector& orders, int target);

/// Design with a caller-fixed first row so different order vectors can share
/// one response sample (required for BIC comparability). Accepts K = 0.
DesignPair build_design_from(const TimeSeriesMatrix& series, const OrderVector& orders, int target,
                             int first_t);

}  // namespace bts
