#include "bts/design.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace bts {

int OrderVector::total() const { return std::accumulate(orders.begin(), orders.end(), 0); }

int OrderVector::max_order() const {
  return orders.empty() ? 0 : *std::max_element(orders.begin(), orders.end());
}

std::string OrderVector::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < orders.size(); ++i) {
    if (i > 0) s += ",";
    s += std::to_string(orders[i]);
  }
  return s + ")";
}

OrderVector zero_orders(int n, int k_max) { return {std::vector<int>(n, 0), k_max}; }

OrderVector uniform_orders(int n, int k, int k_max) { return {std::vector<int>(n, k), k_max}; }

namespace {

void check_orders(const TimeSeriesMatrix& series, const OrderVector& orders, int target) {
  if (orders.size() != series.cols()) {
    throw std::invalid_argument("order vector length does not match variable count");
  }
  if (target < 0 || target >= series.cols()) {
    throw std::invalid_argument("target index out of range");
  }
  for (int k : orders.orders) {
    if (k < 0) throw std::invalid_argument("negative order");
  }
}

}  // namespace

DesignPair build_design_from(const TimeSeriesMatrix& series, const OrderVector& orders, int target,
                             int first_t) {
  check_orders(series, orders, target);
  const int N = series.rows();
  if (first_t < orders.max_order() - 1) {
    throw std::invalid_argument("first_t precedes the deepest requested lag");
  }
  const int n_rows = N - 1 - first_t;
  if (n_rows < 1) {
    throw std::invalid_argument("insufficient length");
  }
  const int K = orders.total();

  DesignPair d;
  d.orders = orders;
  d.target = target;
  d.first_t = first_t;
  d.X.resize(n_rows, K);
  d.y.resize(n_rows);
  for (int r = 0; r < n_rows; ++r) {
    const int t = first_t + r;
    int col = 0;
    for (int v = 0; v < orders.size(); ++v) {
      for (int lag = 0; lag < orders.orders[v]; ++lag) {
        d.X(r, col++) = series.values(t - lag, v);
      }
    }
    d.y(r) = series.values(t + 1, target);
  }
  return d;
}

DesignPair build_design(const TimeSeriesMatrix& series, const OrderVector& orders, int target) {
  if (orders.total() < 1) {
    throw std::invalid_argument("all orders zero; use fit_zero_order");
  }
  return build_design_from(series, orders, target, orders.max_order() - 1);
}

}  // namespace bts
