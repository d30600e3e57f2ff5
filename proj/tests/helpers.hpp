#pragma once

#include "bts/design.hpp"
#include "bts/simulation.hpp"

#include <random>

namespace bts::testing {

// bivariate system y1 <- DR(2,1), y2 <- DR(0,1):
//   y1,t+1 = 0.7 y1,t - 0.2 y1,t-1 + 0.5 y2,t + e1
//   y2,t+1 = 0.6 y2,t + e2
inline LinearSystemSpec bivariate_dr21() {
  LinearSystemSpec sys;
  Eigen::MatrixXd A1(2, 2), A2(2, 2);
  A1 << 0.7, 0.5, 0.0, 0.6;
  A2 << -0.2, 0.0, 0.0, 0.0;
  sys.coeffs = {A1, A2};
  sys.noise_sd = Eigen::VectorXd::Constant(2, std::sqrt(0.1));
  return sys;
}

inline LinearSystemSpec white_noise(int n, double sd = 1.0) {
  LinearSystemSpec sys;
  sys.noise_sd = Eigen::VectorXd::Constant(n, sd);
  return sys;
}

// well-conditioned random design with a linear signal plus noise
inline DesignPair random_design(std::uint64_t seed, int rows, int cols, double noise_sd = 0.3) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  DesignPair d;
  d.X.resize(rows, cols);
  Eigen::VectorXd beta(cols);
  for (int j = 0; j < cols; ++j) beta(j) = nd(gen);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) d.X(i, j) = nd(gen);
  }
  d.y = d.X * beta;
  for (int i = 0; i < rows; ++i) d.y(i) += noise_sd * nd(gen);
  d.orders = OrderVector{std::vector<int>(1, cols), cols};
  d.target = 0;
  d.first_t = cols - 1;
  return d;
}

inline TimeSeriesMatrix from_column(std::initializer_list<double> values) {
  TimeSeriesMatrix m;
  m.values.resize(static_cast<Eigen::Index>(values.size()), 1);
  int r = 0;
  for (double v : values) m.values(r++, 0) = v;
  return m;
}

}  // namespace bts::testing
