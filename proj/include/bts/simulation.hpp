#pragma once

#include "bts/time_series.hpp"

#include <array>
#include <cstdint>
#include <random>
#include <vector>

namespace bts {

/// Deterministic RNG: mt19937_64 uniforms with a Box-Muller Gaussian on top,
/// so identical seeds give bit-identical streams on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform();   // [0, 1)
  double gaussian();  // N(0, 1)

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// y_{t+1} = A_1 y_t + ... + A_p y_{t-p+1} + e_{t+1}, with e = L z for
/// L the Cholesky factor of diag(sd) * R * diag(sd).
struct LinearSystemSpec {
  std::vector<Eigen::MatrixXd> coeffs;  // A_1..A_p, each n x n
  Eigen::VectorXd noise_sd;             // per-variable noise standard deviation
  Eigen::MatrixXd noise_corr;           // R; empty means identity
  int burn_in = 500;

  int n() const { return static_cast<int>(noise_sd.size()); }
  int order() const { return static_cast<int>(coeffs.size()); }
};

/// Spectral radius of the companion matrix; < 1 means stationary.
double companion_spectral_radius(const LinearSystemSpec& spec);

/// Throws on non-stationary specs or malformed correlation matrices.
void validate_system(const LinearSystemSpec& spec);

TimeSeriesMatrix simulate_linear(const LinearSystemSpec& spec, int N, std::uint64_t seed);

/// The 4-variable VAR(2) benchmark system, optionally with correlated noise.
LinearSystemSpec builtin_var2(bool correlated);

/// Random bivariate DR system with the requested per-equation lag structure
/// k = {k11, k12, k21, k22}, each in {1,2,3}. Coefficients are drawn uniform
/// in [-1,1] and redrawn until the companion spectral radius is below 0.95.
LinearSystemSpec sample_random_dr_pair(const std::array<int, 4>& k, std::uint64_t seed);

/// Seven AR base series; series 2..6 get c * series 1 superimposed and the
/// eighth series is the mean of series 2,3,4. common_order selects AR(1) or
/// AR(2) dynamics for the shared component.
struct CollinearSystemSpec {
  std::array<double, 7> ar{};
  double c = 0.0;
  int common_order = 1;
  double common_ar2 = 0.0;  // second-lag coefficient of series 1 when common_order == 2
  double noise_var = 0.1;
  int burn_in = 500;
};

/// The two published 8-series configurations (which = 1 or 2).
CollinearSystemSpec collinear_system(int which, double c);

TimeSeriesMatrix simulate_collinear(const CollinearSystemSpec& spec, int N, std::uint64_t seed);

}  // namespace bts
