#include "bts/simulation.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bts {

double Rng::uniform() {
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

double companion_spectral_radius(const LinearSystemSpec& spec) {
  const int n = spec.n();
  const int p = spec.order();
  if (p == 0) return 0.0;
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n * p, n * p);
  for (int j = 0; j < p; ++j) companion.block(0, j * n, n, n) = spec.coeffs[j];
  if (p > 1) {
    companion.block(n, 0, n * (p - 1), n * (p - 1)) =
        Eigen::MatrixXd::Identity(n * (p - 1), n * (p - 1));
  }
  Eigen::EigenSolver<Eigen::MatrixXd> eig(companion, /*computeEigenvectors=*/false);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

namespace {

Eigen::MatrixXd noise_cholesky(const LinearSystemSpec& spec) {
  const int n = spec.n();
  Eigen::MatrixXd cov;
  if (spec.noise_corr.size() == 0) {
    cov = spec.noise_sd.array().square().matrix().asDiagonal();
  } else {
    cov = spec.noise_sd.asDiagonal() * spec.noise_corr * spec.noise_sd.asDiagonal();
  }
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("noise covariance is not positive definite");
  }
  return llt.matrixL();
}

}  // namespace

void validate_system(const LinearSystemSpec& spec) {
  const int n = spec.n();
  if (n < 1) throw std::invalid_argument("system has no variables");
  for (const auto& A : spec.coeffs) {
    if (A.rows() != n || A.cols() != n) {
      throw std::invalid_argument("coefficient matrix dimension mismatch");
    }
  }
  if ((spec.noise_sd.array() < 0).any()) {
    throw std::invalid_argument("negative noise standard deviation");
  }
  if (spec.noise_corr.size() != 0) {
    if (spec.noise_corr.rows() != n || spec.noise_corr.cols() != n) {
      throw std::invalid_argument("correlation matrix dimension mismatch");
    }
    if (!spec.noise_corr.isApprox(spec.noise_corr.transpose(), 1e-12)) {
      throw std::invalid_argument("correlation matrix not symmetric");
    }
    for (int i = 0; i < n; ++i) {
      if (std::abs(spec.noise_corr(i, i) - 1.0) > 1e-12) {
        throw std::invalid_argument("correlation matrix diagonal must be 1");
      }
    }
  }
  noise_cholesky(spec);  // positive definiteness
  if (!(companion_spectral_radius(spec) < 1.0)) {
    throw std::runtime_error("spectral radius >= 1");
  }
}

TimeSeriesMatrix simulate_linear(const LinearSystemSpec& spec, int N, std::uint64_t seed) {
  validate_system(spec);
  if (N < 1) throw std::invalid_argument("N must be >= 1");
  const int n = spec.n();
  const int p = spec.order();
  const Eigen::MatrixXd L = noise_cholesky(spec);

  Rng rng(seed);
  Eigen::VectorXd z(n);
  std::vector<Eigen::VectorXd> history(std::max(p, 1), Eigen::VectorXd::Zero(n));

  TimeSeriesMatrix out;
  out.values.resize(N, n);
  const int total = spec.burn_in + N;
  for (int t = 0; t < total; ++t) {
    for (int i = 0; i < n; ++i) z(i) = rng.gaussian();
    Eigen::VectorXd next = L * z;
    for (int j = 0; j < p; ++j) next += spec.coeffs[j] * history[j];
    for (int j = p - 1; j > 0; --j) history[j] = history[j - 1];
    if (p > 0) history[0] = next;
    if (t >= spec.burn_in) out.values.row(t - spec.burn_in) = next.transpose();
  }
  return out;
}

LinearSystemSpec builtin_var2(bool correlated) {
  LinearSystemSpec spec;
  Eigen::MatrixXd A1(4, 4), A2(4, 4);
  A1 << 0.3, 0.0, 0.0, 0.0,
        0.4, 0.0, 0.7, -0.9,
        0.7, -0.6, -0.5, 0.0,
        0.3, -0.2, 0.0, -0.4;
  A2 << -0.5, 0.0, 0.0, 0.2,
        0.0, -0.3, -0.1, 0.0,
        0.0, -0.1, 0.2, 0.4,
        0.0, 0.0, 0.0, 0.6;
  spec.coeffs = {A1, A2};
  spec.noise_sd = Eigen::VectorXd::Constant(4, std::sqrt(0.1));
  if (correlated) {
    Eigen::MatrixXd R(4, 4);
    R << 1.0, 0.6, -0.1, 0.2,
         0.6, 1.0, -0.3, 0.4,
         -0.1, -0.3, 1.0, 0.0,
         0.2, 0.4, 0.0, 1.0;
    spec.noise_corr = R;
  }
  return spec;
}

LinearSystemSpec sample_random_dr_pair(const std::array<int, 4>& k, std::uint64_t seed) {
  for (int kij : k) {
    if (kij < 1 || kij > 3) throw std::invalid_argument("random DR: orders must be in {1,2,3}");
  }
  const int p = std::max(std::max(k[0], k[1]), std::max(k[2], k[3]));
  Rng rng(seed);

  LinearSystemSpec spec;
  spec.noise_sd = Eigen::VectorXd::Constant(2, std::sqrt(0.1));
  for (int attempt = 0; attempt < 1000; ++attempt) {
    spec.coeffs.assign(p, Eigen::MatrixXd::Zero(2, 2));
    for (int eq = 0; eq < 2; ++eq) {
      for (int var = 0; var < 2; ++var) {
        const int order = k[eq * 2 + var];
        for (int j = 0; j < order; ++j) {
          spec.coeffs[j](eq, var) = 2.0 * rng.uniform() - 1.0;
        }
      }
    }
    if (companion_spectral_radius(spec) < 0.95) return spec;
  }
  throw std::runtime_error("random DR: no stationary draw within 1000 attempts");
}

CollinearSystemSpec collinear_system(int which, double c) {
  CollinearSystemSpec spec;
  spec.ar = {-0.76, -0.89, 0.59, 0.62, 0.87, -0.72, -0.61};
  spec.c = c;
  if (which == 1) {
    spec.common_order = 1;
  } else if (which == 2) {
    spec.common_order = 2;
    spec.common_ar2 = -0.60;
  } else {
    throw std::invalid_argument("collinear_system: which must be 1 or 2");
  }
  return spec;
}

TimeSeriesMatrix simulate_collinear(const CollinearSystemSpec& spec, int N, std::uint64_t seed) {
  if (N < 1) throw std::invalid_argument("N must be >= 1");
  if (spec.common_order != 1 && spec.common_order != 2) {
    throw std::invalid_argument("common_order must be 1 or 2");
  }
  if (spec.noise_var <= 0.0) throw std::invalid_argument("noise variance must be positive");
  for (int i = (spec.common_order == 2 ? 1 : 0); i < 7; ++i) {
    if (!(std::abs(spec.ar[i]) < 1.0)) throw std::runtime_error("spectral radius >= 1");
  }
  if (spec.common_order == 2) {
    // roots of z^2 - a1 z - a2 via the 2x2 companion matrix
    const double a1 = spec.ar[0], a2 = spec.common_ar2;
    const double disc = a1 * a1 + 4.0 * a2;
    double radius;
    if (disc >= 0.0) {
      const double s = std::sqrt(disc);
      radius = std::max(std::abs((a1 + s) / 2.0), std::abs((a1 - s) / 2.0));
    } else {
      radius = std::sqrt(-a2);  // complex pair, |z|^2 = -a2
    }
    if (!(radius < 1.0)) throw std::runtime_error("spectral radius >= 1");
  }

  Rng rng(seed);
  const double sd = std::sqrt(spec.noise_var);
  const int total = spec.burn_in + N;

  Eigen::MatrixXd base = Eigen::MatrixXd::Zero(total, 7);
  double y1_prev = 0.0, y1_prev2 = 0.0;
  Eigen::VectorXd prev = Eigen::VectorXd::Zero(7);
  for (int t = 0; t < total; ++t) {
    for (int i = 0; i < 7; ++i) {
      double next;
      if (i == 0 && spec.common_order == 2) {
        next = spec.ar[0] * y1_prev + spec.common_ar2 * y1_prev2 + sd * rng.gaussian();
      } else {
        next = spec.ar[i] * prev(i) + sd * rng.gaussian();
      }
      base(t, i) = next;
    }
    y1_prev2 = y1_prev;
    y1_prev = base(t, 0);
    prev = base.row(t).transpose();
  }

  TimeSeriesMatrix out;
  out.values.resize(N, 8);
  for (int t = 0; t < N; ++t) {
    const int s = spec.burn_in + t;
    out.values(t, 0) = base(s, 0);
    for (int i = 1; i < 7; ++i) out.values(t, i) = base(s, i) + spec.c * base(s, 0);
    out.values(t, 7) = (out.values(t, 1) + out.values(t, 2) + out.values(t, 3)) / 3.0;
  }
  return out;
}

}  // namespace bts
