#include "bts/estimators.hpp"

#include "bts/selection.hpp"

#include <Eigen/SVD>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace bts {

std::string estimator_name(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::OLS: return "ols";
    case EstimatorKind::PCR: return "pcr";
    case EstimatorKind::PLS: return "pls";
    case EstimatorKind::RR: return "rr";
  }
  return "?";
}

EstimatorKind estimator_from_name(const std::string& name) {
  if (name == "ols" || name == "OLS") return EstimatorKind::OLS;
  if (name == "pcr" || name == "PCR") return EstimatorKind::PCR;
  if (name == "pls" || name == "PLS") return EstimatorKind::PLS;
  if (name == "rr" || name == "RR") return EstimatorKind::RR;
  throw std::invalid_argument("unknown estimator: " + name);
}

SvdBasis decompose(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const int K = static_cast<int>(X.cols());

  int rank = 0;
  if (K > 0 && sv.size() > 0) {
    const double cutoff = kRankTolerance * sv(0);
    while (rank < sv.size() && sv(rank) > cutoff && sv(rank) > 0.0) ++rank;
  }

  SvdBasis basis;
  basis.n_cols = K;
  basis.rank = rank;
  basis.sigma = sv.head(rank);
  basis.U = svd.matrixU().leftCols(rank);
  basis.V = svd.matrixV().leftCols(rank);
  basis.uty = basis.U.transpose() * y;
  return basis;
}

namespace {

// PLS shrinkage diagonal. Work entirely in the V-coordinates of the rank-r
// SVD: X^T y has coordinates sigma_i * uty_i there and X^T X is
// diag(sigma^2), so the Krylov basis W_q and the Ritz values theta_j come
// from r-dimensional vectors instead of K-dimensional ones.
Eigen::VectorXd pls_lambda(const SvdBasis& basis, int q, int* q_effective) {
  const int r = basis.rank;
  const Eigen::ArrayXd sig2 = basis.sigma.array().square();

  Eigen::MatrixXd W(r, std::min(q, r));
  Eigen::VectorXd v = (basis.sigma.array() * basis.uty.array()).matrix();  // X^T y coords
  int q_eff = 0;
  for (int j = 0; j < std::min(q, r); ++j) {
    const double norm_in = v.norm();
    if (!(norm_in > 0.0)) break;
    // modified Gram-Schmidt, two passes
    for (int pass = 0; pass < 2; ++pass) {
      for (int m = 0; m < q_eff; ++m) v -= W.col(m).dot(v) * W.col(m);
    }
    const double norm_out = v.norm();
    if (norm_out < 1e-12 * norm_in) break;  // Krylov space exhausted
    W.col(q_eff) = v / norm_out;
    ++q_eff;
    v = (sig2 * W.col(q_eff - 1).array()).matrix();  // next Krylov direction
  }
  if (q_effective) *q_effective = q_eff;

  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(r);
  if (q_eff == 0) return lambda;

  Eigen::MatrixXd Wq = W.leftCols(q_eff);
  Eigen::MatrixXd ritz = Wq.transpose() * sig2.matrix().asDiagonal() * Wq;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(ritz);
  const Eigen::VectorXd& theta = eig.eigenvalues();

  for (int i = 0; i < r; ++i) {
    double prod = 1.0;
    for (int j = 0; j < q_eff; ++j) prod *= 1.0 - sig2(i) / theta(j);
    lambda(i) = 1.0 - prod;
  }
  return lambda;
}

}  // namespace

Eigen::VectorXd solve_with(const SvdBasis& basis, const EstimatorSpec& spec, int* pls_q_effective) {
  const int r = basis.rank;
  const int K = basis.n_cols;
  if (pls_q_effective) *pls_q_effective = 0;

  switch (spec.kind) {
    case EstimatorKind::OLS: {
      if (r < K) {
        throw std::runtime_error("rank-deficient design; use regularization");
      }
      return basis.V * (basis.uty.array() / basis.sigma.array()).matrix();
    }
    case EstimatorKind::PCR: {
      if (spec.q < 1 || spec.q > K) throw std::invalid_argument("PCR: q must be in [1, K]");
      const int use = std::min(spec.q, r);
      return basis.V.leftCols(use) *
             (basis.uty.head(use).array() / basis.sigma.head(use).array()).matrix();
    }
    case EstimatorKind::RR: {
      if (spec.a < 0.0) throw std::invalid_argument("RR: a must be non-negative");
      Eigen::ArrayXd sig = basis.sigma.array();
      // lambda_i / sigma_i = sigma_i / (sigma_i^2 + a)
      return basis.V * (sig / (sig.square() + spec.a) * basis.uty.array()).matrix();
    }
    case EstimatorKind::PLS: {
      if (spec.q < 1 || spec.q > K) throw std::invalid_argument("PLS: q must be in [1, K]");
      int q_eff = 0;
      Eigen::VectorXd lambda = pls_lambda(basis, spec.q, &q_eff);
      if (pls_q_effective) *pls_q_effective = q_eff;
      return basis.V *
             (lambda.array() / basis.sigma.array() * basis.uty.array()).matrix();
    }
  }
  throw std::logic_error("unreachable estimator kind");
}

FittedModel svd_fit(const DesignPair& design, const EstimatorSpec& spec) {
  if (design.n_cols() < 1) throw std::invalid_argument("empty design; use fit_zero_order");
  SvdBasis basis = decompose(design.X, design.y);

  FittedModel model;
  model.orders = design.orders;
  model.target = design.target;
  model.estimator = spec;
  model.n_effective = design.n_rows();
  model.coefficients = solve_with(basis, spec, &model.pls_q_effective);
  model.sse = (design.y - design.X * model.coefficients).squaredNorm();
  model.bic = bic(model.sse, model.n_effective, design.n_cols());
  return model;
}

FittedModel fit_zero_order(const TimeSeriesMatrix& centered, int target) {
  if (centered.rows() < 1 || target < 0 || target >= centered.cols()) {
    throw std::invalid_argument("fit_zero_order: bad input");
  }
  FittedModel model;
  model.orders = zero_orders(centered.cols(), 0);
  model.target = target;
  model.estimator = EstimatorSpec::ols();
  model.n_effective = centered.rows();
  model.coefficients.resize(0);
  model.sse = centered.values.col(target).squaredNorm();
  model.bic = bic(model.sse, model.n_effective, 0);
  return model;
}

Eigen::VectorXd predict(const FittedModel& model, const TimeSeriesMatrix& series, int t_begin,
                        int t_end) {
  const int N = series.rows();
  const int max_k = model.orders.max_order();
  if (t_begin < max_k - 1 || t_end > N - 1 || t_begin > t_end) {
    throw std::out_of_range("prediction index out of range");
  }
  const bool centered_fit = model.means.size() > 0;
  const double target_mean = centered_fit ? model.means(model.target) : 0.0;

  Eigen::VectorXd out(t_end - t_begin);
  for (int t = t_begin; t < t_end; ++t) {
    double acc = target_mean;
    int col = 0;
    for (int v = 0; v < model.orders.size(); ++v) {
      const double mean_v = centered_fit ? model.means(v) : 0.0;
      for (int lag = 0; lag < model.orders.orders[v]; ++lag) {
        acc += model.coefficients(col++) * (series.values(t - lag, v) - mean_v);
      }
    }
    out(t - t_begin) = acc;
  }
  return out;
}

FittedModel fit_model(const TimeSeriesMatrix& raw, const OrderVector& orders, int target,
                      const EstimatorSpec& spec) {
  CentralizeResult centered = centralize(raw);
  FittedModel model;
  if (orders.total() == 0) {
    model = fit_zero_order(centered.series, target);
    model.orders = orders;
  } else {
    model = svd_fit(build_design(centered.series, orders, target), spec);
  }
  model.means = centered.means;
  return model;
}

}  // namespace bts
