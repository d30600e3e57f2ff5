#pragma once

#include "bts/design.hpp"

#include <string>

namespace bts {

enum class EstimatorKind { OLS, PCR, PLS, RR };

std::string estimator_name(EstimatorKind kind);
EstimatorKind estimator_from_name(const std::string& name);

/// Estimator with its regularization parameter: q for PCR/PLS, a for RR.
struct EstimatorSpec {
  EstimatorKind kind = EstimatorKind::OLS;
  int q = 0;
  double a = 0.0;

  static EstimatorSpec ols() { return {EstimatorKind::OLS, 0, 0.0}; }
  static EstimatorSpec pcr(int q) { return {EstimatorKind::PCR, q, 0.0}; }
  static EstimatorSpec pls(int q) { return {EstimatorKind::PLS, q, 0.0}; }
  static EstimatorSpec rr(double a) { return {EstimatorKind::RR, 0, a}; }
};

/// Thin SVD of a design matrix, truncated at the rank tolerance, together
/// with the projections of y needed to evaluate any estimator cheaply.
/// Singular values sigma_i < kRankTolerance * sigma_1 are dropped.
struct SvdBasis {
  Eigen::VectorXd sigma;  // rank largest singular values, descending
  Eigen::MatrixXd U;      // N' x rank
  Eigen::MatrixXd V;      // K  x rank
  Eigen::VectorXd uty;    // U^T y
  int rank = 0;
  int n_cols = 0;  // K of the decomposed matrix
};

inline constexpr double kRankTolerance = 1e-10;

SvdBasis decompose(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

/// Coefficients b = V Sigma^-1 Lambda U^T y for the requested estimator.
/// OLS throws on rank-deficient designs; the regularized variants operate on
/// the retained components. For PLS, *pls_q_effective (when given) receives
/// the Krylov dimension actually reached.
Eigen::VectorXd solve_with(const SvdBasis& basis, const EstimatorSpec& spec,
                           int* pls_q_effective = nullptr);

struct FittedModel {
  OrderVector orders;
  int target = 0;
  Eigen::VectorXd coefficients;
  EstimatorSpec estimator;
  double sse = 0.0;
  double bic = 0.0;
  int n_effective = 0;
  Eigen::VectorXd means;     // centering means; empty if the fit was on raw data
  int pls_q_effective = 0;   // PLS only: q reached before Krylov degeneracy
};

FittedModel svd_fit(const DesignPair& design, const EstimatorSpec& spec);

/// The all-zero-orders model: no coefficients, prediction identically zero
/// (the column mean once de-centered).
FittedModel fit_zero_order(const TimeSeriesMatrix& centered, int target);

/// One-step predictions yhat_{target,t+1} for t in [t_begin, t_end), built
/// from the raw series with the model's centering means re-applied.
Eigen::VectorXd predict(const FittedModel& model, const TimeSeriesMatrix& series, int t_begin,
                        int t_end);

/// Convenience: centralize, build the canonical design, fit, and attach the
/// centering means to the model.
FittedModel fit_model(const TimeSeriesMatrix& raw, const OrderVector& orders, int target,
                      const EstimatorSpec& spec);

}  // namespace bts
