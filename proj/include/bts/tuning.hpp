#pragma once

#include "bts/estimators.hpp"

#include <utility>
#include <vector>

namespace bts {

struct CvConfig {
  int folds = 10;
  double rr_rel_tol = 1e-6;
  int rr_grid_points = 11;
  int rr_max_iterations = 50;
};

/// Consecutive fold boundaries [start, start+len) over n_rows rows; the last
/// fold absorbs the remainder.
std::vector<std::pair<int, int>> cv_fold_bounds(int n_rows, int folds);

/// Total out-of-fold squared prediction error: fit on all segments but one,
/// predict the held-out segment, summed over all rows.
double cv_sse(const DesignPair& design, const EstimatorSpec& spec, const CvConfig& cfg = {});

struct QTuneResult {
  int q = 1;
  double sse = 0.0;
};

/// Exhaustive scan q = 1..K minimizing cv_sse; ties go to the smallest q.
QTuneResult tune_q(const DesignPair& design, EstimatorKind kind, const CvConfig& cfg = {});

struct RidgeTuneResult {
  double a = 0.0;
  double sse = 0.0;
  int iterations = 0;
  bool cap_hit = false;
  std::vector<std::pair<double, double>> intervals;  // search interval per iteration
};

/// Adaptive grid refinement for the ridge parameter over [0, sigma_1]:
/// 11-point grids, re-gridded around the running minimizer until the
/// relative SSE improvement drops below rr_rel_tol.
RidgeTuneResult tune_ridge(const DesignPair& design, const CvConfig& cfg = {});

/// Tune whatever the estimator kind needs and return the fully-specified
/// spec (OLS passes through unchanged).
EstimatorSpec tune_estimator(const DesignPair& design, EstimatorKind kind, const CvConfig& cfg = {});

}  // namespace bts
