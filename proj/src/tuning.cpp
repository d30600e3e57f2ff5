#include "bts/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bts {

std::vector<std::pair<int, int>> cv_fold_bounds(int n_rows, int folds) {
  if (folds < 2) throw std::invalid_argument("cv: folds must be >= 2");
  if (n_rows < folds) throw std::invalid_argument("cv: fewer rows than folds");
  std::vector<std::pair<int, int>> bounds;
  const int base = n_rows / folds;
  int start = 0;
  for (int f = 0; f < folds; ++f) {
    const int len = (f == folds - 1) ? n_rows - start : base;
    bounds.emplace_back(start, len);
    start += len;
  }
  return bounds;
}

namespace {

// Per-fold training factorizations, computed once and reused for every
// parameter value swept during tuning.
struct FoldCache {
  struct Fold {
    SvdBasis basis;
    Eigen::MatrixXd X_test;
    Eigen::VectorXd y_test;
  };
  std::vector<Fold> folds;

  FoldCache(const DesignPair& design, const CvConfig& cfg) {
    const int n = design.n_rows();
    const auto bounds = cv_fold_bounds(n, cfg.folds);
    folds.reserve(bounds.size());
    for (const auto& [start, len] : bounds) {
      Fold f;
      const int n_train = n - len;
      Eigen::MatrixXd X_train(n_train, design.n_cols());
      Eigen::VectorXd y_train(n_train);
      X_train.topRows(start) = design.X.topRows(start);
      y_train.head(start) = design.y.head(start);
      X_train.bottomRows(n_train - start) = design.X.bottomRows(n - start - len);
      y_train.tail(n_train - start) = design.y.tail(n - start - len);
      f.basis = decompose(X_train, y_train);
      f.X_test = design.X.middleRows(start, len);
      f.y_test = design.y.segment(start, len);
      folds.push_back(std::move(f));
    }
  }

  double evaluate(const EstimatorSpec& spec) const {
    double total = 0.0;
    for (const auto& f : folds) {
      Eigen::VectorXd b = solve_with(f.basis, spec);
      total += (f.y_test - f.X_test * b).squaredNorm();
    }
    return total;
  }
};

}  // namespace

double cv_sse(const DesignPair& design, const EstimatorSpec& spec, const CvConfig& cfg) {
  return FoldCache(design, cfg).evaluate(spec);
}

QTuneResult tune_q(const DesignPair& design, EstimatorKind kind, const CvConfig& cfg) {
  if (kind != EstimatorKind::PCR && kind != EstimatorKind::PLS) {
    throw std::invalid_argument("tune_q: estimator must be PCR or PLS");
  }
  const int K = design.n_cols();
  if (K < 1) throw std::invalid_argument("tune_q: empty design");

  FoldCache cache(design, cfg);
  QTuneResult best{1, std::numeric_limits<double>::infinity()};
  for (int q = 1; q <= K; ++q) {
    EstimatorSpec spec = (kind == EstimatorKind::PCR) ? EstimatorSpec::pcr(q)
                                                      : EstimatorSpec::pls(q);
    const double sse = cache.evaluate(spec);
    if (sse < best.sse) {  // ties keep the smallest q
      best = {q, sse};
    }
  }
  return best;
}

RidgeTuneResult tune_ridge(const DesignPair& design, const CvConfig& cfg) {
  if (design.n_cols() < 1) throw std::invalid_argument("tune_ridge: empty design");
  if (cfg.rr_grid_points < 3) throw std::invalid_argument("tune_ridge: need >= 3 grid points");

  FoldCache cache(design, cfg);
  // the grid is anchored at the largest singular value of the full design
  const double sigma1 = decompose(design.X, design.y).sigma(0);

  const int G = cfg.rr_grid_points;
  double lo = 0.0, hi = sigma1;
  RidgeTuneResult res;
  res.sse = std::numeric_limits<double>::infinity();
  double prev_sse = std::numeric_limits<double>::infinity();
  bool converged = false;

  for (int iter = 0; iter < cfg.rr_max_iterations && !converged; ++iter) {
    res.intervals.emplace_back(lo, hi);
    const double step = (hi - lo) / (G - 1);
    int best_j = 0;
    double best_sse = std::numeric_limits<double>::infinity();
    double best_a = lo;
    for (int j = 0; j < G; ++j) {
      const double a = lo + step * j;
      const double sse = cache.evaluate(EstimatorSpec::rr(a));
      if (sse < best_sse) {
        best_sse = sse;
        best_j = j;
        best_a = a;
      }
    }
    res.iterations = iter + 1;
    if (best_sse <= res.sse) {
      res.a = best_a;
      res.sse = best_sse;
    }

    // relative change of the per-iteration minima
    if (best_sse == 0.0 || (iter > 0 && (prev_sse - best_sse) / prev_sse < cfg.rr_rel_tol)) {
      converged = true;
    }
    prev_sse = best_sse;

    // new interval spans the grid neighbours of the minimizer; the minimizer
    // itself becomes the edge when it sits at an endpoint
    lo = (best_j == 0) ? best_a : best_a - step;
    hi = (best_j == G - 1) ? best_a : best_a + step;
  }
  res.cap_hit = !converged;
  return res;
}

EstimatorSpec tune_estimator(const DesignPair& design, EstimatorKind kind, const CvConfig& cfg) {
  switch (kind) {
    case EstimatorKind::OLS: return EstimatorSpec::ols();
    case EstimatorKind::PCR: return EstimatorSpec::pcr(tune_q(design, kind, cfg).q);
    case EstimatorKind::PLS: return EstimatorSpec::pls(tune_q(design, kind, cfg).q);
    case EstimatorKind::RR: return EstimatorSpec::rr(tune_ridge(design, cfg).a);
  }
  throw std::logic_error("unreachable estimator kind");
}

}  // namespace bts
