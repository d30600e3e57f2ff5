#pragma once

#include "bts/estimators.hpp"
#include "bts/selection.hpp"
#include "bts/tuning.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace bts {

struct ForecastRecord {
  Eigen::VectorXd actuals;
  Eigen::VectorXd predictions;
  std::string method_id;
};

/// Sum of squared errors normalized by the actuals' centered sum of squares.
/// 1 is the skill of predicting the mean, 0 a perfect forecast.
double nmse(const ForecastRecord& rec);

struct DmResult {
  double statistic = 0.0;
  double p_value = 1.0;
  bool rejected = false;
  int winner = 0;  // 0 none, 1 first record better, 2 second
};

/// Diebold-Mariano test of equal predictive accuracy under squared-error
/// loss at horizon one: lag-0 variance of the loss differential, two-sided
/// normal reference.
DmResult diebold_mariano(const ForecastRecord& a, const ForecastRecord& b, double alpha = 0.05);

/// Same test taken directly on aligned squared-loss series.
DmResult diebold_mariano_losses(const Eigen::VectorXd& sq_loss_a, const Eigen::VectorXd& sq_loss_b,
                                double alpha = 0.05);

struct MethodComparison {
  int rejections_first_better = 0;
  int rejections_second_better = 0;
  int non_rejections = 0;
  bool evident_difference = false;
};

/// Two methods are evidently different when total rejections reach the 5%
/// chance level plus a margin of 50 per 1000 realizations.
MethodComparison evident_difference(int rejections_first_better, int rejections_second_better,
                                    int realizations);

struct ScoreCase {
  double sigma_e = 0.0;     // true noise sd of the target equation
  double sigma_y = 0.0;     // sd of the target series
  double sigma_ehat = 0.0;  // achieved residual sd
};

/// Efficiency score S = sum (sigma_e^2 - sigma_ehat^2)^2 / (sigma_y sigma_e)^2.
double efficiency_score(const std::vector<ScoreCase>& cases);

struct ProtocolConfig {
  SelectionKind selection = SelectionKind::BTS;
  EstimatorKind estimator = EstimatorKind::OLS;
  int k_max = 5;
  double train_fraction = 0.75;
  CvConfig cv;
  SelectionOptions selection_opts;

  std::string method_id() const;  // e.g. "BTS_ols"
};

struct ProtocolResult {
  ForecastRecord record;
  OrderVector selected;
  FittedModel model;
};

/// Select, tune and fit on the first floor(train_fraction * N) rows, then
/// produce one-step predictions over the remaining rows.
ProtocolResult train_test_protocol(const TimeSeriesMatrix& series, int target,
                                   const ProtocolConfig& cfg);

struct RollingResult {
  std::vector<double> nmse;
  std::vector<std::uint8_t> failed;  // window fit failed; NMSE recorded as 1

  double median_nmse() const;
};

/// Fit on window w, score NMSE on window w+1, slide by one window. The last
/// window absorbs any remainder rows. A failed window fit records the
/// NMSE = 1 sentinel instead of aborting.
RollingResult rolling_window_protocol(const TimeSeriesMatrix& series, int target, int window_len,
                                      const ProtocolConfig& cfg);

/// Mann-Whitney AUC with ties counted half: the probability that a draw from
/// b exceeds a draw from a.
double roc_auc(const std::vector<double>& a, const std::vector<double>& b);

/// Percent change of each method's median NMSE against a reference method.
std::vector<std::pair<std::string, double>> percent_change_vs_reference(
    const std::vector<std::pair<std::string, double>>& medians, const std::string& reference);

}  // namespace bts
