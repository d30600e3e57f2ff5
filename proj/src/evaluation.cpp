#include "bts/evaluation.hpp"

#include "bts/io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bts {

double nmse(const ForecastRecord& rec) {
  const auto m = rec.actuals.size();
  if (m < 2 || rec.predictions.size() != m) {
    throw std::invalid_argument("nmse: need >= 2 aligned actual/prediction pairs");
  }
  const double mean = rec.actuals.mean();
  const double denom = (rec.actuals.array() - mean).square().sum();
  if (denom == 0.0) throw std::runtime_error("constant actuals");
  const double num = (rec.actuals - rec.predictions).squaredNorm();
  return num / denom;
}

DmResult diebold_mariano_losses(const Eigen::VectorXd& sq_loss_a, const Eigen::VectorXd& sq_loss_b,
                                double alpha) {
  const auto m = sq_loss_a.size();
  if (m < 10 || sq_loss_b.size() != m) {
    throw std::invalid_argument("diebold_mariano: need >= 10 aligned losses");
  }
  const Eigen::ArrayXd d = sq_loss_a.array() - sq_loss_b.array();
  const double d_bar = d.mean();
  const double gamma0 = (d - d_bar).square().sum() / static_cast<double>(m);

  DmResult res;
  if (gamma0 == 0.0) {
    if (d_bar == 0.0) return res;  // identical losses: statistic 0, no rejection
    res.statistic = std::copysign(std::numeric_limits<double>::infinity(), d_bar);
    res.p_value = 0.0;
  } else {
    res.statistic = d_bar / std::sqrt(gamma0 / static_cast<double>(m));
    res.p_value = std::erfc(std::abs(res.statistic) / std::sqrt(2.0));
  }
  res.rejected = res.p_value < alpha;
  if (res.rejected) res.winner = (sq_loss_a.mean() < sq_loss_b.mean()) ? 1 : 2;
  return res;
}

DmResult diebold_mariano(const ForecastRecord& a, const ForecastRecord& b, double alpha) {
  const auto m = a.actuals.size();
  if (m < 10) throw std::invalid_argument("diebold_mariano: need >= 10 forecasts");
  if (b.actuals.size() != m || (a.actuals.array() != b.actuals.array()).any()) {
    throw std::invalid_argument("diebold_mariano: records must share identical actuals");
  }
  const Eigen::VectorXd err_a = (a.actuals - a.predictions).array().square();
  const Eigen::VectorXd err_b = (b.actuals - b.predictions).array().square();
  return diebold_mariano_losses(err_a, err_b, alpha);
}

MethodComparison evident_difference(int rejections_first_better, int rejections_second_better,
                                    int realizations) {
  if (realizations < 1) throw std::invalid_argument("evident_difference: need >= 1 realizations");
  MethodComparison cmp;
  cmp.rejections_first_better = rejections_first_better;
  cmp.rejections_second_better = rejections_second_better;
  cmp.non_rejections = realizations - rejections_first_better - rejections_second_better;
  const double total = rejections_first_better + rejections_second_better;
  const double margin = 50.0 * realizations / 1000.0;
  cmp.evident_difference = total >= 0.05 * realizations + margin;
  return cmp;
}

double efficiency_score(const std::vector<ScoreCase>& cases) {
  double score = 0.0;
  for (const auto& c : cases) {
    if (c.sigma_e <= 0.0 || c.sigma_y <= 0.0) {
      throw std::invalid_argument("efficiency_score: sigma_e and sigma_y must be positive");
    }
    const double diff = c.sigma_e * c.sigma_e - c.sigma_ehat * c.sigma_ehat;
    score += diff * diff / (c.sigma_y * c.sigma_y * c.sigma_e * c.sigma_e);
  }
  return score;
}

std::string ProtocolConfig::method_id() const {
  return selection_name(selection) + "_" + estimator_name(estimator);
}

namespace {

// selection + tuning + fit confined to rows [fit_begin, fit_end); one-step
// predictions over t+1 in [eval_begin, eval_end)
ProtocolResult fit_and_forecast(const TimeSeriesMatrix& series, int target,
                                const ProtocolConfig& cfg, int fit_begin, int fit_end,
                                int eval_begin, int eval_end) {
  TimeSeriesMatrix train;
  train.values = series.values.middleRows(fit_begin, fit_end - fit_begin);

  CentralizeResult centered = centralize(train);

  ProtocolResult res;
  if (cfg.selection == SelectionKind::MAX) {
    res.selected = select_max(series.cols(), cfg.k_max);
  } else {
    res.selected =
        run_selection(cfg.selection, centered.series, target, cfg.k_max, cfg.selection_opts)
            .orders;
  }

  if (res.selected.total() == 0) {
    res.model = fit_zero_order(centered.series, target);
    res.model.orders = res.selected;
  } else {
    DesignPair design = build_design(centered.series, res.selected, target);
    EstimatorSpec spec = tune_estimator(design, cfg.estimator, cfg.cv);
    res.model = svd_fit(design, spec);
  }
  res.model.means = centered.means;

  // predictions read raw series rows <= t only; lags may reach into the fit range
  res.record.method_id = cfg.method_id();
  res.record.predictions = predict(res.model, series, eval_begin - 1, eval_end - 1);
  res.record.actuals = series.values.col(target).segment(eval_begin, eval_end - eval_begin);
  return res;
}

}  // namespace

ProtocolResult train_test_protocol(const TimeSeriesMatrix& series, int target,
                                   const ProtocolConfig& cfg) {
  const int N = series.rows();
  if (N < 16) throw std::invalid_argument("train_test_protocol: need N >= 16");
  if (cfg.train_fraction <= 0.0 || cfg.train_fraction >= 1.0) {
    throw std::invalid_argument("train_test_protocol: train_fraction must be in (0,1)");
  }
  const int split = static_cast<int>(std::floor(cfg.train_fraction * N));
  if (split <= cfg.k_max + 1 || split >= N) {
    throw std::invalid_argument("train_test_protocol: degenerate split");
  }
  return fit_and_forecast(series, target, cfg, 0, split, split, N);
}

double RollingResult::median_nmse() const {
  if (nmse.empty()) throw std::invalid_argument("median of empty sample");
  std::vector<double> s = nmse;
  std::sort(s.begin(), s.end());
  const std::size_t m = s.size();
  return (m % 2 == 1) ? s[m / 2] : 0.5 * (s[m / 2 - 1] + s[m / 2]);
}

RollingResult rolling_window_protocol(const TimeSeriesMatrix& series, int target, int window_len,
                                      const ProtocolConfig& cfg) {
  const int N = series.rows();
  if (window_len < cfg.k_max + 2) throw std::invalid_argument("window shorter than k_max + 2");
  if (N < 2 * window_len) throw std::invalid_argument("need at least two windows");

  const auto blocks = period_boundaries(N, window_len);
  RollingResult res;
  for (std::size_t w = 0; w + 1 < blocks.size(); ++w) {
    const auto [fit_begin, fit_len] = blocks[w];
    const auto [eval_begin, eval_len] = blocks[w + 1];
    try {
      ProtocolResult pr = fit_and_forecast(series, target, cfg, fit_begin, fit_begin + fit_len,
                                           eval_begin, eval_begin + eval_len);
      res.nmse.push_back(nmse(pr.record));
      res.failed.push_back(0);
    } catch (const std::exception&) {
      res.nmse.push_back(1.0);  // sentinel: a failed window must not abort the sweep
      res.failed.push_back(1);
    }
  }
  return res;
}

double roc_auc(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("roc_auc: empty sample");
  double wins = 0.0, ties = 0.0;
  for (double xa : a) {
    for (double xb : b) {
      if (xb > xa) wins += 1.0;
      else if (xb == xa) ties += 1.0;
    }
  }
  return (wins + 0.5 * ties) / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

std::vector<std::pair<std::string, double>> percent_change_vs_reference(
    const std::vector<std::pair<std::string, double>>& medians, const std::string& reference) {
  double ref = std::numeric_limits<double>::quiet_NaN();
  for (const auto& [id, value] : medians) {
    if (id == reference) ref = value;
  }
  if (std::isnan(ref)) throw std::invalid_argument("reference method not present");
  if (ref == 0.0) throw std::runtime_error("reference median is zero");
  std::vector<std::pair<std::string, double>> out;
  out.reserve(medians.size());
  for (const auto& [id, value] : medians) {
    out.emplace_back(id, (value - ref) / ref * 100.0);
  }
  return out;
}

}  // namespace bts
