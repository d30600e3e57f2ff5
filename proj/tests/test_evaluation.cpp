#include "bts/evaluation.hpp"
#include "bts/simulation.hpp"

#include "helpers.hpp"

#include "doctest.h"

#include <cmath>

using namespace bts;
using namespace bts::testing;

namespace {

ForecastRecord make_record(const Eigen::VectorXd& actuals, const Eigen::VectorXd& preds,
                           const std::string& id = "m") {
  return {actuals, preds, id};
}

}  // namespace

TEST_SUITE_BEGIN("evaluation");

TEST_CASE("nmse") {
  Rng rng(1);
  Eigen::VectorXd y(50);
  for (int i = 0; i < 50; ++i) y(i) = rng.gaussian();

  SUBCASE("predicting the mean gives exactly 1") {
    Eigen::VectorXd mean_pred = Eigen::VectorXd::Constant(50, y.mean());
    CHECK(nmse(make_record(y, mean_pred)) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("predicting the actuals gives 0") {
    CHECK(nmse(make_record(y, y)) == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("constant actuals are rejected") {
    Eigen::VectorXd flat = Eigen::VectorXd::Constant(20, 3.0);
    CHECK_THROWS_WITH_AS(nmse(make_record(flat, flat)), "constant actuals", std::runtime_error);
  }
  SUBCASE("scale invariance") {
    Eigen::VectorXd p = y;
    for (int i = 0; i < 50; ++i) p(i) += 0.3 * rng.gaussian();
    const double base = nmse(make_record(y, p));
    for (double s : {2.0, -5.0, 1e-3, 1e6}) {
      const double scaled = nmse(make_record(s * y, s * p));
      CHECK(std::abs(scaled - base) <= 1e-12 * base);
    }
  }
}

TEST_CASE("diebold_mariano") {
  Rng rng(2);
  const int m = 200;
  Eigen::VectorXd actual(m);
  for (int i = 0; i < m; ++i) actual(i) = rng.gaussian();

  SUBCASE("identical records: statistic 0, not rejected") {
    Eigen::VectorXd p = actual;
    for (int i = 0; i < m; ++i) p(i) += 0.2 * rng.gaussian();
    DmResult res = diebold_mariano(make_record(actual, p, "a"), make_record(actual, p, "b"));
    CHECK(res.statistic == 0.0);
    CHECK_FALSE(res.rejected);
    CHECK(res.winner == 0);
  }
  SUBCASE("swapping the records negates the statistic exactly") {
    Eigen::VectorXd pa = actual, pb = actual;
    for (int i = 0; i < m; ++i) {
      pa(i) += 0.3 * rng.gaussian();
      pb(i) += 0.4 * rng.gaussian();
    }
    DmResult ab = diebold_mariano(make_record(actual, pa, "a"), make_record(actual, pb, "b"));
    DmResult ba = diebold_mariano(make_record(actual, pb, "b"), make_record(actual, pa, "a"));
    CHECK(ab.statistic == -ba.statistic);
    CHECK(ab.p_value == ba.p_value);
  }
  SUBCASE("equal-skill forecasters reject at roughly the nominal 5% level") {
    Rng local(7);
    int rejections = 0;
    const int R = 1000;
    for (int s = 0; s < R; ++s) {
      Eigen::VectorXd act(m), pa(m), pb(m);
      for (int i = 0; i < m; ++i) {
        act(i) = local.gaussian();
        pa(i) = act(i) + 0.5 * local.gaussian();
        pb(i) = act(i) + 0.5 * local.gaussian();
      }
      if (diebold_mariano(make_record(act, pa, "a"), make_record(act, pb, "b")).rejected) {
        ++rejections;
      }
    }
    CHECK(rejections >= 30);  // 5% of 1000, +/- 2 percentage points
    CHECK(rejections <= 70);
  }
  SUBCASE("a clearly noisier forecaster is rejected against, with the clean one winning") {
    Rng local(8);
    int rejected_with_clean_winner = 0;
    for (int s = 0; s < 100; ++s) {
      Eigen::VectorXd act(m), pa(m), pb(m);
      for (int i = 0; i < m; ++i) {
        act(i) = local.gaussian();
        const double base_err = 0.3 * local.gaussian();
        pa(i) = act(i) + base_err;
        pb(i) = pa(i) + std::sqrt(10.0) * 0.3 * local.gaussian();
      }
      DmResult res = diebold_mariano(make_record(act, pa, "clean"), make_record(act, pb, "noisy"));
      if (res.rejected && res.winner == 1) ++rejected_with_clean_winner;
    }
    CHECK(rejected_with_clean_winner > 95);
  }
}

TEST_CASE("evident_difference") {
  SUBCASE("49 rejections out of 1000 is below the chance level") {
    CHECK_FALSE(evident_difference(25, 24, 1000).evident_difference);
  }
  SUBCASE("100 rejections out of 1000 meets the 50+50 rule") {
    CHECK(evident_difference(60, 40, 1000).evident_difference);
  }
  SUBCASE("scaled rule at R=200: threshold 10+10") {
    CHECK(evident_difference(12, 8, 200).evident_difference);
    CHECK_FALSE(evident_difference(10, 9, 200).evident_difference);
  }
  SUBCASE("counts sum to the realizations") {
    MethodComparison cmp = evident_difference(30, 20, 500);
    CHECK(cmp.rejections_first_better + cmp.rejections_second_better + cmp.non_rejections == 500);
  }
}

TEST_CASE("efficiency_score") {
  SUBCASE("perfect noise recovery scores 0") {
    std::vector<ScoreCase> cases = {{0.3, 1.0, 0.3}, {0.5, 2.0, 0.5}};
    CHECK(efficiency_score(cases) == doctest::Approx(0.0));
  }
  SUBCASE("single-case arithmetic") {
    // sigma_e^2 = 0.1, sigma_ehat^2 = 0.2, sigma_y^2 = 1 -> 0.01 / 0.1 = 0.1
    std::vector<ScoreCase> cases = {{std::sqrt(0.1), 1.0, std::sqrt(0.2)}};
    CHECK(efficiency_score(cases) == doctest::Approx(0.1));
  }
  SUBCASE("non-negative, zero only at equality") {
    std::vector<ScoreCase> cases = {{0.3, 1.0, 0.31}};
    CHECK(efficiency_score(cases) > 0.0);
  }
}

TEST_CASE("train_test_protocol") {
  SUBCASE("N=100 splits into 75 train and 25 test") {
    TimeSeriesMatrix y = simulate_linear(builtin_var2(false), 100, 41);
    ProtocolConfig cfg;
    cfg.selection = SelectionKind::VARB;
    cfg.k_max = 3;
    ProtocolResult res = train_test_protocol(y, 0, cfg);
    CHECK(res.record.actuals.size() == 25);
    CHECK(res.record.predictions.size() == 25);
  }
  SUBCASE("causality: predictions only read rows before the predicted time") {
    TimeSeriesMatrix y = simulate_linear(builtin_var2(false), 120, 42);
    ProtocolConfig cfg;
    cfg.selection = SelectionKind::BTS;
    cfg.k_max = 3;
    ProtocolResult res = train_test_protocol(y, 1, cfg);
    const int split = 90;
    for (int i = 0; i < res.record.predictions.size(); ++i) {
      const int t_pred = split + i;  // index being predicted
      TimeSeriesMatrix poisoned = y;
      for (int t = t_pred; t < y.rows(); ++t) {
        for (int v = 0; v < y.cols(); ++v) poisoned.values(t, v) = 1e9;
      }
      Eigen::VectorXd p = predict(res.model, poisoned, t_pred - 1, t_pred);
      CHECK(p(0) == doctest::Approx(res.record.predictions(i)).epsilon(1e-12));
    }
  }
  SUBCASE("mean NMSE on builtin_var2 y2 at N=400 sits near the published level") {
    // Table value 0.274 at 1000 realizations; 50 seeds give the same level
    double total = 0.0;
    const int R = 50;
    for (int s = 0; s < R; ++s) {
      TimeSeriesMatrix y = simulate_linear(builtin_var2(false), 400, 7000 + s);
      ProtocolConfig cfg;
      cfg.selection = SelectionKind::BTS;
      cfg.k_max = 5;
      total += nmse(train_test_protocol(y, 1, cfg).record);
    }
    CHECK(total / R == doctest::Approx(0.274).epsilon(0.08));
  }
}

TEST_CASE("rolling_window_protocol") {
  SUBCASE("N = 3 * window gives exactly 2 NMSE values") {
    TimeSeriesMatrix y = simulate_linear(builtin_var2(false), 300, 51);
    ProtocolConfig cfg;
    cfg.selection = SelectionKind::VARB;
    cfg.k_max = 3;
    RollingResult res = rolling_window_protocol(y, 0, 100, cfg);
    CHECK(res.nmse.size() == 2);
    CHECK(res.failed.size() == 2);
  }
  SUBCASE("stationary system: median rolling NMSE tracks the train/test level") {
    std::vector<double> rolling, traintest;
    for (int s = 0; s < 50; ++s) {
      TimeSeriesMatrix y = simulate_linear(builtin_var2(false), 400, 8000 + s);
      ProtocolConfig cfg;
      cfg.selection = SelectionKind::VARB;
      cfg.k_max = 3;
      RollingResult roll = rolling_window_protocol(y, 3, 100, cfg);
      for (double v : roll.nmse) rolling.push_back(v);
      traintest.push_back(nmse(train_test_protocol(y, 3, cfg).record));
    }
    std::sort(rolling.begin(), rolling.end());
    std::sort(traintest.begin(), traintest.end());
    const double med_roll = rolling[rolling.size() / 2];
    const double med_tt = traintest[traintest.size() / 2];
    CHECK(std::abs(med_roll - med_tt) < 0.05);
  }
  SUBCASE("pure noise: median rolling NMSE stays near 1") {
    std::vector<double> medians;
    for (int s = 0; s < 200; ++s) {
      TimeSeriesMatrix y = simulate_linear(white_noise(2), 300, 9000 + s);
      ProtocolConfig cfg;
      cfg.selection = SelectionKind::BTS;
      cfg.k_max = 2;
      medians.push_back(rolling_window_protocol(y, 0, 100, cfg).median_nmse());
    }
    std::sort(medians.begin(), medians.end());
    CHECK(medians[medians.size() / 2] > 0.9);
  }
}

TEST_CASE("roc_auc") {
  SUBCASE("identical samples give exactly one half") {
    std::vector<double> s = {0.3, 0.5, 0.5, 0.9};
    CHECK(roc_auc(s, s) == 0.5);
  }
  SUBCASE("fully separated samples give exactly one") {
    CHECK(roc_auc({0.1, 0.2, 0.3}, {0.4, 0.5}) == 1.0);
  }
  SUBCASE("the {1,2} vs {1.5,3} example gives 0.75") {
    CHECK(roc_auc({1.0, 2.0}, {1.5, 3.0}) == 0.75);
  }
  SUBCASE("complement identity is exact") {
    Rng rng(3);
    std::vector<double> a(37), b(53);
    for (auto& v : a) v = rng.gaussian();
    for (auto& v : b) v = 0.4 + 0.8 * rng.gaussian();
    b[7] = a[11];  // force a tie pair
    CHECK(roc_auc(a, b) + roc_auc(b, a) == 1.0);
  }
}

TEST_CASE("percent_change_vs_reference") {
  SUBCASE("reference against itself is 0%") {
    auto out = percent_change_vs_reference({{"BTS_ols", 0.1}}, "BTS_ols");
    CHECK(out[0].second == doctest::Approx(0.0));
  }
  SUBCASE("0.115 against 0.100 is +15%") {
    auto out = percent_change_vs_reference({{"BTS_ols", 0.100}, {"VARB_ols", 0.115}}, "BTS_ols");
    CHECK(out[1].second == doctest::Approx(15.0));
  }
  SUBCASE("output keeps the method labels (report format)") {
    auto out = percent_change_vs_reference(
        {{"BTS_ols", 0.100}, {"VARB_ols", 0.1513}, {"CW_ols", 0.110}}, "BTS_ols");
    REQUIRE(out.size() == 3);
    CHECK(out[1].first == "VARB_ols");
    CHECK(out[1].second == doctest::Approx(51.3));
    CHECK_THROWS_AS(percent_change_vs_reference({{"CW_ols", 0.1}}, "BTS_ols"),
                    std::invalid_argument);
  }
}

TEST_SUITE_END();
