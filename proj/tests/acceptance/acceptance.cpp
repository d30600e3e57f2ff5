// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Run without arguments for the full suite, or pass criterion
// numbers to run a subset (used by ctest to report each one separately).

#include "bts/benchmark.hpp"
#include "bts/io.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <random>
#include <set>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace bts;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& summary) {
  std::printf("[%s] criterion %2d: %s\n", pass ? "PASS" : "FAIL", criterion, summary.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double cell_mean(const ResultTable& t, SelectionKind sel, EstimatorKind est) {
  for (const auto& c : t.cells) {
    if (c.method.selection == sel && c.method.estimator == est) return c.mean_nmse;
  }
  throw std::logic_error("cell not found");
}

const BenchmarkCell& find_cell(const ResultTable& t, SelectionKind sel, EstimatorKind est) {
  for (const auto& c : t.cells) {
    if (c.method.selection == sel && c.method.estimator == est) return c;
  }
  throw std::logic_error("cell not found");
}

// ---- criteria 1 & 2: 4-d VAR(2) reproduction at desk scale ----------------

ResultTable var2_y4_run() {
  ExperimentConfig cfg;
  cfg.system_name = "builtin_var2";
  cfg.system = builtin_var2(false);
  cfg.N_list = {400};
  cfg.realizations = 200;
  cfg.k_max = 5;
  cfg.targets = {4};
  cfg.methods = {{SelectionKind::BTS, EstimatorKind::OLS},
                 {SelectionKind::FULL, EstimatorKind::OLS},
                 {SelectionKind::VARB, EstimatorKind::OLS}};
  cfg.base_seed = 20240101;
  return run_benchmark(cfg);
}

void criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  ResultTable t = var2_y4_run();
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                             .count();
  const double bts = cell_mean(t, SelectionKind::BTS, EstimatorKind::OLS);
  const double full = cell_mean(t, SelectionKind::FULL, EstimatorKind::OLS);
  const double varb = cell_mean(t, SelectionKind::VARB, EstimatorKind::OLS);
  const bool pass = std::abs(bts - 0.116) <= 0.01 && std::abs(full - 0.116) <= 0.01 &&
                    std::abs(varb - 0.118) <= 0.01 && elapsed < 300.0;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "mean NMSE y4 N=400: BTS_ols=%.4f FULL_ols=%.4f (both vs 0.116 +/- 0.01), "
                "VARB_ols=%.4f (vs 0.118 +/- 0.01), %.1fs",
                bts, full, varb, elapsed);
  report(1, pass, buf);
}

void criterion_2() {
  ResultTable t = var2_y4_run();
  const std::vector<int> dr_true{1, 1, 0, 2};
  const std::vector<int> uniform2{2, 2, 2, 2};
  auto modal_share = [](const BenchmarkCell& cell, const std::vector<int>& want) {
    const std::vector<int>* modal = cell.modal_orders();
    if (!modal || *modal != want) return 0.0;
    return static_cast<double>(cell.order_frequency.at(*modal)) / cell.realizations;
  };
  const double f_full = modal_share(find_cell(t, SelectionKind::FULL, EstimatorKind::OLS), dr_true);
  const double f_bts = modal_share(find_cell(t, SelectionKind::BTS, EstimatorKind::OLS), dr_true);
  const double f_varb =
      modal_share(find_cell(t, SelectionKind::VARB, EstimatorKind::OLS), uniform2);
  const bool pass = f_full >= 0.85 && f_bts >= 0.85 && f_varb >= 0.95;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "modal orders y4: FULL (1,1,0,2) %.0f%%, BTS (1,1,0,2) %.0f%% (need >= 85%%); "
                "VARB (2,2,2,2) %.0f%% (need >= 95%%)",
                100 * f_full, 100 * f_bts, 100 * f_varb);
  report(2, pass, buf);
}

// ---- criterion 3: correlated noise raises NMSE for every method ------------

void criterion_3() {
  ExperimentConfig cfg;
  cfg.N_list = {400};
  cfg.realizations = 200;
  cfg.k_max = 5;
  cfg.targets = {2};
  cfg.methods = all_method_combos();
  cfg.base_seed = 20240202;
  cfg.system_name = "builtin_var2";
  cfg.system = builtin_var2(false);
  ResultTable unc = run_benchmark(cfg);
  cfg.system_name = "builtin_var2_correlated";
  cfg.system = builtin_var2(true);
  ResultTable cor = run_benchmark(cfg);

  int violations = 0;
  std::string detail;
  for (std::size_t i = 0; i < unc.cells.size(); ++i) {
    const double u = unc.cells[i].mean_nmse;
    const double c = cor.cells[i].mean_nmse;
    if (c < u) {
      ++violations;
      char buf[96];
      std::snprintf(buf, sizeof(buf), " %s %.4f->%.4f", unc.cells[i].method.id().c_str(), u, c);
      detail += buf;
    }
  }
  char buf[384];
  std::snprintf(buf, sizeof(buf),
                "correlated-noise mean NMSE >= uncorrelated on y2 for all 20 combinations: "
                "%d violation(s)%s",
                violations, detail.c_str());
  report(3, violations == 0, buf);
}

// ---- criterion 4: 162-system efficiency-score ranking ----------------------

void criterion_4() {
  const std::vector<SelectionKind> sels = {SelectionKind::FULL, SelectionKind::VARB,
                                           SelectionKind::CW, SelectionKind::BTS};
  std::vector<std::array<int, 4>> structures;
  for (int a = 1; a <= 3; ++a) {
    for (int b = 1; b <= 3; ++b) {
      for (int c = 1; c <= 3; ++c) {
        for (int d = 1; d <= 3; ++d) structures.push_back({a, b, c, d});
      }
    }
  }
  const int R = 100;
  bool cw_worst_everywhere = true;
  double full_400 = 0.0, best_other_400 = 0.0;
  std::string detail;

  for (int N : {100, 200, 400}) {
    std::vector<std::vector<ScoreCase>> cases(sels.size());
    for (auto& v : cases) v.resize(2 * structures.size());

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (long long si = 0; si < static_cast<long long>(structures.size()); ++si) {
      LinearSystemSpec sys = sample_random_dr_pair(structures[si], 1000 + si);
      for (int target = 0; target < 2; ++target) {
        std::vector<double> mse_sum(sels.size(), 0.0);
        double var_sum = 0.0;
        for (int r = 0; r < R; ++r) {
          TimeSeriesMatrix series = simulate_linear(sys, N, 555 + r);
          const double mean = series.values.col(target).mean();
          var_sum += (series.values.col(target).array() - mean).square().sum() / (N - 1);
          for (std::size_t k = 0; k < sels.size(); ++k) {
            ProtocolConfig pc;
            pc.selection = sels[k];
            pc.estimator = EstimatorKind::OLS;
            pc.k_max = 3;
            ProtocolResult pr = train_test_protocol(series, target, pc);
            mse_sum[k] += (pr.record.actuals - pr.record.predictions).array().square().mean();
          }
        }
        for (std::size_t k = 0; k < sels.size(); ++k) {
          cases[k][2 * si + target] = {std::sqrt(0.1), std::sqrt(var_sum / R),
                                       std::sqrt(mse_sum[k] / R)};
        }
      }
    }

    std::vector<double> scores(sels.size());
    char buf[160];
    std::snprintf(buf, sizeof(buf), " N=%d:", N);
    detail += buf;
    for (std::size_t k = 0; k < sels.size(); ++k) {
      scores[k] = efficiency_score(cases[k]);
      std::snprintf(buf, sizeof(buf), " %s=%.3f", selection_name(sels[k]).c_str(), scores[k]);
      detail += buf;
    }
    const double cw = scores[2];
    for (std::size_t k = 0; k < sels.size(); ++k) {
      if (k != 2 && scores[k] >= cw) cw_worst_everywhere = false;
    }
    if (N == 400) {
      full_400 = scores[0];
      best_other_400 = std::min({scores[1], scores[2], scores[3]});
    }
  }
  const bool pass = cw_worst_everywhere && full_400 < best_other_400;
  report(4, pass, "efficiency-score ranking over 162 DR systems: CW worst at every N and FULL "
                  "best at N=400;" + detail);
}

// ---- criteria 5 & 6: 8-series multi-collinear systems ----------------------

void criterion_5() {
  ExperimentConfig cfg;
  cfg.system_name = "collinear1";
  cfg.system = collinear_system(1, 0.0);
  cfg.N_list = {100};
  cfg.realizations = 200;
  cfg.k_max = 3;
  cfg.targets = {8};
  cfg.methods = {{SelectionKind::MAX, EstimatorKind::OLS},
                 {SelectionKind::MAX, EstimatorKind::RR},
                 {SelectionKind::BTS, EstimatorKind::OLS},
                 {SelectionKind::FULL, EstimatorKind::OLS}};
  cfg.base_seed = 20240303;
  ResultTable t = run_benchmark(cfg);
  const double max_ols = cell_mean(t, SelectionKind::MAX, EstimatorKind::OLS);
  const double max_rr = cell_mean(t, SelectionKind::MAX, EstimatorKind::RR);
  const double bts = cell_mean(t, SelectionKind::BTS, EstimatorKind::OLS);
  const double full = cell_mean(t, SelectionKind::FULL, EstimatorKind::OLS);
  const bool pass = max_ols >= 0.95 && (max_ols - max_rr) >= 0.1 && std::abs(bts - full) <= 0.03;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "8-series system 1, c=0, N=100: MAX_ols=%.4f (>= 0.95), MAX_rr=%.4f "
                "(improves by %.3f >= 0.1), |BTS_ols-FULL_ols|=%.4f (<= 0.03)",
                max_ols, max_rr, max_ols - max_rr, std::abs(bts - full));
  report(5, pass, buf);
}

void criterion_6() {
  ExperimentConfig cfg;
  cfg.system_name = "collinear2";
  cfg.system = collinear_system(2, 1.0);
  cfg.N_list = {400};
  cfg.realizations = 200;
  cfg.k_max = 3;
  cfg.targets = {8};
  cfg.methods = {{SelectionKind::VARB, EstimatorKind::OLS},
                 {SelectionKind::BTS, EstimatorKind::OLS}};
  cfg.base_seed = 20240404;
  ResultTable t = run_benchmark(cfg);
  const double varb = cell_mean(t, SelectionKind::VARB, EstimatorKind::OLS);
  const double bts = cell_mean(t, SelectionKind::BTS, EstimatorKind::OLS);
  const bool pass = (varb - bts) >= 0.15;
  char buf[192];
  std::snprintf(buf, sizeof(buf),
                "8-series system 2, c=1, N=400: VARB_ols=%.4f exceeds BTS_ols=%.4f by %.4f "
                "(>= 0.15)",
                varb, bts, varb - bts);
  report(6, pass, buf);
}

// ---- criterion 7: estimator equivalence on random designs ------------------

void criterion_7() {
  std::mt19937_64 gen(20240505);
  std::normal_distribution<double> nd;
  double worst_pcr = 0.0, worst_rr = 0.0, worst_pls = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 30 + trial % 40;
    const int K = 2 + trial % 7;
    Eigen::MatrixXd X(m, K);
    Eigen::VectorXd beta(K);
    for (int j = 0; j < K; ++j) beta(j) = nd(gen);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < K; ++j) X(i, j) = nd(gen);
    }
    Eigen::VectorXd y = X * beta;
    for (int i = 0; i < m; ++i) y(i) += 0.3 * nd(gen);
    SvdBasis basis = decompose(X, y);
    Eigen::VectorXd ols = solve_with(basis, EstimatorSpec::ols());
    worst_pcr = std::max(
        worst_pcr, (ols - solve_with(basis, EstimatorSpec::pcr(K))).cwiseAbs().maxCoeff());
    worst_rr = std::max(
        worst_rr, (ols - solve_with(basis, EstimatorSpec::rr(0.0))).cwiseAbs().maxCoeff());
    worst_pls = std::max(
        worst_pls, (ols - solve_with(basis, EstimatorSpec::pls(K))).cwiseAbs().maxCoeff());
  }
  const bool pass = worst_pcr < 1e-8 && worst_rr < 1e-8 && worst_pls < 1e-6;
  char buf[192];
  std::snprintf(buf, sizeof(buf),
                "100 random designs: max |OLS-PCR(K)|=%.2e, |OLS-RR(0)|=%.2e (< 1e-8), "
                "|OLS-PLS(K)|=%.2e (< 1e-6)",
                worst_pcr, worst_rr, worst_pls);
  report(7, pass, buf);
}

// ---- criterion 8: FULL against a nested-loop oracle, BTS dominance ----------

void criterion_8() {
  int mismatches = 0, dominance_violations = 0;
  for (int s = 0; s < 50; ++s) {
    std::mt19937_64 gen(31000 + s);
    std::uniform_int_distribution<int> pick(1, 2);
    LinearSystemSpec sys =
        sample_random_dr_pair({pick(gen), pick(gen), pick(gen), pick(gen)}, 31000 + s);
    TimeSeriesMatrix y = simulate_linear(sys, 150, 32000 + s);
    CentralizeResult centered = centralize(y);

    const int k_max = 2;
    SelectionResult full = select_full(centered.series, 0, k_max);

    // independent nested-loop brute force over the shared response sample
    const int n_eff = y.rows() - k_max;
    OrderVector best_orders = zero_orders(2, k_max);
    double best_bic = 0.0;
    bool first = true;
    for (int k1 = 0; k1 <= k_max; ++k1) {
      for (int k2 = 0; k2 <= k_max; ++k2) {
        OrderVector cand{{k1, k2}, k_max};
        double sse;
        if (cand.total() == 0) {
          sse = centered.series.values.col(0).segment(k_max, n_eff).squaredNorm();
        } else {
          DesignPair d = build_design_from(centered.series, cand, 0, k_max - 1);
          sse = svd_fit(d, EstimatorSpec::ols()).sse;
        }
        const double score = bic(sse, n_eff, cand.total());
        if (first || score < best_bic) {
          best_bic = score;
          best_orders = cand;
          first = false;
        }
      }
    }
    if (!(full.orders == best_orders)) ++mismatches;

    SelectionResult bts = select_bts(centered.series, 0, k_max);
    if (bts.trace.chosen_bic < full.trace.chosen_bic - 1e-9) ++dominance_violations;
  }
  const bool pass = mismatches == 0 && dominance_violations == 0;
  char buf[192];
  std::snprintf(buf, sizeof(buf),
                "50 random bivariate series: FULL vs nested-loop oracle mismatches=%d, "
                "BIC(BTS) >= BIC(FULL) violations=%d",
                mismatches, dominance_violations);
  report(8, pass, buf);
}

// ---- criterion 9: Diebold-Mariano size calibration --------------------------

void criterion_9() {
  Rng rng(20240606);
  const int R = 1000, m = 200;
  int rejections = 0;
  for (int s = 0; s < R; ++s) {
    Eigen::VectorXd act(m), pa(m), pb(m);
    for (int i = 0; i < m; ++i) {
      act(i) = rng.gaussian();
      pa(i) = act(i) + 0.5 * rng.gaussian();
      pb(i) = act(i) + 0.5 * rng.gaussian();
    }
    ForecastRecord ra{act, pa, "a"}, rb{act, pb, "b"};
    if (diebold_mariano(ra, rb).rejected) ++rejections;
  }
  const bool pass = rejections >= 30 && rejections <= 70;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "equal-skill forecasters over 1000 realizations: %d rejections at 5%% level "
                "(need 50 +/- 20)",
                rejections);
  report(9, pass, buf);
}

// ---- criterion 10: AUC sanity ------------------------------------------------

void criterion_10() {
  const std::vector<double> same = {0.2, 0.4, 0.4, 0.7, 1.1};
  const double auc_same = roc_auc(same, same);
  const double auc_disjoint = roc_auc({0.1, 0.2, 0.3}, {0.5, 0.6});
  const double auc_example = roc_auc({1.0, 2.0}, {1.5, 3.0});
  const bool pass = auc_same == 0.5 && auc_disjoint == 1.0 && auc_example == 0.75;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "AUC: identical=%.3f (0.5 exactly), disjoint=%.3f (1.0 exactly), "
                "{1,2} vs {1.5,3}=%.3f (0.75 exactly)",
                auc_same, auc_disjoint, auc_example);
  report(10, pass, buf);
}

// ---- criterion 11: byte-identical benchmark reruns ---------------------------

void criterion_11() {
  ExperimentConfig cfg;
  cfg.system_name = "builtin_var2";
  cfg.system = builtin_var2(false);
  cfg.N_list = {100, 200};
  cfg.realizations = 12;
  cfg.k_max = 3;
  cfg.targets = {1, 4};
  cfg.methods = {{SelectionKind::BTS, EstimatorKind::RR},
                 {SelectionKind::VARB, EstimatorKind::PLS},
                 {SelectionKind::CW, EstimatorKind::PCR},
                 {SelectionKind::FULL, EstimatorKind::OLS}};
  cfg.base_seed = 20240707;

  ResultTable a = run_benchmark(cfg, 2);
  ResultTable b = run_benchmark(cfg, 1);
  ResultTable c = run_benchmark_reference(cfg);
  const std::string ja = result_table_to_json(a);
  const bool pass = ja == result_table_to_json(b) && ja == result_table_to_json(c) &&
                    result_table_to_csv(a) == result_table_to_csv(b);
  report(11, pass,
         "benchmark rerun with identical config/seed is byte-identical across thread counts "
         "and against the serial reference");
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
  auto want = [&](int c) { return wanted.empty() || wanted.count(c) > 0; };

  if (want(1)) criterion_1();
  if (want(2)) criterion_2();
  if (want(3)) criterion_3();
  if (want(4)) criterion_4();
  if (want(5)) criterion_5();
  if (want(6)) criterion_6();
  if (want(7)) criterion_7();
  if (want(8)) criterion_8();
  if (want(9)) criterion_9();
  if (want(10)) criterion_10();
  if (want(11)) criterion_11();

  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
