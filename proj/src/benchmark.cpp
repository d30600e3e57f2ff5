#include "bts/benchmark.hpp"

#include "json.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace bts {

using ordered_json = nlohmann::ordered_json;

std::string MethodCombo::id() const {
  return selection_name(selection) + "_" + estimator_name(estimator);
}

std::vector<MethodCombo> all_method_combos() {
  std::vector<MethodCombo> combos;
  for (SelectionKind sel : {SelectionKind::FULL, SelectionKind::VARB, SelectionKind::CW,
                            SelectionKind::MAX, SelectionKind::BTS}) {
    for (EstimatorKind est : {EstimatorKind::OLS, EstimatorKind::PCR, EstimatorKind::PLS,
                              EstimatorKind::RR}) {
      combos.push_back({sel, est});
    }
  }
  return combos;
}

int system_dimension(const SystemSpec& spec) {
  if (std::holds_alternative<LinearSystemSpec>(spec)) {
    return std::get<LinearSystemSpec>(spec).n();
  }
  return 8;
}

TimeSeriesMatrix simulate_system(const SystemSpec& spec, int N, std::uint64_t seed) {
  if (std::holds_alternative<LinearSystemSpec>(spec)) {
    return simulate_linear(std::get<LinearSystemSpec>(spec), N, seed);
  }
  return simulate_collinear(std::get<CollinearSystemSpec>(spec), N, seed);
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.realizations < 1) throw std::invalid_argument("config: realizations must be >= 1");
  if (cfg.k_max < 1) throw std::invalid_argument("config: k_max must be >= 1");
  if (cfg.N_list.empty()) throw std::invalid_argument("config: N_list is empty");
  if (cfg.methods.empty()) throw std::invalid_argument("config: no methods given");
  if (cfg.train_fraction <= 0.0 || cfg.train_fraction >= 1.0) {
    throw std::invalid_argument("config: train_fraction must be in (0,1)");
  }
  const int n = system_dimension(cfg.system);
  for (int target : cfg.targets) {
    if (target < 1 || target > n) throw std::invalid_argument("config: target out of range");
  }
  for (int N : cfg.N_list) {
    const int split = static_cast<int>(std::floor(cfg.train_fraction * N));
    if (N < 16 || split <= cfg.k_max + 1) {
      throw std::invalid_argument("config: N too small for k_max and train_fraction");
    }
  }
  if (std::holds_alternative<LinearSystemSpec>(cfg.system)) {
    validate_system(std::get<LinearSystemSpec>(cfg.system));
  } else {
    const auto& c = std::get<CollinearSystemSpec>(cfg.system);
    if (c.common_order != 1 && c.common_order != 2) {
      throw std::invalid_argument("config: collinear common_order must be 1 or 2");
    }
    if (c.noise_var <= 0.0) throw std::invalid_argument("config: noise_var must be positive");
  }
}

const std::vector<int>* BenchmarkCell::modal_orders() const {
  const std::vector<int>* best = nullptr;
  int best_count = -1;
  for (const auto& [orders, count] : order_frequency) {
    if (count > best_count) {  // map order makes ties deterministic (lexicographic)
      best = &orders;
      best_count = count;
    }
  }
  return best;
}

namespace {

struct Outcome {
  double nmse = 1.0;
  bool failed = true;
  std::vector<int> orders;
  Eigen::VectorXd sq_errors;  // empty when the fit failed
  double seconds = 0.0;
};

// cell-major storage: outcomes[cell][realization]
using OutcomeGrid = std::vector<std::vector<Outcome>>;

struct CellId {
  MethodCombo method;
  int N = 0;
  int target = 0;  // 1-based
};

std::vector<CellId> cell_layout(const ExperimentConfig& cfg, const std::vector<int>& targets) {
  std::vector<CellId> cells;
  for (int N : cfg.N_list) {
    for (int target : targets) {
      for (const auto& m : cfg.methods) cells.push_back({m, N, target});
    }
  }
  return cells;
}

std::vector<int> effective_targets(const ExperimentConfig& cfg) {
  if (!cfg.targets.empty()) return cfg.targets;
  std::vector<int> all(system_dimension(cfg.system));
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i) + 1;
  return all;
}

// one realization of one (N, target): share the simulated series, the
// centered training block and each selection result across estimators
void run_realization_methods(const ExperimentConfig& cfg, const TimeSeriesMatrix& series, int N,
                             int target_1b, const std::vector<MethodCombo>& methods,
                             Outcome* out_row) {
  const int target = target_1b - 1;
  const int split = static_cast<int>(std::floor(cfg.train_fraction * N));

  TimeSeriesMatrix train;
  train.values = series.values.middleRows(0, split);
  CentralizeResult centered = centralize(train);

  SelectionOptions sel_opts;
  sel_opts.full_budget = cfg.full_budget;
  sel_opts.collect_trace = false;

  // selection once per kind
  std::map<SelectionKind, OrderVector> selected;
  for (const auto& m : cfg.methods) {
    if (selected.count(m.selection)) continue;
    if (m.selection == SelectionKind::MAX) {
      selected.emplace(m.selection, select_max(series.cols(), cfg.k_max));
    } else {
      selected.emplace(m.selection,
                       run_selection(m.selection, centered.series, target, cfg.k_max, sel_opts)
                           .orders);
    }
  }

  const Eigen::VectorXd actuals = series.values.col(target).segment(split, N - split);
  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome& oc = out_row[mi];
    const OrderVector& orders = selected.at(methods[mi].selection);
    oc.orders = orders.orders;
    try {
      FittedModel model;
      if (orders.total() == 0) {
        model = fit_zero_order(centered.series, target);
        model.orders = orders;
      } else {
        DesignPair design = build_design(centered.series, orders, target);
        EstimatorSpec spec = tune_estimator(design, methods[mi].estimator, cfg.cv);
        model = svd_fit(design, spec);
      }
      model.means = centered.means;
      Eigen::VectorXd preds = predict(model, series, split - 1, N - 1);
      oc.sq_errors = (actuals - preds).array().square();
      ForecastRecord rec{actuals, preds, methods[mi].id()};
      oc.nmse = nmse(rec);
      oc.failed = false;
    } catch (const std::exception&) {
      oc.nmse = 1.0;  // sentinel; the failure is reported in the cell counts
      oc.failed = true;
      oc.sq_errors.resize(0);
    }
    oc.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
}

ResultTable aggregate(const ExperimentConfig& cfg, const std::vector<CellId>& cells,
                      const OutcomeGrid& grid) {
  ResultTable table;
  table.system_name = cfg.system_name;
  table.base_seed = cfg.base_seed;
  table.config_hash = config_hash(cfg);

  const int R = cfg.realizations;
  table.cells.resize(cells.size());
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    BenchmarkCell& cell = table.cells[ci];
    cell.method = cells[ci].method;
    cell.N = cells[ci].N;
    cell.target = cells[ci].target;
    cell.realizations = R;

    double sum = 0.0, time_sum = 0.0;
    std::vector<double> values(R);
    for (int r = 0; r < R; ++r) {
      const Outcome& oc = grid[ci][r];
      sum += oc.nmse;
      values[r] = oc.nmse;
      if (oc.failed) ++cell.failures;
      ++cell.order_frequency[oc.orders];
      time_sum += oc.seconds;
    }
    cell.mean_nmse = sum / R;
    double ss = 0.0;
    for (double v : values) ss += (v - cell.mean_nmse) * (v - cell.mean_nmse);
    cell.nmse_std = (R > 1) ? std::sqrt(ss / (R - 1)) : 0.0;
    std::sort(values.begin(), values.end());
    cell.median_nmse =
        (R % 2 == 1) ? values[R / 2] : 0.5 * (values[R / 2 - 1] + values[R / 2]);
    cell.wall_time_s = time_sum;
  }

  // Diebold-Mariano stars per (N, target) group: mark the best cell and
  // every cell not evidently different from it
  for (std::size_t gi = 0; gi < cells.size();) {
    std::size_t ge = gi;
    while (ge < cells.size() && cells[ge].N == cells[gi].N &&
           cells[ge].target == cells[gi].target) {
      ++ge;
    }
    std::size_t best = gi;
    for (std::size_t ci = gi + 1; ci < ge; ++ci) {
      if (table.cells[ci].mean_nmse < table.cells[best].mean_nmse) best = ci;
    }
    for (std::size_t ci = gi; ci < ge; ++ci) {
      if (ci == best) {
        table.cells[ci].starred = true;
        table.cells[ci].vs_best = MethodComparison{};
        continue;
      }
      int rej_cell = 0, rej_best = 0;
      for (int r = 0; r < R; ++r) {
        const Outcome& a = grid[ci][r];
        const Outcome& b = grid[best][r];
        if (a.failed || b.failed) continue;  // nothing to compare; counts as non-rejection
        DmResult dm = diebold_mariano_losses(a.sq_errors, b.sq_errors);
        if (dm.rejected) (dm.winner == 1 ? rej_cell : rej_best) += 1;
      }
      table.cells[ci].vs_best = evident_difference(rej_cell, rej_best, R);
      table.cells[ci].starred = !table.cells[ci].vs_best.evident_difference;
    }
    gi = ge;
  }
  return table;
}

}  // namespace

ResultTable run_benchmark(const ExperimentConfig& cfg, int jobs) {
  validate_config(cfg);
  const std::vector<int> targets = effective_targets(cfg);
  const std::vector<CellId> cells = cell_layout(cfg, targets);
  const int R = cfg.realizations;

  OutcomeGrid grid(cells.size());
  for (auto& row : grid) row.resize(R);

#ifdef _OPENMP
  const int n_threads = jobs > 0 ? jobs : omp_get_max_threads();
#else
  (void)jobs;
#endif

  for (std::size_t ni = 0; ni < cfg.N_list.size(); ++ni) {
    const int N = cfg.N_list[ni];
    const std::size_t group_base = ni * targets.size() * cfg.methods.size();

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(n_threads)
#endif
    for (int r = 0; r < R; ++r) {
      std::vector<Outcome> row(cfg.methods.size());
      try {
        TimeSeriesMatrix series = simulate_system(cfg.system, N, cfg.base_seed + r);
        for (std::size_t ti = 0; ti < targets.size(); ++ti) {
          run_realization_methods(cfg, series, N, targets[ti], cfg.methods, row.data());
          for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
            grid[group_base + ti * cfg.methods.size() + mi][r] = row[mi];
          }
        }
      } catch (const std::exception&) {
        // simulation-level failure: mark every cell of this realization
        for (std::size_t ti = 0; ti < targets.size(); ++ti) {
          for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
            grid[group_base + ti * cfg.methods.size() + mi][r] = Outcome{};
          }
        }
      }
    }
  }
  return aggregate(cfg, cells, grid);
}

ResultTable run_benchmark_reference(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const std::vector<int> targets = effective_targets(cfg);
  const std::vector<CellId> cells = cell_layout(cfg, targets);
  const int R = cfg.realizations;

  OutcomeGrid grid(cells.size());
  for (auto& row : grid) row.resize(R);

  for (std::size_t ni = 0; ni < cfg.N_list.size(); ++ni) {
    const int N = cfg.N_list[ni];
    const std::size_t group_base = ni * targets.size() * cfg.methods.size();
    for (int r = 0; r < R; ++r) {
      TimeSeriesMatrix series = simulate_system(cfg.system, N, cfg.base_seed + r);
      const int split = static_cast<int>(std::floor(cfg.train_fraction * N));
      for (std::size_t ti = 0; ti < targets.size(); ++ti) {
        for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
          Outcome oc;
          ProtocolConfig pc;
          pc.selection = cfg.methods[mi].selection;
          pc.estimator = cfg.methods[mi].estimator;
          pc.k_max = cfg.k_max;
          pc.train_fraction = cfg.train_fraction;
          pc.cv = cfg.cv;
          pc.selection_opts.full_budget = cfg.full_budget;
          pc.selection_opts.collect_trace = false;
          try {
            ProtocolResult pr = train_test_protocol(series, targets[ti] - 1, pc);
            oc.nmse = nmse(pr.record);
            oc.failed = false;
            oc.orders = pr.selected.orders;
            oc.sq_errors = (pr.record.actuals - pr.record.predictions).array().square();
          } catch (const std::exception&) {
            oc.failed = true;
            oc.nmse = 1.0;
            // the selection itself cannot fail; recover the orders for the
            // frequency map
            TimeSeriesMatrix train;
            train.values = series.values.middleRows(0, split);
            CentralizeResult centered = centralize(train);
            if (pc.selection == SelectionKind::MAX) {
              oc.orders = select_max(series.cols(), cfg.k_max).orders;
            } else {
              oc.orders = run_selection(pc.selection, centered.series, targets[ti] - 1, cfg.k_max,
                                        pc.selection_opts)
                              .orders.orders;
            }
          }
          grid[group_base + ti * cfg.methods.size() + mi][r] = oc;
        }
      }
    }
  }
  return aggregate(cfg, cells, grid);
}

// --- persistence -----------------------------------------------------------

namespace {

ordered_json matrix_to_json(const Eigen::MatrixXd& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const ordered_json& j) {
  const auto n_rows = j.size();
  if (n_rows == 0) return {};
  const auto n_cols = j.at(0).size();
  Eigen::MatrixXd m(n_rows, n_cols);
  for (std::size_t i = 0; i < n_rows; ++i) {
    if (j.at(i).size() != n_cols) throw std::runtime_error("config: ragged matrix");
    for (std::size_t c = 0; c < n_cols; ++c) m(i, c) = j.at(i).at(c).get<double>();
  }
  return m;
}

ordered_json system_to_json(const ExperimentConfig& cfg) {
  if (cfg.system_name == "builtin_var2" || cfg.system_name == "builtin_var2_correlated") {
    return ordered_json(cfg.system_name);
  }
  ordered_json j;
  if (std::holds_alternative<LinearSystemSpec>(cfg.system)) {
    const auto& s = std::get<LinearSystemSpec>(cfg.system);
    j["type"] = "linear";
    ordered_json coeffs = ordered_json::array();
    for (const auto& A : s.coeffs) coeffs.push_back(matrix_to_json(A));
    j["coefficients"] = coeffs;
    j["noise_sd"] = std::vector<double>(s.noise_sd.begin(), s.noise_sd.end());
    if (s.noise_corr.size() > 0) j["noise_corr"] = matrix_to_json(s.noise_corr);
    j["burn_in"] = s.burn_in;
  } else {
    const auto& s = std::get<CollinearSystemSpec>(cfg.system);
    j["type"] = "collinear";
    j["ar"] = s.ar;
    j["c"] = s.c;
    j["common_order"] = s.common_order;
    j["common_ar2"] = s.common_ar2;
    j["noise_var"] = s.noise_var;
    j["burn_in"] = s.burn_in;
  }
  return j;
}

void system_from_json(const ordered_json& j, ExperimentConfig& cfg) {
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    cfg.system_name = name;
    if (name == "builtin_var2") {
      cfg.system = builtin_var2(false);
    } else if (name == "builtin_var2_correlated") {
      cfg.system = builtin_var2(true);
    } else if (name == "collinear1" || name == "collinear2") {
      cfg.system = collinear_system(name == "collinear1" ? 1 : 2, 0.0);
    } else {
      throw std::runtime_error("config: unknown builtin system '" + name + "'");
    }
    return;
  }
  const std::string type = j.at("type").get<std::string>();
  cfg.system_name = type;
  if (type == "linear") {
    LinearSystemSpec s;
    for (const auto& A : j.at("coefficients")) s.coeffs.push_back(matrix_from_json(A));
    const auto sd = j.at("noise_sd").get<std::vector<double>>();
    s.noise_sd = Eigen::Map<const Eigen::VectorXd>(sd.data(), sd.size());
    if (j.contains("noise_corr")) s.noise_corr = matrix_from_json(j.at("noise_corr"));
    s.burn_in = j.value("burn_in", 500);
    cfg.system = s;
  } else if (type == "collinear") {
    CollinearSystemSpec s;
    if (j.contains("which")) {
      s = collinear_system(j.at("which").get<int>(), j.value("c", 0.0));
    } else {
      const auto ar = j.at("ar").get<std::vector<double>>();
      if (ar.size() != 7) throw std::runtime_error("config: collinear.ar needs 7 coefficients");
      std::copy(ar.begin(), ar.end(), s.ar.begin());
      s.c = j.value("c", 0.0);
      s.common_order = j.value("common_order", 1);
      s.common_ar2 = j.value("common_ar2", 0.0);
      s.noise_var = j.value("noise_var", 0.1);
      s.burn_in = j.value("burn_in", 500);
    }
    cfg.system = s;
  } else if (type == "random_dr") {
    const auto orders = j.at("orders").get<std::vector<int>>();
    if (orders.size() != 4) throw std::runtime_error("config: random_dr.orders needs 4 entries");
    cfg.system = sample_random_dr_pair({orders[0], orders[1], orders[2], orders[3]},
                                       j.at("seed").get<std::uint64_t>());
    cfg.system_name = "random_dr";
  } else {
    throw std::runtime_error("config: unknown system type '" + type + "'");
  }
}

}  // namespace

ExperimentConfig config_from_json(const std::string& text) {
  ordered_json j = ordered_json::parse(text);
  const int version = j.value("schema_version", 1);
  if (version != 1) throw std::runtime_error("config: unsupported schema_version");

  ExperimentConfig cfg;
  system_from_json(j.at("system"), cfg);
  cfg.N_list = j.at("N_list").get<std::vector<int>>();
  cfg.realizations = j.at("realizations").get<int>();
  cfg.k_max = j.at("k_max").get<int>();
  if (j.contains("targets")) cfg.targets = j.at("targets").get<std::vector<int>>();
  cfg.base_seed = j.value("base_seed", 0ULL);
  cfg.train_fraction = j.value("train_fraction", 0.75);
  cfg.full_budget = j.value("full_budget", std::size_t{1000000});
  if (j.contains("cv")) {
    const auto& c = j.at("cv");
    cfg.cv.folds = c.value("folds", 10);
    cfg.cv.rr_rel_tol = c.value("rr_rel_tol", 1e-6);
    cfg.cv.rr_grid_points = c.value("rr_grid_points", 11);
    cfg.cv.rr_max_iterations = c.value("rr_max_iterations", 50);
  }
  cfg.output_path = j.value("output_path", std::string());

  const auto& methods = j.at("methods");
  if (methods.is_string() && methods.get<std::string>() == "all") {
    cfg.methods = all_method_combos();
  } else {
    for (const auto& m : methods) {
      cfg.methods.push_back({selection_from_name(m.at("selection").get<std::string>()),
                             estimator_from_name(m.at("estimator").get<std::string>())});
    }
  }
  validate_config(cfg);
  return cfg;
}

std::string config_to_json(const ExperimentConfig& cfg) {
  ordered_json j;
  j["schema_version"] = 1;
  j["system"] = system_to_json(cfg);
  j["N_list"] = cfg.N_list;
  j["realizations"] = cfg.realizations;
  j["k_max"] = cfg.k_max;
  j["targets"] = cfg.targets;
  ordered_json methods = ordered_json::array();
  for (const auto& m : cfg.methods) {
    methods.push_back({{"selection", selection_name(m.selection)},
                       {"estimator", estimator_name(m.estimator)}});
  }
  j["methods"] = methods;
  j["base_seed"] = cfg.base_seed;
  j["train_fraction"] = cfg.train_fraction;
  j["full_budget"] = cfg.full_budget;
  j["cv"] = {{"folds", cfg.cv.folds},
             {"rr_rel_tol", cfg.cv.rr_rel_tol},
             {"rr_grid_points", cfg.cv.rr_grid_points},
             {"rr_max_iterations", cfg.cv.rr_max_iterations}};
  return j.dump(2) + "\n";
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  // FNV-1a over the canonical JSON form
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : config_to_json(cfg)) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string result_table_to_json(const ResultTable& table) {
  ordered_json j;
  j["schema_version"] = 1;
  j["system"] = table.system_name;
  j["base_seed"] = table.base_seed;
  j["config_hash"] = table.config_hash;
  ordered_json cells = ordered_json::array();
  for (const auto& cell : table.cells) {
    ordered_json c;
    c["selection"] = selection_name(cell.method.selection);
    c["estimator"] = estimator_name(cell.method.estimator);
    c["N"] = cell.N;
    c["target"] = cell.target;
    c["realizations"] = cell.realizations;
    c["mean_nmse"] = cell.mean_nmse;
    c["nmse_std"] = cell.nmse_std;
    c["median_nmse"] = cell.median_nmse;
    c["failures"] = cell.failures;
    ordered_json freq = ordered_json::array();
    for (const auto& [orders, count] : cell.order_frequency) {
      freq.push_back({{"orders", orders}, {"count", count}});
    }
    c["order_frequency"] = freq;
    c["dm_vs_best"] = {{"rejections_cell_better", cell.vs_best.rejections_first_better},
                       {"rejections_best_better", cell.vs_best.rejections_second_better},
                       {"non_rejections", cell.vs_best.non_rejections},
                       {"evident_difference", cell.vs_best.evident_difference}};
    c["starred"] = cell.starred;
    cells.push_back(c);
  }
  j["cells"] = cells;
  return j.dump(2) + "\n";
}

ResultTable result_table_from_json(const std::string& text) {
  ordered_json j = ordered_json::parse(text);
  if (j.value("schema_version", 1) != 1) {
    throw std::runtime_error("results: unsupported schema_version");
  }
  ResultTable table;
  table.system_name = j.at("system").get<std::string>();
  table.base_seed = j.at("base_seed").get<std::uint64_t>();
  table.config_hash = j.at("config_hash").get<std::uint64_t>();
  for (const auto& c : j.at("cells")) {
    BenchmarkCell cell;
    cell.method.selection = selection_from_name(c.at("selection").get<std::string>());
    cell.method.estimator = estimator_from_name(c.at("estimator").get<std::string>());
    cell.N = c.at("N").get<int>();
    cell.target = c.at("target").get<int>();
    cell.realizations = c.at("realizations").get<int>();
    cell.mean_nmse = c.at("mean_nmse").get<double>();
    cell.nmse_std = c.at("nmse_std").get<double>();
    cell.median_nmse = c.at("median_nmse").get<double>();
    cell.failures = c.at("failures").get<int>();
    for (const auto& f : c.at("order_frequency")) {
      cell.order_frequency[f.at("orders").get<std::vector<int>>()] = f.at("count").get<int>();
    }
    const auto& dm = c.at("dm_vs_best");
    cell.vs_best.rejections_first_better = dm.at("rejections_cell_better").get<int>();
    cell.vs_best.rejections_second_better = dm.at("rejections_best_better").get<int>();
    cell.vs_best.non_rejections = dm.at("non_rejections").get<int>();
    cell.vs_best.evident_difference = dm.at("evident_difference").get<bool>();
    cell.starred = c.at("starred").get<bool>();
    table.cells.push_back(std::move(cell));
  }
  return table;
}

std::string result_table_to_csv(const ResultTable& table) {
  std::string out =
      "system,selection,estimator,N,target,realizations,mean_nmse,nmse_std,median_nmse,"
      "failures,modal_orders,modal_count,starred\n";
  char buf[64];
  for (const auto& cell : table.cells) {
    out += table.system_name + ',' + selection_name(cell.method.selection) + ',' +
           estimator_name(cell.method.estimator) + ',';
    out += std::to_string(cell.N) + ',' + std::to_string(cell.target) + ',' +
           std::to_string(cell.realizations) + ',';
    std::snprintf(buf, sizeof(buf), "%.6g,%.6g,%.6g,", cell.mean_nmse, cell.nmse_std,
                  cell.median_nmse);
    out += buf;
    out += std::to_string(cell.failures) + ',';
    const std::vector<int>* modal = cell.modal_orders();
    int modal_count = 0;
    if (modal) {
      modal_count = cell.order_frequency.at(*modal);
      OrderVector ov{*modal, 0};
      out += '"' + ov.to_string() + '"';
    }
    out += ',' + std::to_string(modal_count) + ',' + (cell.starred ? "1" : "0") + '\n';
  }
  return out;
}

void emit_results(const ResultTable& table, const std::string& format, const std::string& path) {
  std::string payload;
  if (format == "json") {
    payload = result_table_to_json(table);
  } else if (format == "csv") {
    payload = result_table_to_csv(table);
  } else {
    throw std::invalid_argument("emit_results: format must be csv or json");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << payload;
}

}  // namespace bts
