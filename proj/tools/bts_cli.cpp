// Command-line front end: simulate benchmark systems, select DR orders,
// fit/predict, run Monte Carlo benchmarks, rolling-window evaluations and
// ROC/AUC comparisons. Data goes to stdout or --output, progress to stderr.
// Exit codes: 0 ok, 1 usage error, 2 numerical failure.

#include "bts/benchmark.hpp"
#include "bts/io.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace bts;
using ordered_json = nlohmann::ordered_json;

namespace {

void write_output(const std::string& payload, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << payload;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << payload;
}

SystemSpec make_system(const std::string& name, double c, const std::vector<int>& dr_orders,
                       std::uint64_t dr_seed) {
  if (name == "builtin_var2") return builtin_var2(false);
  if (name == "builtin_var2_correlated") return builtin_var2(true);
  if (name == "collinear1") return collinear_system(1, c);
  if (name == "collinear2") return collinear_system(2, c);
  if (name == "random_dr") {
    if (dr_orders.size() != 4) {
      throw CLI::ValidationError("--orders", "random_dr needs --orders k11,k12,k21,k22");
    }
    return sample_random_dr_pair({dr_orders[0], dr_orders[1], dr_orders[2], dr_orders[3]},
                                 dr_seed);
  }
  throw CLI::ValidationError("--system", "unknown system '" + name + "'");
}

TimeSeriesMatrix load_series(const std::string& path, bool header, bool log_returns) {
  CsvOptions opts;
  opts.has_header = header;
  opts.log_returns = log_returns;
  return ingest_csv(path, opts);
}

std::vector<double> load_samples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::vector<double> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    out.push_back(std::stod(line));
  }
  if (out.empty()) throw std::runtime_error("no samples in '" + path + "'");
  return out;
}

ordered_json model_to_json(const FittedModel& model) {
  ordered_json j;
  j["orders"] = model.orders.orders;
  j["target"] = model.target + 1;
  j["estimator"] = estimator_name(model.estimator.kind);
  if (model.estimator.kind == EstimatorKind::PCR || model.estimator.kind == EstimatorKind::PLS) {
    j["q"] = model.estimator.q;
  }
  if (model.estimator.kind == EstimatorKind::RR) j["a"] = model.estimator.a;
  if (model.pls_q_effective > 0) j["pls_q_effective"] = model.pls_q_effective;
  j["coefficients"] = std::vector<double>(model.coefficients.begin(), model.coefficients.end());
  j["sse"] = model.sse;
  j["bic"] = std::isfinite(model.bic) ? ordered_json(model.bic) : ordered_json("-inf");
  j["n_effective"] = model.n_effective;
  j["means"] = std::vector<double>(model.means.begin(), model.means.end());
  return j;
}

std::string trace_lines(const SelectionTrace& trace) {
  std::ostringstream out;
  for (const auto& e : trace.visited) {
    OrderVector ov = e.orders;
    out << "  " << ov.to_string();
    if (e.rank_deficient) {
      out << "  skipped (rank-deficient)";
    } else {
      out << "  bic=" << e.bic;
    }
    if (e.accepted) out << "  *";
    out << '\n';
  }
  return out.str();
}

int run(int argc, char** argv) {
  CLI::App app{"dynamic regression prediction with backward-in-time order selection"};
  app.require_subcommand(1);

  // --- simulate ---
  auto* sim = app.add_subcommand("simulate", "generate a realization of a benchmark system");
  std::string sim_system = "builtin_var2";
  int sim_n = 400;
  std::uint64_t sim_seed = 0;
  double sim_c = 0.0;
  std::vector<int> sim_orders;
  std::string sim_output;
  sim->add_option("--system", sim_system,
                  "builtin_var2|builtin_var2_correlated|collinear1|collinear2|random_dr")
      ->capture_default_str();
  sim->add_option("--n", sim_n, "rows to emit")->capture_default_str();
  sim->add_option("--seed", sim_seed, "RNG seed")->capture_default_str();
  sim->add_option("--c", sim_c, "collinearity coefficient (collinear systems)")
      ->capture_default_str();
  sim->add_option("--orders", sim_orders, "k11,k12,k21,k22 for random_dr")->delimiter(',');
  sim->add_option("--output,-o", sim_output, "output CSV path (default stdout)");

  // --- select ---
  auto* sel = app.add_subcommand("select", "choose DR orders for one target variable");
  std::string sel_input, sel_method = "bts", sel_output, sel_format = "text";
  int sel_target = 1, sel_kmax = 5;
  bool sel_header = false, sel_logret = false, sel_trace = false;
  sel->add_option("--input,-i", sel_input, "input CSV")->required();
  sel->add_option("--target", sel_target, "1-based target variable")->capture_default_str();
  sel->add_option("--kmax", sel_kmax, "maximum lag")->capture_default_str();
  sel->add_option("--method", sel_method, "bts|full|varb|cw|max")->capture_default_str();
  sel->add_flag("--header", sel_header, "first CSV row is a header");
  sel->add_flag("--log-returns", sel_logret, "transform to log returns first");
  sel->add_flag("--trace", sel_trace, "print the visited order vectors");
  sel->add_option("--format", sel_format, "text|json")->capture_default_str();
  sel->add_option("--output,-o", sel_output, "output path (default stdout)");

  // --- fit ---
  auto* fit = app.add_subcommand("fit", "select orders (or take them) and estimate a model");
  std::string fit_input, fit_method = "bts", fit_estimator = "ols", fit_output;
  int fit_target = 1, fit_kmax = 5;
  bool fit_header = false, fit_logret = false;
  std::vector<int> fit_orders;
  fit->add_option("--input,-i", fit_input, "input CSV")->required();
  fit->add_option("--target", fit_target, "1-based target variable")->capture_default_str();
  fit->add_option("--kmax", fit_kmax, "maximum lag")->capture_default_str();
  fit->add_option("--method", fit_method, "bts|full|varb|cw|max")->capture_default_str();
  fit->add_option("--orders", fit_orders, "explicit orders k_1,...,k_n (skips selection)")
      ->delimiter(',');
  fit->add_option("--estimator", fit_estimator, "ols|pcr|pls|rr (tuned by 10-fold CV)")
      ->capture_default_str();
  fit->add_flag("--header", fit_header, "first CSV row is a header");
  fit->add_flag("--log-returns", fit_logret, "transform to log returns first");
  fit->add_option("--output,-o", fit_output, "output path (default stdout)");

  // --- predict ---
  auto* pred = app.add_subcommand("predict",
                                  "train/test split: fit on the head, predict the tail");
  std::string pred_input, pred_method = "bts", pred_estimator = "ols", pred_output;
  int pred_target = 1, pred_kmax = 5;
  double pred_split = 0.75;
  bool pred_header = false, pred_logret = false;
  pred->add_option("--input,-i", pred_input, "input CSV")->required();
  pred->add_option("--target", pred_target, "1-based target variable")->capture_default_str();
  pred->add_option("--kmax", pred_kmax, "maximum lag")->capture_default_str();
  pred->add_option("--method", pred_method, "bts|full|varb|cw|max")->capture_default_str();
  pred->add_option("--estimator", pred_estimator, "ols|pcr|pls|rr")->capture_default_str();
  pred->add_option("--split", pred_split, "training fraction")->capture_default_str();
  pred->add_flag("--header", pred_header, "first CSV row is a header");
  pred->add_flag("--log-returns", pred_logret, "transform to log returns first");
  pred->add_option("--output,-o", pred_output, "output path (default stdout)");

  // --- benchmark ---
  auto* bench = app.add_subcommand("benchmark", "Monte Carlo benchmark from a JSON config");
  std::string bench_config, bench_output, bench_format = "csv";
  int bench_jobs = 0;
  bench->add_option("--config", bench_config, "experiment config JSON")->required();
  bench->add_option("--output,-o", bench_output, "output path (default stdout)");
  bench->add_option("--format", bench_format, "csv|json")->capture_default_str();
  bench->add_option("--jobs,-j", bench_jobs, "worker threads (0 = all cores)")
      ->capture_default_str();

  // --- rolling ---
  auto* roll = app.add_subcommand("rolling", "windowed fit/evaluate sweep over a CSV");
  std::string roll_input, roll_method = "bts", roll_estimator = "ols", roll_output;
  int roll_target = 1, roll_kmax = 3, roll_window = 400;
  bool roll_header = false, roll_logret = false;
  roll->add_option("--input,-i", roll_input, "input CSV")->required();
  roll->add_option("--target", roll_target, "1-based target variable")->capture_default_str();
  roll->add_option("--window", roll_window, "window length in rows")->capture_default_str();
  roll->add_option("--kmax", roll_kmax, "maximum lag")->capture_default_str();
  roll->add_option("--method", roll_method, "bts|full|varb|cw|max")->capture_default_str();
  roll->add_option("--estimator", roll_estimator, "ols|pcr|pls|rr")->capture_default_str();
  roll->add_flag("--header", roll_header, "first CSV row is a header");
  roll->add_flag("--log-returns", roll_logret, "transform to log returns first");
  roll->add_option("--output,-o", roll_output, "output path (default stdout)");

  // --- roc ---
  auto* roc = app.add_subcommand("roc", "AUC between two NMSE sample files");
  std::string roc_a, roc_b;
  roc->add_option("--a", roc_a, "samples from condition A (one number per line)")->required();
  roc->add_option("--b", roc_b, "samples from condition B")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints the message / help text
    return code == 0 ? 0 : 1;     // usage errors always map to 1
  }

  if (sim->parsed()) {
    SystemSpec system = make_system(sim_system, sim_c, sim_orders, sim_seed);
    TimeSeriesMatrix series = simulate_system(system, sim_n, sim_seed);
    write_output(format_csv(series), sim_output);
    return 0;
  }

  if (sel->parsed()) {
    TimeSeriesMatrix series = load_series(sel_input, sel_header, sel_logret);
    CentralizeResult centered = centralize(series);
    SelectionKind kind = selection_from_name(sel_method);
    SelectionResult res = run_selection(kind, centered.series, sel_target - 1, sel_kmax);
    if (sel_format == "json") {
      ordered_json j;
      j["method"] = selection_name(kind);
      j["orders"] = res.orders.orders;
      j["bic"] = std::isfinite(res.trace.chosen_bic) ? ordered_json(res.trace.chosen_bic)
                                                     : ordered_json("-inf");
      if (sel_trace) {
        ordered_json tr = ordered_json::array();
        for (const auto& e : res.trace.visited) {
          tr.push_back({{"orders", e.orders.orders},
                        {"bic", e.rank_deficient ? ordered_json(nullptr) : ordered_json(e.bic)},
                        {"accepted", e.accepted},
                        {"rank_deficient", e.rank_deficient}});
        }
        j["trace"] = tr;
      }
      write_output(j.dump(2) + "\n", sel_output);
    } else {
      std::ostringstream out;
      out << selection_name(kind) << " chose " << res.orders.to_string()
          << "  bic=" << res.trace.chosen_bic << '\n';
      if (sel_trace) out << trace_lines(res.trace);
      write_output(out.str(), sel_output);
    }
    return 0;
  }

  if (fit->parsed()) {
    TimeSeriesMatrix series = load_series(fit_input, fit_header, fit_logret);
    const int target = fit_target - 1;
    CentralizeResult centered = centralize(series);
    OrderVector orders;
    if (!fit_orders.empty()) {
      if (static_cast<int>(fit_orders.size()) != series.cols()) {
        throw CLI::ValidationError("--orders", "need one order per variable");
      }
      orders = OrderVector{fit_orders, fit_kmax};
    } else {
      orders = run_selection(selection_from_name(fit_method), centered.series, target, fit_kmax)
                   .orders;
    }
    FittedModel model;
    if (orders.total() == 0) {
      model = fit_zero_order(centered.series, target);
      model.orders = orders;
    } else {
      DesignPair design = build_design(centered.series, orders, target);
      EstimatorSpec spec = tune_estimator(design, estimator_from_name(fit_estimator));
      model = svd_fit(design, spec);
    }
    model.means = centered.means;
    write_output(model_to_json(model).dump(2) + "\n", fit_output);
    return 0;
  }

  if (pred->parsed()) {
    TimeSeriesMatrix series = load_series(pred_input, pred_header, pred_logret);
    ProtocolConfig cfg;
    cfg.selection = selection_from_name(pred_method);
    cfg.estimator = estimator_from_name(pred_estimator);
    cfg.k_max = pred_kmax;
    cfg.train_fraction = pred_split;
    ProtocolResult res = train_test_protocol(series, pred_target - 1, cfg);
    std::ostringstream out;
    out << "t,actual,predicted\n";
    const int split = static_cast<int>(std::floor(pred_split * series.rows()));
    char buf[80];
    for (int i = 0; i < res.record.actuals.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g\n", split + i + 1, res.record.actuals(i),
                    res.record.predictions(i));
      out << buf;
    }
    write_output(out.str(), pred_output);
    std::cerr << res.record.method_id << " selected " << res.selected.to_string()
              << "  test NMSE=" << nmse(res.record) << '\n';
    return 0;
  }

  if (bench->parsed()) {
    std::ifstream in(bench_config);
    if (!in) throw std::runtime_error("cannot open '" + bench_config + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    ExperimentConfig cfg = config_from_json(ss.str());
    std::cerr << "benchmark: " << cfg.system_name << ", " << cfg.realizations
              << " realizations, " << cfg.methods.size() << " method(s)\n";
    ResultTable table = run_benchmark(cfg, bench_jobs);
    const std::string out_path = !bench_output.empty() ? bench_output : cfg.output_path;
    const std::string payload = bench_format == "json" ? result_table_to_json(table)
                                                       : result_table_to_csv(table);
    write_output(payload, out_path);
    return 0;
  }

  if (roll->parsed()) {
    TimeSeriesMatrix series = load_series(roll_input, roll_header, roll_logret);
    ProtocolConfig cfg;
    cfg.selection = selection_from_name(roll_method);
    cfg.estimator = estimator_from_name(roll_estimator);
    cfg.k_max = roll_kmax;
    RollingResult res = rolling_window_protocol(series, roll_target - 1, roll_window, cfg);
    std::ostringstream out;
    out << "window,nmse,failed\n";
    char buf[64];
    for (std::size_t w = 0; w < res.nmse.size(); ++w) {
      std::snprintf(buf, sizeof(buf), "%zu,%.6g,%d\n", w + 1, res.nmse[w], int(res.failed[w]));
      out << buf;
    }
    write_output(out.str(), roll_output);
    std::cerr << cfg.method_id() << " windows=" << res.nmse.size()
              << " median NMSE=" << res.median_nmse() << '\n';
    return 0;
  }

  if (roc->parsed()) {
    const double auc = roc_auc(load_samples(roc_a), load_samples(roc_b));
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g\n", auc);
    std::cout << buf;
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CLI::Error&) {
    return 1;  // CLI11_PARSE already printed usage
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
