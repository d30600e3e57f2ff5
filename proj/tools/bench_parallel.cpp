// Timing harness: the OpenMP Monte Carlo driver against the serial
// reference, plus the parallel FULL scan against a single-threaded run.
// Verifies that every variant produces byte-identical results.

#include "bts/benchmark.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <chrono>
#include <cstdio>
#include <string>

using namespace bts;

namespace {

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  const int realizations = argc > 1 ? std::atoi(argv[1]) : 64;
#ifdef _OPENMP
  const int max_jobs = omp_get_max_threads();
#else
  const int max_jobs = 1;
#endif

  ExperimentConfig cfg;
  cfg.system_name = "builtin_var2";
  cfg.system = builtin_var2(false);
  cfg.N_list = {400};
  cfg.realizations = realizations;
  cfg.k_max = 5;
  cfg.targets = {4};
  cfg.methods = {{SelectionKind::FULL, EstimatorKind::OLS},
                 {SelectionKind::BTS, EstimatorKind::OLS},
                 {SelectionKind::BTS, EstimatorKind::RR},
                 {SelectionKind::MAX, EstimatorKind::RR}};
  cfg.base_seed = 31415;

  std::printf("monte carlo driver, %d realizations, %zu methods\n", realizations,
              cfg.methods.size());

  auto t0 = std::chrono::steady_clock::now();
  ResultTable reference = run_benchmark_reference(cfg);
  const double t_ref = seconds_since(t0);
  std::printf("  serial reference      %7.2fs\n", t_ref);

  const std::string ref_json = result_table_to_json(reference);
  for (int jobs = 1; jobs <= max_jobs; jobs *= 2) {
    t0 = std::chrono::steady_clock::now();
    ResultTable par = run_benchmark(cfg, jobs);
    const double t_par = seconds_since(t0);
    const bool identical = result_table_to_json(par) == ref_json;
    std::printf("  omp driver, %d job(s)  %7.2fs  speedup %.2fx  %s\n", jobs, t_par,
                t_ref / t_par, identical ? "identical output" : "OUTPUT MISMATCH");
    if (!identical) return 1;
  }

  // FULL candidate scan on an 8-variable system: 4^8 = 65536 OLS scores
  TimeSeriesMatrix series = simulate_collinear(collinear_system(1, 0.5), 400, 7);
  CentralizeResult centered = centralize(series);
  SelectionOptions opts;
  opts.collect_trace = false;

  std::printf("FULL scan, 8 variables, k_max=3\n");
#ifdef _OPENMP
  omp_set_num_threads(1);
#endif
  t0 = std::chrono::steady_clock::now();
  SelectionResult serial_scan = select_full(centered.series, 7, 3, opts);
  const double t_scan1 = seconds_since(t0);
  std::printf("  1 thread   %7.2fs  chose %s\n", t_scan1, serial_scan.orders.to_string().c_str());
#ifdef _OPENMP
  omp_set_num_threads(max_jobs);
  t0 = std::chrono::steady_clock::now();
  SelectionResult parallel_scan = select_full(centered.series, 7, 3, opts);
  const double t_scanN = seconds_since(t0);
  const bool same = parallel_scan.orders == serial_scan.orders;
  std::printf("  %d threads  %7.2fs  speedup %.2fx  %s\n", max_jobs, t_scanN, t_scan1 / t_scanN,
              same ? "identical choice" : "CHOICE MISMATCH");
  if (!same) return 1;
#endif
  return 0;
}
