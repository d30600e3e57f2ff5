#pragma once

#include "bts/evaluation.hpp"
#include "bts/simulation.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace bts {

struct MethodCombo {
  SelectionKind selection = SelectionKind::BTS;
  EstimatorKind estimator = EstimatorKind::OLS;

  std::string id() const;
};

/// All 20 combinations of 5 selection methods and 4 estimators.
std::vector<MethodCombo> all_method_combos();

using SystemSpec = std::variant<LinearSystemSpec, CollinearSystemSpec>;

int system_dimension(const SystemSpec& spec);
TimeSeriesMatrix simulate_system(const SystemSpec& spec, int N, std::uint64_t seed);

struct ExperimentConfig {
  std::string system_name;  // label carried into results
  SystemSpec system;
  std::vector<int> N_list;
  int realizations = 1;
  int k_max = 5;
  std::vector<int> targets;  // 1-based variable indices
  std::vector<MethodCombo> methods;
  std::uint64_t base_seed = 0;
  double train_fraction = 0.75;
  CvConfig cv;
  std::size_t full_budget = 1000000;
  std::string output_path;
};

void validate_config(const ExperimentConfig& cfg);

struct BenchmarkCell {
  MethodCombo method;
  int N = 0;
  int target = 0;  // 1-based
  double mean_nmse = 0.0;
  double nmse_std = 0.0;
  double median_nmse = 0.0;
  int realizations = 0;
  int failures = 0;  // fits that failed; sentinel NMSE = 1 entered the mean
  std::map<std::vector<int>, int> order_frequency;
  MethodComparison vs_best;  // Diebold-Mariano outcome against the best cell
  bool starred = false;      // best cell or not evidently different from it
  double wall_time_s = 0.0;  // informational only; never serialized

  const std::vector<int>* modal_orders() const;
};

struct ResultTable {
  std::string system_name;
  std::uint64_t base_seed = 0;
  std::uint64_t config_hash = 0;
  std::vector<BenchmarkCell> cells;
};

/// Monte Carlo driver: per realization, simulate once and run the
/// train/test protocol for every method pair; aggregate means, order
/// frequencies and pairwise Diebold-Mariano stars. Realizations fan out
/// across `jobs` OpenMP threads; aggregation order is fixed so results are
/// identical for any job count.
ResultTable run_benchmark(const ExperimentConfig& cfg, int jobs = 0);

/// Plain serial loop kept as the reference implementation for testing the
/// parallel driver against.
ResultTable run_benchmark_reference(const ExperimentConfig& cfg);

// --- persistence ---------------------------------------------------------

ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& cfg);

std::string result_table_to_json(const ResultTable& table);
ResultTable result_table_from_json(const std::string& text);
std::string result_table_to_csv(const ResultTable& table);

void emit_results(const ResultTable& table, const std::string& format, const std::string& path);

/// FNV-1a over the canonical config JSON (stable across platforms).
std::uint64_t config_hash(const ExperimentConfig& cfg);

}  // namespace bts
