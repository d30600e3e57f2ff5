#pragma once

#include "bts/design.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace bts {

enum class SelectionKind { BTS, FULL, VARB, CW, MAX };

std::string selection_name(SelectionKind kind);
SelectionKind selection_from_name(const std::string& name);

/// Bayesian Information Criterion N'*ln(SSE/N') + K*ln(N').
/// SSE = 0 returns -infinity so a perfect fit always wins.
double bic(double sse, int n_effective, int K);

struct TraceEntry {
  OrderVector orders;
  double bic = 0.0;
  bool accepted = false;        // part of the accepted path / running optimum
  bool rank_deficient = false;  // candidate was skipped
};

struct SelectionTrace {
  std::vector<TraceEntry> visited;
  OrderVector chosen;
  double chosen_bic = 0.0;
};

struct SelectionResult {
  OrderVector orders;
  SelectionTrace trace;
};

struct SelectionOptions {
  std::size_t full_budget = 1000000;  // max candidates FULL may enumerate
  bool collect_trace = true;          // FULL records improving steps only
};

/// Backward-in-time selection: start at all-zero orders, repeatedly raise one
/// variable's order by the current increment d when that lowers BIC (reset
/// d to 1 on every accepted move), otherwise escalate d; stop when no
/// variable has headroom for d.
SelectionResult select_bts(const TimeSeriesMatrix& centered, int target, int k_max,
                           const SelectionOptions& opts = {});

/// Exhaustive scan of all (k_max+1)^n order vectors.
SelectionResult select_full(const TimeSeriesMatrix& centered, int target, int k_max,
                            const SelectionOptions& opts = {});

/// Uniform VAR-style scan (k,...,k) for k = 0..k_max, scored on the target
/// equation.
SelectionResult select_varb(const TimeSeriesMatrix& centered, int target, int k_max,
                            const SelectionOptions& opts = {});

/// Component-wise scan: each variable's order chosen from a univariate
/// regressor fit of the target on that variable's lags alone.
SelectionResult select_cw(const TimeSeriesMatrix& centered, int target, int k_max,
                          const SelectionOptions& opts = {});

OrderVector select_max(int n, int k_max);

SelectionResult run_selection(SelectionKind kind, const TimeSeriesMatrix& centered, int target,
                              int k_max, const SelectionOptions& opts = {});

}  // namespace bts
