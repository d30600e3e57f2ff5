#include "bts/selection.hpp"

#include <Eigen/Cholesky>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace bts {

std::string selection_name(SelectionKind kind) {
  switch (kind) {
    case SelectionKind::BTS: return "BTS";
    case SelectionKind::FULL: return "FULL";
    case SelectionKind::VARB: return "VARB";
    case SelectionKind::CW: return "CW";
    case SelectionKind::MAX: return "MAX";
  }
  return "?";
}

SelectionKind selection_from_name(const std::string& name) {
  if (name == "BTS" || name == "bts") return SelectionKind::BTS;
  if (name == "FULL" || name == "full") return SelectionKind::FULL;
  if (name == "VARB" || name == "varb") return SelectionKind::VARB;
  if (name == "CW" || name == "cw") return SelectionKind::CW;
  if (name == "MAX" || name == "max") return SelectionKind::MAX;
  throw std::invalid_argument("unknown selection method: " + name);
}

double bic(double sse, int n_effective, int K) {
  if (n_effective < 1) throw std::invalid_argument("bic: n_effective must be >= 1");
  if (K < 0) throw std::invalid_argument("bic: negative K");
  if (sse < 0.0) sse = 0.0;
  if (sse == 0.0) return -std::numeric_limits<double>::infinity();
  const double n = static_cast<double>(n_effective);
  return n * std::log(sse / n) + K * std::log(n);
}

namespace {

constexpr double kBicTieTol = 1e-12;

// OLS sum of squared errors for arbitrary sub-designs of the full lag matrix,
// via the precomputed Gram matrix. All candidates within one selection run
// share the response rows t = k_max-1 .. N-2, so their BIC values are
// comparable.
class GramScorer {
 public:
  GramScorer(const TimeSeriesMatrix& series, int target, int k_max)
      : n_(series.cols()), k_max_(k_max) {
    const int N = series.rows();
    if (N <= k_max + 1) throw std::invalid_argument("insufficient length");
    if (target < 0 || target >= n_) throw std::invalid_argument("target index out of range");
    if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");

    n_rows_ = N - k_max;
    const int K_full = n_ * k_max;
    Eigen::MatrixXd X(n_rows_, K_full);
    Eigen::VectorXd y(n_rows_);
    for (int r = 0; r < n_rows_; ++r) {
      const int t = k_max - 1 + r;
      for (int v = 0; v < n_; ++v) {
        for (int lag = 0; lag < k_max; ++lag) {
          X(r, v * k_max + lag) = series.values(t - lag, v);
        }
      }
      y(r) = series.values(t + 1, target);
    }
    gram_ = X.transpose() * X;
    xty_ = X.transpose() * y;
    yty_ = y.squaredNorm();
  }

  int n_vars() const { return n_; }
  int n_rows() const { return n_rows_; }
  double zero_order_bic() const { return bic(yty_, n_rows_, 0); }

  struct Score {
    double bic = std::numeric_limits<double>::infinity();
    bool ok = false;
  };

  Score score(const OrderVector& orders) const {
    const int K = orders.total();
    if (K == 0) return {zero_order_bic(), true};

    std::vector<int> cols;
    cols.reserve(K);
    for (int v = 0; v < n_; ++v) {
      for (int lag = 0; lag < orders.orders[v]; ++lag) cols.push_back(v * k_max_ + lag);
    }

    Eigen::MatrixXd G(K, K);
    Eigen::VectorXd c(K);
    for (int i = 0; i < K; ++i) {
      c(i) = xty_(cols[i]);
      for (int j = 0; j < K; ++j) G(i, j) = gram_(cols[i], cols[j]);
    }

    Eigen::LDLT<Eigen::MatrixXd> ldlt(G);
    const Eigen::VectorXd& D = ldlt.vectorD();
    const double d_max = D.maxCoeff();
    // singular to working precision: pivot collapse of the PSD Gram matrix
    if (!(d_max > 0.0) || D.minCoeff() <= d_max * K * 8.0 * 2.220446049250313e-16) {
      return {};
    }
    Eigen::VectorXd b = ldlt.solve(c);
    if (!b.allFinite()) return {};
    double sse = yty_ - c.dot(b);
    if (sse < 0.0) sse = 0.0;
    return {bic(sse, n_rows_, K), true};
  }

 private:
  int n_ = 0;
  int k_max_ = 0;
  int n_rows_ = 0;
  Eigen::MatrixXd gram_;
  Eigen::VectorXd xty_;
  double yty_ = 0.0;
};

void push_entry(SelectionTrace& trace, const OrderVector& orders, double bic_value, bool accepted,
                bool rank_deficient) {
  trace.visited.push_back({orders, bic_value, accepted, rank_deficient});
}

}  // namespace

SelectionResult select_bts(const TimeSeriesMatrix& centered, int target, int k_max,
                           const SelectionOptions& opts) {
  GramScorer scorer(centered, target, k_max);
  const int n = scorer.n_vars();

  SelectionResult res;
  OrderVector current = zero_orders(n, k_max);
  double current_bic = scorer.zero_order_bic();
  push_entry(res.trace, current, current_bic, true, false);

  int d = 1;
  while (true) {
    int headroom = 0;
    for (int v = 0; v < n; ++v) headroom = std::max(headroom, k_max - current.orders[v]);
    if (headroom == 0 || d > headroom) break;

    int best_var = -1;
    double best_bic = std::numeric_limits<double>::infinity();
    for (int v = 0; v < n; ++v) {
      if (current.orders[v] + d > k_max) continue;
      OrderVector candidate = current;
      candidate.orders[v] += d;
      GramScorer::Score s = scorer.score(candidate);
      push_entry(res.trace, candidate, s.bic, false, !s.ok);
      if (!s.ok) continue;
      // ties within kBicTieTol keep the lowest variable index
      if (best_var < 0 || s.bic < best_bic - kBicTieTol) {
        best_bic = s.bic;
        best_var = v;
      }
    }

    if (best_var >= 0 && best_bic < current_bic) {
      current.orders[best_var] += d;
      current_bic = best_bic;
      for (auto it = res.trace.visited.rbegin(); it != res.trace.visited.rend(); ++it) {
        if (it->orders == current) {
          it->accepted = true;
          break;
        }
      }
      d = 1;
    } else {
      ++d;
    }
  }

  res.orders = current;
  res.trace.chosen = current;
  res.trace.chosen_bic = current_bic;
  if (!opts.collect_trace) res.trace.visited.clear();
  return res;
}

SelectionResult select_full(const TimeSeriesMatrix& centered, int target, int k_max,
                            const SelectionOptions& opts) {
  GramScorer scorer(centered, target, k_max);
  const int n = scorer.n_vars();

  double count_d = 1.0;
  for (int v = 0; v < n; ++v) count_d *= static_cast<double>(k_max + 1);
  if (count_d > static_cast<double>(opts.full_budget)) {
    char msg[160];
    std::snprintf(msg, sizeof(msg),
                  "FULL intractable: %.0f candidate order vectors exceed budget %zu", count_d,
                  opts.full_budget);
    throw std::runtime_error(msg);
  }
  const std::size_t count = static_cast<std::size_t>(count_d);

  std::vector<double> bics(count);
  std::vector<char> ok(count);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 64) if (count > 4096)
#endif
  for (long long idx = 0; idx < static_cast<long long>(count); ++idx) {
    OrderVector cand = zero_orders(n, k_max);
    std::size_t rem = static_cast<std::size_t>(idx);
    for (int v = n - 1; v >= 0; --v) {  // last variable varies fastest
      cand.orders[v] = static_cast<int>(rem % (k_max + 1));
      rem /= (k_max + 1);
    }
    GramScorer::Score s = scorer.score(cand);
    bics[idx] = s.bic;
    ok[idx] = s.ok ? 1 : 0;
  }

  SelectionResult res;
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_idx = 0;
  bool any = false;
  for (std::size_t idx = 0; idx < count; ++idx) {
    if (!ok[idx]) continue;
    if (!any || bics[idx] < best) {
      best = bics[idx];
      best_idx = idx;
      any = true;
      if (opts.collect_trace) {
        OrderVector cand = zero_orders(n, k_max);
        std::size_t rem = idx;
        for (int v = n - 1; v >= 0; --v) {
          cand.orders[v] = static_cast<int>(rem % (k_max + 1));
          rem /= (k_max + 1);
        }
        push_entry(res.trace, cand, bics[idx], true, false);
      }
    }
  }
  if (!any) throw std::runtime_error("FULL: every candidate was rank-deficient");

  OrderVector chosen = zero_orders(n, k_max);
  std::size_t rem = best_idx;
  for (int v = n - 1; v >= 0; --v) {
    chosen.orders[v] = static_cast<int>(rem % (k_max + 1));
    rem /= (k_max + 1);
  }
  res.orders = chosen;
  res.trace.chosen = chosen;
  res.trace.chosen_bic = best;
  return res;
}

SelectionResult select_varb(const TimeSeriesMatrix& centered, int target, int k_max,
                            const SelectionOptions& opts) {
  GramScorer scorer(centered, target, k_max);
  const int n = scorer.n_vars();

  SelectionResult res;
  double best = std::numeric_limits<double>::infinity();
  int best_k = 0;
  bool any = false;
  for (int k = 0; k <= k_max; ++k) {
    OrderVector cand = uniform_orders(n, k, k_max);
    GramScorer::Score s = scorer.score(cand);
    push_entry(res.trace, cand, s.bic, false, !s.ok);
    if (!s.ok) continue;
    if (!any || s.bic < best) {
      best = s.bic;
      best_k = k;
      any = true;
    }
  }
  if (!any) throw std::runtime_error("VARB: every candidate was rank-deficient");
  res.orders = uniform_orders(n, best_k, k_max);
  for (auto& e : res.trace.visited) {
    if (e.orders == res.orders) e.accepted = true;
  }
  res.trace.chosen = res.orders;
  res.trace.chosen_bic = best;
  if (!opts.collect_trace) res.trace.visited.clear();
  return res;
}

SelectionResult select_cw(const TimeSeriesMatrix& centered, int target, int k_max,
                          const SelectionOptions& opts) {
  GramScorer scorer(centered, target, k_max);
  const int n = scorer.n_vars();

  SelectionResult res;
  OrderVector assembled = zero_orders(n, k_max);
  for (int v = 0; v < n; ++v) {
    double best = std::numeric_limits<double>::infinity();
    int best_k = 0;
    bool any = false;
    for (int k = 0; k <= k_max; ++k) {
      OrderVector cand = zero_orders(n, k_max);
      cand.orders[v] = k;
      GramScorer::Score s = scorer.score(cand);
      push_entry(res.trace, cand, s.bic, false, !s.ok);
      if (!s.ok) continue;
      if (!any || s.bic < best) {
        best = s.bic;
        best_k = k;
        any = true;
      }
    }
    assembled.orders[v] = best_k;
  }

  // joint BIC of the assembled vector, for the record; it may be infeasible
  GramScorer::Score joint = scorer.score(assembled);
  push_entry(res.trace, assembled, joint.bic, true, !joint.ok);
  res.orders = assembled;
  res.trace.chosen = assembled;
  res.trace.chosen_bic = joint.bic;
  if (!opts.collect_trace) res.trace.visited.clear();
  return res;
}

OrderVector select_max(int n, int k_max) { return uniform_orders(n, k_max, k_max); }

SelectionResult run_selection(SelectionKind kind, const TimeSeriesMatrix& centered, int target,
                              int k_max, const SelectionOptions& opts) {
  switch (kind) {
    case SelectionKind::BTS: return select_bts(centered, target, k_max, opts);
    case SelectionKind::FULL: return select_full(centered, target, k_max, opts);
    case SelectionKind::VARB: return select_varb(centered, target, k_max, opts);
    case SelectionKind::CW: return select_cw(centered, target, k_max, opts);
    case SelectionKind::MAX: {
      SelectionResult res;
      res.orders = select_max(centered.cols(), k_max);
      res.trace.chosen = res.orders;
      res.trace.chosen_bic = std::numeric_limits<double>::quiet_NaN();
      return res;
    }
  }
  throw std::logic_error("unreachable selection kind");
}

}  // namespace bts
