#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bw/learners.hpp"
#include "bw/markov.hpp"
#include "bw/metrics.hpp"
#include "bw/stratify.hpp"
#include "bw/weighting.hpp"

namespace bw {

enum class MetricKind { mae, mbre, mibre };

std::string metric_name(MetricKind m);
MetricKind metric_from_name(const std::string& name);
double pick_metric(const ErrorSummary& s, MetricKind m);

struct SearchConfig {
  LearnerFamily learner = LearnerFamily::mlr;
  Kernel kernel = Kernel::rectangular;
  MetricKind metric = MetricKind::mae;
  double majority_rule = 0.5;  // strict fraction of validation windows to beat
  size_t max_adjustments = 50;
  size_t adjust_step = 5;
  uint64_t seed = 1;
  DnnConfig dnn;
  // Markov settings for the stationarity check.
  double markov_bin_width = 0.0;  // <= 0: (max-min)/ceil(sqrt(n))
  AgeSource age_source = AgeSource::elapsed_time;
  double markov_eps = 1e-8;
  size_t max_squarings = 64;
};

struct WindowScore {
  size_t window_index = 0;
  ErrorSummary errors;       // candidate's full error summary on this window
  double metric = 0.0;       // the configured metric, from errors
  double baseline_metric = 0.0;
  bool win = false;  // candidate strictly beats the baseline on this window
};

struct ScoreLedger {
  std::vector<WindowScore> per_window;
  size_t wins = 0;
  double mean_metric = 0.0;
  bool learner_failed = false;
  std::string diagnostic;
};

struct TraceStep {
  size_t iteration = 0;
  std::string action;  // "initial", "grow", "shrink"
  size_t cut = 0;      // index of the oldest candidate record
  size_t size = 0;
  double age = 0.0;
  ChainStatus chain_status = ChainStatus::not_converged;
  size_t wins = 0;
  size_t validation_windows = 0;
  double mean_metric = 0.0;
  std::vector<double> per_window_metric;
};

struct BellwetherResult {
  bool found = false;              // an ergodic candidate was located
  bool majority_satisfied = false; // it also beat the majority of windows
  WeightedWindow window;
  size_t size = 0;
  double age = 0.0;
  StationaryResult stationarity;
  ScoreLedger wins;
  std::vector<TraceStep> trace;
  std::string message;
};

struct PortfolioResult {
  ErrorSummary errors;
  size_t folds = 0;
  size_t skips = 0;
};

struct HoldoutReport {
  std::string holdout_id;
  double actual = 0.0;
  std::optional<double> bellwether_estimate;
  std::optional<double> portfolio_estimate;
  size_t window_size = 0;
  double window_age = 0.0;
};

/// Fit the configured learner on the candidate and score it on every other
/// window; a win is recorded where the candidate's metric strictly beats
/// the supplied baseline metric for that window.
ScoreLedger cross_window_score(const WeightedWindow& candidate,
                               const std::vector<Window>& others,
                               const SearchConfig& cfg,
                               const std::vector<double>& baseline_metrics);

/// Per-window metric of an already fitted model (used for the baseline).
std::vector<double> score_model(const FittedModel& model,
                                const std::vector<Window>& windows,
                                MetricKind metric);

/// Hill-climbing search over contiguous chronological suffix candidates,
/// anchored at the most recent stratum; candidates must pass the
/// ergodicity check to be reported.
BellwetherResult search_bellwether(const std::vector<Window>& strata,
                                   const SearchConfig& cfg);

/// Leave-one-out over all preprocessed projects with the configured
/// learner (unweighted, the growing-portfolio baseline).
PortfolioResult growing_portfolio(const ProjectSet& ps, const SearchConfig& cfg,
                                  bool parallel = true);

/// Predict the holdout with both the Bellwether window and the growing
/// portfolio trained on the full non-holdout set.
HoldoutReport evaluate_holdout(const BellwetherResult& result,
                               const ProjectRecord& holdout,
                               const ProjectSet& portfolio_set,
                               const SearchConfig& cfg);

}  // namespace bw
