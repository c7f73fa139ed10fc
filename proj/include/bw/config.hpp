#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bw/bellwether.hpp"
#include "bw/dataset.hpp"

namespace bw {

enum class TransformChoice { log, zscore };
enum class HoldoutPolicy { latest, by_id };

/// Full run configuration. File format: flat key = value lines, '#'
/// comments; every key is also a CLI flag (CLI wins).
struct RunConfig {
  std::string input_path;
  std::string output_dir = "out";

  ColumnSchema columns;
  FilterSpec filters;
  TransformChoice transform = TransformChoice::log;
  double log_eps = 0.05;
  double cooks_threshold = 0.0;  // <= 0: 4/n

  size_t kmin = 2;
  size_t kmax = 0;  // 0: min(10, n/30)
  uint64_t seed = 42;

  double markov_bin_width = 0.0;
  double markov_eps = 1e-8;
  size_t max_squarings = 64;
  AgeSource age_source = AgeSource::elapsed_time;

  std::vector<Kernel> kernels = {Kernel::rectangular, Kernel::triangular,
                                 Kernel::epanechnikov, Kernel::gaussian};
  std::vector<LearnerFamily> learners = {LearnerFamily::mlr, LearnerFamily::atlm,
                                         LearnerFamily::dnn};
  DnnConfig dnn;

  MetricKind search_metric = MetricKind::mae;
  double majority_rule = 0.5;
  size_t max_adjustments = 50;
  size_t adjust_step = 5;

  HoldoutPolicy holdout = HoldoutPolicy::latest;
  std::string holdout_id;

  double alpha = 0.05;

  /// Apply one key = value assignment (file line or CLI flag).
  void set(const std::string& key, const std::string& value);

  /// Canonical echo of every setting, itself a loadable config file.
  std::string echo() const;

  SearchConfig search_config(LearnerFamily learner, Kernel kernel) const;
};

/// Parse key = value lines on top of `base` (file settings override it).
RunConfig load_config(const std::string& path, RunConfig base = RunConfig());
RunConfig parse_config_text(const std::string& text, const std::string& origin,
                            RunConfig base = RunConfig());

}  // namespace bw
