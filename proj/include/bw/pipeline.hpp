#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bw/bellwether.hpp"
#include "bw/config.hpp"
#include "bw/csv.hpp"
#include "bw/dataset.hpp"
#include "bw/stats.hpp"
#include "bw/stratify.hpp"

#include "json.hpp"

namespace bw {

/// Everything that happened between the raw CSV and the clean, sorted,
/// transformed ProjectSet.
struct PreprocessResult {
  size_t csv_rows = 0;  // data rows in the input file
  std::vector<RejectedRow> rejected;
  FilterReport filters;
  CooksReport cooks;
  ProjectSet clean;
};

PreprocessResult preprocess(const RunConfig& cfg);
PreprocessResult preprocess_table(const CsvTable& table, const RunConfig& cfg,
                                  const std::string& origin);

/// One learner x kernel cell of the evaluation grid.
struct CellResult {
  LearnerFamily learner = LearnerFamily::mlr;
  Kernel kernel = Kernel::rectangular;
  BellwetherResult search;
  HoldoutReport holdout;
  bool search_ok = false;
  std::string search_error;
};

struct PairwiseComparison {
  Kernel a = Kernel::rectangular;  // treatment
  Kernel b = Kernel::rectangular;  // control
  TestResult welch;
  EffectSize glass;
};

struct LearnerAnalysis {
  LearnerFamily learner = LearnerFamily::mlr;
  TestResult kw;  // across kernels, per-validation-window metric samples
  std::vector<PairwiseComparison> pairs;
  PortfolioResult portfolio;
  bool portfolio_ok = false;
  std::string portfolio_error;
};

struct StratumStats {
  size_t window = 0;
  std::string feature;
  MomentSummary m;
  GateResult gate;
};

struct EvaluationReport {
  RunConfig cfg;
  PreprocessResult pre;
  ClusteringResult clustering;
  size_t q = 0;
  std::vector<size_t> stratum_sizes;
  std::vector<StratumStats> stratum_stats;
  std::optional<ProjectRecord> holdout;  // still pipeline-transformed
  std::map<std::string, size_t> window_by_id;
  std::vector<CellResult> cells;
  std::vector<LearnerAnalysis> learners;

  /// True when at least one cell located an ergodic Bellwether window.
  bool any_bellwether() const;
};

/// Full run: preprocess, stratify, search every learner x kernel cell,
/// baseline portfolios, holdout estimates and the significance tests.
EvaluationReport run_pipeline(const RunConfig& cfg);
EvaluationReport run_pipeline_table(const CsvTable& table, const RunConfig& cfg,
                                    const std::string& origin);

std::string render_report_markdown(const EvaluationReport& rep);
nlohmann::json report_to_json(const EvaluationReport& rep);
std::string render_trace_csv(const EvaluationReport& rep);
CsvTable clean_data_table(const EvaluationReport& rep);
CsvTable removals_table(const PreprocessResult& pre);

/// Deterministic %.17g rendering used by every text artifact.
std::string format_g17(double v);

/// Write report.md, report.json, trace.csv, clean_data.csv and
/// removals.csv under out_dir (created if missing).
void write_artifacts(const EvaluationReport& rep, const std::string& out_dir);

}  // namespace bw
