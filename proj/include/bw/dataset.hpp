#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bw/date.hpp"

namespace bw {

/// One completed software project.
struct ProjectRecord {
  std::string id;
  std::optional<Date> start_date;
  Date completion_date;
  /// Ratio-scaled features by name (size, effort, elapsed_time, pdr, ...).
  /// Values are raw at load time and replaced in place by transforms.
  std::map<std::string, double> ratio;
  std::map<std::string, std::string> categorical;
  std::optional<std::string> quality_rating;
  std::optional<double> fp_version;
  bool web_project = false;

  double feature(const std::string& name) const;
  bool has_feature(const std::string& name) const;
};

enum class FeatureKind { ratio, categorical };

struct FeatureSpec {
  std::string name;
  FeatureKind kind;
};

/// Record of one applied dataset transform, sufficient to invert it.
struct TransformRecord {
  enum class Kind { log_minmax, zscore };
  Kind kind;
  std::string feature;
  // log_minmax: a = min(ln x), b = max(ln x), eps = open-interval margin.
  // zscore: a = mean, b = sd, eps unused.
  double a = 0.0, b = 0.0, eps = 0.0;

  double apply(double raw) const;
  double invert(double transformed) const;
};

struct ProjectSet {
  std::vector<ProjectRecord> records;
  std::vector<FeatureSpec> feature_schema;
  std::vector<TransformRecord> transform_log;

  size_t size() const { return records.size(); }

  std::vector<std::string> ratio_feature_names() const;
  std::vector<std::string> categorical_feature_names() const;

  /// Column of the (possibly transformed) feature across all records.
  std::vector<double> feature_column(const std::string& name) const;

  /// Undo every recorded transform of `name` on a transformed value.
  double invert_feature(const std::string& name, double transformed) const;
  /// Apply every recorded transform of `name` to a raw value.
  double apply_transforms(const std::string& name, double raw) const;
};

/// Column mapping from CSV header names to record roles.
struct ColumnSchema {
  std::string completion_date = "completion_date";
  std::string size = "size";
  std::string effort = "effort";
  std::string elapsed_time = "elapsed_time";
  // Optional columns; empty string = not present.
  std::string id;
  std::string start_date;
  std::string quality_rating;
  std::string fp_version;
  std::string web_project;
  std::vector<std::string> categoricals;
  bool derive_pdr = true;
};

struct RejectedRow {
  size_t row_number;  // 1-based data row index
  std::string reason;
};

struct LoadResult {
  ProjectSet set;
  std::vector<RejectedRow> rejected;
};

/// Active quality filters. All default on except web filtering, which
/// needs a web-flag column to mean anything.
struct FilterSpec {
  bool drop_unknown_age = true;
  bool drop_unknown_effort = true;
  bool drop_unknown_size = true;
  bool drop_low_quality = true;
  std::vector<std::string> accepted_ratings = {"A", "B"};
  bool drop_outdated_fp = true;
  double min_fp_version = 4.0;
  bool drop_web = true;
  bool drop_missing_values = true;
};

struct FilterReport {
  std::map<std::string, size_t> removed_by_filter;
  std::vector<std::string> removed_ids;
  std::vector<std::pair<std::string, std::string>> removals;  // (id, filter)
  size_t retained = 0;
};

struct CooksReport {
  std::vector<std::string> removed_ids;
  std::vector<double> removed_distances;
  double threshold = 0.0;
};

LoadResult load_projects(const std::string& path, const ColumnSchema& schema);
LoadResult load_projects_table(const struct CsvTable& table,
                               const ColumnSchema& schema,
                               const std::string& origin);

ProjectSet filter_quality(const ProjectSet& ps, const FilterSpec& spec,
                          FilterReport* report = nullptr);

/// ln then per-feature rescale into the open interval (eps, 1-eps).
ProjectSet log_transform(const ProjectSet& ps,
                         const std::vector<std::string>& features,
                         double eps = 0.05);

ProjectSet zscore_normalize(const ProjectSet& ps,
                            const std::vector<std::string>& features);

/// OLS of target on predictors; drops records with Cook's distance above
/// the threshold (default 4/n when threshold <= 0).
ProjectSet cooks_filter(const ProjectSet& ps, const std::string& target,
                        const std::vector<std::string>& predictors,
                        double threshold, CooksReport* report = nullptr);

/// Cook's distance of every record for the OLS fit of target on predictors.
std::vector<double> cooks_distances(const ProjectSet& ps,
                                    const std::string& target,
                                    const std::vector<std::string>& predictors);

ProjectSet sort_chronologically(const ProjectSet& ps);

}  // namespace bw
