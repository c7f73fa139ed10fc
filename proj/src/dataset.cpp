#include "bw/dataset.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "bw/csv.hpp"
#include "bw/errors.hpp"

namespace bw {

double ProjectRecord::feature(const std::string& name) const {
  auto it = ratio.find(name);
  if (it == ratio.end()) throw DataError("record " + id + ": missing feature '" + name + "'");
  return it->second;
}

bool ProjectRecord::has_feature(const std::string& name) const {
  return ratio.count(name) > 0;
}

double TransformRecord::apply(double raw) const {
  switch (kind) {
    case Kind::log_minmax: {
      const double lx = std::log(raw);
      if (b == a) throw NumericError("log transform: zero range for '" + feature + "'");
      return eps + (1.0 - 2.0 * eps) * (lx - a) / (b - a);
    }
    case Kind::zscore:
      return (raw - a) / b;
  }
  throw NumericError("unknown transform kind");
}

double TransformRecord::invert(double transformed) const {
  switch (kind) {
    case Kind::log_minmax: {
      const double lx = a + (transformed - eps) / (1.0 - 2.0 * eps) * (b - a);
      return std::exp(lx);
    }
    case Kind::zscore:
      return transformed * b + a;
  }
  throw NumericError("unknown transform kind");
}

std::vector<std::string> ProjectSet::ratio_feature_names() const {
  std::vector<std::string> out;
  for (const auto& f : feature_schema) {
    if (f.kind == FeatureKind::ratio) out.push_back(f.name);
  }
  return out;
}

std::vector<std::string> ProjectSet::categorical_feature_names() const {
  std::vector<std::string> out;
  for (const auto& f : feature_schema) {
    if (f.kind == FeatureKind::categorical) out.push_back(f.name);
  }
  return out;
}

std::vector<double> ProjectSet::feature_column(const std::string& name) const {
  std::vector<double> col;
  col.reserve(records.size());
  for (const auto& r : records) col.push_back(r.feature(name));
  return col;
}

double ProjectSet::invert_feature(const std::string& name, double transformed) const {
  double v = transformed;
  for (auto it = transform_log.rbegin(); it != transform_log.rend(); ++it) {
    if (it->feature == name) v = it->invert(v);
  }
  return v;
}

double ProjectSet::apply_transforms(const std::string& name, double raw) const {
  double v = raw;
  for (const auto& t : transform_log) {
    if (t.feature == name) v = t.apply(v);
  }
  return v;
}

namespace {

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  if (end == s.c_str()) return false;
  while (*end == ' ') ++end;
  return *end == '\0' && std::isfinite(out);
}

bool truthy(const std::string& s) {
  return s == "1" || s == "true" || s == "TRUE" || s == "Yes" || s == "yes" ||
         s == "Y" || s == "y";
}

}  // namespace

LoadResult load_projects_table(const CsvTable& table, const ColumnSchema& schema,
                               const std::string& origin) {
  auto require_col = [&](const std::string& name) {
    const int idx = table.column_index(name);
    if (idx < 0) {
      throw DataError(origin + ": missing required column '" + name + "'");
    }
    return idx;
  };
  const int c_date = require_col(schema.completion_date);
  const int c_size = require_col(schema.size);
  const int c_effort = require_col(schema.effort);
  const int c_elapsed = table.column_index(schema.elapsed_time);
  const int c_id = schema.id.empty() ? -1 : require_col(schema.id);
  const int c_start = schema.start_date.empty() ? -1 : table.column_index(schema.start_date);
  const int c_rating = schema.quality_rating.empty() ? -1 : table.column_index(schema.quality_rating);
  const int c_fpv = schema.fp_version.empty() ? -1 : table.column_index(schema.fp_version);
  const int c_web = schema.web_project.empty() ? -1 : table.column_index(schema.web_project);
  std::vector<std::pair<std::string, int>> cat_cols;
  for (const auto& name : schema.categoricals) {
    cat_cols.emplace_back(name, require_col(name));
  }

  LoadResult out;
  auto& schema_out = out.set.feature_schema;
  schema_out.push_back({"size", FeatureKind::ratio});
  schema_out.push_back({"effort", FeatureKind::ratio});
  schema_out.push_back({"elapsed_time", FeatureKind::ratio});
  if (schema.derive_pdr) schema_out.push_back({"pdr", FeatureKind::ratio});
  for (const auto& [name, idx] : cat_cols) {
    (void)idx;
    schema_out.push_back({name, FeatureKind::categorical});
  }

  for (size_t row = 0; row < table.rows.size(); ++row) {
    const auto& fields = table.rows[row];
    auto field = [&](int idx) -> std::string {
      if (idx < 0 || static_cast<size_t>(idx) >= fields.size()) return "";
      return fields[idx];
    };
    auto reject = [&](const std::string& why) {
      out.rejected.push_back({row + 1, why});
    };

    if (fields.size() != table.header.size()) {
      reject("field count mismatch");
      continue;
    }
    ProjectRecord rec;
    rec.id = c_id >= 0 ? field(c_id) : "row" + std::to_string(row + 1);
    Date d;
    if (!Date::try_parse(field(c_date), d)) {
      reject("missing or unparseable completion_date");
      continue;
    }
    rec.completion_date = d;
    double v;
    if (!parse_double(field(c_size), v)) {
      reject("missing or unparseable size");
      continue;
    }
    rec.ratio["size"] = v;
    if (!parse_double(field(c_effort), v)) {
      reject("missing or unparseable effort");
      continue;
    }
    rec.ratio["effort"] = v;
    if (c_elapsed >= 0 && parse_double(field(c_elapsed), v)) {
      rec.ratio["elapsed_time"] = v;
    }
    if (schema.derive_pdr && rec.ratio.count("size") && rec.ratio["size"] != 0.0) {
      rec.ratio["pdr"] = rec.ratio["effort"] / rec.ratio["size"];
    }
    if (c_start >= 0) {
      Date sd;
      if (Date::try_parse(field(c_start), sd)) rec.start_date = sd;
    }
    if (c_rating >= 0 && !field(c_rating).empty()) rec.quality_rating = field(c_rating);
    if (c_fpv >= 0 && parse_double(field(c_fpv), v)) rec.fp_version = v;
    if (c_web >= 0) rec.web_project = truthy(field(c_web));
    for (const auto& [name, idx] : cat_cols) rec.categorical[name] = field(idx);
    out.set.records.push_back(std::move(rec));
  }
  return out;
}

LoadResult load_projects(const std::string& path, const ColumnSchema& schema) {
  return load_projects_table(read_csv(path), schema, path);
}

ProjectSet filter_quality(const ProjectSet& ps, const FilterSpec& spec,
                          FilterReport* report) {
  ProjectSet out;
  out.feature_schema = ps.feature_schema;
  out.transform_log = ps.transform_log;
  FilterReport local;
  auto& rep = report ? *report : local;

  const auto cats = ps.categorical_feature_names();
  for (const auto& r : ps.records) {
    std::string failed;
    if (spec.drop_unknown_age &&
        (!r.has_feature("elapsed_time") || r.feature("elapsed_time") <= 0.0)) {
      failed = "unknown_age";
    } else if (spec.drop_unknown_effort &&
               (!r.has_feature("effort") || r.feature("effort") <= 0.0)) {
      failed = "unknown_effort";
    } else if (spec.drop_unknown_size &&
               (!r.has_feature("size") || r.feature("size") <= 0.0)) {
      failed = "unknown_size";
    } else if (spec.drop_low_quality && r.quality_rating.has_value() &&
               std::find(spec.accepted_ratings.begin(), spec.accepted_ratings.end(),
                         *r.quality_rating) == spec.accepted_ratings.end()) {
      failed = "low_quality_rating";
    } else if (spec.drop_outdated_fp && r.fp_version.has_value() &&
               *r.fp_version < spec.min_fp_version) {
      failed = "outdated_fp_version";
    } else if (spec.drop_web && r.web_project) {
      failed = "web_project";
    } else if (spec.drop_missing_values) {
      for (const auto& c : cats) {
        auto it = r.categorical.find(c);
        if (it == r.categorical.end() || it->second.empty()) {
          failed = "missing_values";
          break;
        }
      }
    }
    if (failed.empty()) {
      out.records.push_back(r);
    } else {
      ++rep.removed_by_filter[failed];
      rep.removed_ids.push_back(r.id);
      rep.removals.emplace_back(r.id, failed);
    }
  }
  rep.retained = out.records.size();
  return out;
}

ProjectSet log_transform(const ProjectSet& ps,
                         const std::vector<std::string>& features, double eps) {
  if (!(eps >= 0.0 && eps < 0.5)) throw ParamError("log_transform: eps must lie in [0, 0.5)");
  ProjectSet out = ps;
  for (const auto& name : features) {
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (const auto& r : out.records) {
      const double x = r.feature(name);
      if (x <= 0.0) {
        throw NumericError("log_transform: non-positive value of '" + name +
                           "' in record " + r.id);
      }
      const double lx = std::log(x);
      if (first) {
        lo = hi = lx;
        first = false;
      } else {
        lo = std::min(lo, lx);
        hi = std::max(hi, lx);
      }
    }
    if (first) throw DataError("log_transform: empty set");
    if (hi == lo) throw NumericError("log_transform: zero range for '" + name + "'");
    TransformRecord t{TransformRecord::Kind::log_minmax, name, lo, hi, eps};
    for (auto& r : out.records) r.ratio[name] = t.apply(r.feature(name));
    out.transform_log.push_back(t);
  }
  return out;
}

ProjectSet zscore_normalize(const ProjectSet& ps,
                            const std::vector<std::string>& features) {
  ProjectSet out = ps;
  const size_t n = out.records.size();
  if (n < 2) throw DataError("zscore_normalize: need at least 2 records");
  for (const auto& name : features) {
    double sum = 0.0;
    for (const auto& r : out.records) sum += r.feature(name);
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (const auto& r : out.records) {
      const double d = r.feature(name) - mean;
      ss += d * d;
    }
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (sd == 0.0) throw NumericError("zscore_normalize: zero sd for '" + name + "'");
    TransformRecord t{TransformRecord::Kind::zscore, name, mean, sd, 0.0};
    for (auto& r : out.records) r.ratio[name] = t.apply(r.feature(name));
    out.transform_log.push_back(t);
  }
  return out;
}

std::vector<double> cooks_distances(const ProjectSet& ps, const std::string& target,
                                    const std::vector<std::string>& predictors) {
  const auto n = static_cast<Eigen::Index>(ps.records.size());
  const auto p = static_cast<Eigen::Index>(predictors.size()) + 1;  // + intercept
  if (n < p + 1) throw DataError("cooks_distances: too few records for the design");

  Eigen::MatrixXd X(n, p);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    X(i, 0) = 1.0;
    for (size_t j = 0; j < predictors.size(); ++j) {
      X(i, static_cast<Eigen::Index>(j) + 1) = ps.records[i].feature(predictors[j]);
    }
    y(i) = ps.records[i].feature(target);
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  if (qr.rank() < p) {
    throw NumericError(
        "cooks_distances: singular design matrix; remove collinear predictors");
  }
  const Eigen::VectorXd beta = qr.solve(y);
  const Eigen::VectorXd resid = y - X * beta;
  const double s2 = resid.squaredNorm() / static_cast<double>(n - p);

  // Leverages via the thin Q factor.
  Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(n, p);
  std::vector<double> dist(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const double h = Q.row(i).squaredNorm();
    const double e = resid(i);
    const double denom = static_cast<double>(p) * s2 * (1.0 - h) * (1.0 - h);
    dist[static_cast<size_t>(i)] = denom > 0.0 ? e * e * h / denom
                                               : std::numeric_limits<double>::infinity();
  }
  return dist;
}

ProjectSet cooks_filter(const ProjectSet& ps, const std::string& target,
                        const std::vector<std::string>& predictors,
                        double threshold, CooksReport* report) {
  const double thr = threshold > 0.0
                         ? threshold
                         : 4.0 / static_cast<double>(ps.records.size());
  const auto dist = cooks_distances(ps, target, predictors);
  ProjectSet out;
  out.feature_schema = ps.feature_schema;
  out.transform_log = ps.transform_log;
  CooksReport local;
  auto& rep = report ? *report : local;
  rep.threshold = thr;
  for (size_t i = 0; i < ps.records.size(); ++i) {
    if (dist[i] > thr) {
      rep.removed_ids.push_back(ps.records[i].id);
      rep.removed_distances.push_back(dist[i]);
    } else {
      out.records.push_back(ps.records[i]);
    }
  }
  return out;
}

ProjectSet sort_chronologically(const ProjectSet& ps) {
  ProjectSet out = ps;
  std::stable_sort(out.records.begin(), out.records.end(),
                   [](const ProjectRecord& a, const ProjectRecord& b) {
                     if (a.completion_date != b.completion_date) {
                       return a.completion_date < b.completion_date;
                     }
                     return a.id < b.id;
                   });
  return out;
}

}  // namespace bw
