#pragma once

#include <cstdint>
#include <vector>

#include "bw/dataset.hpp"

namespace bw {

/// A contiguous chronological stratum of the sorted ProjectSet.
/// index runs 1..q with q the most recent stratum.
struct Window {
  size_t index = 0;
  std::vector<ProjectRecord> records;
  // Carried from the parent set so learners can invert transforms.
  std::vector<FeatureSpec> feature_schema;
  std::vector<TransformRecord> transform_log;

  size_t size() const { return records.size(); }

  /// Column of a (transformed) ratio feature across the window.
  std::vector<double> feature_column(const std::string& name) const;
  std::vector<double> effort_vector() const { return feature_column("effort"); }
};

struct ClusteringResult {
  size_t q = 0;
  std::vector<std::vector<double>> centroids;  // q x p
  std::vector<size_t> assignments;             // n
  double bic = 0.0;
  /// (k, BIC) for every k examined by the search, for audit.
  std::vector<std::pair<size_t, double>> trace;
};

/// X-means: BIC-guided centroid splitting between kmin and kmax over the
/// transformed ratio-feature vectors. Deterministic given seed.
ClusteringResult xmeans(const ProjectSet& ps, size_t kmin, size_t kmax,
                        uint64_t seed);

/// Cut the sorted sequence into q contiguous near-equal strata; sizes
/// differ by at most one, later windows take the remainder, window q is
/// the most recent.
std::vector<Window> stratify(const ProjectSet& ps, size_t q);

namespace detail {
/// One full k-means run (farthest-point init, Lloyd) plus the
/// spherical-Gaussian BIC score. Exposed for the x-means search and the
/// serial/parallel benchmark.
struct KmeansRun {
  std::vector<std::vector<double>> centroids;
  std::vector<size_t> assignments;
  double bic = 0.0;
};
KmeansRun kmeans_bic(const std::vector<std::vector<double>>& points, size_t k,
                     uint64_t seed, bool parallel = true);
double bic_score(const std::vector<std::vector<double>>& points,
                 const std::vector<std::vector<double>>& centroids,
                 const std::vector<size_t>& assignments);
}  // namespace detail

}  // namespace bw
