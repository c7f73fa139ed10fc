#include "bw/stratify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "bw/errors.hpp"

namespace bw {

std::vector<double> Window::feature_column(const std::string& name) const {
  std::vector<double> col;
  col.reserve(records.size());
  for (const auto& r : records) col.push_back(r.feature(name));
  return col;
}

namespace detail {

namespace {

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

// Deterministic farthest-point seeding: the first centre is drawn from the
// seeded generator, the rest maximize distance to the chosen set (ties to
// the lowest index).
std::vector<size_t> farthest_point_init(const std::vector<std::vector<double>>& pts,
                                        size_t k, uint64_t seed) {
  std::mt19937_64 rng(seed);
  const size_t n = pts.size();
  std::vector<size_t> centers;
  centers.push_back(rng() % n);
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  while (centers.size() < k) {
    const auto& c = pts[centers.back()];
    for (size_t i = 0; i < n; ++i) best[i] = std::min(best[i], sq_dist(pts[i], c));
    size_t far = 0;
    double far_d = -1.0;
    for (size_t i = 0; i < n; ++i) {
      if (best[i] > far_d) {
        far_d = best[i];
        far = i;
      }
    }
    centers.push_back(far);
  }
  return centers;
}

void assign_serial(const std::vector<std::vector<double>>& pts,
                   const std::vector<std::vector<double>>& centroids,
                   std::vector<size_t>& out) {
  for (size_t i = 0; i < pts.size(); ++i) {
    size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (size_t c = 0; c < centroids.size(); ++c) {
      const double d = sq_dist(pts[i], centroids[c]);
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    out[i] = best;
  }
}

void assign_parallel(const std::vector<std::vector<double>>& pts,
                     const std::vector<std::vector<double>>& centroids,
                     std::vector<size_t>& out) {
  const auto n = static_cast<long>(pts.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (size_t c = 0; c < centroids.size(); ++c) {
      const double d = sq_dist(pts[static_cast<size_t>(i)], centroids[c]);
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    out[static_cast<size_t>(i)] = best;
  }
}

}  // namespace

double bic_score(const std::vector<std::vector<double>>& points,
                 const std::vector<std::vector<double>>& centroids,
                 const std::vector<size_t>& assignments) {
  const size_t n = points.size();
  const size_t k = centroids.size();
  const size_t m = points.empty() ? 0 : points[0].size();
  const double dn = static_cast<double>(n);
  const double dm = static_cast<double>(m);
  const double params = static_cast<double>(k) * (dm + 1.0) + 1.0;

  std::vector<size_t> counts(k, 0);
  double ss = 0.0;
  for (size_t i = 0; i < n; ++i) {
    ++counts[assignments[i]];
    ss += sq_dist(points[i], centroids[assignments[i]]);
  }
  if (n <= k) return -std::numeric_limits<double>::infinity();

  const double sigma2 = ss / (dm * (dn - static_cast<double>(k)));
  if (!(sigma2 > 1e-30)) {
    // Degenerate (coincident points): likelihood identical across k, so
    // only the parameter penalty discriminates.
    return -0.5 * params * std::log(dn);
  }
  double llh = 0.0;
  for (size_t c = 0; c < k; ++c) {
    if (counts[c] > 0) {
      llh += static_cast<double>(counts[c]) *
             std::log(static_cast<double>(counts[c]) / dn);
    }
  }
  llh += -0.5 * dn * dm * std::log(2.0 * M_PI * sigma2) -
         0.5 * dm * (dn - static_cast<double>(k));
  return llh - 0.5 * params * std::log(dn);
}

KmeansRun kmeansbic_impl(const std::vector<std::vector<double>>& pts, size_t k,
                         uint64_t seed, bool parallel) {
  const size_t n = pts.size();
  const size_t m = pts[0].size();
  KmeansRun run;
  run.assignments.assign(n, 0);

  const auto init = farthest_point_init(pts, k, seed);
  run.centroids.clear();
  for (size_t c : init) run.centroids.push_back(pts[c]);

  std::vector<size_t> prev(n, std::numeric_limits<size_t>::max());
  for (int iter = 0; iter < 100; ++iter) {
    if (parallel) {
      assign_parallel(pts, run.centroids, run.assignments);
    } else {
      assign_serial(pts, run.centroids, run.assignments);
    }
    if (run.assignments == prev) break;
    prev = run.assignments;

    std::vector<std::vector<double>> sums(k, std::vector<double>(m, 0.0));
    std::vector<size_t> counts(k, 0);
    for (size_t i = 0; i < n; ++i) {
      ++counts[run.assignments[i]];
      for (size_t j = 0; j < m; ++j) sums[run.assignments[i]][j] += pts[i][j];
    }
    for (size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) {
        // Re-seed an empty cluster at the point farthest from its centroid.
        size_t far = 0;
        double far_d = -1.0;
        for (size_t i = 0; i < n; ++i) {
          const double d = sq_dist(pts[i], run.centroids[run.assignments[i]]);
          if (d > far_d) {
            far_d = d;
            far = i;
          }
        }
        run.centroids[c] = pts[far];
        continue;
      }
      for (size_t j = 0; j < m; ++j) {
        run.centroids[c][j] = sums[c][j] / static_cast<double>(counts[c]);
      }
    }
  }
  run.bic = bic_score(pts, run.centroids, run.assignments);
  return run;
}

KmeansRun kmeans_bic(const std::vector<std::vector<double>>& points, size_t k,
                     uint64_t seed, bool parallel) {
  if (points.empty() || k == 0 || k > points.size()) {
    throw ParamError("kmeans_bic: need 1 <= k <= n");
  }
  return kmeansbic_impl(points, k, seed, parallel);
}

}  // namespace detail

ClusteringResult xmeans(const ProjectSet& ps, size_t kmin, size_t kmax,
                        uint64_t seed) {
  const size_t n = ps.records.size();
  if (kmin < 1 || kmax < kmin) throw ParamError("xmeans: need 1 <= kmin <= kmax");
  if (n < kmax) throw ParamError("xmeans: need n >= kmax");

  const auto names = ps.ratio_feature_names();
  std::vector<std::vector<double>> pts(n);
  for (size_t i = 0; i < n; ++i) {
    for (const auto& f : names) pts[i].push_back(ps.records[i].feature(f));
  }

  auto derive = [seed](size_t k, size_t salt) {
    return seed ^ (0x9e3779b97f4a7c15ull * (k + 1) + salt);
  };

  detail::KmeansRun best = detail::kmeans_bic(pts, kmin, derive(kmin, 0));
  size_t best_k = kmin;
  ClusteringResult result;
  result.trace.emplace_back(kmin, best.bic);

  detail::KmeansRun current = best;
  size_t k = kmin;
  while (k < kmax) {
    // Try splitting each current centroid; keep splits whose local
    // 2-cluster BIC beats the 1-cluster BIC of the same points.
    std::vector<size_t> to_split;
    for (size_t c = 0; c < k; ++c) {
      std::vector<std::vector<double>> sub;
      for (size_t i = 0; i < n; ++i) {
        if (current.assignments[i] == c) sub.push_back(pts[i]);
      }
      if (sub.size() < 4) continue;
      const auto one = detail::kmeans_bic(sub, 1, derive(k, c * 2 + 1));
      const auto two = detail::kmeans_bic(sub, 2, derive(k, c * 2 + 2));
      if (two.bic > one.bic) to_split.push_back(c);
    }
    if (to_split.empty()) break;
    size_t next_k = std::min(kmax, k + to_split.size());
    if (next_k == k) break;
    k = next_k;
    current = detail::kmeans_bic(pts, k, derive(k, 0));
    result.trace.emplace_back(k, current.bic);
    if (current.bic > best.bic) {
      best = current;
      best_k = k;
    }
  }

  result.q = best_k;
  result.centroids = best.centroids;
  result.assignments = best.assignments;
  result.bic = best.bic;
  return result;
}

std::vector<Window> stratify(const ProjectSet& ps, size_t q) {
  const size_t n = ps.records.size();
  if (q < 1 || q > n) throw ParamError("stratify: need 1 <= q <= n");
  const size_t base = n / q;
  const size_t rem = n % q;
  std::vector<Window> windows;
  windows.reserve(q);
  size_t pos = 0;
  for (size_t w = 0; w < q; ++w) {
    // Later (more recent) windows absorb the remainder.
    const size_t sz = base + (w >= q - rem ? 1 : 0);
    Window win;
    win.index = w + 1;
    win.feature_schema = ps.feature_schema;
    win.transform_log = ps.transform_log;
    win.records.assign(ps.records.begin() + static_cast<long>(pos),
                       ps.records.begin() + static_cast<long>(pos + sz));
    windows.push_back(std::move(win));
    pos += sz;
  }
  return windows;
}

}  // namespace bw
