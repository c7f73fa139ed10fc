// Independent reference implementations used to cross-check the library.
// Everything here is deliberately written a different way than the code
// under test: dense eigen-solves, normal equations, brute-force
// refitting and exhaustive permutation enumeration.
#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

/// Stationary distribution of a row-stochastic matrix by solving
/// pi^T P = pi^T, sum(pi) = 1 as a least-squares system.
inline std::vector<double> stationary(const std::vector<std::vector<double>>& p) {
  const auto n = static_cast<Eigen::Index>(p.size());
  Eigen::MatrixXd a(n + 1, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      a(j, i) = p[static_cast<size_t>(i)][static_cast<size_t>(j)] -
                (i == j ? 1.0 : 0.0);
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) a(n, i) = 1.0;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n + 1);
  b(n) = 1.0;
  Eigen::VectorXd pi = a.colPivHouseholderQr().solve(b);
  return {pi.data(), pi.data() + n};
}

/// Weighted least squares through the normal equations.
inline std::vector<double> wls_normal_equations(
    const std::vector<std::vector<double>>& rows, const std::vector<double>& y,
    const std::vector<double>& w) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto p = static_cast<Eigen::Index>(rows.front().size());
  Eigen::MatrixXd x(n, p);
  Eigen::VectorXd yy(n);
  Eigen::MatrixXd wm = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      x(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
    }
    yy(i) = y[static_cast<size_t>(i)];
    wm(i, i) = w[static_cast<size_t>(i)];
  }
  Eigen::VectorXd beta = (x.transpose() * wm * x).ldlt().solve(x.transpose() * wm * yy);
  return {beta.data(), beta.data() + p};
}

/// Cook's distance by literally refitting OLS without each observation:
/// D_i = sum_j (yhat_j - yhat_j^(i))^2 / (p * s^2).
inline std::vector<double> cooks_by_refit(const std::vector<std::vector<double>>& rows,
                                          const std::vector<double>& y) {
  const size_t n = rows.size();
  const size_t p = rows.front().size();
  const std::vector<double> ones(n, 1.0);
  const auto full = wls_normal_equations(rows, y, ones);

  auto predict = [&](const std::vector<double>& beta, const std::vector<double>& r) {
    double s = 0.0;
    for (size_t j = 0; j < beta.size(); ++j) s += beta[j] * r[j];
    return s;
  };
  double sse = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double e = y[i] - predict(full, rows[i]);
    sse += e * e;
  }
  const double s2 = sse / static_cast<double>(n - p);

  std::vector<double> d(n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    std::vector<std::vector<double>> rows_i;
    std::vector<double> y_i;
    for (size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      rows_i.push_back(rows[j]);
      y_i.push_back(y[j]);
    }
    const auto beta_i =
        wls_normal_equations(rows_i, y_i, std::vector<double>(n - 1, 1.0));
    double num = 0.0;
    for (size_t j = 0; j < n; ++j) {
      const double diff = predict(full, rows[j]) - predict(beta_i, rows[j]);
      num += diff * diff;
    }
    d[i] = num / (static_cast<double>(p) * s2);
  }
  return d;
}

/// Kruskal-Wallis H statistic with midranks and tie correction, written
/// independently of the library version.
inline double kw_h(const std::vector<std::vector<double>>& groups) {
  std::vector<double> pooled;
  for (const auto& g : groups) pooled.insert(pooled.end(), g.begin(), g.end());
  const size_t n = pooled.size();
  std::vector<double> sorted = pooled;
  std::sort(sorted.begin(), sorted.end());

  auto rank_of = [&](double v) {
    const auto lo = std::lower_bound(sorted.begin(), sorted.end(), v);
    const auto hi = std::upper_bound(sorted.begin(), sorted.end(), v);
    const double first = static_cast<double>(lo - sorted.begin()) + 1.0;
    const double last = static_cast<double>(hi - sorted.begin());
    return (first + last) / 2.0;
  };

  double h = 0.0;
  for (const auto& g : groups) {
    double rsum = 0.0;
    for (double v : g) rsum += rank_of(v);
    h += rsum * rsum / static_cast<double>(g.size());
  }
  const double dn = static_cast<double>(n);
  h = 12.0 / (dn * (dn + 1.0)) * h - 3.0 * (dn + 1.0);

  double tie = 0.0;
  for (size_t i = 0; i < n;) {
    size_t j = i;
    while (j < n && sorted[j] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i);
    tie += t * t * t - t;
    i = j;
  }
  const double c = 1.0 - tie / (dn * dn * dn - dn);
  return c > 0.0 ? h / c : 0.0;
}

/// Exact permutation p-value for Kruskal-Wallis: the fraction of all
/// distinct label permutations with H >= the observed H. Feasible for
/// pooled sizes up to about 10.
inline double kw_exact_p(const std::vector<std::vector<double>>& groups) {
  std::vector<double> pooled;
  std::vector<int> labels;
  for (size_t g = 0; g < groups.size(); ++g) {
    for (double v : groups[g]) {
      pooled.push_back(v);
      labels.push_back(static_cast<int>(g));
    }
  }
  const double observed = kw_h(groups);
  std::sort(labels.begin(), labels.end());

  size_t total = 0, at_least = 0;
  do {
    std::vector<std::vector<double>> perm(groups.size());
    for (size_t i = 0; i < pooled.size(); ++i) {
      perm[static_cast<size_t>(labels[i])].push_back(pooled[i]);
    }
    ++total;
    if (kw_h(perm) >= observed - 1e-12) ++at_least;
  } while (std::next_permutation(labels.begin(), labels.end()));
  return static_cast<double>(at_least) / static_cast<double>(total);
}

}  // namespace oracle
