#include "bw/markov.hpp"

#include <algorithm>
#include <cmath>

#include "bw/errors.hpp"

namespace bw {

std::string chain_status_name(ChainStatus s) {
  switch (s) {
    case ChainStatus::ergodic: return "ergodic";
    case ChainStatus::periodic: return "periodic";
    case ChainStatus::reducible: return "reducible";
    case ChainStatus::not_converged: return "not_converged";
  }
  return "?";
}

std::vector<double> window_ages(const Window& w, AgeSource source) {
  std::vector<double> ages;
  ages.reserve(w.records.size());
  if (source == AgeSource::elapsed_time) {
    for (const auto& r : w.records) ages.push_back(r.feature("elapsed_time"));
  } else {
    long t_min = w.records.front().completion_date.serial();
    for (const auto& r : w.records) t_min = std::min(t_min, r.completion_date.serial());
    for (const auto& r : w.records) {
      ages.push_back(static_cast<double>(r.completion_date.serial() - t_min) / 365.2425);
    }
  }
  return ages;
}

double default_bin_width(const std::vector<double>& ages) {
  const auto [mn, mx] = std::minmax_element(ages.begin(), ages.end());
  const double span = *mx - *mn;
  if (span == 0.0) return 1.0;
  return span / std::ceil(std::sqrt(static_cast<double>(ages.size())));
}

StateSequence ages_to_states(const Window& w, double bin_width, AgeSource source) {
  if (w.records.empty()) throw DataError("ages_to_states: empty window");
  if (bin_width <= 0.0) throw ParamError("ages_to_states: bin_width must be positive");
  const auto ages = window_ages(w, source);
  const double origin = *std::min_element(ages.begin(), ages.end());
  const double max_age = *std::max_element(ages.begin(), ages.end());

  // Quantize, then relabel occupied bins in ascending age order.
  const auto max_bin =
      static_cast<size_t>(std::floor((max_age - origin) / bin_width));
  std::vector<size_t> bins(ages.size());
  std::vector<char> occupied(max_bin + 1, 0);
  for (size_t i = 0; i < ages.size(); ++i) {
    auto b = static_cast<size_t>(std::floor((ages[i] - origin) / bin_width));
    b = std::min(b, max_bin);
    bins[i] = b;
    occupied[b] = 1;
  }
  std::vector<size_t> relabel(max_bin + 1, 0);
  StateSequence seq;
  seq.bin_width = bin_width;
  seq.origin = origin;
  size_t next = 0;
  for (size_t b = 0; b <= max_bin; ++b) {
    if (occupied[b]) {
      relabel[b] = next++;
      seq.state_values.push_back(origin + (static_cast<double>(b) + 0.5) * bin_width);
    }
  }
  seq.states.reserve(bins.size());
  for (size_t b : bins) seq.states.push_back(relabel[b]);
  seq.degenerate = seq.state_count() <= 1 || seq.states.size() == 1;
  return seq;
}

TransitionMatrix build_tpm(const StateSequence& seq) {
  if (seq.states.size() < 2) {
    throw DataError("build_tpm: need at least 2 observations for transitions");
  }
  const size_t s = seq.state_count();
  TransitionMatrix tpm;
  tpm.dim = s;
  tpm.p.assign(s, std::vector<double>(s, 0.0));
  std::vector<double> departures(s, 0.0);
  for (size_t i = 0; i + 1 < seq.states.size(); ++i) {
    tpm.p[seq.states[i]][seq.states[i + 1]] += 1.0;
    departures[seq.states[i]] += 1.0;
  }
  for (size_t i = 0; i < s; ++i) {
    if (departures[i] == 0.0) {
      // No outgoing observations at all: uniform row keeps the matrix
      // row-stochastic.
      for (size_t j = 0; j < s; ++j) tpm.p[i][j] = 1.0 / static_cast<double>(s);
      ++tpm.uniform_fallback_rows;
    } else {
      for (size_t j = 0; j < s; ++j) tpm.p[i][j] /= departures[i];
    }
  }
  return tpm;
}

namespace {

using Matrix = std::vector<std::vector<double>>;

Matrix multiply(const Matrix& a, const Matrix& b) {
  const size_t n = a.size();
  Matrix c(n, std::vector<double>(n, 0.0));
  const auto ln = static_cast<long>(n);
#pragma omp parallel for schedule(static)
  for (long i = 0; i < ln; ++i) {
    for (size_t k = 0; k < n; ++k) {
      const double aik = a[static_cast<size_t>(i)][k];
      if (aik == 0.0) continue;
      for (size_t j = 0; j < n; ++j) {
        c[static_cast<size_t>(i)][j] += aik * b[k][j];
      }
    }
  }
  return c;
}

void renormalize_rows(Matrix& m) {
  for (auto& row : m) {
    double s = 0.0;
    for (double v : row) s += v;
    if (s > 0.0) {
      for (double& v : row) v /= s;
    }
  }
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  double d = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    for (size_t j = 0; j < a.size(); ++j) {
      d = std::max(d, std::fabs(a[i][j] - b[i][j]));
    }
  }
  return d;
}

bool strongly_connected(const Matrix& p) {
  const size_t n = p.size();
  auto reach = [&](bool transpose) {
    std::vector<char> seen(n, 0);
    std::vector<size_t> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      const size_t u = stack.back();
      stack.pop_back();
      for (size_t v = 0; v < n; ++v) {
        const double e = transpose ? p[v][u] : p[u][v];
        if (e > 0.0 && !seen[v]) {
          seen[v] = 1;
          stack.push_back(v);
        }
      }
    }
    return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
  };
  return reach(false) && reach(true);
}

}  // namespace

StationaryResult iterate_to_stationary(const TransitionMatrix& tpm, double eps,
                                       size_t max_squarings) {
  if (tpm.dim == 0) throw DataError("iterate_to_stationary: empty matrix");
  for (const auto& row : tpm.p) {
    double s = 0.0;
    for (double v : row) {
      if (v < -1e-12 || v > 1.0 + 1e-12) {
        throw NumericError("iterate_to_stationary: entries outside [0,1]");
      }
      s += v;
    }
    if (std::fabs(s - 1.0) > 1e-9) {
      throw NumericError("iterate_to_stationary: matrix is not row-stochastic");
    }
  }

  StationaryResult res;
  const size_t n = tpm.dim;
  Matrix cur = tpm.p;
  bool converged = false;
  for (size_t it = 0; it < max_squarings; ++it) {
    Matrix next = multiply(cur, cur);
    renormalize_rows(next);
    res.iterations = it + 1;
    const double d = max_abs_diff(next, cur);
    cur = std::move(next);
    if (d <= eps) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    res.status = ChainStatus::not_converged;
    return res;
  }

  // Limit reached; classify by structure.
  bool all_positive = true;
  for (const auto& row : cur) {
    for (double v : row) {
      if (v <= 0.0) all_positive = false;
    }
  }
  bool rows_equal = true;
  for (size_t i = 1; i < n && rows_equal; ++i) {
    for (size_t j = 0; j < n; ++j) {
      if (std::fabs(cur[i][j] - cur[0][j]) > std::max(eps, 1e-6)) {
        rows_equal = false;
        break;
      }
    }
  }

  if (all_positive && rows_equal) {
    res.status = ChainStatus::ergodic;
    res.limit = cur;
    res.pi.assign(n, 0.0);
    for (size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (size_t i = 0; i < n; ++i) s += cur[i][j];
      res.pi[j] = s / static_cast<double>(n);
    }
    return res;
  }
  res.status = strongly_connected(tpm.p) ? ChainStatus::periodic
                                         : ChainStatus::reducible;
  return res;
}

std::pair<size_t, double> window_dimensions(const Window& w) {
  if (w.records.empty()) throw DataError("window_dimensions: empty window");
  long t_min = w.records.front().completion_date.serial();
  long t_max = t_min;
  for (const auto& r : w.records) {
    t_min = std::min(t_min, r.completion_date.serial());
    t_max = std::max(t_max, r.completion_date.serial());
  }
  return {w.records.size(), static_cast<double>(t_max - t_min) / 365.2425};
}

}  // namespace bw
