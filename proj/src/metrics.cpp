#include "bw/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bw/errors.hpp"
#include "bw/special.hpp"

namespace bw {

namespace {

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_var(const std::vector<double>& v, double mean) {
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(v.size() - 1);
}

}  // namespace

ErrorSummary error_summary(const std::vector<double>& actual,
                           const std::vector<double>& estimated) {
  if (actual.size() != estimated.size()) {
    throw DataError("error_summary: length mismatch");
  }
  if (actual.empty()) throw DataError("error_summary: empty input");
  ErrorSummary s;
  s.n = actual.size();
  s.per_case.reserve(s.n);
  double sum_abs = 0.0, sum_bre = 0.0, sum_ibre = 0.0;
  for (size_t i = 0; i < s.n; ++i) {
    const double ea = actual[i];
    const double ee = estimated[i];
    if (ea <= 0.0 || ee <= 0.0) {
      throw NumericError("error_summary: BRE denominators require positive values");
    }
    CaseError c;
    c.absolute = std::fabs(ea - ee);
    c.bre = c.absolute / std::min(ea, ee);
    c.ibre = c.absolute / std::max(ea, ee);
    sum_abs += c.absolute;
    sum_bre += c.bre;
    sum_ibre += c.ibre;
    s.per_case.push_back(c);
  }
  const double dn = static_cast<double>(s.n);
  s.mae = sum_abs / dn;
  s.mbre = sum_bre / dn;
  s.mibre = sum_ibre / dn;
  return s;
}

TestResult welch_t(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() < 2 || b.size() < 2) {
    throw DataError("welch_t: each sample needs at least 2 observations");
  }
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double ma = mean_of(a), mb = mean_of(b);
  const double va = sample_var(a, ma), vb = sample_var(b, mb);
  if (va == 0.0 && vb == 0.0) {
    TestResult r;
    r.degenerate = true;
    return r;
  }
  const double sea = va / na, seb = vb / nb;
  TestResult r;
  r.statistic = (ma - mb) / std::sqrt(sea + seb);
  r.df = (sea + seb) * (sea + seb) /
         (sea * sea / (na - 1.0) + seb * seb / (nb - 1.0));
  r.p_value = student_t_two_sided_p(r.statistic, r.df);
  return r;
}

TestResult kruskal_wallis(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) throw DataError("kruskal_wallis: need at least 2 groups");
  size_t total = 0;
  for (const auto& g : groups) {
    if (g.empty()) throw DataError("kruskal_wallis: empty group");
    total += g.size();
  }
  if (total < 3) throw DataError("kruskal_wallis: need at least 3 observations");

  struct Obs {
    double value;
    size_t group;
  };
  std::vector<Obs> obs;
  obs.reserve(total);
  for (size_t g = 0; g < groups.size(); ++g) {
    for (double v : groups[g]) obs.push_back({v, g});
  }
  std::sort(obs.begin(), obs.end(),
            [](const Obs& x, const Obs& y) { return x.value < y.value; });

  // Midranks plus the tie correction term sum(t^3 - t).
  std::vector<double> rank_sum(groups.size(), 0.0);
  double tie_term = 0.0;
  size_t i = 0;
  while (i < total) {
    size_t j = i;
    while (j < total && obs[j].value == obs[i].value) ++j;
    const double t = static_cast<double>(j - i);
    const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (size_t k = i; k < j; ++k) rank_sum[obs[k].group] += midrank;
    tie_term += t * t * t - t;
    i = j;
  }

  const double N = static_cast<double>(total);
  TestResult r;
  r.df = static_cast<double>(groups.size() - 1);

  const double correction = 1.0 - tie_term / (N * N * N - N);
  if (correction == 0.0) {
    // Every observation identical.
    r.statistic = 0.0;
    r.p_value = 1.0;
    r.degenerate = true;
    return r;
  }

  double h = 0.0;
  for (size_t g = 0; g < groups.size(); ++g) {
    const double ng = static_cast<double>(groups[g].size());
    h += rank_sum[g] * rank_sum[g] / ng;
  }
  h = 12.0 / (N * (N + 1.0)) * h - 3.0 * (N + 1.0);
  h /= correction;
  r.statistic = h;
  r.p_value = chi_square_upper_p(h, r.df);
  return r;
}

EffectSize glass_delta(const std::vector<double>& treatment,
                       const std::vector<double>& control) {
  if (treatment.empty() || control.size() < 2) {
    throw DataError("glass_delta: treatment non-empty and control n >= 2 required");
  }
  const double mc = mean_of(control);
  const double sd = std::sqrt(sample_var(control, mc));
  if (sd == 0.0) throw NumericError("glass_delta: control sd is zero");
  EffectSize e;
  e.delta = std::fabs(mean_of(treatment) - mc) / sd;
  e.practically_significant = e.delta > kGlassDeltaThreshold;
  return e;
}

}  // namespace bw
