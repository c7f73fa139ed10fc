#include "bw/stats.hpp"

#include <cmath>

#include "bw/errors.hpp"
#include "bw/special.hpp"

namespace bw {

MomentSummary moments(const std::vector<double>& sample) {
  const size_t n = sample.size();
  if (n < 2) throw DataError("moments: need at least 2 observations");
  double sum = 0.0;
  for (double x : sample) sum += x;
  const double mean = sum / static_cast<double>(n);

  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double x : sample) {
    const double d = x - mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  const double dn = static_cast<double>(n);
  const double ss = m2;  // sum of squared deviations
  m2 /= dn;
  m3 /= dn;
  m4 /= dn;
  if (m2 == 0.0) {
    throw NumericError("moments: zero variance, skewness/kurtosis undefined");
  }

  MomentSummary ms;
  ms.n = n;
  ms.mean = mean;
  ms.sd = std::sqrt(ss / (dn - 1.0));
  ms.skewness = m3 / std::pow(m2, 1.5);
  ms.kurtosis = m4 / (m2 * m2);
  return ms;
}

GateResult normality_gate(const MomentSummary& ms, double skew_tol,
                          double kurt_tol) {
  GateResult g;
  g.skew_distance = std::fabs(ms.skewness);
  g.kurt_distance = std::fabs(ms.kurtosis - 3.0);
  g.pass = g.skew_distance <= skew_tol && g.kurt_distance <= kurt_tol;
  return g;
}

ConfidenceInterval confidence_interval(double xbar, double s, size_t q,
                                       double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ParamError("confidence_interval: alpha must lie in (0,1)");
  }
  if (q < 1) throw ParamError("confidence_interval: q must be >= 1");
  if (s < 0.0) throw ParamError("confidence_interval: s must be non-negative");
  ConfidenceInterval ci;
  ci.alpha = alpha;
  ci.z = normal_quantile(1.0 - alpha / 2.0);
  const double half = ci.z * s / std::sqrt(static_cast<double>(q));
  ci.lower = xbar - half;
  ci.upper = xbar + half;
  return ci;
}

double prediction_probability(const std::vector<double>& predicted,
                              const std::vector<double>& actual, double tau) {
  if (predicted.size() != actual.size()) {
    throw DataError("prediction_probability: length mismatch");
  }
  if (predicted.empty()) throw DataError("prediction_probability: empty input");
  if (tau <= 0.0) throw ParamError("prediction_probability: tau must be positive");
  size_t hits = 0;
  for (size_t i = 0; i < actual.size(); ++i) {
    if (actual[i] <= 0.0) {
      throw DataError("prediction_probability: actual values must be positive");
    }
    if (std::fabs(predicted[i] - actual[i]) / actual[i] <= tau) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(actual.size());
}

}  // namespace bw
