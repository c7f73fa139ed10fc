#pragma once

#include <cstddef>
#include <vector>

namespace bw {

/// Mean, sd and the shape moments. Kurtosis is non-excess (normal = 3).
/// Central moments use divisor n; sd uses divisor n-1.
struct MomentSummary {
  size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;
  double skewness = 0.0;
  double kurtosis = 0.0;
};

struct GateResult {
  bool pass = false;
  double skew_distance = 0.0;  // |skewness|
  double kurt_distance = 0.0;  // |kurtosis - 3|
};

struct ConfidenceInterval {
  double lower = 0.0;
  double upper = 0.0;
  double alpha = 0.0;
  double z = 0.0;  // Z_{alpha/2}
};

MomentSummary moments(const std::vector<double>& sample);

constexpr double kDefaultSkewTol = 0.7;
constexpr double kDefaultKurtTol = 1.5;

GateResult normality_gate(const MomentSummary& ms,
                          double skew_tol = kDefaultSkewTol,
                          double kurt_tol = kDefaultKurtTol);

/// xbar +/- z * s / sqrt(q) with z the standard-normal 1-alpha/2 quantile.
ConfidenceInterval confidence_interval(double xbar, double s, size_t q,
                                       double alpha);

constexpr double kDefaultPredTau = 0.25;

/// Fraction of predictions within relative error tau of the actual value.
/// This is a hit-rate operationalization of the prediction-probability
/// quantity; it is a diagnostic, not a headline accuracy metric.
double prediction_probability(const std::vector<double>& predicted,
                              const std::vector<double>& actual,
                              double tau = kDefaultPredTau);

}  // namespace bw
