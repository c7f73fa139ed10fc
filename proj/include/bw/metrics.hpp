#pragma once

#include <cstddef>
#include <vector>

namespace bw {

struct CaseError {
  double absolute = 0.0;  // |E_A - E_E|
  double bre = 0.0;       // |E_A - E_E| / min(E_A, E_E)
  double ibre = 0.0;      // |E_A - E_E| / max(E_A, E_E)
};

struct ErrorSummary {
  double mae = 0.0;
  double mbre = 0.0;
  double mibre = 0.0;
  size_t n = 0;
  std::vector<CaseError> per_case;
};

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  double df = 0.0;
  bool degenerate = false;
};

struct EffectSize {
  double delta = 0.0;
  bool practically_significant = false;  // strict: delta > 0.5
};

constexpr double kGlassDeltaThreshold = 0.5;

ErrorSummary error_summary(const std::vector<double>& actual,
                           const std::vector<double>& estimated);

/// Welch's unequal-variance t-test, two-sided.
TestResult welch_t(const std::vector<double>& a, const std::vector<double>& b);

/// Kruskal-Wallis H with midrank ties and the standard tie correction;
/// p from chi-square with groups-1 df.
TestResult kruskal_wallis(const std::vector<std::vector<double>>& groups);

/// |mean(treatment) - mean(control)| / sd(control), sample sd.
EffectSize glass_delta(const std::vector<double>& treatment,
                       const std::vector<double>& control);

}  // namespace bw
