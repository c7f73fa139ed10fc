#pragma once

#include <string>
#include <vector>

#include "bw/stratify.hpp"

namespace bw {

enum class Kernel { rectangular, triangular, epanechnikov, gaussian };

std::string kernel_name(Kernel k);
Kernel kernel_from_name(const std::string& name);

/// Fig.-1 weighting functions. x is the normalized time distance from the
/// newest project (x = 0 newest). The three compact kernels are zero at
/// x >= 1; the Gaussian is positive everywhere.
double kernel_weight(Kernel k, double x);

/// A window annotated with per-project regression weights.
struct WeightedWindow {
  Window window;
  Kernel kernel = Kernel::rectangular;
  std::vector<double> weights;
  std::vector<double> x_coords;
  bool degenerate = false;  // single project or zero date span
};

/// x_i = (t_latest - t_i) / (t_latest - t_earliest) * n/(n+1), so the
/// oldest in-window project keeps a strictly positive weight under the
/// compact kernels.
WeightedWindow apply_weights(const Window& w, Kernel k);

}  // namespace bw
