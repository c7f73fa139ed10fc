#include "bw/weighting.hpp"

#include <cmath>

#include "bw/errors.hpp"

namespace bw {

std::string kernel_name(Kernel k) {
  switch (k) {
    case Kernel::rectangular: return "rectangular";
    case Kernel::triangular: return "triangular";
    case Kernel::epanechnikov: return "epanechnikov";
    case Kernel::gaussian: return "gaussian";
  }
  return "?";
}

Kernel kernel_from_name(const std::string& name) {
  if (name == "rectangular") return Kernel::rectangular;
  if (name == "triangular") return Kernel::triangular;
  if (name == "epanechnikov") return Kernel::epanechnikov;
  if (name == "gaussian") return Kernel::gaussian;
  throw ParamError("unknown kernel: '" + name + "'");
}

double kernel_weight(Kernel k, double x) {
  if (x < 0.0) throw ParamError("kernel_weight: x must be non-negative");
  switch (k) {
    case Kernel::rectangular:
      return x < 1.0 ? 1.0 : 0.0;
    case Kernel::triangular:
      return x < 1.0 ? 1.0 - x : 0.0;
    case Kernel::epanechnikov:
      return x < 1.0 ? 1.0 - x * x : 0.0;
    case Kernel::gaussian:
      return std::exp(-2.5 * x * x / 2.0);
  }
  throw ParamError("kernel_weight: unknown kernel");
}

WeightedWindow apply_weights(const Window& w, Kernel k) {
  if (w.records.empty()) throw DataError("apply_weights: empty window");
  WeightedWindow ww;
  ww.window = w;
  ww.kernel = k;
  const size_t n = w.records.size();
  long t_min = w.records.front().completion_date.serial();
  long t_max = t_min;
  for (const auto& r : w.records) {
    t_min = std::min(t_min, r.completion_date.serial());
    t_max = std::max(t_max, r.completion_date.serial());
  }
  const double span = static_cast<double>(t_max - t_min);
  // Shrink by n/(n+1) so the oldest project's x stays below 1 and compact
  // kernels never hard-zero an in-window project.
  const double shrink = static_cast<double>(n) / static_cast<double>(n + 1);
  ww.degenerate = n == 1 || span == 0.0;
  ww.weights.reserve(n);
  ww.x_coords.reserve(n);
  for (const auto& r : w.records) {
    const double x =
        ww.degenerate
            ? 0.0
            : (static_cast<double>(t_max - r.completion_date.serial()) / span) * shrink;
    ww.x_coords.push_back(x);
    ww.weights.push_back(kernel_weight(k, x));
  }
  return ww;
}

}  // namespace bw
