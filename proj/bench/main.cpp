// Timing comparison of the serial reference kernels against the
// OpenMP-parallel ones. Run manually; not part of the test suite.
#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "bw/bellwether.hpp"
#include "bw/stratify.hpp"
#include "bw/synthetic.hpp"

namespace {

template <typename F>
double time_ms(F&& f, int reps = 3) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

}  // namespace

int main() {
  // k-means assignment, serial vs parallel.
  {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> unit(0.0, 1.0);
    std::vector<std::vector<double>> points(20000, std::vector<double>(8));
    for (auto& p : points) {
      for (auto& v : p) v = unit(rng);
    }
    const double serial =
        time_ms([&] { bw::detail::kmeans_bic(points, 8, 1, false); });
    const double parallel =
        time_ms([&] { bw::detail::kmeans_bic(points, 8, 1, true); });
    std::printf("kmeans  n=20000 k=8   serial %8.2f ms   parallel %8.2f ms   speedup %.2fx\n",
                serial, parallel, serial / parallel);
  }

  // Leave-one-out portfolio, serial vs parallel.
  {
    auto ps = bw::make_regime_shift_set(11, 150, 300);
    ps = bw::log_transform(ps, ps.ratio_feature_names());
    bw::SearchConfig cfg;
    cfg.learner = bw::LearnerFamily::mlr;
    const double serial =
        time_ms([&] { bw::growing_portfolio(ps, cfg, false); }, 2);
    const double parallel =
        time_ms([&] { bw::growing_portfolio(ps, cfg, true); }, 2);
    std::printf("loocv   n=450 mlr     serial %8.2f ms   parallel %8.2f ms   speedup %.2fx\n",
                serial, parallel, serial / parallel);
  }
  return 0;
}
