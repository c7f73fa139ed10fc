#include <cmath>

#include "doctest.h"

#include "bw/weighting.hpp"

using doctest::Approx;

namespace {

bw::Window window_with_days(const std::vector<long>& days) {
  bw::Window w;
  w.index = 1;
  w.feature_schema = {{"effort", bw::FeatureKind::ratio}};
  for (size_t i = 0; i < days.size(); ++i) {
    bw::ProjectRecord r;
    r.id = "p" + std::to_string(i);
    r.completion_date = bw::Date(days[i]);
    r.ratio["effort"] = 1.0;
    w.records.push_back(std::move(r));
  }
  return w;
}

}  // namespace

TEST_CASE("kernel shapes at reference points") {
  using bw::Kernel;
  CHECK(bw::kernel_weight(Kernel::rectangular, 0.0) == Approx(1.0));
  CHECK(bw::kernel_weight(Kernel::rectangular, 0.999) == Approx(1.0));
  CHECK(bw::kernel_weight(Kernel::rectangular, 1.0) == Approx(0.0));
  CHECK(bw::kernel_weight(Kernel::triangular, 0.25) == Approx(0.75));
  CHECK(bw::kernel_weight(Kernel::triangular, 1.0) == Approx(0.0));
  CHECK(bw::kernel_weight(Kernel::epanechnikov, 0.5) == Approx(0.75));
  CHECK(bw::kernel_weight(Kernel::epanechnikov, 1.0) == Approx(0.0));
  CHECK(bw::kernel_weight(Kernel::gaussian, 0.0) == Approx(1.0));
  CHECK(bw::kernel_weight(Kernel::gaussian, 1.0) ==
        Approx(std::exp(-1.25)).epsilon(1e-12));
}

TEST_CASE("kernel names roundtrip") {
  for (auto k : {bw::Kernel::rectangular, bw::Kernel::triangular,
                 bw::Kernel::epanechnikov, bw::Kernel::gaussian}) {
    CHECK(bw::kernel_from_name(bw::kernel_name(k)) == k);
  }
}

TEST_CASE("weights shrink x so the oldest project stays positive") {
  const auto w = window_with_days({0, 100, 200, 300, 400});
  for (auto k : {bw::Kernel::rectangular, bw::Kernel::triangular,
                 bw::Kernel::epanechnikov, bw::Kernel::gaussian}) {
    const auto ww = bw::apply_weights(w, k);
    REQUIRE(ww.weights.size() == 5);
    CHECK_FALSE(ww.degenerate);
    // x of the newest is 0, x of the oldest is n/(n+1) < 1.
    CHECK(ww.x_coords.back() == Approx(0.0));
    CHECK(ww.x_coords.front() == Approx(5.0 / 6.0).epsilon(1e-12));
    for (double wt : ww.weights) CHECK(wt > 0.0);
    // Weights never increase with age.
    for (size_t i = 1; i < 5; ++i) CHECK(ww.weights[i] >= ww.weights[i - 1]);
    CHECK(ww.weights.back() == Approx(1.0));
  }
}

TEST_CASE("triangular weights are the documented linear decay") {
  const auto ww = bw::apply_weights(window_with_days({0, 100, 200, 300, 400}),
                                    bw::Kernel::triangular);
  // x_i = (400 - t_i)/400 * 5/6.
  for (size_t i = 0; i < 5; ++i) {
    const double x = (400.0 - 100.0 * static_cast<double>(i)) / 400.0 * 5.0 / 6.0;
    CHECK(ww.weights[i] == Approx(1.0 - x).epsilon(1e-12));
  }
}

TEST_CASE("single project and zero span are degenerate uniform") {
  const auto one = bw::apply_weights(window_with_days({42}), bw::Kernel::triangular);
  CHECK(one.degenerate);
  REQUIRE(one.weights.size() == 1);
  CHECK(one.weights[0] == Approx(1.0));

  const auto flat =
      bw::apply_weights(window_with_days({7, 7, 7}), bw::Kernel::epanechnikov);
  CHECK(flat.degenerate);
  for (double wt : flat.weights) CHECK(wt == Approx(1.0));
}
