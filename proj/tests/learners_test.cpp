#include <cmath>
#include <cstdio>
#include <random>

#include "doctest.h"

#include "bw/errors.hpp"
#include "bw/learners.hpp"
#include "bw/weighting.hpp"
#include "oracles.hpp"

using doctest::Approx;

namespace {

/// Window over transformed-looking values with a pipeline transform log so
/// predictions invert back to raw scale. Keeps effort values in (0,1).
bw::WeightedWindow linear_window(uint64_t seed, size_t n,
                                 bw::Kernel k = bw::Kernel::rectangular) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.1, 0.9);
  bw::Window w;
  w.index = 1;
  w.feature_schema = {{"size", bw::FeatureKind::ratio},
                      {"effort", bw::FeatureKind::ratio},
                      {"elapsed_time", bw::FeatureKind::ratio}};
  for (size_t i = 0; i < n; ++i) {
    bw::ProjectRecord r;
    r.id = "p" + std::to_string(i);
    r.completion_date = bw::Date(static_cast<long>(i) * 10);
    const double a = u(rng), b = u(rng);
    r.ratio = {{"size", a},
               {"elapsed_time", b},
               {"effort", 0.1 + 0.5 * a + 0.2 * b}};
    w.records.push_back(std::move(r));
  }
  return bw::apply_weights(w, k);
}

}  // namespace

TEST_CASE("wls matches the normal-equations oracle") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> wdist(0.1, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const size_t n = 15 + rng() % 30;
    std::vector<std::vector<double>> rows;
    std::vector<double> y, w;
    for (size_t i = 0; i < n; ++i) {
      std::vector<double> r = {1.0, unit(rng), unit(rng), unit(rng)};
      y.push_back(2.0 * r[1] - r[2] + 0.5 * r[3] + 0.1 * unit(rng));
      w.push_back(wdist(rng));
      rows.push_back(std::move(r));
    }
    const auto beta =
        bw::detail::solve_wls(rows, y, w, {"intercept", "a", "b", "c"});
    const auto ref = oracle::wls_normal_equations(rows, y, w);
    REQUIRE(beta.size() == ref.size());
    for (size_t j = 0; j < beta.size(); ++j) {
      CHECK(beta[j] == Approx(ref[j]).epsilon(1e-7));
    }
  }
}

TEST_CASE("wls residuals are weighted-orthogonal to the design") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> unit(0.0, 1.0);
  std::vector<std::vector<double>> rows;
  std::vector<double> y, w;
  for (size_t i = 0; i < 40; ++i) {
    std::vector<double> r = {1.0, unit(rng), unit(rng)};
    y.push_back(unit(rng));
    w.push_back(0.2 + 0.8 * std::fabs(unit(rng)));
    rows.push_back(std::move(r));
  }
  const auto beta = bw::detail::solve_wls(rows, y, w, {"i", "a", "b"});
  for (size_t j = 0; j < 3; ++j) {
    double dot = 0.0;
    for (size_t i = 0; i < rows.size(); ++i) {
      double pred = 0.0;
      for (size_t k = 0; k < 3; ++k) pred += beta[k] * rows[i][k];
      dot += w[i] * (y[i] - pred) * rows[i][j];
    }
    CHECK(std::fabs(dot) < 1e-8);
  }
}

TEST_CASE("wls names dependent columns on rank deficiency") {
  std::vector<std::vector<double>> rows;
  std::vector<double> y, w;
  for (int i = 0; i < 10; ++i) {
    const double a = i;
    rows.push_back({1.0, a, 2.0 * a});  // third column duplicates the second
    y.push_back(a);
    w.push_back(1.0);
  }
  try {
    bw::detail::solve_wls(rows, y, w, {"intercept", "size", "size_copy"});
    FAIL("expected NumericError");
  } catch (const bw::NumericError& e) {
    // Either member of the collinear pair may be named, depending on
    // which column the pivoting ranks last.
    const std::string msg = e.what();
    CHECK(msg.find("dependent") != std::string::npos);
    CHECK(msg.find("size") != std::string::npos);
  }
}

TEST_CASE("encoder excludes the response and pdr from the predictors") {
  const auto ww = linear_window(1, 20);
  const auto model = bw::fit_mlr(ww);
  for (const auto& name : model.encoder.ratio_predictors) {
    CHECK(name != "effort");
    CHECK(name != "pdr");
  }
  CHECK(model.encoder.ratio_predictors ==
        std::vector<std::string>{"size", "elapsed_time"});
}

TEST_CASE("mlr recovers an exact linear relation") {
  const auto ww = linear_window(2, 30);
  const auto model = bw::fit_mlr(ww);
  for (const auto& r : ww.window.records) {
    // No pipeline transforms registered, so prediction is the plain output.
    CHECK(model.predict_transformed(r) == Approx(r.feature("effort")).epsilon(1e-9));
  }
  CHECK_FALSE(model.training_summary.underdetermined_warning);
}

TEST_CASE("weighting changes the fit when the relation drifts") {
  // Old half of the window follows one line, new half another; compact
  // kernels should pull the fit toward the new half.
  bw::Window w;
  w.index = 1;
  w.feature_schema = {{"size", bw::FeatureKind::ratio},
                      {"effort", bw::FeatureKind::ratio}};
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.1, 0.9);
  for (size_t i = 0; i < 60; ++i) {
    bw::ProjectRecord r;
    r.id = "p" + std::to_string(i);
    r.completion_date = bw::Date(static_cast<long>(i) * 10);
    const double a = u(rng);
    r.ratio = {{"size", a},
               {"effort", i < 30 ? 0.8 - 0.3 * a : 0.1 + 0.6 * a}};
    w.records.push_back(std::move(r));
  }
  const auto rect = bw::fit_mlr(bw::apply_weights(w, bw::Kernel::rectangular));
  const auto tri = bw::fit_mlr(bw::apply_weights(w, bw::Kernel::triangular));
  bw::ProjectRecord probe;
  probe.id = "probe";
  probe.completion_date = bw::Date(600);
  probe.ratio = {{"size", 0.5}};
  const double target = 0.1 + 0.6 * 0.5;
  CHECK(std::fabs(tri.predict_transformed(probe) - target) <
        std::fabs(rect.predict_transformed(probe) - target));
}

TEST_CASE("atlm chooses ln for lognormal variables and inverts predictions") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> unit(0.0, 1.0);
  bw::ProjectSet ps;
  ps.feature_schema = {{"size", bw::FeatureKind::ratio},
                       {"effort", bw::FeatureKind::ratio}};
  for (size_t i = 0; i < 80; ++i) {
    bw::ProjectRecord r;
    r.id = "p" + std::to_string(i);
    r.completion_date = bw::Date(static_cast<long>(i) * 7);
    const double ln_size = 5.0 + 1.0 * unit(rng);
    r.ratio["size"] = std::exp(ln_size);
    r.ratio["effort"] = std::exp(2.0 + 0.8 * ln_size + 0.05 * unit(rng));
    ps.records.push_back(std::move(r));
  }
  // Run through the pipeline transform so the learner sees transformed
  // values, as in production.
  const auto t = bw::log_transform(ps, {"size", "effort"});
  bw::Window w;
  w.index = 1;
  w.records = t.records;
  w.feature_schema = t.feature_schema;
  w.transform_log = t.transform_log;
  const auto model = bw::fit_atlm(bw::apply_weights(w, bw::Kernel::rectangular));
  CHECK(model.atlm_feature_transforms.at("size") == bw::AtlmTransform::ln);
  CHECK(model.atlm_response_transform == bw::AtlmTransform::ln);
  // Predictions come back on the raw effort scale.
  double rel = 0.0;
  for (size_t i = 0; i < w.records.size(); ++i) {
    const double raw = ps.records[i].feature("effort");
    rel += std::fabs(model.predict_transformed(w.records[i]) - raw) / raw;
  }
  CHECK(rel / static_cast<double>(w.records.size()) < 0.1);
}

TEST_CASE("dnn analytic gradient matches finite differences") {
  bw::detail::Network net;
  net.sizes = {2, 3, 1};
  net.init(123);
  const std::vector<double> x = {0.4, -0.7};
  std::vector<double> grad;
  const double out = net.forward_with_gradient(x, grad);
  CHECK(out == Approx(net.forward(x)).epsilon(1e-12));
  auto theta = net.get_parameters();
  REQUIRE(grad.size() == theta.size());
  const double h = 1e-6;
  for (size_t i = 0; i < theta.size(); ++i) {
    auto tp = theta;
    tp[i] += h;
    net.set_parameters(tp);
    const double up = net.forward(x);
    tp[i] -= 2.0 * h;
    net.set_parameters(tp);
    const double down = net.forward(x);
    net.set_parameters(theta);
    const double fd = (up - down) / (2.0 * h);
    CHECK(grad[i] == Approx(fd).epsilon(1e-4));
  }
}

TEST_CASE("dnn learns a smooth nonlinear function") {
  bw::Window w;
  w.index = 1;
  w.feature_schema = {{"size", bw::FeatureKind::ratio},
                      {"effort", bw::FeatureKind::ratio}};
  for (int i = 0; i < 60; ++i) {
    bw::ProjectRecord r;
    r.id = "p" + std::to_string(i);
    r.completion_date = bw::Date(i * 5);
    const double x = -1.0 + 2.0 * static_cast<double>(i) / 59.0;
    r.ratio = {{"size", x}, {"effort", x * x}};
    w.records.push_back(std::move(r));
  }
  bw::DnnConfig cfg;
  cfg.hidden_layers = {6};
  cfg.max_epochs = 200;
  cfg.seed = 3;
  const auto model = bw::fit_dnn(bw::apply_weights(w, bw::Kernel::rectangular), cfg);
  double sse = 0.0;
  for (const auto& r : w.records) {
    const double e = model.predict_transformed(r) - r.feature("effort");
    sse += e * e;
  }
  CHECK(std::sqrt(sse / 60.0) < 0.02);
}

TEST_CASE("dnn training is deterministic for a fixed seed") {
  const auto ww = linear_window(14, 40);
  bw::DnnConfig cfg;
  cfg.hidden_layers = {4};
  cfg.max_epochs = 50;
  cfg.seed = 77;
  const auto a = bw::fit_dnn(ww, cfg);
  const auto b = bw::fit_dnn(ww, cfg);
  bw::ProjectRecord probe = ww.window.records[5];
  CHECK(a.predict_transformed(probe) == b.predict_transformed(probe));
}

TEST_CASE("model json roundtrip preserves predictions") {
  const auto ww = linear_window(10, 25);
  for (auto fam : {bw::LearnerFamily::mlr, bw::LearnerFamily::atlm}) {
    bw::DnnConfig cfg;
    const auto model = bw::fit_learner(fam, ww, cfg);
    const auto back = bw::FittedModel::from_json(model.to_json());
    for (const auto& r : ww.window.records) {
      CHECK(back.predict_transformed(r) ==
            Approx(model.predict_transformed(r)).epsilon(1e-14));
    }
  }
  bw::DnnConfig cfg;
  cfg.hidden_layers = {3};
  cfg.max_epochs = 20;
  const auto model = bw::fit_dnn(ww, cfg);
  const auto back = bw::FittedModel::from_json(model.to_json());
  for (const auto& r : ww.window.records) {
    CHECK(back.predict_transformed(r) ==
          Approx(model.predict_transformed(r)).epsilon(1e-14));
  }
}

TEST_CASE("model save and load through a file") {
  const auto ww = linear_window(11, 25);
  const auto model = bw::fit_mlr(ww);
  const std::string path = "test_model.json";
  model.save(path);
  const auto back = bw::FittedModel::load(path);
  std::remove(path.c_str());
  CHECK(back.family == model.family);
  CHECK(back.coefficients == model.coefficients);
}

TEST_CASE("one-hot encoding with stable level order and drop-first") {
  bw::Window w;
  w.index = 1;
  w.feature_schema = {{"size", bw::FeatureKind::ratio},
                      {"effort", bw::FeatureKind::ratio},
                      {"lang", bw::FeatureKind::categorical}};
  const char* langs[] = {"b_lang", "a_lang", "c_lang", "a_lang"};
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.1, 0.9);
  for (size_t i = 0; i < 24; ++i) {
    bw::ProjectRecord r;
    r.id = "p" + std::to_string(i);
    r.completion_date = bw::Date(static_cast<long>(i));
    const double a = u(rng);
    r.ratio = {{"size", a}, {"effort", 0.2 + 0.5 * a}};
    r.categorical["lang"] = langs[i % 4];
    w.records.push_back(std::move(r));
  }
  const auto model = bw::fit_mlr(bw::apply_weights(w, bw::Kernel::rectangular));
  // Levels sorted; first dropped for the linear design.
  REQUIRE(model.encoder.levels.at("lang") ==
          std::vector<std::string>{"a_lang", "b_lang", "c_lang"});
  CHECK(model.encoder.drop_first_level);
  CHECK(model.encoder.dim() == 3);  // size plus two dummies
}
