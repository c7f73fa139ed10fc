#include <cmath>

#include "doctest.h"

#include "bw/bellwether.hpp"
#include "bw/errors.hpp"
#include "bw/synthetic.hpp"

using doctest::Approx;

namespace {

bw::ProjectSet transformed_regime_set(uint64_t seed) {
  auto ps = bw::make_regime_shift_set(seed, 50, 100);
  return bw::log_transform(ps, ps.ratio_feature_names());
}

std::vector<bw::Window> strata_of(const bw::ProjectSet& ps, size_t q) {
  return bw::stratify(bw::sort_chronologically(ps), q);
}

}  // namespace

TEST_CASE("metric names roundtrip and pick the right field") {
  bw::ErrorSummary s;
  s.mae = 1.0;
  s.mbre = 2.0;
  s.mibre = 3.0;
  CHECK(bw::pick_metric(s, bw::MetricKind::mae) == 1.0);
  CHECK(bw::pick_metric(s, bw::MetricKind::mbre) == 2.0);
  CHECK(bw::pick_metric(s, bw::MetricKind::mibre) == 3.0);
  for (auto m : {bw::MetricKind::mae, bw::MetricKind::mbre, bw::MetricKind::mibre}) {
    CHECK(bw::metric_from_name(bw::metric_name(m)) == m);
  }
}

TEST_CASE("cross_window_score rejects candidates overlapping a validation window") {
  const auto ps = transformed_regime_set(1);
  auto strata = strata_of(ps, 4);
  bw::SearchConfig cfg;
  // Candidate shares records with window 3.
  bw::Window cand = strata[3];
  cand.records.insert(cand.records.end(), strata[2].records.begin(),
                      strata[2].records.end());
  const auto ww = bw::apply_weights(cand, bw::Kernel::rectangular);
  const std::vector<bw::Window> others(strata.begin(), strata.begin() + 3);
  CHECK_THROWS_AS(
      bw::cross_window_score(ww, others, cfg, std::vector<double>(3, 1.0)),
      bw::DataError);
}

TEST_CASE("wins require strictly beating the baseline") {
  const auto ps = transformed_regime_set(2);
  auto strata = strata_of(ps, 4);
  bw::SearchConfig cfg;
  const auto ww = bw::apply_weights(strata[3], bw::Kernel::rectangular);
  const std::vector<bw::Window> others(strata.begin(), strata.begin() + 3);
  // Absurdly good baseline: nothing can win.
  auto ledger = bw::cross_window_score(ww, others, cfg, {0.0, 0.0, 0.0});
  CHECK(ledger.wins == 0);
  // Absurdly bad baseline: everything wins.
  const double big = 1e12;
  ledger = bw::cross_window_score(ww, others, cfg, {big, big, big});
  CHECK(ledger.wins == 3);
  for (const auto& w : ledger.per_window) {
    CHECK(w.win == (w.metric < w.baseline_metric));
    CHECK(w.metric == Approx(bw::pick_metric(w.errors, cfg.metric)));
  }
}

TEST_CASE("search finds an ergodic window that avoids the dead regime") {
  const auto ps = transformed_regime_set(3);
  bw::SearchConfig cfg;
  cfg.age_source = bw::AgeSource::completion_offset;
  const auto result = bw::search_bellwether(strata_of(ps, 5), cfg);
  REQUIRE(result.found);
  CHECK(result.stationarity.status == bw::ChainStatus::ergodic);
  CHECK(result.size >= 3);
  // The oldest project of the returned window postdates the regime change
  // (records are date-spaced 10-15 days; the shift happens at index 50).
  bw::Date oldest = result.window.window.records.front().completion_date;
  for (const auto& r : result.window.window.records) {
    oldest = std::min(oldest, r.completion_date);
  }
  const auto shift_date = bw::sort_chronologically(ps).records[50].completion_date;
  CHECK(oldest >= shift_date);
  CHECK_FALSE(result.trace.empty());
  CHECK(result.trace.front().action == "initial");
}

TEST_CASE("search trace records every adjustment with its dimensions") {
  const auto ps = transformed_regime_set(4);
  bw::SearchConfig cfg;
  cfg.age_source = bw::AgeSource::completion_offset;
  const auto result = bw::search_bellwether(strata_of(ps, 5), cfg);
  for (size_t i = 0; i < result.trace.size(); ++i) {
    const auto& t = result.trace[i];
    CHECK(t.iteration == i);
    CHECK(t.size >= 3);
    CHECK(t.validation_windows >= 1);
    if (i > 0) CHECK((t.action == "grow" || t.action == "shrink"));
  }
}

TEST_CASE("search is deterministic") {
  const auto ps = transformed_regime_set(5);
  bw::SearchConfig cfg;
  cfg.age_source = bw::AgeSource::completion_offset;
  const auto a = bw::search_bellwether(strata_of(ps, 5), cfg);
  const auto b = bw::search_bellwether(strata_of(ps, 5), cfg);
  CHECK(a.found == b.found);
  CHECK(a.size == b.size);
  CHECK(a.wins.mean_metric == b.wins.mean_metric);
  CHECK(a.trace.size() == b.trace.size());
}

TEST_CASE("growing portfolio parallel equals serial") {
  auto ps = transformed_regime_set(6);
  ps.records.resize(60);
  bw::SearchConfig cfg;
  const auto serial = bw::growing_portfolio(ps, cfg, false);
  const auto parallel = bw::growing_portfolio(ps, cfg, true);
  CHECK(serial.folds == parallel.folds);
  CHECK(serial.errors.mae == Approx(parallel.errors.mae).epsilon(1e-12));
  CHECK(serial.errors.mbre == Approx(parallel.errors.mbre).epsilon(1e-12));
}

TEST_CASE("holdout evaluation guards against leakage") {
  const auto ps = transformed_regime_set(7);
  bw::SearchConfig cfg;
  cfg.age_source = bw::AgeSource::completion_offset;
  const auto sorted = bw::sort_chronologically(ps);
  bw::ProjectSet train = sorted;
  const auto holdout = train.records.back();
  train.records.pop_back();
  const auto result = bw::search_bellwether(bw::stratify(train, 5), cfg);
  REQUIRE(result.found);

  const auto rep = bw::evaluate_holdout(result, holdout, train, cfg);
  CHECK(rep.holdout_id == holdout.id);
  CHECK(rep.actual > 0.0);
  REQUIRE(rep.bellwether_estimate.has_value());
  REQUIRE(rep.portfolio_estimate.has_value());
  CHECK(*rep.bellwether_estimate > 0.0);

  // Same id inside the training set must throw.
  CHECK_THROWS_AS(bw::evaluate_holdout(result, train.records.front(), train, cfg),
                  bw::DataError);
}

TEST_CASE("search validates its configuration") {
  const auto ps = transformed_regime_set(8);
  auto strata = strata_of(ps, 5);
  bw::SearchConfig cfg;
  cfg.majority_rule = 0.0;
  CHECK_THROWS_AS(bw::search_bellwether(strata, cfg), bw::ParamError);
  cfg.majority_rule = 0.5;
  cfg.adjust_step = 0;
  CHECK_THROWS_AS(bw::search_bellwether(strata, cfg), bw::ParamError);
  CHECK_THROWS_AS(
      bw::search_bellwether(std::vector<bw::Window>{strata[0]}, bw::SearchConfig{}),
      bw::DataError);
}
