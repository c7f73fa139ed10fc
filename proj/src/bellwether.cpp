#include "bw/bellwether.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "bw/errors.hpp"

namespace bw {

std::string metric_name(MetricKind m) {
  switch (m) {
    case MetricKind::mae: return "mae";
    case MetricKind::mbre: return "mbre";
    case MetricKind::mibre: return "mibre";
  }
  return "?";
}

MetricKind metric_from_name(const std::string& name) {
  if (name == "mae") return MetricKind::mae;
  if (name == "mbre") return MetricKind::mbre;
  if (name == "mibre") return MetricKind::mibre;
  throw ParamError("unknown metric: '" + name + "'");
}

double pick_metric(const ErrorSummary& s, MetricKind m) {
  switch (m) {
    case MetricKind::mae: return s.mae;
    case MetricKind::mbre: return s.mbre;
    case MetricKind::mibre: return s.mibre;
  }
  return s.mae;
}

namespace {

constexpr double kMinEstimate = 1e-9;

double raw_effort(const Window& w, const ProjectRecord& r) {
  double v = r.feature("effort");
  for (auto it = w.transform_log.rbegin(); it != w.transform_log.rend(); ++it) {
    if (it->feature == "effort") v = it->invert(v);
  }
  return v;
}

ErrorSummary window_errors(const FittedModel& model, const Window& w) {
  std::vector<double> actual, est;
  actual.reserve(w.records.size());
  est.reserve(w.records.size());
  for (const auto& r : w.records) {
    actual.push_back(raw_effort(w, r));
    // Clamp so the BRE denominators stay defined even for a wild model.
    est.push_back(std::max(model.predict_transformed(r), kMinEstimate));
  }
  return error_summary(actual, est);
}

double window_metric(const FittedModel& model, const Window& w, MetricKind m) {
  return pick_metric(window_errors(model, w), m);
}

StationaryResult stationarity_of(const Window& w, const SearchConfig& cfg) {
  if (w.records.size() < 2) {
    StationaryResult r;
    r.status = ChainStatus::not_converged;
    return r;
  }
  const auto ages = window_ages(w, cfg.age_source);
  const double bin = cfg.markov_bin_width > 0.0 ? cfg.markov_bin_width
                                                : default_bin_width(ages);
  const auto seq = ages_to_states(w, bin, cfg.age_source);
  const auto tpm = build_tpm(seq);
  return iterate_to_stationary(tpm, cfg.markov_eps, cfg.max_squarings);
}

}  // namespace

std::vector<double> score_model(const FittedModel& model,
                                const std::vector<Window>& windows,
                                MetricKind metric) {
  std::vector<double> out;
  out.reserve(windows.size());
  for (const auto& w : windows) out.push_back(window_metric(model, w, metric));
  return out;
}

ScoreLedger cross_window_score(const WeightedWindow& candidate,
                               const std::vector<Window>& others,
                               const SearchConfig& cfg,
                               const std::vector<double>& baseline_metrics) {
  if (others.empty()) throw DataError("cross_window_score: no validation windows");
  if (baseline_metrics.size() != others.size()) {
    throw ParamError("cross_window_score: baseline metric count mismatch");
  }
  // Candidate must be disjoint from every validation window.
  std::set<std::string> cand_ids;
  for (const auto& r : candidate.window.records) cand_ids.insert(r.id);
  for (const auto& w : others) {
    for (const auto& r : w.records) {
      if (cand_ids.count(r.id)) {
        throw DataError("cross_window_score: candidate overlaps window " +
                        std::to_string(w.index) + " (id " + r.id + ")");
      }
    }
  }

  ScoreLedger ledger;
  FittedModel model;
  try {
    model = fit_learner(cfg.learner, candidate, cfg.dnn);
  } catch (const Error& e) {
    ledger.learner_failed = true;
    ledger.diagnostic = e.what();
    for (size_t i = 0; i < others.size(); ++i) {
      WindowScore ws;
      ws.window_index = others[i].index;
      ws.metric = std::numeric_limits<double>::infinity();
      ws.baseline_metric = baseline_metrics[i];
      ledger.per_window.push_back(std::move(ws));
    }
    ledger.mean_metric = std::numeric_limits<double>::infinity();
    return ledger;
  }

  double sum = 0.0;
  for (size_t i = 0; i < others.size(); ++i) {
    WindowScore ws;
    ws.window_index = others[i].index;
    ws.errors = window_errors(model, others[i]);
    ws.metric = pick_metric(ws.errors, cfg.metric);
    ws.baseline_metric = baseline_metrics[i];
    ws.win = ws.metric < ws.baseline_metric;
    if (ws.win) ++ledger.wins;
    sum += ws.metric;
    ledger.per_window.push_back(ws);
  }
  ledger.mean_metric = sum / static_cast<double>(others.size());
  return ledger;
}

namespace {

struct CandidateEval {
  ScoreLedger ledger;
  StationaryResult stationarity;
  WeightedWindow ww;
  size_t cut = 0;
  size_t validation_count = 0;

  bool ergodic() const { return stationarity.status == ChainStatus::ergodic; }
  /// Higher is better: more wins, then lower mean metric.
  bool better_than(const CandidateEval& o) const {
    if (ledger.learner_failed != o.ledger.learner_failed) {
      return !ledger.learner_failed;
    }
    if (ledger.wins != o.ledger.wins) return ledger.wins > o.ledger.wins;
    return ledger.mean_metric < o.ledger.mean_metric;
  }
};

}  // namespace

BellwetherResult search_bellwether(const std::vector<Window>& strata,
                                   const SearchConfig& cfg) {
  if (strata.size() < 2) throw DataError("search_bellwether: need at least 2 strata");
  if (!(cfg.majority_rule > 0.0 && cfg.majority_rule <= 1.0)) {
    throw ParamError("search_bellwether: majority_rule must lie in (0,1]");
  }
  if (cfg.adjust_step < 1) throw ParamError("search_bellwether: adjust_step >= 1");

  // Flatten the strata back into the sorted sequence; remember boundaries.
  std::vector<ProjectRecord> all;
  std::vector<size_t> starts;  // start index of each stratum
  for (const auto& w : strata) {
    starts.push_back(all.size());
    all.insert(all.end(), w.records.begin(), w.records.end());
  }
  const size_t n = all.size();
  const size_t q = strata.size();
  const auto& schema = strata.front().feature_schema;
  const auto& tlog = strata.front().transform_log;

  auto make_candidate = [&](size_t cut) {
    Window w;
    w.index = q;
    w.feature_schema = schema;
    w.transform_log = tlog;
    w.records.assign(all.begin() + static_cast<long>(cut), all.end());
    return w;
  };
  auto validation_windows = [&](size_t cut) {
    std::vector<Window> out;
    for (size_t i = 0; i + 1 < q; ++i) {
      const size_t lo = starts[i];
      const size_t hi = std::min(starts[i + 1], cut);
      if (lo >= hi) continue;
      Window w;
      w.index = i + 1;
      w.feature_schema = schema;
      w.transform_log = tlog;
      w.records.assign(all.begin() + static_cast<long>(lo),
                       all.begin() + static_cast<long>(hi));
      out.push_back(std::move(w));
    }
    return out;
  };

  const size_t initial_cut = starts.back();
  const size_t min_size = 3;

  BellwetherResult result;

  // Baseline of comparison: the learner trained on the initial w_q.
  FittedModel baseline;
  {
    const auto ww0 = apply_weights(make_candidate(initial_cut), cfg.kernel);
    try {
      baseline = fit_learner(cfg.learner, ww0, cfg.dnn);
    } catch (const Error& e) {
      result.message = std::string("baseline fit failed: ") + e.what();
      return result;
    }
  }

  auto evaluate = [&](size_t cut) {
    CandidateEval ev;
    ev.cut = cut;
    ev.ww = apply_weights(make_candidate(cut), cfg.kernel);
    const auto val = validation_windows(cut);
    ev.validation_count = val.size();
    const auto base_metrics = score_model(baseline, val, cfg.metric);
    ev.ledger = cross_window_score(ev.ww, val, cfg, base_metrics);
    ev.stationarity = stationarity_of(ev.ww.window, cfg);
    return ev;
  };

  auto record_trace = [&](const CandidateEval& ev, const std::string& action) {
    TraceStep t;
    t.iteration = result.trace.size();
    t.action = action;
    t.cut = ev.cut;
    const auto [sz, age] = window_dimensions(ev.ww.window);
    t.size = sz;
    t.age = age;
    t.chain_status = ev.stationarity.status;
    t.wins = ev.ledger.wins;
    t.validation_windows = ev.validation_count;
    t.mean_metric = ev.ledger.mean_metric;
    for (const auto& w : ev.ledger.per_window) t.per_window_metric.push_back(w.metric);
    result.trace.push_back(std::move(t));
  };

  auto majority_ok = [&](const CandidateEval& ev) {
    return static_cast<double>(ev.ledger.wins) >
           cfg.majority_rule * static_cast<double>(ev.validation_count);
  };

  std::map<size_t, CandidateEval> visited;
  auto eval_cached = [&](size_t cut) -> const CandidateEval& {
    auto it = visited.find(cut);
    if (it == visited.end()) it = visited.emplace(cut, evaluate(cut)).first;
    return it->second;
  };

  CandidateEval current = eval_cached(initial_cut);
  record_trace(current, "initial");
  std::optional<CandidateEval> best_ergodic;
  if (current.ergodic()) best_ergodic = current;

  size_t adjustments = 0;
  while (!(current.ergodic() && majority_ok(current)) &&
         adjustments < cfg.max_adjustments) {
    // Neighbors: grow absorbs older projects, shrink releases them.
    std::vector<std::pair<size_t, std::string>> neighbors;
    if (current.cut >= cfg.adjust_step) {
      neighbors.emplace_back(current.cut - cfg.adjust_step, "grow");
    } else if (current.cut > 0) {
      neighbors.emplace_back(0, "grow");
    }
    if (n - current.cut > min_size + cfg.adjust_step - 1 &&
        current.cut + cfg.adjust_step < n) {
      const size_t c = current.cut + cfg.adjust_step;
      if (n - c >= min_size && c < n) neighbors.emplace_back(c, "shrink");
    }

    const CandidateEval* best_neighbor = nullptr;
    std::string best_action;
    for (const auto& [cut, action] : neighbors) {
      const auto& ev = eval_cached(cut);
      if (!best_neighbor || ev.better_than(*best_neighbor)) {
        best_neighbor = &ev;
        best_action = action;
      }
    }
    if (!best_neighbor) break;
    // Move only while the climb improves (or the current candidate is
    // ineligible and the neighbor is).
    const bool improves = best_neighbor->better_than(current) ||
                          (!current.ergodic() && best_neighbor->ergodic() &&
                           !best_neighbor->ledger.learner_failed);
    if (!improves) break;
    current = *best_neighbor;
    ++adjustments;
    record_trace(current, best_action);
    if (current.ergodic() &&
        (!best_ergodic || current.better_than(*best_ergodic))) {
      best_ergodic = current;
    }
  }

  if (!best_ergodic) {
    result.found = false;
    result.message = "no ergodic candidate found within the adjustment budget";
    return result;
  }
  const auto& win = *best_ergodic;
  result.found = true;
  result.majority_satisfied = majority_ok(win);
  result.window = win.ww;
  const auto [sz, age] = window_dimensions(win.ww.window);
  result.size = sz;
  result.age = age;
  result.stationarity = win.stationarity;
  result.wins = win.ledger;
  if (!result.majority_satisfied) {
    result.message = "best ergodic candidate did not beat the majority of windows";
  }
  return result;
}

PortfolioResult growing_portfolio(const ProjectSet& ps, const SearchConfig& cfg,
                                  bool parallel) {
  const size_t n = ps.records.size();
  if (n < 3) throw DataError("growing_portfolio: need at least 3 projects");

  std::vector<double> actual(n), est(n);
  std::vector<char> ok(n, 0);

  auto run_fold = [&](size_t i) {
    Window w;
    w.index = 1;
    w.feature_schema = ps.feature_schema;
    w.transform_log = ps.transform_log;
    w.records.reserve(n - 1);
    for (size_t j = 0; j < n; ++j) {
      if (j != i) w.records.push_back(ps.records[j]);
    }
    try {
      const auto ww = apply_weights(w, Kernel::rectangular);
      const auto model = fit_learner(cfg.learner, ww, cfg.dnn);
      est[i] = std::max(model.predict_transformed(ps.records[i]), 1e-9);
      actual[i] = ps.invert_feature("effort", ps.records[i].feature("effort"));
      ok[i] = 1;
    } catch (const Error&) {
      ok[i] = 0;
    }
  };

  if (parallel) {
    const auto ln = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < ln; ++i) run_fold(static_cast<size_t>(i));
  } else {
    for (size_t i = 0; i < n; ++i) run_fold(i);
  }

  std::vector<double> a, e;
  PortfolioResult res;
  for (size_t i = 0; i < n; ++i) {
    if (ok[i]) {
      a.push_back(actual[i]);
      e.push_back(est[i]);
    } else {
      ++res.skips;
    }
  }
  if (a.empty()) throw NumericError("growing_portfolio: every fold failed");
  res.errors = error_summary(a, e);
  res.folds = a.size();
  return res;
}

HoldoutReport evaluate_holdout(const BellwetherResult& result,
                               const ProjectRecord& holdout,
                               const ProjectSet& portfolio_set,
                               const SearchConfig& cfg) {
  // Leakage guard: the holdout id must not appear anywhere in training data.
  for (const auto& r : portfolio_set.records) {
    if (r.id == holdout.id) {
      throw DataError("evaluate_holdout: holdout id present in training set");
    }
  }
  if (result.found) {
    for (const auto& r : result.window.window.records) {
      if (r.id == holdout.id) {
        throw DataError("evaluate_holdout: holdout leaked into the Bellwether window");
      }
    }
  }

  HoldoutReport rep;
  rep.holdout_id = holdout.id;
  rep.actual = portfolio_set.invert_feature("effort", holdout.feature("effort"));

  if (result.found) {
    rep.window_size = result.size;
    rep.window_age = result.age;
    try {
      const auto model = fit_learner(cfg.learner, result.window, cfg.dnn);
      rep.bellwether_estimate =
          std::max(model.predict_transformed(holdout), 1e-9);
    } catch (const Error&) {
      // left empty; the report shows the gap
    }
  }
  {
    Window w;
    w.index = 1;
    w.feature_schema = portfolio_set.feature_schema;
    w.transform_log = portfolio_set.transform_log;
    w.records = portfolio_set.records;
    try {
      const auto ww = apply_weights(w, Kernel::rectangular);
      const auto model = fit_learner(cfg.learner, ww, cfg.dnn);
      rep.portfolio_estimate = std::max(model.predict_transformed(holdout), 1e-9);
    } catch (const Error&) {
    }
  }
  return rep;
}

}  // namespace bw
