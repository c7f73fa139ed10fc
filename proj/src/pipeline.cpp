#include "bw/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bw/errors.hpp"

namespace bw {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::string fmt(double v, int digits = 6) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

std::vector<std::string> cooks_predictors(const ProjectSet& ps) {
  std::vector<std::string> preds;
  for (const auto& name : ps.ratio_feature_names()) {
    // pdr is effort over size, so it would leak the response.
    if (name != "effort" && name != "pdr") preds.push_back(name);
  }
  return preds;
}

}  // namespace

PreprocessResult preprocess_table(const CsvTable& table, const RunConfig& cfg,
                                  const std::string& origin) {
  PreprocessResult out;
  out.csv_rows = table.rows.size();
  auto loaded = load_projects_table(table, cfg.columns, origin);
  out.rejected = std::move(loaded.rejected);

  ProjectSet ps = filter_quality(loaded.set, cfg.filters, &out.filters);
  if (ps.records.empty()) throw DataError(origin + ": no projects survive the filters");
  ps = sort_chronologically(ps);

  const auto ratio = ps.ratio_feature_names();
  if (cfg.transform == TransformChoice::log) {
    ps = log_transform(ps, ratio, cfg.log_eps);
  } else {
    ps = zscore_normalize(ps, ratio);
  }

  ps = cooks_filter(ps, "effort", cooks_predictors(ps), cfg.cooks_threshold,
                    &out.cooks);
  out.clean = sort_chronologically(ps);
  return out;
}

PreprocessResult preprocess(const RunConfig& cfg) {
  if (cfg.input_path.empty()) throw ParamError("no input file configured");
  return preprocess_table(read_csv(cfg.input_path), cfg, cfg.input_path);
}

bool EvaluationReport::any_bellwether() const {
  for (const auto& c : cells) {
    if (c.search_ok && c.search.found) return true;
  }
  return false;
}

namespace {

std::vector<double> cell_metric_samples(const CellResult& cell) {
  std::vector<double> s;
  if (!cell.search_ok || !cell.search.found || cell.search.wins.learner_failed) {
    return s;
  }
  for (const auto& w : cell.search.wins.per_window) s.push_back(w.metric);
  return s;
}

double mean_of(const std::vector<WindowScore>& scores,
               double (*pick)(const ErrorSummary&)) {
  if (scores.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& w : scores) sum += pick(w.errors);
  return sum / static_cast<double>(scores.size());
}

}  // namespace

EvaluationReport run_pipeline_table(const CsvTable& table, const RunConfig& cfg,
                                    const std::string& origin) {
  EvaluationReport rep;
  rep.cfg = cfg;
  rep.pre = preprocess_table(table, cfg, origin);

  ProjectSet clean = rep.pre.clean;
  if (clean.size() < 10) {
    throw DataError("only " + std::to_string(clean.size()) +
                    " clean projects; need at least 10");
  }

  size_t hold_idx = clean.size() - 1;
  if (cfg.holdout == HoldoutPolicy::by_id) {
    bool hit = false;
    for (size_t i = 0; i < clean.size(); ++i) {
      if (clean.records[i].id == cfg.holdout_id) {
        hold_idx = i;
        hit = true;
        break;
      }
    }
    if (!hit) throw DataError("holdout id not found: " + cfg.holdout_id);
  }
  rep.holdout = clean.records[hold_idx];

  ProjectSet remaining = clean;
  remaining.records.erase(remaining.records.begin() +
                          static_cast<long>(hold_idx));
  const size_t n = remaining.size();

  size_t kmax = cfg.kmax;
  if (kmax == 0) kmax = std::min<size_t>(10, std::max<size_t>(cfg.kmin, n / 30));
  if (kmax < cfg.kmin) kmax = cfg.kmin;
  rep.clustering = xmeans(remaining, cfg.kmin, kmax, cfg.seed);
  rep.q = std::max<size_t>(2, rep.clustering.q);

  const auto strata = stratify(remaining, rep.q);
  for (const auto& w : strata) {
    rep.stratum_sizes.push_back(w.size());
    for (const auto& r : w.records) rep.window_by_id[r.id] = w.index;
    for (const auto& f : remaining.ratio_feature_names()) {
      StratumStats st;
      st.window = w.index;
      st.feature = f;
      st.m = moments(w.feature_column(f));
      st.gate = normality_gate(st.m);
      rep.stratum_stats.push_back(std::move(st));
    }
  }

  for (const auto learner : cfg.learners) {
    LearnerAnalysis la;
    la.learner = learner;
    {
      const auto sc = cfg.search_config(learner, Kernel::rectangular);
      try {
        la.portfolio = growing_portfolio(remaining, sc);
        la.portfolio_ok = true;
      } catch (const Error& e) {
        la.portfolio_error = e.what();
      }
    }

    std::vector<Kernel> sample_kernels;
    std::vector<std::vector<double>> samples;
    for (const auto kernel : cfg.kernels) {
      CellResult cell;
      cell.learner = learner;
      cell.kernel = kernel;
      const auto sc = cfg.search_config(learner, kernel);
      try {
        cell.search = search_bellwether(strata, sc);
        cell.search_ok = true;
        cell.holdout = evaluate_holdout(cell.search, *rep.holdout, remaining, sc);
      } catch (const Error& e) {
        cell.search_error = e.what();
      }
      auto s = cell_metric_samples(cell);
      if (s.size() >= 2) {
        sample_kernels.push_back(kernel);
        samples.push_back(std::move(s));
      }
      rep.cells.push_back(std::move(cell));
    }

    if (samples.size() >= 2) {
      la.kw = kruskal_wallis(samples);
    } else {
      la.kw.degenerate = true;
    }
    for (size_t i = 0; i < samples.size(); ++i) {
      for (size_t j = i + 1; j < samples.size(); ++j) {
        PairwiseComparison pc;
        pc.a = sample_kernels[i];
        pc.b = sample_kernels[j];
        pc.welch = welch_t(samples[i], samples[j]);
        pc.glass = glass_delta(samples[i], samples[j]);
        la.pairs.push_back(std::move(pc));
      }
    }
    rep.learners.push_back(std::move(la));
  }
  return rep;
}

EvaluationReport run_pipeline(const RunConfig& cfg) {
  if (cfg.input_path.empty()) throw ParamError("no input file configured");
  return run_pipeline_table(read_csv(cfg.input_path), cfg, cfg.input_path);
}

namespace {

double pick_mae(const ErrorSummary& s) { return s.mae; }
double pick_mbre(const ErrorSummary& s) { return s.mbre; }
double pick_mibre(const ErrorSummary& s) { return s.mibre; }

nlohmann::json errors_json(const ErrorSummary& s) {
  return {{"mae", s.mae}, {"mbre", s.mbre}, {"mibre", s.mibre}, {"n", s.n}};
}

nlohmann::json test_json(const TestResult& t) {
  return {{"statistic", t.statistic},
          {"p_value", t.p_value},
          {"df", t.df},
          {"degenerate", t.degenerate}};
}

}  // namespace

nlohmann::json report_to_json(const EvaluationReport& rep) {
  nlohmann::json j;
  j["config"] = rep.cfg.echo();

  nlohmann::json pre;
  pre["input_rows"] = rep.pre.csv_rows;
  pre["loader_rejections"] = rep.pre.rejected.size();
  pre["filters"] = nlohmann::json::object();
  for (const auto& [name, count] : rep.pre.filters.removed_by_filter) {
    pre["filters"][name] = count;
  }
  pre["cooks_threshold"] = rep.pre.cooks.threshold;
  pre["cooks_removed"] = rep.pre.cooks.removed_ids;
  pre["clean_projects"] = rep.pre.clean.size();
  j["preprocessing"] = std::move(pre);

  nlohmann::json strat;
  strat["q"] = rep.q;
  strat["bic"] = rep.clustering.bic;
  strat["sizes"] = rep.stratum_sizes;
  nlohmann::json ktrace = nlohmann::json::array();
  for (const auto& [k, bic] : rep.clustering.trace) {
    ktrace.push_back({{"k", k}, {"bic", bic}});
  }
  strat["search_trace"] = std::move(ktrace);
  nlohmann::json stats = nlohmann::json::array();
  for (const auto& st : rep.stratum_stats) {
    stats.push_back({{"window", st.window},
                     {"feature", st.feature},
                     {"n", st.m.n},
                     {"mean", st.m.mean},
                     {"sd", st.m.sd},
                     {"skewness", st.m.skewness},
                     {"kurtosis", st.m.kurtosis},
                     {"gate_pass", st.gate.pass}});
  }
  strat["stats"] = std::move(stats);
  j["stratification"] = std::move(strat);

  if (rep.holdout) j["holdout_id"] = rep.holdout->id;

  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : rep.cells) {
    nlohmann::json cj;
    cj["learner"] = learner_name(c.learner);
    cj["kernel"] = kernel_name(c.kernel);
    cj["ok"] = c.search_ok;
    if (!c.search_ok) {
      cj["error"] = c.search_error;
      cells.push_back(std::move(cj));
      continue;
    }
    cj["found"] = c.search.found;
    cj["majority_satisfied"] = c.search.majority_satisfied;
    cj["message"] = c.search.message;
    if (c.search.found) {
      cj["window_size"] = c.search.size;
      cj["window_age_years"] = c.search.age;
      cj["chain_status"] = chain_status_name(c.search.stationarity.status);
      cj["stationary_pi"] = c.search.stationarity.pi;
      cj["wins"] = c.search.wins.wins;
      cj["validation_windows"] = c.search.wins.per_window.size();
      cj["mean_metric"] = c.search.wins.mean_metric;
      nlohmann::json pw = nlohmann::json::array();
      for (const auto& w : c.search.wins.per_window) {
        pw.push_back({{"window", w.window_index},
                      {"errors", errors_json(w.errors)},
                      {"metric", w.metric},
                      {"baseline_metric", w.baseline_metric},
                      {"win", w.win}});
      }
      cj["per_window"] = std::move(pw);
      nlohmann::json hj;
      hj["id"] = c.holdout.holdout_id;
      hj["actual"] = c.holdout.actual;
      if (c.holdout.bellwether_estimate) {
        hj["bellwether_estimate"] = *c.holdout.bellwether_estimate;
      }
      if (c.holdout.portfolio_estimate) {
        hj["portfolio_estimate"] = *c.holdout.portfolio_estimate;
      }
      cj["holdout"] = std::move(hj);
    }
    cells.push_back(std::move(cj));
  }
  j["cells"] = std::move(cells);

  nlohmann::json learners = nlohmann::json::array();
  for (const auto& la : rep.learners) {
    nlohmann::json lj;
    lj["learner"] = learner_name(la.learner);
    if (la.portfolio_ok) {
      lj["portfolio"] = errors_json(la.portfolio.errors);
      lj["portfolio"]["folds"] = la.portfolio.folds;
      lj["portfolio"]["skips"] = la.portfolio.skips;
    } else {
      lj["portfolio_error"] = la.portfolio_error;
    }
    lj["kruskal_wallis"] = test_json(la.kw);
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& pc : la.pairs) {
      pairs.push_back({{"a", kernel_name(pc.a)},
                       {"b", kernel_name(pc.b)},
                       {"welch", test_json(pc.welch)},
                       {"glass_delta", pc.glass.delta},
                       {"practically_significant", pc.glass.practically_significant}});
    }
    lj["pairwise"] = std::move(pairs);
    learners.push_back(std::move(lj));
  }
  j["learner_analysis"] = std::move(learners);
  return j;
}

std::string render_trace_csv(const EvaluationReport& rep) {
  std::ostringstream o;
  o << "learner,kernel,iteration,action,cut,size,age_years,chain_status,"
       "wins,validation_windows,mean_metric,per_window_metric\n";
  for (const auto& c : rep.cells) {
    if (!c.search_ok) continue;
    for (const auto& t : c.search.trace) {
      std::string pw;
      for (const auto& m : t.per_window_metric) {
        if (!pw.empty()) pw += ";";
        pw += format_g17(m);
      }
      o << learner_name(c.learner) << "," << kernel_name(c.kernel) << ","
        << t.iteration << "," << t.action << "," << t.cut << "," << t.size << ","
        << format_g17(t.age) << "," << chain_status_name(t.chain_status) << ","
        << t.wins << "," << t.validation_windows << ","
        << format_g17(t.mean_metric) << "," << pw << "\n";
    }
  }
  return o.str();
}

CsvTable clean_data_table(const EvaluationReport& rep) {
  const auto& ps = rep.pre.clean;
  const auto ratio = ps.ratio_feature_names();
  const auto cats = ps.categorical_feature_names();

  CsvTable t;
  t.header = {"id", "completion_date"};
  for (const auto& f : ratio) t.header.push_back(f);
  for (const auto& c : cats) t.header.push_back(c);
  t.header.push_back("window");

  for (const auto& r : ps.records) {
    std::vector<std::string> row = {r.id, r.completion_date.to_iso()};
    for (const auto& f : ratio) {
      row.push_back(r.has_feature(f) ? format_g17(r.feature(f)) : "");
    }
    for (const auto& c : cats) {
      auto it = r.categorical.find(c);
      row.push_back(it == r.categorical.end() ? "" : it->second);
    }
    auto wi = rep.window_by_id.find(r.id);
    row.push_back(wi == rep.window_by_id.end() ? std::string("holdout")
                                               : std::to_string(wi->second));
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable removals_table(const PreprocessResult& pre) {
  CsvTable t;
  t.header = {"stage", "id", "reason"};
  for (const auto& r : pre.rejected) {
    t.rows.push_back({"load", "row:" + std::to_string(r.row_number), r.reason});
  }
  for (const auto& [id, filter] : pre.filters.removals) {
    t.rows.push_back({"filter", id, filter});
  }
  for (size_t i = 0; i < pre.cooks.removed_ids.size(); ++i) {
    t.rows.push_back({"influence", pre.cooks.removed_ids[i],
                      "cooks_distance=" + format_g17(pre.cooks.removed_distances[i]) +
                          " threshold=" + format_g17(pre.cooks.threshold)});
  }
  return t;
}

std::string render_report_markdown(const EvaluationReport& rep) {
  std::ostringstream o;
  const double alpha = rep.cfg.alpha;

  o << "# Bellwether run report\n\n";

  o << "## Configuration\n\n```\n" << rep.cfg.echo() << "```\n\n";

  o << "## Preprocessing\n\n";
  o << "| stage | count |\n|---|---|\n";
  o << "| input rows | " << rep.pre.csv_rows << " |\n";
  o << "| loader rejections | " << rep.pre.rejected.size() << " |\n";
  for (const auto& [name, count] : rep.pre.filters.removed_by_filter) {
    o << "| filter: " << name << " | " << count << " |\n";
  }
  o << "| influence removals (threshold " << fmt(rep.pre.cooks.threshold)
    << ") | " << rep.pre.cooks.removed_ids.size() << " |\n";
  o << "| clean projects | " << rep.pre.clean.size() << " |\n";
  if (rep.pre.csv_rows > 0) {
    const double retention = 100.0 * static_cast<double>(rep.pre.clean.size()) /
                             static_cast<double>(rep.pre.csv_rows);
    o << "\nRetention: " << fmt(retention, 4) << "% of input rows.\n";
  }
  o << "\n";

  o << "## Stratification\n\n";
  o << "q = " << rep.q << " (clustering BIC " << fmt(rep.clustering.bic)
    << "), window sizes:";
  for (auto s : rep.stratum_sizes) o << " " << s;
  o << "\n\n";
  o << "| window | feature | n | mean | sd | skewness | kurtosis | gate |\n";
  o << "|---|---|---|---|---|---|---|---|\n";
  for (const auto& st : rep.stratum_stats) {
    o << "| " << st.window << " | " << st.feature << " | " << st.m.n << " | "
      << fmt(st.m.mean) << " | " << fmt(st.m.sd) << " | " << fmt(st.m.skewness)
      << " | " << fmt(st.m.kurtosis) << " | " << (st.gate.pass ? "pass" : "fail")
      << " |\n";
  }
  o << "\n";

  if (rep.holdout) {
    o << "## Holdout\n\nProject `" << rep.holdout->id << "` (completed "
      << rep.holdout->completion_date.to_iso() << ") is held out of every "
      << "training set.\n\n";
  }

  o << "## Results\n\n";
  for (const auto& la : rep.learners) {
    o << "### " << learner_name(la.learner) << "\n\n";
    if (la.portfolio_ok) {
      o << "Growing-portfolio baseline (leave-one-out, " << la.portfolio.folds
        << " folds";
      if (la.portfolio.skips > 0) o << ", " << la.portfolio.skips << " skipped";
      o << "): MAE " << fmt(la.portfolio.errors.mae) << ", MBRE "
        << fmt(la.portfolio.errors.mbre) << ", MIBRE "
        << fmt(la.portfolio.errors.mibre) << "\n\n";
    } else {
      o << "Growing-portfolio baseline failed: " << la.portfolio_error << "\n\n";
    }

    o << "| kernel | found | majority | size | age (yr) | chain | wins | "
         "MAE | MBRE | MIBRE | holdout est | holdout actual |\n";
    o << "|---|---|---|---|---|---|---|---|---|---|---|---|\n";
    for (const auto& c : rep.cells) {
      if (c.learner != la.learner) continue;
      o << "| " << kernel_name(c.kernel) << " | ";
      if (!c.search_ok) {
        o << "error: " << c.search_error << " | | | | | | | | | | |\n";
        continue;
      }
      if (!c.search.found) {
        o << "no | | | | | | | | | | |\n";
        continue;
      }
      const auto& pw = c.search.wins.per_window;
      o << "yes | " << (c.search.majority_satisfied ? "yes" : "no") << " | "
        << c.search.size << " | " << fmt(c.search.age, 4) << " | "
        << chain_status_name(c.search.stationarity.status) << " | "
        << c.search.wins.wins << "/" << pw.size() << " | "
        << fmt(mean_of(pw, pick_mae)) << " | " << fmt(mean_of(pw, pick_mbre))
        << " | " << fmt(mean_of(pw, pick_mibre)) << " | "
        << (c.holdout.bellwether_estimate ? fmt(*c.holdout.bellwether_estimate)
                                          : std::string("-"))
        << " | " << fmt(c.holdout.actual) << " |\n";
    }
    o << "\n";

    if (la.kw.degenerate) {
      o << "Kruskal-Wallis across kernels: not enough eligible kernels.\n\n";
    } else {
      o << "Kruskal-Wallis across kernels: H = " << fmt(la.kw.statistic)
        << ", p = " << fmt(la.kw.p_value)
        << (la.kw.p_value < alpha ? " \\*" : "") << "\n\n";
    }
    if (!la.pairs.empty()) {
      o << "| pair | t | p | Glass delta |\n|---|---|---|---|\n";
      for (const auto& pc : la.pairs) {
        o << "| " << kernel_name(pc.a) << " vs " << kernel_name(pc.b) << " | "
          << fmt(pc.welch.statistic) << " | " << fmt(pc.welch.p_value)
          << (pc.welch.p_value < alpha ? " \\*" : "") << " | "
          << fmt(pc.glass.delta)
          << (pc.glass.practically_significant ? " \\*\\*" : "") << " |\n";
      }
      o << "\nMarkers: \\* p < " << fmt(alpha) << "; \\*\\* Glass delta > "
        << fmt(kGlassDeltaThreshold) << ".\n\n";
    }
  }

  if (!rep.any_bellwether()) {
    o << "No ergodic Bellwether window was found in any cell.\n";
  }
  return o.str();
}

void write_artifacts(const EvaluationReport& rep, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  auto write = [&](const std::string& name, const std::string& content) {
    const auto path = fs::path(out_dir) / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot write " + path.string());
    f << content;
  };
  write("report.md", render_report_markdown(rep));
  write("report.json", report_to_json(rep).dump(2) + "\n");
  write("trace.csv", render_trace_csv(rep));
  write_csv_file((fs::path(out_dir) / "clean_data.csv").string(),
                 clean_data_table(rep));
  write_csv_file((fs::path(out_dir) / "removals.csv").string(),
                 removals_table(rep.pre));
}

}  // namespace bw
