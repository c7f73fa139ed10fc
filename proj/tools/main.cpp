#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bw/config.hpp"
#include "bw/errors.hpp"
#include "bw/pipeline.hpp"

namespace {

// Exit codes: 0 success, 2 configuration error, 3 data error,
// 4 no Bellwether found, 5 internal error.
constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kDataError = 3;
constexpr int kNoBellwether = 4;
constexpr int kInternalError = 5;

struct CliOptions {
  std::string config_path;
  std::vector<std::string> sets;
  std::string input;
  std::string output_dir;
  std::string learner;
  std::string kernel;
};

bw::RunConfig build_config(const CliOptions& opt) {
  bw::RunConfig cfg;
  // BW_OUTPUT_DIR supplies the default output directory; config file and
  // flags both override it.
  if (const char* env = std::getenv("BW_OUTPUT_DIR")) cfg.output_dir = env;
  if (!opt.config_path.empty()) cfg = bw::load_config(opt.config_path, cfg);
  for (const auto& kv : opt.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw bw::ParamError("--set expects key=value, got '" + kv + "'");
    }
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!opt.input.empty()) cfg.input_path = opt.input;
  if (!opt.output_dir.empty()) cfg.output_dir = opt.output_dir;
  if (!opt.learner.empty()) cfg.learners = {bw::learner_from_name(opt.learner)};
  if (!opt.kernel.empty()) cfg.kernels = {bw::kernel_from_name(opt.kernel)};
  return cfg;
}

void print_preprocess_summary(const bw::PreprocessResult& pre) {
  std::cout << "input rows: " << pre.csv_rows << "\n";
  std::cout << "loader rejections: " << pre.rejected.size() << "\n";
  for (const auto& [name, count] : pre.filters.removed_by_filter) {
    std::cout << "filter " << name << ": " << count << "\n";
  }
  std::cout << "influence removals: " << pre.cooks.removed_ids.size()
            << " (threshold " << bw::format_g17(pre.cooks.threshold) << ")\n";
  std::cout << "clean projects: " << pre.clean.size() << "\n";
}

int cmd_run(const CliOptions& opt) {
  const auto cfg = build_config(opt);
  const auto rep = bw::run_pipeline(cfg);
  bw::write_artifacts(rep, cfg.output_dir);
  std::cout << "wrote " << cfg.output_dir << "/report.md\n";
  if (!rep.any_bellwether()) {
    std::cerr << "no ergodic Bellwether window found in any cell\n";
    return kNoBellwether;
  }
  return kOk;
}

int cmd_preprocess(const CliOptions& opt) {
  const auto cfg = build_config(opt);
  const auto pre = bw::preprocess(cfg);
  print_preprocess_summary(pre);

  bw::EvaluationReport rep;
  rep.cfg = cfg;
  rep.pre = pre;
  namespace fs = std::filesystem;
  fs::create_directories(cfg.output_dir);
  bw::write_csv_file((fs::path(cfg.output_dir) / "clean_data.csv").string(),
                     bw::clean_data_table(rep));
  bw::write_csv_file((fs::path(cfg.output_dir) / "removals.csv").string(),
                     bw::removals_table(pre));
  std::cout << "wrote " << cfg.output_dir << "/clean_data.csv\n";
  return kOk;
}

int cmd_stratify(const CliOptions& opt) {
  auto cfg = build_config(opt);
  const auto pre = bw::preprocess(cfg);
  const size_t n = pre.clean.size();
  if (n < 2) throw bw::DataError("need at least 2 clean projects to stratify");
  size_t kmax = cfg.kmax;
  if (kmax == 0) kmax = std::min<size_t>(10, std::max<size_t>(cfg.kmin, n / 30));
  if (kmax < cfg.kmin) kmax = cfg.kmin;
  const auto clustering = bw::xmeans(pre.clean, cfg.kmin, kmax, cfg.seed);
  const size_t q = std::max<size_t>(2, clustering.q);
  const auto strata = bw::stratify(pre.clean, q);

  std::cout << "q = " << q << " (BIC " << bw::format_g17(clustering.bic)
            << ")\n";
  bw::EvaluationReport rep;
  rep.cfg = cfg;
  rep.pre = pre;
  for (const auto& w : strata) {
    std::cout << "window " << w.index << ": " << w.size() << " projects";
    if (!w.records.empty()) {
      std::cout << " (" << w.records.front().completion_date.to_iso() << " .. "
                << w.records.back().completion_date.to_iso() << ")";
    }
    std::cout << "\n";
    for (const auto& r : w.records) rep.window_by_id[r.id] = w.index;
  }
  namespace fs = std::filesystem;
  fs::create_directories(cfg.output_dir);
  bw::write_csv_file((fs::path(cfg.output_dir) / "clean_data.csv").string(),
                     bw::clean_data_table(rep));
  std::cout << "wrote " << cfg.output_dir << "/clean_data.csv\n";
  return kOk;
}

int run_restricted(const CliOptions& opt, bool predict_only) {
  auto cfg = build_config(opt);
  if (cfg.learners.size() != 1) cfg.learners = {cfg.learners.front()};
  if (cfg.kernels.size() != 1) cfg.kernels = {cfg.kernels.front()};
  const auto rep = bw::run_pipeline(cfg);
  const auto& cell = rep.cells.front();
  if (!cell.search_ok) throw bw::NumericError(cell.search_error);

  if (!predict_only) {
    bw::write_artifacts(rep, cfg.output_dir);
    std::cout << "wrote " << cfg.output_dir << "/report.md\n";
  }
  if (!cell.search.found) {
    std::cerr << "no ergodic Bellwether window: " << cell.search.message << "\n";
    return kNoBellwether;
  }
  std::cout << "learner " << bw::learner_name(cell.learner) << ", kernel "
            << bw::kernel_name(cell.kernel) << "\n";
  std::cout << "window size " << cell.search.size << ", age "
            << bw::format_g17(cell.search.age) << " years, wins "
            << cell.search.wins.wins << "/" << cell.search.wins.per_window.size()
            << ", majority "
            << (cell.search.majority_satisfied ? "satisfied" : "not satisfied")
            << "\n";
  std::cout << "holdout " << cell.holdout.holdout_id << ": actual "
            << bw::format_g17(cell.holdout.actual);
  if (cell.holdout.bellwether_estimate) {
    std::cout << ", bellwether estimate "
              << bw::format_g17(*cell.holdout.bellwether_estimate);
  }
  if (cell.holdout.portfolio_estimate) {
    std::cout << ", portfolio estimate "
              << bw::format_g17(*cell.holdout.portfolio_estimate);
  }
  std::cout << "\n";
  return kOk;
}

int cmd_stats(const CliOptions& opt) {
  const auto cfg = build_config(opt);
  const auto pre = bw::preprocess(cfg);
  const size_t n = pre.clean.size();
  if (n < 2) throw bw::DataError("need at least 2 clean projects");
  size_t kmax = cfg.kmax;
  if (kmax == 0) kmax = std::min<size_t>(10, std::max<size_t>(cfg.kmin, n / 30));
  if (kmax < cfg.kmin) kmax = cfg.kmin;
  const auto clustering = bw::xmeans(pre.clean, cfg.kmin, kmax, cfg.seed);
  const size_t q = std::max<size_t>(2, clustering.q);
  const auto strata = bw::stratify(pre.clean, q);

  std::cout << "| window | feature | n | mean | sd | skewness | kurtosis | gate |\n";
  std::cout << "|---|---|---|---|---|---|---|---|\n";
  for (const auto& w : strata) {
    for (const auto& f : pre.clean.ratio_feature_names()) {
      const auto m = bw::moments(w.feature_column(f));
      const auto gate = bw::normality_gate(m);
      std::cout << "| " << w.index << " | " << f << " | " << m.n << " | "
                << bw::format_g17(m.mean) << " | " << bw::format_g17(m.sd)
                << " | " << bw::format_g17(m.skewness) << " | "
                << bw::format_g17(m.kurtosis) << " | "
                << (gate.pass ? "pass" : "fail") << " |\n";
    }
  }
  return kOk;
}

void add_common(CLI::App* sub, CliOptions& opt) {
  sub->add_option("-c,--config", opt.config_path, "Config file (key = value lines)");
  sub->add_option("-s,--set", opt.sets, "Override one setting, key=value")
      ->take_all();
  sub->add_option("-i,--input", opt.input, "Input CSV path");
  sub->add_option("-o,--output-dir", opt.output_dir, "Output directory");
  sub->add_option("--learner", opt.learner, "Restrict to one learner");
  sub->add_option("--kernel", opt.kernel, "Restrict to one kernel");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Moving-window Bellwether effort estimation"};
  app.require_subcommand(1);

  CliOptions opt;
  auto* run = app.add_subcommand("run", "Full evaluation over every learner and kernel");
  auto* preprocess = app.add_subcommand("preprocess", "Clean the dataset and stop");
  auto* stratify = app.add_subcommand("stratify", "Cluster and cut the clean data into windows");
  auto* search = app.add_subcommand("search", "Bellwether search for one learner and kernel");
  auto* predict = app.add_subcommand("predict", "Holdout prediction for one learner and kernel");
  auto* stats = app.add_subcommand("stats", "Per-window moment table");
  for (auto* sub : {run, preprocess, stratify, search, predict, stats}) {
    add_common(sub, opt);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  try {
    if (run->parsed()) return cmd_run(opt);
    if (preprocess->parsed()) return cmd_preprocess(opt);
    if (stratify->parsed()) return cmd_stratify(opt);
    if (search->parsed()) return run_restricted(opt, false);
    if (predict->parsed()) return run_restricted(opt, true);
    if (stats->parsed()) return cmd_stats(opt);
    return kConfigError;
  } catch (const bw::ParamError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfigError;
  } catch (const bw::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
}
