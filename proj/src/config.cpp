#include "bw/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "bw/errors.hpp"

namespace bw {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ParamError("expected boolean, got '" + v + "'");
}

double parse_num(const std::string& v) {
  try {
    size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ParamError("expected number, got '" + v + "'");
  }
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += ",";
    out += s;
  }
  return out;
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (key == "input") input_path = v;
  else if (key == "output_dir") output_dir = v;
  else if (key == "col.completion_date") columns.completion_date = v;
  else if (key == "col.size") columns.size = v;
  else if (key == "col.effort") columns.effort = v;
  else if (key == "col.elapsed_time") columns.elapsed_time = v;
  else if (key == "col.id") columns.id = v;
  else if (key == "col.start_date") columns.start_date = v;
  else if (key == "col.quality_rating") columns.quality_rating = v;
  else if (key == "col.fp_version") columns.fp_version = v;
  else if (key == "col.web") columns.web_project = v;
  else if (key == "col.categoricals") columns.categoricals = split_list(v);
  else if (key == "derive_pdr") columns.derive_pdr = parse_bool(v);
  else if (key == "filter.unknown_age") filters.drop_unknown_age = parse_bool(v);
  else if (key == "filter.unknown_effort") filters.drop_unknown_effort = parse_bool(v);
  else if (key == "filter.unknown_size") filters.drop_unknown_size = parse_bool(v);
  else if (key == "filter.low_quality") filters.drop_low_quality = parse_bool(v);
  else if (key == "filter.accepted_ratings") filters.accepted_ratings = split_list(v);
  else if (key == "filter.outdated_fp") filters.drop_outdated_fp = parse_bool(v);
  else if (key == "filter.min_fp_version") filters.min_fp_version = parse_num(v);
  else if (key == "filter.web") filters.drop_web = parse_bool(v);
  else if (key == "filter.missing_values") filters.drop_missing_values = parse_bool(v);
  else if (key == "transform") {
    if (v == "log") transform = TransformChoice::log;
    else if (v == "zscore") transform = TransformChoice::zscore;
    else throw ParamError("transform must be log or zscore, got '" + v + "'");
  } else if (key == "log_eps") log_eps = parse_num(v);
  else if (key == "cooks_threshold") cooks_threshold = parse_num(v);
  else if (key == "kmin") kmin = static_cast<size_t>(parse_num(v));
  else if (key == "kmax") kmax = static_cast<size_t>(parse_num(v));
  else if (key == "seed") seed = static_cast<uint64_t>(parse_num(v));
  else if (key == "markov.bin_width") markov_bin_width = parse_num(v);
  else if (key == "markov.eps") markov_eps = parse_num(v);
  else if (key == "markov.max_squarings") max_squarings = static_cast<size_t>(parse_num(v));
  else if (key == "markov.age_source") {
    if (v == "elapsed_time") age_source = AgeSource::elapsed_time;
    else if (v == "completion_offset") age_source = AgeSource::completion_offset;
    else throw ParamError("markov.age_source must be elapsed_time or completion_offset");
  } else if (key == "kernels") {
    kernels.clear();
    for (const auto& k : split_list(v)) kernels.push_back(kernel_from_name(k));
  } else if (key == "learners") {
    learners.clear();
    for (const auto& l : split_list(v)) learners.push_back(learner_from_name(l));
  } else if (key == "dnn.hidden") {
    dnn.hidden_layers.clear();
    for (const auto& h : split_list(v)) {
      dnn.hidden_layers.push_back(static_cast<size_t>(parse_num(h)));
    }
  } else if (key == "dnn.max_epochs") dnn.max_epochs = static_cast<size_t>(parse_num(v));
  else if (key == "dnn.lambda0") dnn.lm_lambda0 = parse_num(v);
  else if (key == "dnn.lambda_factor") dnn.lm_lambda_factor = parse_num(v);
  else if (key == "dnn.weight_decay") dnn.weight_decay = parse_num(v);
  else if (key == "search.metric") search_metric = metric_from_name(v);
  else if (key == "search.majority") majority_rule = parse_num(v);
  else if (key == "search.max_adjustments") max_adjustments = static_cast<size_t>(parse_num(v));
  else if (key == "search.adjust_step") adjust_step = static_cast<size_t>(parse_num(v));
  else if (key == "holdout") {
    if (v == "latest") {
      holdout = HoldoutPolicy::latest;
      holdout_id.clear();
    } else if (v.rfind("id:", 0) == 0) {
      holdout = HoldoutPolicy::by_id;
      holdout_id = v.substr(3);
    } else {
      throw ParamError("holdout must be 'latest' or 'id:<id>'");
    }
  } else if (key == "alpha") alpha = parse_num(v);
  else throw ParamError("unknown config key '" + key + "'");
}

std::string RunConfig::echo() const {
  std::ostringstream o;
  o << "input = " << input_path << "\n";
  o << "output_dir = " << output_dir << "\n";
  o << "col.completion_date = " << columns.completion_date << "\n";
  o << "col.size = " << columns.size << "\n";
  o << "col.effort = " << columns.effort << "\n";
  o << "col.elapsed_time = " << columns.elapsed_time << "\n";
  o << "col.id = " << columns.id << "\n";
  o << "col.start_date = " << columns.start_date << "\n";
  o << "col.quality_rating = " << columns.quality_rating << "\n";
  o << "col.fp_version = " << columns.fp_version << "\n";
  o << "col.web = " << columns.web_project << "\n";
  o << "col.categoricals = " << join(columns.categoricals) << "\n";
  o << "derive_pdr = " << (columns.derive_pdr ? "true" : "false") << "\n";
  o << "filter.unknown_age = " << (filters.drop_unknown_age ? "true" : "false") << "\n";
  o << "filter.unknown_effort = " << (filters.drop_unknown_effort ? "true" : "false") << "\n";
  o << "filter.unknown_size = " << (filters.drop_unknown_size ? "true" : "false") << "\n";
  o << "filter.low_quality = " << (filters.drop_low_quality ? "true" : "false") << "\n";
  o << "filter.accepted_ratings = " << join(filters.accepted_ratings) << "\n";
  o << "filter.outdated_fp = " << (filters.drop_outdated_fp ? "true" : "false") << "\n";
  o << "filter.min_fp_version = " << fmt(filters.min_fp_version) << "\n";
  o << "filter.web = " << (filters.drop_web ? "true" : "false") << "\n";
  o << "filter.missing_values = " << (filters.drop_missing_values ? "true" : "false") << "\n";
  o << "transform = " << (transform == TransformChoice::log ? "log" : "zscore") << "\n";
  o << "log_eps = " << fmt(log_eps) << "\n";
  o << "cooks_threshold = " << fmt(cooks_threshold) << "\n";
  o << "kmin = " << kmin << "\n";
  o << "kmax = " << kmax << "\n";
  o << "seed = " << seed << "\n";
  o << "markov.bin_width = " << fmt(markov_bin_width) << "\n";
  o << "markov.eps = " << fmt(markov_eps) << "\n";
  o << "markov.max_squarings = " << max_squarings << "\n";
  o << "markov.age_source = "
    << (age_source == AgeSource::elapsed_time ? "elapsed_time" : "completion_offset")
    << "\n";
  {
    std::vector<std::string> ks;
    for (auto k : kernels) ks.push_back(kernel_name(k));
    o << "kernels = " << join(ks) << "\n";
  }
  {
    std::vector<std::string> ls;
    for (auto l : learners) ls.push_back(learner_name(l));
    o << "learners = " << join(ls) << "\n";
  }
  {
    std::vector<std::string> hs;
    for (auto h : dnn.hidden_layers) hs.push_back(std::to_string(h));
    o << "dnn.hidden = " << join(hs) << "\n";
  }
  o << "dnn.max_epochs = " << dnn.max_epochs << "\n";
  o << "dnn.lambda0 = " << fmt(dnn.lm_lambda0) << "\n";
  o << "dnn.lambda_factor = " << fmt(dnn.lm_lambda_factor) << "\n";
  o << "dnn.weight_decay = " << fmt(dnn.weight_decay) << "\n";
  o << "search.metric = " << metric_name(search_metric) << "\n";
  o << "search.majority = " << fmt(majority_rule) << "\n";
  o << "search.max_adjustments = " << max_adjustments << "\n";
  o << "search.adjust_step = " << adjust_step << "\n";
  o << "holdout = "
    << (holdout == HoldoutPolicy::latest ? std::string("latest") : "id:" + holdout_id)
    << "\n";
  o << "alpha = " << fmt(alpha) << "\n";
  return o.str();
}

SearchConfig RunConfig::search_config(LearnerFamily learner, Kernel kernel) const {
  SearchConfig sc;
  sc.learner = learner;
  sc.kernel = kernel;
  sc.metric = search_metric;
  sc.majority_rule = majority_rule;
  sc.max_adjustments = max_adjustments;
  sc.adjust_step = adjust_step;
  sc.seed = seed;
  sc.dnn = dnn;
  sc.dnn.seed = seed;
  sc.markov_bin_width = markov_bin_width;
  sc.age_source = age_source;
  sc.markov_eps = markov_eps;
  sc.max_squarings = max_squarings;
  return sc;
}

RunConfig parse_config_text(const std::string& text, const std::string& origin,
                            RunConfig base) {
  RunConfig cfg = std::move(base);
  std::istringstream in(text);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParamError(origin + ":" + std::to_string(lineno) +
                       ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    try {
      cfg.set(key, line.substr(eq + 1));
    } catch (const ParamError& e) {
      throw ParamError(origin + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ParamError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path, std::move(base));
}

}  // namespace bw
