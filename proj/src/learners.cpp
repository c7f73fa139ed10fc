#include "bw/learners.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <set>

#include "bw/errors.hpp"
#include "bw/stats.hpp"

namespace bw {

std::string learner_name(LearnerFamily f) {
  switch (f) {
    case LearnerFamily::mlr: return "mlr";
    case LearnerFamily::atlm: return "atlm";
    case LearnerFamily::dnn: return "dnn";
  }
  return "?";
}

LearnerFamily learner_from_name(const std::string& name) {
  if (name == "mlr") return LearnerFamily::mlr;
  if (name == "atlm") return LearnerFamily::atlm;
  if (name == "dnn") return LearnerFamily::dnn;
  throw ParamError("unknown learner: '" + name + "'");
}

namespace {

std::string atlm_transform_name(AtlmTransform t) {
  switch (t) {
    case AtlmTransform::identity: return "identity";
    case AtlmTransform::ln: return "ln";
    case AtlmTransform::sqrt_: return "sqrt";
  }
  return "?";
}

AtlmTransform atlm_transform_from_name(const std::string& s) {
  if (s == "identity") return AtlmTransform::identity;
  if (s == "ln") return AtlmTransform::ln;
  if (s == "sqrt") return AtlmTransform::sqrt_;
  throw DataError("unknown ATLM transform: '" + s + "'");
}

double atlm_apply(AtlmTransform t, double x) {
  switch (t) {
    case AtlmTransform::identity: return x;
    case AtlmTransform::ln: return std::log(x);
    case AtlmTransform::sqrt_: return std::sqrt(x);
  }
  return x;
}

double atlm_invert(AtlmTransform t, double y) {
  switch (t) {
    case AtlmTransform::identity: return y;
    case AtlmTransform::ln: return std::exp(y);
    case AtlmTransform::sqrt_: return y * y;
  }
  return y;
}

double invert_pipeline(const std::vector<TransformRecord>& log,
                       const std::string& name, double transformed) {
  double v = transformed;
  for (auto it = log.rbegin(); it != log.rend(); ++it) {
    if (it->feature == name) v = it->invert(v);
  }
  return v;
}

double apply_pipeline(const std::vector<TransformRecord>& log,
                      const std::string& name, double raw) {
  double v = raw;
  for (const auto& t : log) {
    if (t.feature == name) v = t.apply(v);
  }
  return v;
}

FeatureEncoder make_encoder(const Window& w, bool drop_first) {
  FeatureEncoder enc;
  enc.drop_first_level = drop_first;
  for (const auto& f : w.feature_schema) {
    // pdr is effort/size, so it would leak the response into the design.
    if (f.kind == FeatureKind::ratio && f.name != "effort" && f.name != "pdr") {
      enc.ratio_predictors.push_back(f.name);
    } else if (f.kind == FeatureKind::categorical) {
      enc.categorical_names.push_back(f.name);
    }
  }
  for (const auto& c : enc.categorical_names) {
    std::set<std::string> lv;
    for (const auto& r : w.records) {
      auto it = r.categorical.find(c);
      if (it != r.categorical.end()) lv.insert(it->second);
    }
    enc.levels[c] = {lv.begin(), lv.end()};
  }
  return enc;
}

}  // namespace

size_t FeatureEncoder::dim() const {
  size_t d = ratio_predictors.size();
  for (const auto& c : categorical_names) {
    const auto& lv = levels.at(c);
    d += drop_first_level ? (lv.empty() ? 0 : lv.size() - 1) : lv.size();
  }
  return d;
}

std::vector<std::string> FeatureEncoder::column_names() const {
  std::vector<std::string> names = ratio_predictors;
  for (const auto& c : categorical_names) {
    const auto& lv = levels.at(c);
    for (size_t i = drop_first_level ? 1 : 0; i < lv.size(); ++i) {
      names.push_back(c + "=" + lv[i]);
    }
  }
  return names;
}

std::vector<double> FeatureEncoder::encode(const ProjectRecord& rec) const {
  std::vector<double> x;
  x.reserve(dim());
  for (const auto& f : ratio_predictors) x.push_back(rec.feature(f));
  for (const auto& c : categorical_names) {
    const auto& lv = levels.at(c);
    auto it = rec.categorical.find(c);
    const std::string val = it == rec.categorical.end() ? "" : it->second;
    for (size_t i = drop_first_level ? 1 : 0; i < lv.size(); ++i) {
      x.push_back(lv[i] == val ? 1.0 : 0.0);
    }
  }
  return x;
}

namespace detail {

std::vector<double> solve_wls(const std::vector<std::vector<double>>& rows,
                              const std::vector<double>& y,
                              const std::vector<double>& weights,
                              const std::vector<std::string>& column_names,
                              double* condition) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto p = static_cast<Eigen::Index>(rows.front().size());
  Eigen::MatrixXd X(n, p);
  Eigen::VectorXd Y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double sw = std::sqrt(weights[static_cast<size_t>(i)]);
    for (Eigen::Index j = 0; j < p; ++j) {
      X(i, j) = sw * rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
    }
    Y(i) = sw * y[static_cast<size_t>(i)];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  if (qr.rank() < p) {
    // Name the columns QR pivoted last; those close the rank gap.
    const auto perm = qr.colsPermutation().indices();
    std::string cols;
    for (Eigen::Index j = qr.rank(); j < p; ++j) {
      if (!cols.empty()) cols += ", ";
      const auto orig = static_cast<size_t>(perm(j));
      cols += orig < column_names.size() ? column_names[orig]
                                         : "col" + std::to_string(orig);
    }
    throw NumericError("rank-deficient design; dependent columns: " + cols);
  }
  if (condition) {
    const auto& R = qr.matrixR();
    double dmax = 0.0, dmin = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < p; ++j) {
      const double d = std::fabs(R(j, j));
      dmax = std::max(dmax, d);
      dmin = std::min(dmin, d);
    }
    *condition = dmin > 0.0 ? dmax / dmin : std::numeric_limits<double>::infinity();
  }
  const Eigen::VectorXd beta = qr.solve(Y);
  return {beta.data(), beta.data() + p};
}

size_t Network::parameter_count() const {
  size_t m = 0;
  for (size_t l = 1; l < sizes.size(); ++l) m += sizes[l] * sizes[l - 1] + sizes[l];
  return m;
}

void Network::init(uint64_t seed) {
  std::mt19937_64 rng(seed);
  weights.clear();
  biases.clear();
  for (size_t l = 1; l < sizes.size(); ++l) {
    const size_t fan_in = sizes[l - 1];
    const size_t fan_out = sizes[l];
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-bound, bound);
    std::vector<double> w(fan_out * fan_in);
    for (double& v : w) v = dist(rng);
    weights.push_back(std::move(w));
    biases.push_back(std::vector<double>(fan_out, 0.0));
  }
}

double Network::forward(const std::vector<double>& x) const {
  std::vector<double> a = x;
  for (size_t l = 0; l < weights.size(); ++l) {
    const size_t out = sizes[l + 1];
    const size_t in = sizes[l];
    std::vector<double> z(out);
    for (size_t i = 0; i < out; ++i) {
      double s = biases[l][i];
      for (size_t j = 0; j < in; ++j) s += weights[l][i * in + j] * a[j];
      z[i] = s;
    }
    const bool last = l + 1 == weights.size();
    if (!last) {
      for (double& v : z) v = std::tanh(v);
    }
    a = std::move(z);
  }
  return a[0];
}

double Network::forward_with_gradient(const std::vector<double>& x,
                                      std::vector<double>& grad) const {
  const size_t layers = weights.size();
  std::vector<std::vector<double>> acts(layers + 1);
  acts[0] = x;
  for (size_t l = 0; l < layers; ++l) {
    const size_t out = sizes[l + 1];
    const size_t in = sizes[l];
    std::vector<double> z(out);
    for (size_t i = 0; i < out; ++i) {
      double s = biases[l][i];
      for (size_t j = 0; j < in; ++j) s += weights[l][i * in + j] * acts[l][j];
      z[i] = s;
    }
    if (l + 1 != layers) {
      for (double& v : z) v = std::tanh(v);
    }
    acts[l + 1] = std::move(z);
  }
  const double y = acts[layers][0];

  grad.assign(parameter_count(), 0.0);
  // delta = d(output)/d(pre-activation of layer l).
  std::vector<double> delta{1.0};
  // Offsets of each layer's parameters in theta.
  std::vector<size_t> offset(layers);
  size_t off = 0;
  for (size_t l = 0; l < layers; ++l) {
    offset[l] = off;
    off += sizes[l + 1] * sizes[l] + sizes[l + 1];
  }
  for (size_t li = layers; li-- > 0;) {
    const size_t out = sizes[li + 1];
    const size_t in = sizes[li];
    for (size_t i = 0; i < out; ++i) {
      const size_t woff = offset[li] + i * in;
      for (size_t j = 0; j < in; ++j) grad[woff + j] = delta[i] * acts[li][j];
      grad[offset[li] + out * in + i] = delta[i];
    }
    if (li == 0) break;
    std::vector<double> prev(in, 0.0);
    for (size_t j = 0; j < in; ++j) {
      double s = 0.0;
      for (size_t i = 0; i < out; ++i) s += weights[li][i * in + j] * delta[i];
      const double a = acts[li][j];  // tanh activation of layer li
      prev[j] = s * (1.0 - a * a);
    }
    delta = std::move(prev);
  }
  return y;
}

std::vector<double> Network::get_parameters() const {
  std::vector<double> theta;
  theta.reserve(parameter_count());
  for (size_t l = 0; l < weights.size(); ++l) {
    theta.insert(theta.end(), weights[l].begin(), weights[l].end());
    theta.insert(theta.end(), biases[l].begin(), biases[l].end());
  }
  return theta;
}

void Network::set_parameters(const std::vector<double>& theta) {
  size_t off = 0;
  for (size_t l = 0; l < weights.size(); ++l) {
    std::copy(theta.begin() + static_cast<long>(off),
              theta.begin() + static_cast<long>(off + weights[l].size()),
              weights[l].begin());
    off += weights[l].size();
    std::copy(theta.begin() + static_cast<long>(off),
              theta.begin() + static_cast<long>(off + biases[l].size()),
              biases[l].begin());
    off += biases[l].size();
  }
}

}  // namespace detail

double FittedModel::eval_network(const std::vector<double>& input) const {
  detail::Network net;
  net.sizes = layer_sizes;
  net.weights = net_weights;
  net.biases = net_biases;
  return net.forward(input);
}

double FittedModel::model_output(const ProjectRecord& rec) const {
  if (family == LearnerFamily::atlm) {
    // ATLM works on its own raw-scale transforms.
    std::vector<double> x{1.0};
    for (const auto& f : encoder.ratio_predictors) {
      const double raw = invert_pipeline(pipeline_transforms, f, rec.feature(f));
      x.push_back(atlm_apply(atlm_feature_transforms.at(f), raw));
    }
    ProjectRecord stub = rec;
    stub.ratio.clear();  // categorical part only
    FeatureEncoder cat_enc = encoder;
    cat_enc.ratio_predictors.clear();
    for (double v : cat_enc.encode(stub)) x.push_back(v);
    double s = 0.0;
    for (size_t j = 0; j < x.size(); ++j) s += coefficients[j] * x[j];
    return s;
  }
  const auto enc = encoder.encode(rec);
  if (family == LearnerFamily::mlr) {
    double s = coefficients[0];
    for (size_t j = 0; j < enc.size(); ++j) s += coefficients[j + 1] * enc[j];
    return s;
  }
  return eval_network(enc);
}

double FittedModel::predict_transformed(const ProjectRecord& rec) const {
  for (const auto& f : encoder.ratio_predictors) {
    if (!rec.has_feature(f)) {
      throw DataError("predict: record " + rec.id + " missing feature '" + f + "'");
    }
  }
  const double out = model_output(rec);
  if (family == LearnerFamily::atlm) {
    return atlm_invert(atlm_response_transform, out);
  }
  return invert_pipeline(pipeline_transforms, "effort", out);
}

double FittedModel::predict(const ProjectRecord& raw_record) const {
  ProjectRecord rec = raw_record;
  for (auto& [name, v] : rec.ratio) v = apply_pipeline(pipeline_transforms, name, v);
  return predict_transformed(rec);
}

namespace {

struct LinearDesign {
  std::vector<std::vector<double>> rows;  // with leading intercept column
  std::vector<double> y;
  std::vector<std::string> names;
};

LinearDesign build_design(const WeightedWindow& ww, const FeatureEncoder& enc) {
  LinearDesign d;
  d.names.push_back("(intercept)");
  for (const auto& c : enc.column_names()) d.names.push_back(c);
  for (const auto& r : ww.window.records) {
    std::vector<double> row{1.0};
    for (double v : enc.encode(r)) row.push_back(v);
    d.rows.push_back(std::move(row));
    d.y.push_back(r.feature("effort"));
  }
  return d;
}

void check_fit_preconditions(const WeightedWindow& ww, size_t p) {
  if (ww.window.records.size() <= p + 1) {
    throw DataError("fit: need n > p + 1 observations");
  }
  for (double w : ww.weights) {
    if (!(w > 0.0)) throw ParamError("fit: observation weights must be positive");
  }
}

}  // namespace

FittedModel fit_mlr(const WeightedWindow& ww) {
  FittedModel m;
  m.family = LearnerFamily::mlr;
  m.encoder = make_encoder(ww.window, /*drop_first=*/true);
  m.pipeline_transforms = ww.window.transform_log;
  check_fit_preconditions(ww, m.encoder.dim());
  auto d = build_design(ww, m.encoder);
  double cond = 0.0;
  m.coefficients = detail::solve_wls(d.rows, d.y, ww.weights, d.names, &cond);
  m.training_summary.condition = cond;
  m.training_summary.iterations = 1;
  double loss = 0.0;
  for (size_t i = 0; i < d.rows.size(); ++i) {
    double fit = 0.0;
    for (size_t j = 0; j < d.rows[i].size(); ++j) fit += m.coefficients[j] * d.rows[i][j];
    loss += ww.weights[i] * (d.y[i] - fit) * (d.y[i] - fit);
  }
  m.training_summary.final_loss = loss;
  return m;
}

FittedModel fit_atlm(const WeightedWindow& ww) {
  FittedModel m;
  m.family = LearnerFamily::atlm;
  m.encoder = make_encoder(ww.window, /*drop_first=*/true);
  m.pipeline_transforms = ww.window.transform_log;
  check_fit_preconditions(ww, m.encoder.dim());

  const auto& records = ww.window.records;
  auto choose = [&](const std::string& name) {
    std::vector<double> raw;
    raw.reserve(records.size());
    for (const auto& r : records) {
      raw.push_back(invert_pipeline(m.pipeline_transforms, name, r.feature(name)));
    }
    AtlmTransform best = AtlmTransform::identity;
    double best_skew = std::numeric_limits<double>::infinity();
    for (AtlmTransform t :
         {AtlmTransform::identity, AtlmTransform::ln, AtlmTransform::sqrt_}) {
      bool ok = true;
      std::vector<double> tv;
      tv.reserve(raw.size());
      for (double v : raw) {
        if (t == AtlmTransform::ln && v <= 0.0) { ok = false; break; }
        if (t == AtlmTransform::sqrt_ && v < 0.0) { ok = false; break; }
        tv.push_back(atlm_apply(t, v));
      }
      if (!ok) continue;
      double sk;
      try {
        sk = std::fabs(moments(tv).skewness);
      } catch (const NumericError&) {
        continue;  // zero variance under this transform
      }
      if (sk < best_skew) {
        best_skew = sk;
        best = t;
      }
    }
    return best;
  };

  for (const auto& f : m.encoder.ratio_predictors) {
    m.atlm_feature_transforms[f] = choose(f);
  }
  m.atlm_response_transform = choose("effort");

  // Design in ATLM's own transformed raw space.
  std::vector<std::vector<double>> rows;
  std::vector<double> y;
  std::vector<std::string> names{"(intercept)"};
  for (const auto& c : m.encoder.column_names()) names.push_back(c);
  FeatureEncoder cat_enc = m.encoder;
  cat_enc.ratio_predictors.clear();
  for (const auto& r : records) {
    std::vector<double> row{1.0};
    for (const auto& f : m.encoder.ratio_predictors) {
      const double raw = invert_pipeline(m.pipeline_transforms, f, r.feature(f));
      row.push_back(atlm_apply(m.atlm_feature_transforms[f], raw));
    }
    for (double v : cat_enc.encode(r)) row.push_back(v);
    rows.push_back(std::move(row));
    const double raw_y = invert_pipeline(m.pipeline_transforms, "effort", r.feature("effort"));
    y.push_back(atlm_apply(m.atlm_response_transform, raw_y));
  }
  double cond = 0.0;
  m.coefficients = detail::solve_wls(rows, y, ww.weights, names, &cond);
  m.training_summary.condition = cond;
  m.training_summary.iterations = 1;
  return m;
}

FittedModel fit_dnn(const WeightedWindow& ww, const DnnConfig& cfg) {
  if (cfg.hidden_layers.empty()) throw ParamError("fit_dnn: need at least one hidden layer");
  for (size_t h : cfg.hidden_layers) {
    if (h < 1) throw ParamError("fit_dnn: layer sizes must be >= 1");
  }
  FittedModel m;
  m.family = LearnerFamily::dnn;
  m.encoder = make_encoder(ww.window, /*drop_first=*/false);
  m.pipeline_transforms = ww.window.transform_log;

  const auto& records = ww.window.records;
  const size_t n = records.size();
  if (n == 0) throw DataError("fit_dnn: empty window");

  detail::Network net;
  net.sizes.push_back(m.encoder.dim());
  for (size_t h : cfg.hidden_layers) net.sizes.push_back(h);
  net.sizes.push_back(1);
  net.init(cfg.seed);
  const size_t np = net.parameter_count();
  m.training_summary.underdetermined_warning = n < np / 2;

  std::vector<std::vector<double>> X(n);
  std::vector<double> y(n), sw(n);
  for (size_t i = 0; i < n; ++i) {
    X[i] = m.encoder.encode(records[i]);
    y[i] = records[i].feature("effort");
    sw[i] = std::sqrt(ww.weights[i]);
  }

  auto loss_at = [&](const detail::Network& nn, const std::vector<double>& theta) {
    double l = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const double r = sw[i] * (y[i] - nn.forward(X[i]));
      l += r * r;
    }
    for (double t : theta) l += cfg.weight_decay * t * t;
    return l;
  };

  std::vector<double> theta = net.get_parameters();
  double lambda = cfg.lm_lambda0;
  double loss = loss_at(net, theta);
  if (!std::isfinite(loss)) throw NumericError("fit_dnn: non-finite initial loss");

  Eigen::MatrixXd J(n, np);
  Eigen::VectorXd r(n);
  std::vector<double> grad_buf;
  size_t epoch = 0;
  for (; epoch < cfg.max_epochs; ++epoch) {
    for (size_t i = 0; i < n; ++i) {
      const double out = net.forward_with_gradient(X[i], grad_buf);
      r(static_cast<Eigen::Index>(i)) = sw[i] * (y[i] - out);
      for (size_t j = 0; j < np; ++j) {
        J(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            sw[i] * grad_buf[j];
      }
    }
    Eigen::VectorXd g = J.transpose() * r;
    for (size_t j = 0; j < np; ++j) {
      g(static_cast<Eigen::Index>(j)) -= cfg.weight_decay * theta[j];
    }
    if (g.lpNorm<Eigen::Infinity>() < 1e-8) break;
    const Eigen::MatrixXd JtJ = J.transpose() * J;

    bool accepted = false;
    while (lambda < 1e12) {
      Eigen::MatrixXd A = JtJ;
      for (size_t j = 0; j < np; ++j) {
        A(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) +=
            lambda + cfg.weight_decay;
      }
      const Eigen::VectorXd delta = A.ldlt().solve(g);
      std::vector<double> cand = theta;
      for (size_t j = 0; j < np; ++j) cand[j] += delta(static_cast<Eigen::Index>(j));
      detail::Network trial = net;
      trial.set_parameters(cand);
      const double cand_loss = loss_at(trial, cand);
      if (std::isfinite(cand_loss) && cand_loss < loss) {
        theta = std::move(cand);
        net.set_parameters(theta);
        loss = cand_loss;
        lambda = std::max(lambda / cfg.lm_lambda_factor, 1e-12);
        accepted = true;
        break;
      }
      lambda *= cfg.lm_lambda_factor;
    }
    if (!accepted) break;  // lambda overflow
  }
  if (!std::isfinite(loss)) {
    throw NumericError("fit_dnn: diverged (non-finite loss after " +
                       std::to_string(epoch) + " epochs)");
  }

  m.layer_sizes = net.sizes;
  m.net_weights = net.weights;
  m.net_biases = net.biases;
  m.training_summary.iterations = epoch;
  m.training_summary.final_loss = loss;
  return m;
}

FittedModel fit_learner(LearnerFamily family, const WeightedWindow& ww,
                        const DnnConfig& dnn_cfg) {
  switch (family) {
    case LearnerFamily::mlr: return fit_mlr(ww);
    case LearnerFamily::atlm: return fit_atlm(ww);
    case LearnerFamily::dnn: return fit_dnn(ww, dnn_cfg);
  }
  throw ParamError("unknown learner family");
}

nlohmann::json FittedModel::to_json() const {
  nlohmann::json j;
  j["family"] = learner_name(family);
  j["encoder"] = {{"ratio_predictors", encoder.ratio_predictors},
                  {"categorical_names", encoder.categorical_names},
                  {"levels", encoder.levels},
                  {"drop_first_level", encoder.drop_first_level}};
  nlohmann::json tl = nlohmann::json::array();
  for (const auto& t : pipeline_transforms) {
    tl.push_back({{"kind", t.kind == TransformRecord::Kind::log_minmax ? "log_minmax" : "zscore"},
                  {"feature", t.feature},
                  {"a", t.a},
                  {"b", t.b},
                  {"eps", t.eps}});
  }
  j["pipeline_transforms"] = tl;
  j["coefficients"] = coefficients;
  nlohmann::json at = nlohmann::json::object();
  for (const auto& [k, v] : atlm_feature_transforms) at[k] = atlm_transform_name(v);
  j["atlm_feature_transforms"] = at;
  j["atlm_response_transform"] = atlm_transform_name(atlm_response_transform);
  j["layer_sizes"] = layer_sizes;
  j["net_weights"] = net_weights;
  j["net_biases"] = net_biases;
  j["training_summary"] = {{"iterations", training_summary.iterations},
                           {"final_loss", training_summary.final_loss},
                           {"condition", training_summary.condition}};
  return j;
}

FittedModel FittedModel::from_json(const nlohmann::json& j) {
  FittedModel m;
  m.family = learner_from_name(j.at("family").get<std::string>());
  const auto& e = j.at("encoder");
  m.encoder.ratio_predictors = e.at("ratio_predictors").get<std::vector<std::string>>();
  m.encoder.categorical_names = e.at("categorical_names").get<std::vector<std::string>>();
  m.encoder.levels = e.at("levels").get<std::map<std::string, std::vector<std::string>>>();
  m.encoder.drop_first_level = e.at("drop_first_level").get<bool>();
  for (const auto& t : j.at("pipeline_transforms")) {
    TransformRecord tr;
    tr.kind = t.at("kind").get<std::string>() == "log_minmax"
                  ? TransformRecord::Kind::log_minmax
                  : TransformRecord::Kind::zscore;
    tr.feature = t.at("feature").get<std::string>();
    tr.a = t.at("a").get<double>();
    tr.b = t.at("b").get<double>();
    tr.eps = t.at("eps").get<double>();
    m.pipeline_transforms.push_back(tr);
  }
  m.coefficients = j.at("coefficients").get<std::vector<double>>();
  for (const auto& [k, v] : j.at("atlm_feature_transforms").items()) {
    m.atlm_feature_transforms[k] = atlm_transform_from_name(v.get<std::string>());
  }
  m.atlm_response_transform =
      atlm_transform_from_name(j.at("atlm_response_transform").get<std::string>());
  m.layer_sizes = j.at("layer_sizes").get<std::vector<size_t>>();
  m.net_weights = j.at("net_weights").get<std::vector<std::vector<double>>>();
  m.net_biases = j.at("net_biases").get<std::vector<std::vector<double>>>();
  return m;
}

void FittedModel::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write model file: " + path);
  out << to_json().dump(2) << '\n';
}

FittedModel FittedModel::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model file: " + path);
  nlohmann::json j;
  in >> j;
  return from_json(j);
}

}  // namespace bw
