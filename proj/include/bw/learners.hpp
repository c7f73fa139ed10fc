#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "bw/dataset.hpp"
#include "bw/weighting.hpp"

#include "json.hpp"

namespace bw {

enum class LearnerFamily { mlr, atlm, dnn };

std::string learner_name(LearnerFamily f);
LearnerFamily learner_from_name(const std::string& name);

/// Per-variable transform applied by ATLM on raw-scale values.
enum class AtlmTransform { identity, ln, sqrt_ };

struct TrainingSummary {
  size_t iterations = 0;
  double final_loss = 0.0;
  double condition = 0.0;  // design condition estimate (linear models)
  bool underdetermined_warning = false;
};

struct DnnConfig {
  std::vector<size_t> hidden_layers = {16, 8};
  size_t max_epochs = 200;
  double lm_lambda0 = 1e-3;
  double lm_lambda_factor = 10.0;
  uint64_t seed = 1;
  double weight_decay = 0.0;
};

/// Maps a record to the model's input vector: transformed ratio predictors
/// followed by one-hot categoricals (levels fixed at training time).
struct FeatureEncoder {
  std::vector<std::string> ratio_predictors;
  std::vector<std::string> categorical_names;
  std::map<std::string, std::vector<std::string>> levels;
  bool drop_first_level = false;

  size_t dim() const;
  std::vector<std::string> column_names() const;
  std::vector<double> encode(const ProjectRecord& rec) const;
};

/// A trained learner with enough transform metadata to map predictions
/// back to raw effort hours.
class FittedModel {
 public:
  LearnerFamily family = LearnerFamily::mlr;
  FeatureEncoder encoder;
  std::vector<TransformRecord> pipeline_transforms;

  // Linear families: coefficients over [intercept, encoded features].
  std::vector<double> coefficients;

  // ATLM's own raw-scale transforms.
  std::map<std::string, AtlmTransform> atlm_feature_transforms;
  AtlmTransform atlm_response_transform = AtlmTransform::identity;

  // Network: per layer row-major weights (out x in) and biases.
  std::vector<size_t> layer_sizes;  // input, hidden..., 1
  std::vector<std::vector<double>> net_weights;
  std::vector<std::vector<double>> net_biases;

  TrainingSummary training_summary;

  /// Predict raw effort hours from a record whose ratio features carry the
  /// pipeline-transformed values (the in-pipeline case).
  double predict_transformed(const ProjectRecord& rec) const;

  /// Predict raw effort hours from a raw-valued record: applies the stored
  /// pipeline transforms first.
  double predict(const ProjectRecord& raw_record) const;

  nlohmann::json to_json() const;
  static FittedModel from_json(const nlohmann::json& j);
  void save(const std::string& path) const;
  static FittedModel load(const std::string& path);

 private:
  double eval_network(const std::vector<double>& input) const;
  double model_output(const ProjectRecord& transformed_rec) const;
};

FittedModel fit_mlr(const WeightedWindow& ww);
FittedModel fit_atlm(const WeightedWindow& ww);
FittedModel fit_dnn(const WeightedWindow& ww, const DnnConfig& cfg);

FittedModel fit_learner(LearnerFamily family, const WeightedWindow& ww,
                        const DnnConfig& dnn_cfg);

namespace detail {
/// Weighted least squares via QR on sqrt(W) X. Throws NumericError naming
/// dependent columns on rank deficiency.
std::vector<double> solve_wls(const std::vector<std::vector<double>>& rows,
                              const std::vector<double>& y,
                              const std::vector<double>& weights,
                              const std::vector<std::string>& column_names,
                              double* condition = nullptr);

/// Feed-forward tanh network with linear output used by the LM trainer.
struct Network {
  std::vector<size_t> sizes;  // input, hidden..., 1
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> biases;

  size_t parameter_count() const;
  void init(uint64_t seed);
  double forward(const std::vector<double>& x) const;
  /// Output and d(output)/d(theta) for one sample.
  double forward_with_gradient(const std::vector<double>& x,
                               std::vector<double>& grad) const;
  std::vector<double> get_parameters() const;
  void set_parameters(const std::vector<double>& theta);
};
}  // namespace detail

}  // namespace bw
