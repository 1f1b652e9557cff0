#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dualdi/raster.hpp"

namespace dualdi {

/// Multinomial logistic regression over downsampled, [0, 1]-scaled images.
///
/// Inputs pass through a fixed per-feature standardization
/// (x - input_mean) / input_std before the linear layer. A fresh model has
/// mean 0 and std 1, i.e. no standardization; train() fits both on the
/// fitting subset.
struct ClassifierModel {
  int input_side = 32;
  int channels = 1;
  std::vector<std::string> class_names;
  /// K x D, row-major.
  std::vector<double> weights;
  std::vector<double> bias;
  std::vector<double> input_mean;
  std::vector<double> input_std;

  ClassifierModel() = default;
  ClassifierModel(std::vector<std::string> names, int side, int channels);

  int num_classes() const noexcept { return static_cast<int>(class_names.size()); }
  std::size_t feature_dim() const noexcept {
    return static_cast<std::size_t>(input_side) * input_side * channels;
  }
  /// Throws DimensionMismatch / InvalidParams.
  void validate() const;
};

struct TrainConfig {
  double lr0 = 1e-4;
  int batch_size = 25;
  int max_epochs = 50;
  int patience = 5;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  std::uint64_t seed = 42;
  double val_fraction = 0.2;
  /// Fit per-feature mean/std on the fitting subset before training.
  bool standardize_inputs = true;

  void validate() const;
  /// Compact key=value echo for reports and checkpoints.
  std::string echo() const;
};

/// Bilinear downsample to side x side, scale by 1/255, flatten interleaved.
std::vector<double> featurize(const ByteImage& img, int input_side);

/// softmax(W x' + b), x' the standardized input, with the max logit
/// subtracted before exponentiation.
std::vector<double> forward(const ClassifierModel& model, std::span<const double> x);
std::vector<double> logits(const ClassifierModel& model, std::span<const double> x);
std::vector<double> standardize(const ClassifierModel& model, std::span<const double> x);

struct BatchItem {
  std::span<const double> x;
  int label = 0;
};

struct LossAndGrad {
  double loss = 0.0;
  std::vector<double> d_weights;
  std::vector<double> d_bias;
};

/// Mean cross-entropy over the batch and its analytic gradient.
/// Throws EmptyBatch / DimensionMismatch / IndexOutOfRange.
LossAndGrad loss_and_grad(const ClassifierModel& model, std::span<const BatchItem> batch);
double mean_loss(const ClassifierModel& model, std::span<const BatchItem> batch);

/// 0.5 * lr0 * (1 + cos(pi * epoch / max_epochs)).
double cosine_lr(int epoch, int max_epochs, double lr0);

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::int64_t step = 0;

  explicit AdamState(std::size_t n = 0) : m(n, 0.0), v(n, 0.0) {}
};

struct AdamHyper {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// One bias-corrected Adam update of `params` in place.
void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               double lr, const AdamHyper& hyper = {});

struct TrainSample {
  std::vector<double> features;
  int label = 0;
  /// Samples sharing a group (the source sequence) are never split between
  /// the fitting and validation subsets.
  std::string group;
  /// Only eval-eligible samples (unaugmented full images) are scored for
  /// validation loss.
  bool eval_eligible = true;
};

struct EpochRecord {
  int epoch = 0;
  double lr = 0.0;
  double train_loss = 0.0;
  double val_loss = 0.0;
};

struct TrainResult {
  ClassifierModel model;
  std::vector<EpochRecord> history;
  int best_epoch = 0;
  std::size_t fit_samples = 0;
  std::size_t val_samples = 0;
};

/// Seeded group-stratified validation split, per-epoch shuffled mini-batch
/// Adam with a per-epoch cosine schedule, and early stopping on validation
/// loss. Returns the parameters of the best-validation epoch.
/// Throws InsufficientData / SingleClass.
TrainResult train(std::span<const TrainSample> samples, std::vector<std::string> class_names,
                  int input_side, int channels, const TrainConfig& cfg);

/// argmax of the logits, lowest index on ties.
int predict(const ClassifierModel& model, std::span<const double> features);
int predict_image(const ClassifierModel& model, const ByteImage& img);

}  // namespace dualdi
