#include "dualdi/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "dualdi/error.hpp"
#include "dualdi/rng.hpp"

namespace dualdi {

ClassifierModel::ClassifierModel(std::vector<std::string> names, int side, int ch)
    : input_side(side), channels(ch), class_names(std::move(names)) {
  weights.assign(static_cast<std::size_t>(num_classes()) * feature_dim(), 0.0);
  bias.assign(static_cast<std::size_t>(num_classes()), 0.0);
  input_mean.assign(feature_dim(), 0.0);
  input_std.assign(feature_dim(), 1.0);
}

void ClassifierModel::validate() const {
  if (input_side < 1 || channels < 1 || class_names.empty()) {
    throw Error(Errc::InvalidParams, "model needs classes, side >= 1 and channels >= 1");
  }
  if (weights.size() != static_cast<std::size_t>(num_classes()) * feature_dim() ||
      bias.size() != static_cast<std::size_t>(num_classes())) {
    throw Error(Errc::DimensionMismatch, "parameter sizes disagree with K x D");
  }
  if (input_mean.size() != feature_dim() || input_std.size() != feature_dim()) {
    throw Error(Errc::DimensionMismatch, "standardization vectors disagree with D");
  }
  for (std::size_t i = 0; i < feature_dim(); ++i) {
    if (!std::isfinite(input_mean[i]) || !(input_std[i] > 0.0) || !std::isfinite(input_std[i])) {
      throw Error(Errc::InvalidParams, "invalid input standardization");
    }
  }
  for (double w : weights) {
    if (!std::isfinite(w)) throw Error(Errc::InvalidParams, "non-finite weight");
  }
  for (double b : bias) {
    if (!std::isfinite(b)) throw Error(Errc::InvalidParams, "non-finite bias");
  }
}

void TrainConfig::validate() const {
  if (!(lr0 > 0.0) || batch_size < 1 || patience < 1 || max_epochs < 1 ||
      !(val_fraction >= 0.0 && val_fraction < 1.0)) {
    throw Error(Errc::InvalidParams, "invalid training configuration: " + echo());
  }
}

std::string TrainConfig::echo() const {
  std::ostringstream os;
  os.precision(17);
  os << "lr0=" << lr0 << " batch_size=" << batch_size << " max_epochs=" << max_epochs
     << " patience=" << patience << " beta1=" << adam_beta1 << " beta2=" << adam_beta2
     << " eps=" << adam_eps << " seed=" << seed << " val_fraction=" << val_fraction
     << " standardize=" << (standardize_inputs ? 1 : 0);
  return os.str();
}

std::vector<double> featurize(const ByteImage& img, int input_side) {
  if (img.width < 1 || img.height < 1 || (img.channels != 1 && img.channels != 3) ||
      img.data.size() != static_cast<std::size_t>(img.width) * img.height * img.channels) {
    throw Error(Errc::DimensionMismatch, "featurize needs a non-empty 1- or 3-channel raster");
  }
  if (input_side < 1) throw Error(Errc::DimensionMismatch, "input side must be >= 1");
  const Frame small = resize_bilinear(to_frame(img), input_side, input_side);
  std::vector<double> x(small.data.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = small.data[i] / 255.0;
  return x;
}

std::vector<double> standardize(const ClassifierModel& model, std::span<const double> x) {
  const std::size_t d = model.feature_dim();
  if (x.size() != d) {
    throw Error(Errc::DimensionMismatch, "feature length " + std::to_string(x.size()) +
                                             ", model expects " + std::to_string(d));
  }
  std::vector<double> out(d);
  for (std::size_t i = 0; i < d; ++i) out[i] = (x[i] - model.input_mean[i]) / model.input_std[i];
  return out;
}

namespace {

// Logits of an already standardized input.
std::vector<double> linear(const ClassifierModel& model, std::span<const double> x) {
  const std::size_t d = model.feature_dim();
  const int k = model.num_classes();
  std::vector<double> z(static_cast<std::size_t>(k));
  for (int c = 0; c < k; ++c) {
    const double* w = model.weights.data() + static_cast<std::size_t>(c) * d;
    double s = model.bias[c];
    for (std::size_t i = 0; i < d; ++i) s += w[i] * x[i];
    z[c] = s;
  }
  return z;
}

}  // namespace

std::vector<double> logits(const ClassifierModel& model, std::span<const double> x) {
  return linear(model, standardize(model, x));
}

namespace {

// In-place softmax; returns log-sum-exp of the input.
double softmax_inplace(std::vector<double>& z) {
  const double zmax = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double& v : z) {
    v = std::exp(v - zmax);
    sum += v;
  }
  for (double& v : z) v /= sum;
  return zmax + std::log(sum);
}

void check_label(const ClassifierModel& model, int label) {
  if (label < 0 || label >= model.num_classes()) {
    throw Error(Errc::IndexOutOfRange, "label " + std::to_string(label) + " outside model classes");
  }
}

}  // namespace

std::vector<double> forward(const ClassifierModel& model, std::span<const double> x) {
  auto z = logits(model, x);
  softmax_inplace(z);
  return z;
}

LossAndGrad loss_and_grad(const ClassifierModel& model, std::span<const BatchItem> batch) {
  if (batch.empty()) throw Error(Errc::EmptyBatch, "loss over an empty batch");
  const std::size_t d = model.feature_dim();
  const int k = model.num_classes();
  LossAndGrad out;
  out.d_weights.assign(model.weights.size(), 0.0);
  out.d_bias.assign(static_cast<std::size_t>(k), 0.0);
  const double inv_n = 1.0 / static_cast<double>(batch.size());
  for (const auto& item : batch) {
    check_label(model, item.label);
    const auto x = standardize(model, item.x);
    auto p = linear(model, x);
    const double z_label = p[item.label];
    const double lse = softmax_inplace(p);
    out.loss += (lse - z_label) * inv_n;
    p[item.label] -= 1.0;
    for (int c = 0; c < k; ++c) {
      const double g = p[c] * inv_n;
      out.d_bias[c] += g;
      double* dw = out.d_weights.data() + static_cast<std::size_t>(c) * d;
      for (std::size_t i = 0; i < d; ++i) dw[i] += g * x[i];
    }
  }
  return out;
}

double mean_loss(const ClassifierModel& model, std::span<const BatchItem> batch) {
  if (batch.empty()) throw Error(Errc::EmptyBatch, "loss over an empty batch");
  double loss = 0.0;
  for (const auto& item : batch) {
    check_label(model, item.label);
    auto z = logits(model, item.x);
    const double z_label = z[item.label];
    loss += softmax_inplace(z) - z_label;
  }
  return loss / static_cast<double>(batch.size());
}

double cosine_lr(int epoch, int max_epochs, double lr0) {
  if (max_epochs <= 0) return lr0;
  const int t = std::clamp(epoch, 0, max_epochs);
  if (t == max_epochs) return 0.0;
  return 0.5 * lr0 * (1.0 + std::cos(std::numbers::pi * t / max_epochs));
}

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               double lr, const AdamHyper& h) {
  if (params.size() != grads.size() || state.m.size() != params.size() ||
      state.v.size() != params.size()) {
    throw Error(Errc::DimensionMismatch, "Adam state, parameters and gradients differ in size");
  }
  ++state.step;
  const double bc1 = 1.0 - std::pow(h.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(h.beta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    state.m[i] = h.beta1 * state.m[i] + (1.0 - h.beta1) * g;
    state.v[i] = h.beta2 * state.v[i] + (1.0 - h.beta2) * g * g;
    const double m_hat = state.m[i] / bc1;
    const double v_hat = state.v[i] / bc2;
    params[i] -= lr * m_hat / (std::sqrt(v_hat) + h.eps);
  }
}

namespace {

std::vector<BatchItem> as_items(std::span<const TrainSample> samples,
                                const std::vector<std::size_t>& idx) {
  std::vector<BatchItem> items;
  items.reserve(idx.size());
  for (auto i : idx) items.push_back({samples[i].features, samples[i].label});
  return items;
}

}  // namespace

TrainResult train(std::span<const TrainSample> samples, std::vector<std::string> class_names,
                  int input_side, int channels, const TrainConfig& cfg) {
  cfg.validate();
  const int k = static_cast<int>(class_names.size());
  if (samples.empty() || samples.size() < static_cast<std::size_t>(k)) {
    throw Error(Errc::InsufficientData, std::to_string(samples.size()) + " samples for " +
                                            std::to_string(k) + " classes");
  }
  ClassifierModel model(std::move(class_names), input_side, channels);
  std::set<int> labels;
  for (const auto& s : samples) {
    if (s.label < 0 || s.label >= k) throw Error(Errc::IndexOutOfRange, "label outside classes");
    if (s.features.size() != model.feature_dim()) {
      throw Error(Errc::DimensionMismatch, "sample feature length " +
                                               std::to_string(s.features.size()) + ", expected " +
                                               std::to_string(model.feature_dim()));
    }
    labels.insert(s.label);
  }
  if (labels.size() < 2) throw Error(Errc::SingleClass, "training data spans a single class");

  // Group-level stratified validation split.
  std::vector<std::string> group_order;
  std::map<std::string, int> group_label;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const std::string g = samples[i].group.empty() ? "#" + std::to_string(i) : samples[i].group;
    if (group_label.emplace(g, samples[i].label).second) group_order.push_back(g);
  }
  std::set<std::string> val_groups;
  for (int c = 0; c < k; ++c) {
    std::vector<std::string> groups;
    for (const auto& g : group_order) {
      if (group_label[g] == c) groups.push_back(g);
    }
    if (groups.size() < 2) continue;
    Rng rng(derive_seed(cfg.seed, "val-split", model.class_names[c]));
    rng.shuffle(std::span<std::string>(groups));
    const auto want = static_cast<std::size_t>(std::llround(cfg.val_fraction * groups.size()));
    const std::size_t n_val = std::min(want, groups.size() - 1);
    for (std::size_t j = 0; j < n_val; ++j) val_groups.insert(groups[j]);
  }
  std::vector<std::size_t> fit_idx;
  std::vector<std::size_t> val_idx;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const std::string g = samples[i].group.empty() ? "#" + std::to_string(i) : samples[i].group;
    if (val_groups.count(g)) {
      if (samples[i].eval_eligible) val_idx.push_back(i);
    } else {
      fit_idx.push_back(i);
    }
  }
  std::set<int> fit_labels;
  for (auto i : fit_idx) fit_labels.insert(samples[i].label);
  if (fit_labels.size() < 2) throw Error(Errc::SingleClass, "fitting subset spans a single class");
  // Without held-out groups, early stopping watches the fitting loss.
  const auto val_items = as_items(samples, val_idx.empty() ? fit_idx : val_idx);

  TrainResult result;
  if (cfg.standardize_inputs) {
    const std::size_t d = model.feature_dim();
    std::vector<double> mean(d, 0.0);
    std::vector<double> var(d, 0.0);
    for (auto i : fit_idx) {
      for (std::size_t j = 0; j < d; ++j) mean[j] += samples[i].features[j];
    }
    for (double& m : mean) m /= static_cast<double>(fit_idx.size());
    for (auto i : fit_idx) {
      for (std::size_t j = 0; j < d; ++j) {
        const double dv = samples[i].features[j] - mean[j];
        var[j] += dv * dv;
      }
    }
    for (std::size_t j = 0; j < d; ++j) {
      // Floor keeps constant features (e.g. always mid-gray) finite.
      model.input_std[j] = std::sqrt(var[j] / static_cast<double>(fit_idx.size())) + 1e-3;
    }
    model.input_mean = std::move(mean);
  }

  result.fit_samples = fit_idx.size();
  result.val_samples = val_idx.size();
  result.model = model;
  AdamState w_state(model.weights.size());
  AdamState b_state(model.bias.size());
  const AdamHyper hyper{cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps};
  Rng batch_rng(derive_seed(cfg.seed, "batches"));
  double best_val = std::numeric_limits<double>::infinity();
  int stall = 0;
  std::vector<BatchItem> batch;
  for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    const double lr = cosine_lr(epoch, cfg.max_epochs, cfg.lr0);
    batch_rng.shuffle(std::span<std::size_t>(fit_idx));
    double train_loss = 0.0;
    for (std::size_t start = 0; start < fit_idx.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(fit_idx.size(), start + static_cast<std::size_t>(cfg.batch_size));
      batch.clear();
      for (std::size_t j = start; j < end; ++j) {
        batch.push_back({samples[fit_idx[j]].features, samples[fit_idx[j]].label});
      }
      const auto lg = loss_and_grad(model, batch);
      train_loss += lg.loss * static_cast<double>(end - start);
      adam_step(model.weights, lg.d_weights, w_state, lr, hyper);
      adam_step(model.bias, lg.d_bias, b_state, lr, hyper);
    }
    train_loss /= static_cast<double>(fit_idx.size());
    const double val_loss = mean_loss(model, val_items);
    result.history.push_back({epoch + 1, lr, train_loss, val_loss});
    if (val_loss < best_val) {
      best_val = val_loss;
      result.model = model;
      result.best_epoch = epoch + 1;
      stall = 0;
    } else if (++stall >= cfg.patience) {
      break;
    }
  }
  return result;
}

int predict(const ClassifierModel& model, std::span<const double> features) {
  const auto p = forward(model, features);
  return static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
}

int predict_image(const ClassifierModel& model, const ByteImage& img) {
  if (img.channels != model.channels) {
    throw Error(Errc::DimensionMismatch, "image has " + std::to_string(img.channels) +
                                             " channels, model expects " +
                                             std::to_string(model.channels));
  }
  return predict(model, featurize(img, model.input_side));
}

}  // namespace dualdi
