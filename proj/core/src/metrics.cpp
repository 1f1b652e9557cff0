#include "dualdi/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dualdi/error.hpp"

namespace dualdi {

ConfusionMatrix::ConfusionMatrix(int num_classes)
    : k_(num_classes), counts_(static_cast<std::size_t>(num_classes) * num_classes, 0) {
  if (num_classes < 0) throw Error(Errc::InvalidArgument, "negative class count");
}

ConfusionMatrix::ConfusionMatrix(int num_classes, std::vector<std::int64_t> row_major)
    : k_(num_classes), counts_(std::move(row_major)) {
  if (num_classes < 0 || counts_.size() != static_cast<std::size_t>(num_classes) * num_classes) {
    throw Error(Errc::DimensionMismatch, "confusion matrix needs K*K entries");
  }
  for (auto c : counts_) {
    if (c < 0) throw Error(Errc::InvalidArgument, "negative confusion count");
  }
}

std::size_t ConfusionMatrix::index(int truth, int pred) const {
  if (truth < 0 || truth >= k_ || pred < 0 || pred >= k_) {
    throw Error(Errc::IndexOutOfRange, "class index outside [0, " + std::to_string(k_) + ")");
  }
  return static_cast<std::size_t>(truth) * k_ + pred;
}

std::int64_t ConfusionMatrix::total() const noexcept {
  std::int64_t s = 0;
  for (auto c : counts_) s += c;
  return s;
}

std::int64_t ConfusionMatrix::trace() const noexcept {
  std::int64_t s = 0;
  for (int i = 0; i < k_; ++i) s += counts_[static_cast<std::size_t>(i) * k_ + i];
  return s;
}

std::int64_t ConfusionMatrix::support(int c) const {
  std::int64_t s = 0;
  for (int j = 0; j < k_; ++j) s += at(c, j);
  return s;
}

std::int64_t ConfusionMatrix::predicted(int c) const {
  std::int64_t s = 0;
  for (int i = 0; i < k_; ++i) s += at(i, c);
  return s;
}

ConfusionMatrix confusion_matrix(std::span<const int> truths, std::span<const int> preds,
                                 int num_classes) {
  if (truths.size() != preds.size()) {
    throw Error(Errc::LengthMismatch, std::to_string(truths.size()) + " truths vs " +
                                          std::to_string(preds.size()) + " predictions");
  }
  ConfusionMatrix cm(num_classes);
  for (std::size_t i = 0; i < truths.size(); ++i) ++cm.at(truths[i], preds[i]);
  return cm;
}

namespace {

void require_nonempty(const ConfusionMatrix& cm) {
  if (cm.total() <= 0) throw Error(Errc::EmptyMatrix, "confusion matrix has no samples");
}

// Summing in sorted order makes the mean independent of class numbering,
// bit for bit.
double canonical_mean(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

}  // namespace

double accuracy(const ConfusionMatrix& cm) {
  require_nonempty(cm);
  return static_cast<double>(cm.trace()) / static_cast<double>(cm.total());
}

double uf1(const ConfusionMatrix& cm) {
  require_nonempty(cm);
  std::vector<double> per_class;
  for (int c = 0; c < cm.num_classes(); ++c) {
    const std::int64_t tp = cm.at(c, c);
    const std::int64_t fn = cm.support(c) - tp;
    const std::int64_t fp = cm.predicted(c) - tp;
    const std::int64_t denom = 2 * tp + fp + fn;
    if (denom == 0) continue;  // no support and never predicted
    per_class.push_back(static_cast<double>(2 * tp) / static_cast<double>(denom));
  }
  if (per_class.empty()) throw Error(Errc::NoIncludedClasses, "no class has support or predictions");
  return canonical_mean(std::move(per_class));
}

double uar(const ConfusionMatrix& cm) {
  require_nonempty(cm);
  std::vector<double> per_class;
  for (int c = 0; c < cm.num_classes(); ++c) {
    const std::int64_t n = cm.support(c);
    if (n == 0) continue;
    per_class.push_back(static_cast<double>(cm.at(c, c)) / static_cast<double>(n));
  }
  return canonical_mean(std::move(per_class));
}

MeanStd aggregate(std::span<const double> values) {
  if (values.empty()) throw Error(Errc::EmptyInput, "no fold metrics to aggregate");
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / n)};
}

}  // namespace dualdi
