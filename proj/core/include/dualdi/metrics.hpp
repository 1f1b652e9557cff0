#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace dualdi {

/// counts[i][j]: samples of true class i predicted as class j.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(int num_classes = 0);
  ConfusionMatrix(int num_classes, std::vector<std::int64_t> row_major);

  int num_classes() const noexcept { return k_; }
  std::int64_t at(int truth, int pred) const { return counts_[index(truth, pred)]; }
  std::int64_t& at(int truth, int pred) { return counts_[index(truth, pred)]; }
  std::int64_t total() const noexcept;
  std::int64_t trace() const noexcept;
  std::int64_t support(int c) const;      // row sum
  std::int64_t predicted(int c) const;    // column sum
  const std::vector<std::int64_t>& counts() const noexcept { return counts_; }

  bool operator==(const ConfusionMatrix&) const = default;

 private:
  std::size_t index(int truth, int pred) const;

  int k_;
  std::vector<std::int64_t> counts_;
};

/// Throws LengthMismatch / IndexOutOfRange.
ConfusionMatrix confusion_matrix(std::span<const int> truths, std::span<const int> preds,
                                 int num_classes);

/// trace / total. Throws EmptyMatrix.
double accuracy(const ConfusionMatrix& cm);

/// Unweighted mean of per-class F1 = 2TP / (2TP + FP + FN). Classes with
/// neither support nor predictions are left out of the mean.
/// Throws EmptyMatrix, NoIncludedClasses.
double uf1(const ConfusionMatrix& cm);

/// Unweighted mean of per-class recall over classes with support > 0.
/// Throws EmptyMatrix.
double uar(const ConfusionMatrix& cm);

struct MeanStd {
  double mean = 0.0;
  /// Population standard deviation (divides by n).
  double std = 0.0;
};

/// Throws EmptyInput.
MeanStd aggregate(std::span<const double> values);

}  // namespace dualdi
