#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dualdi/kfold.hpp"
#include "dualdi/metrics.hpp"

namespace dualdi {

struct FoldResult {
  int fold = 0;
  ConfusionMatrix confusion;
  double acc = 0.0;
  double uf1 = 0.0;
  double uar = 0.0;
  /// Training samples after augmentation, and evaluated full images.
  std::size_t train_samples = 0;
  std::size_t eval_samples = 0;
  int epochs_run = 0;
  int best_epoch = 0;
};

/// Fills acc/uf1/uar from the confusion matrix.
FoldResult score_fold(int fold, ConfusionMatrix cm);

struct EvalReport {
  std::string config;
  int k = 0;
  FoldStrategy strategy = FoldStrategy::StratifiedByLabel;
  std::uint64_t seed = 0;
  std::vector<std::string> class_names;
  std::vector<FoldResult> folds;

  MeanStd acc() const;
  MeanStd uf1() const;
  MeanStd uar() const;
};

/// {config, k, strategy, seed, std, classes, folds: [...], aggregate: {...}}
/// with fixed key order and number formatting, so equal reports serialize
/// to identical bytes.
std::string report_to_json(const EvalReport& report);
/// Header `config,fold,acc,uf1,uar`; one row per fold.
std::string report_to_csv(const EvalReport& report);

/// Writes <stem>.json and <stem>.csv atomically.
void write_report(const std::filesystem::path& json_path, const EvalReport& report);

}  // namespace dualdi
