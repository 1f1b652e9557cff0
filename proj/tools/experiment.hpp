#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dualdi/augment.hpp"
#include "dualdi/classifier.hpp"
#include "dualdi/kfold.hpp"
#include "dualdi/manifest.hpp"
#include "dualdi/report.hpp"

namespace dualdi::app {

struct ExperimentOptions {
  std::string aug = "none";
  int k = 5;
  FoldStrategy strategy = FoldStrategy::StratifiedByLabel;
  std::uint64_t seed = 42;
  unsigned jobs = 1;
  bool grayscale = false;
  int resize = 224;
  int input_side = 32;
  TrainConfig train;
  /// When set, one checkpoint per fold is written here.
  std::optional<std::filesystem::path> models_dir;
};

/// Encoded features for every manifest entry under one augmentation setup.
struct EncodedDataset {
  /// samples[i] belongs to manifest.entries[i].
  std::vector<std::vector<TrainSample>> samples;
  int channels = 0;
};

EncodedDataset encode_features(const DatasetManifest& manifest, const AugmentConfig& aug,
                               bool grayscale, int input_side, unsigned jobs,
                               const WarningSink& warn);

/// k-fold cross-validation: per fold, train on the augmented samples of the
/// other folds and score the held-out fold's unaugmented full images.
EvalReport run_experiment(const DatasetManifest& manifest, const ExperimentOptions& opts,
                          const WarningSink& warn);

}  // namespace dualdi::app
