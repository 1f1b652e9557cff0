#include "experiment.hpp"

#include <algorithm>

#include "dualdi/checkpoint.hpp"
#include "dualdi/error.hpp"
#include "dualdi/frameseq.hpp"
#include "dualdi/parallel.hpp"
#include "dualdi/rng.hpp"

namespace dualdi::app {

EncodedDataset encode_features(const DatasetManifest& manifest, const AugmentConfig& aug,
                               bool grayscale, int input_side, unsigned jobs,
                               const WarningSink& warn) {
  const std::size_t n = manifest.entries.size();
  EncodedDataset out;
  out.samples.resize(n);
  std::vector<std::vector<std::string>> warnings(n);
  std::vector<int> channels(n, 0);
  parallel_for(n, jobs, [&](std::size_t i) {
    const auto& entry = manifest.entries[i];
    const auto& id = entry.annotation.sequence_id;
    try {
      const FrameSequence seq = load_sequence(manifest, entry, grayscale);
      const auto expanded = expand_sequence(
          seq, entry.annotation, aug, [&warnings, i](const std::string& m) { warnings[i].push_back(m); });
      const int label = manifest.label_index(entry.annotation.label);
      for (const auto& s : expanded) {
        out.samples[i].push_back({featurize(s.image, input_side), label, id,
                                  s.split_role == SplitRole::Eval});
      }
      channels[i] = expanded.front().image.channels;
    } catch (const Error& e) {
      throw Error(e.code(), "sequence '" + id + "': " + e.detail());
    }
  });
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& m : warnings[i]) {
      if (warn) warn(m);
    }
  }
  if (n > 0) {
    out.channels = channels.front();
    for (std::size_t i = 0; i < n; ++i) {
      if (channels[i] != out.channels) {
        throw Error(Errc::InconsistentDimensions,
                    "sequence '" + manifest.entries[i].annotation.sequence_id +
                        "' has a different channel count from the first sequence");
      }
    }
  }
  return out;
}

EvalReport run_experiment(const DatasetManifest& manifest, const ExperimentOptions& opts,
                          const WarningSink& warn) {
  opts.train.validate();
  const FoldSpec folds = kfold_split(manifest, opts.k, opts.seed, opts.strategy);
  AugmentConfig aug = AugmentConfig::from_name(opts.aug);
  aug.seed = opts.seed;
  aug.output_side = opts.resize;
  aug.validate();

  const EncodedDataset data =
      encode_features(manifest, aug, opts.grayscale, opts.input_side, opts.jobs, warn);

  EvalReport report;
  report.config = aug.name();
  report.k = opts.k;
  report.strategy = opts.strategy;
  report.seed = opts.seed;
  report.class_names = manifest.label_vocabulary;
  const int num_classes = static_cast<int>(manifest.label_vocabulary.size());

  for (int f = 0; f < opts.k; ++f) {
    std::vector<TrainSample> train_set;
    std::vector<const TrainSample*> eval_set;
    for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
      const bool held_out = folds.fold_of.at(manifest.entries[i].annotation.sequence_id) == f;
      for (const auto& s : data.samples[i]) {
        if (held_out) {
          if (s.eval_eligible) eval_set.push_back(&s);
        } else {
          train_set.push_back(s);
        }
      }
    }
    TrainConfig tc = opts.train;
    tc.seed = derive_seed(opts.seed, "train-fold", std::to_string(f));
    const TrainResult trained =
        train(train_set, manifest.label_vocabulary, opts.input_side, data.channels, tc);

    std::vector<int> truths;
    std::vector<int> preds;
    for (const TrainSample* s : eval_set) {
      truths.push_back(s->label);
      preds.push_back(predict(trained.model, s->features));
    }
    FoldResult fr = score_fold(f, confusion_matrix(truths, preds, num_classes));
    fr.train_samples = train_set.size();
    fr.epochs_run = static_cast<int>(trained.history.size());
    fr.best_epoch = trained.best_epoch;
    report.folds.push_back(std::move(fr));

    if (opts.models_dir) {
      std::filesystem::create_directories(*opts.models_dir);
      save_checkpoint(*opts.models_dir / (report.config + "_seed" + std::to_string(opts.seed) +
                                          "_fold" + std::to_string(f) + ".model"),
                      trained.model, "aug=" + report.config + " " + tc.echo());
    }
  }
  return report;
}

}  // namespace dualdi::app
