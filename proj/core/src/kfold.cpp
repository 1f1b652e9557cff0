#include "dualdi/kfold.hpp"

#include <algorithm>
#include <set>

#include "dualdi/error.hpp"
#include "dualdi/rng.hpp"

namespace dualdi {

std::string_view fold_strategy_name(FoldStrategy s) noexcept {
  return s == FoldStrategy::StratifiedByLabel ? "stratified" : "grouped";
}

FoldStrategy parse_fold_strategy(std::string_view name) {
  if (name == "stratified" || name == "StratifiedByLabel") return FoldStrategy::StratifiedByLabel;
  if (name == "grouped" || name == "GroupedBySubject") return FoldStrategy::GroupedBySubject;
  throw Error(Errc::InvalidArgument, "unknown fold strategy '" + std::string(name) + "'");
}

std::vector<std::size_t> FoldSpec::members(const DatasetManifest& m, int fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < m.entries.size(); ++i) {
    const auto it = fold_of.find(m.entries[i].annotation.sequence_id);
    if (it != fold_of.end() && it->second == fold) out.push_back(i);
  }
  return out;
}

FoldSpec kfold_split(const DatasetManifest& manifest, int k, std::uint64_t seed,
                     FoldStrategy strategy) {
  if (k < 2) throw Error(Errc::InvalidArgument, "k must be at least 2");
  const auto n = manifest.entries.size();
  if (static_cast<std::size_t>(k) > n) {
    throw Error(Errc::TooFewSamples, "k=" + std::to_string(k) + " exceeds " + std::to_string(n) +
                                         " sequences");
  }
  FoldSpec spec;
  spec.k = k;
  spec.strategy = strategy;
  spec.seed = seed;

  if (strategy == FoldStrategy::StratifiedByLabel) {
    std::size_t next = 0;
    for (const auto& label : manifest.label_vocabulary) {
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < n; ++i) {
        if (manifest.entries[i].annotation.label == label) idx.push_back(i);
      }
      Rng rng(derive_seed(seed, "kfold-stratified", label));
      rng.shuffle(std::span<std::size_t>(idx));
      for (auto i : idx) {
        spec.fold_of[manifest.entries[i].annotation.sequence_id] = static_cast<int>(next % k);
        ++next;
      }
    }
    return spec;
  }

  std::set<std::string> subject_set;
  for (const auto& e : manifest.entries) subject_set.insert(e.annotation.subject_id);
  std::vector<std::string> subjects(subject_set.begin(), subject_set.end());
  if (static_cast<std::size_t>(k) > subjects.size()) {
    throw Error(Errc::TooFewSubjects, "k=" + std::to_string(k) + " exceeds " +
                                          std::to_string(subjects.size()) + " subjects");
  }
  Rng rng(derive_seed(seed, "kfold-grouped"));
  rng.shuffle(std::span<std::string>(subjects));
  std::vector<std::size_t> fold_size(static_cast<std::size_t>(k), 0);
  for (const auto& subject : subjects) {
    const auto fold = static_cast<int>(std::min_element(fold_size.begin(), fold_size.end()) -
                                       fold_size.begin());
    for (const auto& e : manifest.entries) {
      if (e.annotation.subject_id == subject) {
        spec.fold_of[e.annotation.sequence_id] = fold;
        ++fold_size[fold];
      }
    }
  }
  return spec;
}

}  // namespace dualdi
