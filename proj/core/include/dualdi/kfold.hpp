#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "dualdi/manifest.hpp"

namespace dualdi {

enum class FoldStrategy { StratifiedByLabel, GroupedBySubject };
std::string_view fold_strategy_name(FoldStrategy s) noexcept;
/// Accepts "stratified" and "grouped" (and the enum spellings).
FoldStrategy parse_fold_strategy(std::string_view name);

struct FoldSpec {
  int k = 0;
  FoldStrategy strategy = FoldStrategy::StratifiedByLabel;
  std::uint64_t seed = 0;
  std::map<std::string, int> fold_of;

  /// Sequence ids of fold f in manifest order.
  std::vector<std::size_t> members(const DatasetManifest& m, int fold) const;
  bool operator==(const FoldSpec&) const = default;
};

/// Stratified: per label, sequences are shuffled and dealt round-robin with
/// the dealing position carried across labels, so both per-class and total
/// fold sizes differ by at most one. Grouped: shuffled subjects go to the
/// currently smallest fold (ties to the lowest index).
FoldSpec kfold_split(const DatasetManifest& manifest, int k, std::uint64_t seed,
                     FoldStrategy strategy);

}  // namespace dualdi
