#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "dualdi/manifest.hpp"
#include "dualdi/raster.hpp"

namespace dualdi {

/// Frames of one expression clip. All frames share width, height and
/// channel count; frames.size() is the clip length T.
struct FrameSequence {
  std::vector<Frame> frames;
  std::filesystem::path source_dir;

  int frame_count() const noexcept { return static_cast<int>(frames.size()); }
  /// Throws EmptyInput / InconsistentDimensions.
  void validate() const;
};

/// Filename ordering where digit runs compare as integers ("img2" < "img10").
/// Ties between numerically equal runs fall back to plain string order, so
/// the result is a strict weak ordering over distinct names.
bool natural_less(std::string_view a, std::string_view b) noexcept;

/// Image files of `dir` (png/jpg/jpeg) in natural order.
std::vector<std::filesystem::path> list_frame_files(const std::filesystem::path& dir);

FrameSequence load_frames(const std::filesystem::path& dir, bool grayscale);

/// Loads the entry's frame directory (resolved against the manifest) and
/// checks the annotation against the loaded frame count.
FrameSequence load_sequence(const DatasetManifest& manifest, const ManifestEntry& entry,
                            bool grayscale);

}  // namespace dualdi
