#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dualdi/frameseq.hpp"
#include "dualdi/manifest.hpp"
#include "dualdi/rankpool.hpp"
#include "dualdi/raster.hpp"

namespace dualdi {

/// (onset..apex, apex..offset); both ranges contain the apex frame.
std::pair<FrameRange, FrameRange> split_phases(const ExpressionAnnotation& ann);

/// Rising-phase image: frames[onset..apex] with forward weights. Empty when
/// the segment is a single frame.
std::optional<DynamicImage> encode_onset_phase(const FrameSequence& seq,
                                               const ExpressionAnnotation& ann);

/// Falling-phase image: frames[apex..offset] with reversed weights, so the
/// apex frame carries the largest weight. Empty when the segment is a
/// single frame.
std::optional<DynamicImage> encode_offset_phase(const FrameSequence& seq,
                                                const ExpressionAnnotation& ann);

template <typename T>
Raster<T> flip_horizontal(const Raster<T>& img) {
  Raster<T> out(img.width, img.height, img.channels);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      for (int c = 0; c < img.channels; ++c) out.at(img.width - 1 - x, y, c) = img.at(x, y, c);
    }
  }
  return out;
}

inline constexpr double kMaxRotationDegrees = 45.0;

/// Rotation about the image center (positive = counter-clockwise as
/// displayed). Each output pixel samples the source bilinearly; positions
/// outside the source take `fill`. Throws AngleOutOfRange for |angle| > 45.
Frame rotate(const Frame& img, double angle_deg, double fill);
ByteImage rotate(const ByteImage& img, double angle_deg, std::uint8_t fill);

enum class SplitRole { TrainOnly, Eval };
std::string_view split_role_name(SplitRole role) noexcept;

struct AugmentConfig {
  bool enable_dual_di = false;
  bool enable_flip = false;
  bool enable_rotation = false;
  double rotation_limit = 10.0;
  std::uint64_t seed = 42;
  /// Side of the square output raster (images are resized before
  /// normalization and spatial augmentation).
  int output_side = 224;

  /// Throws InvalidParams on a non-positive rotation limit or side.
  void validate() const;
  /// none | flip_rotate | dual | dual_flip_rotate
  std::string name() const;
  static AugmentConfig from_name(std::string_view name);
};

struct AugmentedSample {
  ByteImage image;
  std::string origin;
  Phase phase = Phase::Full;
  /// Phase tag first, then "flip" or "rot<centidegrees>".
  std::vector<std::string> transform_tags;
  std::string label;
  SplitRole split_role = SplitRole::TrainOnly;

  /// <origin>__<phase>[__flip][__rot<centidegrees>]
  std::string file_stem() const;
};

using WarningSink = std::function<void(const std::string&)>;

/// Emitted samples for one sequence in fixed order: full, onset, offset,
/// each followed by its flipped and rotated copies when enabled. Only the
/// untransformed full image is Eval; every other sample is TrainOnly.
std::vector<AugmentedSample> expand_sequence(const FrameSequence& seq,
                                             const ExpressionAnnotation& ann,
                                             const AugmentConfig& cfg,
                                             const WarningSink& warn = {});

/// Runs expand_sequence over every manifest entry (sequences[i] belongs to
/// manifest.entries[i]) on up to `jobs` threads. The output order and
/// content do not depend on `jobs`.
std::vector<AugmentedSample> expand_training_set(const DatasetManifest& manifest,
                                                 const std::vector<FrameSequence>& sequences,
                                                 const AugmentConfig& cfg, unsigned jobs = 1,
                                                 const WarningSink& warn = {});

/// Rotation angle for (seed, sequence, tag), rounded to 0.01 degree so the
/// value in the file name is the value applied.
double draw_rotation_angle(std::uint64_t seed, std::string_view sequence_id,
                           std::string_view tag, double limit);

}  // namespace dualdi
